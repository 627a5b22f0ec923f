//! Concrete code families and code-level constructions.

use super::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{Elem, Gf};
use crate::linalg::{FMatrix, FVector};
use crate::monomials::{self, Monomial};
use crate::prg::EvaluationSet;

/// The `[2^n - 1, n]` binary simplex code. Column `c - 1` is the binary
/// expansion of `c`, first coordinate most significant; every nonzero
/// codeword has weight `2^(n-1)`.
pub fn simplex_code(n: usize) -> Result<LinearCode> {
    if !(1..=20).contains(&n) {
        return Err(Error::InvalidParameter(format!("simplex dimension {n} outside 1..=20")));
    }
    let f2 = Gf::binary();
    let len = (1usize << n) - 1;
    let mut g = FMatrix::zeros(&f2, n, len);
    for c in 1..=len {
        for i in 0..n {
            g.set(i, c - 1, ((c >> (n - 1 - i)) & 1) as Elem);
        }
    }
    LinearCode::new(g)
}

/// The evaluation matrix of `monos` on the points of `set` (one row per
/// monomial).
pub(crate) fn evaluation_matrix(set: &EvaluationSet, monos: &[Monomial]) -> FMatrix {
    let f = set.field();
    let mut m = FMatrix::zeros(f, monos.len(), set.len());
    for (i, mono) in monos.iter().enumerate() {
        for (j, p) in set.points().iter().enumerate() {
            m.set(i, j, monomials::eval(f, mono, p));
        }
    }
    m
}

/// `P_d`: evaluations on `set` of all polynomials of total degree `<= d`
/// (constant term included), each variable exponent at most `q - 1`.
pub fn polynomial_code(set: &EvaluationSet, d: u32) -> Result<LinearCode> {
    let q = set.field().q();
    if d > q - 1 {
        return Err(Error::InvalidParameter(format!("degree {d} exceeds q - 1 = {}", q - 1)));
    }
    let monos = monomials::monomials(set.dim(), d, q);
    Ok(LinearCode::from_spanning(&evaluation_matrix(set, &monos)))
}

/// The encoding code `C`: homogeneous linear forms `sum a_i X_i` evaluated on
/// `set`, generator row `i` being the evaluations of `X_i`.
pub fn homogeneous_linear_code(set: &EvaluationSet) -> Result<LinearCode> {
    let n = set.dim();
    let monos: Vec<Monomial> = (0..n)
        .map(|i| {
            let mut m = vec![0; n];
            m[i] = 1;
            m
        })
        .collect();
    let g = evaluation_matrix(set, &monos);
    LinearCode::new(g).map_err(|_| {
        Error::RankDeficient(format!(
            "the {} points do not separate the {n} coordinate forms",
            set.len()
        ))
    })
}

/// Entrywise `e`-th power (`0^0 = 1`).
pub fn componentwise_power(v: &FVector, e: u32) -> FVector {
    let f = v.field();
    FVector::new(f, v.entries().iter().map(|&x| f.pow(x, e as u64)).collect())
}

/// `C1 ⊗ C2` with generator `G1 ⊗ G2`; coordinate `(i, j)` is `i * n2 + j`.
pub fn tensor(c1: &LinearCode, c2: &LinearCode) -> Result<LinearCode> {
    if c1.field() != c2.field() {
        return Err(Error::FieldMismatch(c1.field().q(), c2.field().q()));
    }
    Ok(LinearCode::from_spanning(&c1.generator().kronecker(c2.generator())))
}

/// Subcode of `C ⊗ C` of symmetric matrices, optionally with zero diagonal.
///
/// Works in message space: `Y = G^T X G`, so each condition on `Y` is a
/// linear condition on the `k x k` message matrix `X`.
fn symmetric_part(c: &LinearCode, zero_diag: bool) -> LinearCode {
    let f = c.field();
    let (k, n) = (c.dim(), c.len());
    let g = c.generator();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    // coefficient of X[a][b] in Y[i][j]
    let coeff = |a: usize, b: usize, i: usize, j: usize| f.mul(g.get(a, i), g.get(b, j));
    for i in 0..n {
        for j in i + 1..n {
            let mut row = vec![0; k * k];
            for a in 0..k {
                for b in 0..k {
                    row[a * k + b] = f.sub(coeff(a, b, i, j), coeff(a, b, j, i));
                }
            }
            rows.push(row);
        }
        if zero_diag {
            let mut row = vec![0; k * k];
            for a in 0..k {
                for b in 0..k {
                    row[a * k + b] = coeff(a, b, i, i);
                }
            }
            rows.push(row);
        }
    }
    let constraints = FMatrix::from_rows(f, k * k, &rows).expect("uniform rows");
    let messages = constraints.nullspace_basis();
    let full = g.kronecker(g);
    let gens: Vec<FVector> = messages
        .iter()
        .map(|m| full.vec_mul(m.entries()).expect("message length k^2"))
        .collect();
    LinearCode::from_spanning(&FMatrix::from_vectors(f, n * n, &gens).expect("uniform rows"))
}

/// A uniformly random `[n, k]` code: generator rows are redrawn until they
/// are independent.
pub fn random_code(field: &Gf, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    use rand::{Rng, SeedableRng};
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("no [{n}, {k}] code")));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let q = field.q();
    loop {
        let data = (0..k * n).map(|_| rng.gen_range(0..q) as Elem).collect();
        let g = FMatrix::from_data(field, k, n, data)?;
        if g.rank() == k {
            return LinearCode::new(g);
        }
    }
}

/// Symmetric subcode of `C ⊗ C`.
pub fn symmetric_subcode(c: &LinearCode) -> LinearCode {
    symmetric_part(c, false)
}

/// Symmetric, zero-diagonal subcode of `C ⊗ C`.
pub fn symmetric_zero_diag_subcode(c: &LinearCode) -> LinearCode {
    symmetric_part(c, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{Distance, DEFAULT_BUDGET};

    fn dist(c: &LinearCode) -> Distance {
        c.min_distance_exact(DEFAULT_BUDGET).unwrap().distance
    }

    fn repetition(n: usize) -> LinearCode {
        let f2 = Gf::binary();
        LinearCode::new(FMatrix::from_rows(&f2, n, &[vec![1; n]]).unwrap()).unwrap()
    }

    #[test]
    fn simplex_weights() {
        let c1 = simplex_code(1).unwrap();
        assert_eq!((c1.len(), c1.dim()), (1, 1));
        for n in 2..=4 {
            let c = simplex_code(n).unwrap();
            assert_eq!((c.len(), c.dim()), ((1 << n) - 1, n));
            for w in c.codewords().filter(|w| !w.is_zero()) {
                assert_eq!(w.weight(), 1 << (n - 1));
            }
        }
        assert_eq!(dist(&simplex_code(3).unwrap()), Distance::Finite(4));
        assert!(simplex_code(0).is_err());
    }

    #[test]
    fn polynomial_code_examples() {
        let f3 = Gf::new(3).unwrap();
        let line = EvaluationSet::exhaustive(&f3, 1).unwrap();
        let p0 = polynomial_code(&line, 0).unwrap();
        assert_eq!(p0.dim(), 1);
        assert_eq!(p0.generator().row(0), &[1, 1, 1]);

        let p1 = polynomial_code(&line, 1).unwrap();
        assert_eq!((p1.len(), p1.dim()), (3, 2));
        assert_eq!(dist(&p1), Distance::Finite(2));

        let plane = EvaluationSet::exhaustive(&f3, 2).unwrap();
        let p2 = polynomial_code(&plane, 2).unwrap();
        assert_eq!(p2.dim(), 6);
        for w in p2.codewords().filter(|w| !w.is_zero()) {
            assert!(w.weight() >= 3);
        }
        assert!(polynomial_code(&plane, 3).is_err());
    }

    #[test]
    fn homogeneous_code_examples() {
        let f2 = Gf::binary();
        let c = homogeneous_linear_code(&EvaluationSet::exhaustive(&f2, 1).unwrap()).unwrap();
        assert_eq!(c.generator().row(0), &[0, 1]);

        let f3 = Gf::new(3).unwrap();
        let c = homogeneous_linear_code(&EvaluationSet::exhaustive(&f3, 2).unwrap()).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(dist(&c), Distance::Finite(6));
        for a in f3.vectors(2) {
            let y = c.encode(&a).unwrap();
            assert_eq!(c.decode(&y).unwrap().entries(), &a[..]);
        }

        let tiny = EvaluationSet::from_points(&f3, 2, vec![vec![1, 1]]).unwrap();
        assert!(matches!(homogeneous_linear_code(&tiny), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn powers_land_in_higher_codes() {
        let f3 = Gf::new(3).unwrap();
        let v = FVector::new(&f3, vec![0, 1, 2]);
        assert_eq!(componentwise_power(&v, 1), v);
        assert_eq!(componentwise_power(&v, 2).entries(), &[0, 1, 1]);
        assert_eq!(componentwise_power(&v, 0).entries(), &[1, 1, 1]);

        for q in [3u32, 4, 5] {
            let f = Gf::new(q).unwrap();
            let set = EvaluationSet::exhaustive(&f, 2).unwrap();
            let c1 = homogeneous_linear_code(&set).unwrap();
            for e in 1..q {
                let ce = polynomial_code(&set, e).unwrap();
                for x in c1.codewords() {
                    assert!(ce.contains(&componentwise_power(&x, e)).unwrap());
                }
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let f2 = Gf::binary();
        let c = simplex_code(3).unwrap();
        let full1 = LinearCode::new(FMatrix::identity(&f2, 1)).unwrap();
        let t = tensor(&c, &full1).unwrap();
        assert_eq!(t, c);

        let rep = repetition(3);
        let rr = tensor(&rep, &rep).unwrap();
        assert_eq!(rr.dim(), 1);
        assert_eq!(dist(&rr), Distance::Finite(9));

        let f3 = Gf::new(3).unwrap();
        let other = LinearCode::new(FMatrix::identity(&f3, 2)).unwrap();
        assert_eq!(tensor(&c, &other), Err(Error::FieldMismatch(2, 3)));
    }

    #[test]
    fn tensor_layout_columns_and_rows() {
        let c = simplex_code(2).unwrap();
        let t = tensor(&c, &c).unwrap();
        for w in t.codewords() {
            let n = 3;
            for j in 0..n {
                let col: Vec<Elem> = (0..n).map(|i| w.entries()[i * n + j]).collect();
                assert!(c.contains(&FVector::new(c.field(), col)).unwrap());
            }
            for i in 0..n {
                let row = w.entries()[i * n..(i + 1) * n].to_vec();
                assert!(c.contains(&FVector::new(c.field(), row)).unwrap());
            }
        }
    }

    #[test]
    fn symmetric_subcodes() {
        let rep2 = repetition(2);
        assert_eq!(symmetric_zero_diag_subcode(&rep2).dim(), 0);

        let s = simplex_code(3).unwrap();
        let zd = symmetric_zero_diag_subcode(&s);
        assert_eq!(zd.dim(), 3);
        for w in zd.codewords().filter(|w| !w.is_zero()) {
            assert!(w.weight() >= 24);
            for i in 0..7 {
                assert_eq!(w.entries()[i * 7 + i], 0);
                for j in 0..7 {
                    assert_eq!(w.entries()[i * 7 + j], w.entries()[j * 7 + i]);
                }
            }
        }
        let sym = symmetric_subcode(&s);
        assert_eq!(sym.dim(), 6);
    }
}
