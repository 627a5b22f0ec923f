//! Evaluation multisets `R ⊆ F_q^n` and verifiers for how well they fool
//! low-degree polynomials.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::families::evaluation_matrix;
use crate::codes::search::{fold_span, gray};
use crate::error::{checked_pow, Error, Result};
use crate::gf::{Elem, Gf, Poly};
use crate::linalg::FMatrix;
use crate::monomials::{self, Monomial};

/// Largest `q^n` for an exhaustive set or a uniform reference distribution.
pub const MAX_EXHAUSTIVE_POINTS: u128 = 1 << 20;
/// Largest multiset produced by the constructions.
pub const MAX_SET_SIZE: u128 = 1 << 24;
/// Largest number of polynomials enumerated by the exhaustive verifiers.
pub const MAX_POLYNOMIALS: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    Exhaustive,
    SmallBias { epsilon: f64, t: usize },
    ViolaSum { d: u32, base: Box<Provenance> },
    Explicit,
}

/// An ordered multiset of points; the order fixes code coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationSet {
    field: Gf,
    n: usize,
    points: Vec<Vec<Elem>>,
    provenance: Provenance,
}

impl EvaluationSet {
    pub fn from_points(field: &Gf, n: usize, points: Vec<Vec<Elem>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("evaluation set is empty".into()));
        }
        for p in &points {
            if p.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "point of length {} in dimension {n}",
                    p.len()
                )));
            }
            if p.iter().any(|&x| x as u32 >= field.q()) {
                return Err(Error::InvalidParameter(format!("entry outside F_{}", field.q())));
            }
        }
        Ok(EvaluationSet {
            field: field.clone(),
            n,
            points,
            provenance: Provenance::Explicit,
        })
    }

    /// All of `F_q^n` in lexicographic order.
    pub fn exhaustive(field: &Gf, n: usize) -> Result<Self> {
        let size = checked_pow(field.q(), n);
        if size > MAX_EXHAUSTIVE_POINTS {
            return Err(Error::TooLarge(format!("q^n = {size} points")));
        }
        Ok(EvaluationSet {
            field: field.clone(),
            n,
            points: field.vectors(n).collect(),
            provenance: Provenance::Exhaustive,
        })
    }

    pub(crate) fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// Bias bound of the power construction over `F_{q^t}`.
fn power_bias(q: u32, n: usize, t: usize) -> f64 {
    2.0 * (1.0 - 1.0 / q as f64) * n as f64 / (q as f64).powi(t as i32)
}

/// Points `(π(α β), π(α² β), …, π(αⁿ β))` over all `α, β ∈ F_{q^t}`, `α` the
/// major index, where `π` takes the constant coefficient. `t` is the least
/// extension degree whose bias bound is at most `epsilon`.
pub fn small_bias_set(field: &Gf, n: usize, epsilon: f64) -> Result<EvaluationSet> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must be positive")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let q = field.q();
    if n == 1 {
        let mut set = EvaluationSet::exhaustive(field, 1)?;
        set.provenance = Provenance::SmallBias { epsilon, t: 1 };
        return Ok(set);
    }
    let mut t = 1;
    while power_bias(q, n, t) > epsilon {
        t += 1;
    }
    let size = checked_pow(q, 2 * t);
    if size > MAX_SET_SIZE {
        return Err(Error::SizeOverflow(format!(
            "small-bias set over F_{q}^{t} has {size} points"
        )));
    }
    let modulus = Poly::first_irreducible(field, t);
    let elems: Vec<Vec<Elem>> = field.vectors(t).collect();
    let mut points = Vec::with_capacity(size as usize);
    for alpha in &elems {
        let a = Poly::new(field, alpha.clone());
        // functional[i][j] = π(α^{i+1} x^j)
        let mut functional = vec![vec![0; t]; n];
        let mut power = a.clone();
        for row in functional.iter_mut() {
            let mut shifted = power.clone();
            for slot in row.iter_mut() {
                *slot = shifted.coeffs().first().copied().unwrap_or(0);
                shifted = shifted.mul(&Poly::new(field, vec![0, 1])).rem(&modulus);
            }
            power = power.mul(&a).rem(&modulus);
        }
        for beta in &elems {
            points.push(
                functional
                    .iter()
                    .map(|row| crate::linalg::dot(field, row, beta))
                    .collect(),
            );
        }
    }
    Ok(EvaluationSet {
        field: field.clone(),
        n,
        points,
        provenance: Provenance::SmallBias { epsilon, t },
    })
}

/// The multiset `{x_1 + … + x_d : x_i ∈ base}`, index tuples in
/// lexicographic order.
pub fn viola_sum(base: &EvaluationSet, d: u32) -> Result<EvaluationSet> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    let b = base.len();
    let size = checked_pow(b as u32, d as usize);
    if size > MAX_SET_SIZE {
        return Err(Error::SizeOverflow(format!("|base|^d = {size}")));
    }
    let f = &base.field;
    let mut points = base.points.clone();
    for _ in 1..d {
        let mut next = Vec::with_capacity(points.len() * b);
        for p in &points {
            for x in &base.points {
                next.push(p.iter().zip(x).map(|(&u, &v)| f.add(u, v)).collect());
            }
        }
        points = next;
    }
    Ok(EvaluationSet {
        field: f.clone(),
        n: base.n,
        points,
        provenance: Provenance::ViolaSum {
            d,
            base: Box::new(base.provenance.clone()),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SampleMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoolingReport {
    pub d: u32,
    pub epsilon_measured: f64,
    /// `epsilon_measured` as an exact fraction.
    pub epsilon_numer: u128,
    pub epsilon_denom: u128,
    pub mode: SampleMode,
    pub polynomials_tested: u128,
    /// Coefficients (over the degree-`d` monomial basis) of a worst polynomial.
    pub witness: Vec<Elem>,
}

fn histogram(q: usize, values: &[Elem]) -> Vec<u64> {
    let mut h = vec![0u64; q];
    for &v in values {
        h[v as usize] += 1;
    }
    h
}

/// `sum_a |hr[a] * nu - hu[a] * nr|`; divide by `nr * nu` for the
/// total-variation sum.
fn tv_numer(hr: &[u64], hu: &[u64], nr: u64, nu: u64) -> u128 {
    hr.iter()
        .zip(hu)
        .map(|(&r, &u)| (r as i128 * nu as i128 - u as i128 * nr as i128).unsigned_abs())
        .sum()
}

fn uniform_points(field: &Gf, n: usize) -> Result<EvaluationSet> {
    EvaluationSet::exhaustive(field, n).map_err(|_| {
        Error::TooLarge(format!("uniform reference over F_{}^{n} is too large", field.q()))
    })
}

/// `max_f sum_a |Pr_R[f = a] - Pr_uniform[f = a]|` over polynomials of degree
/// at most `d`, all of them (exhaustive) or a seeded sample.
pub fn verify_fooling(set: &EvaluationSet, d: u32, mode: SampleMode) -> Result<FoolingReport> {
    let f = set.field();
    let q = f.q();
    let d = d.min(set.n as u32 * (q - 1));
    let monos = monomials::monomials(set.n, d, q);
    let uniform = uniform_points(f, set.n)?;
    let er = evaluation_matrix(set, &monos);
    let eu = evaluation_matrix(&uniform, &monos);
    let eval = er.hstack(&eu)?;
    let nr = set.len();
    let nu = uniform.len();
    let qs = q as usize;
    let tv = |v: &[Elem]| tv_numer(&histogram(qs, &v[..nr]), &histogram(qs, &v[nr..]), nr as u64, nu as u64);

    let (numer, witness, tested) = match mode {
        SampleMode::Exhaustive => {
            let count = checked_pow(q, monos.len());
            if count > MAX_POLYNOMIALS {
                return Err(Error::TooLarge(format!("{count} polynomials; use sampled mode")));
            }
            let ((numer, t), total) = fold_span(
                &eval,
                None,
                MAX_POLYNOMIALS,
                || (0u128, u128::MAX),
                |acc, t, v| {
                    let x = tv(v);
                    if x > acc.0 || (x == acc.0 && t < acc.1) {
                        *acc = (x, t);
                    }
                },
                max_by_key_then_index,
            )?;
            (numer, gray(t, q, monos.len()), total)
        }
        SampleMode::Sampled { count, seed } => {
            let coeffs = sample_coefficients(q, monos.len(), count, seed);
            let (numer, idx) = coeffs
                .par_iter()
                .enumerate()
                .map(|(i, c)| (tv(eval.vec_mul(c).expect("length").entries()), i as u128))
                .reduce(|| (0, u128::MAX), max_by_key_then_index);
            let w = coeffs.get(idx as usize).cloned().unwrap_or_default();
            (numer, w, count as u128)
        }
    };
    let denom = nr as u128 * nu as u128;
    Ok(FoolingReport {
        d,
        epsilon_measured: numer as f64 / denom as f64,
        epsilon_numer: numer,
        epsilon_denom: denom,
        mode,
        polynomials_tested: tested,
        witness,
    })
}

fn max_by_key_then_index(a: (u128, u128), b: (u128, u128)) -> (u128, u128) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn sample_coefficients(q: u32, len: usize, count: u64, seed: u64) -> Vec<Vec<Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..len).map(|_| rng.gen_range(0..q) as Elem).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonzeroReport {
    /// `min_f Pr_R[f != 0]` over nonzero `f` of degree at most `e`.
    pub fraction: Ratio<u64>,
    pub witness: Vec<Elem>,
    pub monomials: Vec<Monomial>,
}

impl NonzeroReport {
    /// Witness polynomial as text, e.g. `x1 + 2*x2^2`.
    pub fn witness_name(&self) -> String {
        let terms: Vec<String> = self
            .witness
            .iter()
            .zip(&self.monomials)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, m)| match (c, monomials::name(m).as_str()) {
                (1, name) => name.to_string(),
                (c, "1") => c.to_string(),
                (c, name) => format!("{c}*{name}"),
            })
            .collect();
        terms.join(" + ")
    }
}

/// Exact minimum over nonzero polynomials of degree at most `e` of the
/// fraction of points of `set` where they do not vanish.
pub fn verify_nonzero_fraction(set: &EvaluationSet, e: u32) -> Result<NonzeroReport> {
    let f = set.field();
    let q = f.q();
    let monos = monomials::monomials(set.n, e, q);
    let count = checked_pow(q, monos.len());
    if count > MAX_POLYNOMIALS {
        return Err(Error::TooLarge(format!("{count} polynomials")));
    }
    let eval: FMatrix = evaluation_matrix(set, &monos);
    let ((nonzero, t), _) = fold_span(
        &eval,
        None,
        MAX_POLYNOMIALS,
        || (u128::MAX, u128::MAX),
        |acc, t, v| {
            if t == 0 {
                return;
            }
            let w = v.iter().filter(|&&x| x != 0).count() as u128;
            if w < acc.0 || (w == acc.0 && t < acc.1) {
                *acc = (w, t);
            }
        },
        |a, b| if b < a { b } else { a },
    )?;
    Ok(NonzeroReport {
        fraction: Ratio::new(nonzero as u64, set.len() as u64),
        witness: gray(t, q, monos.len()),
        monomials: monos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: evaluate every affine form directly and sum the
    /// total variation in floating point.
    fn linear_bias_oracle(set: &EvaluationSet) -> f64 {
        let f = set.field();
        let q = f.q() as usize;
        let n = set.dim();
        let mut worst: f64 = 0.0;
        for c in f.vectors(n + 1) {
            let mut counts = vec![0usize; q];
            for p in set.points() {
                let mut v = c[n];
                for i in 0..n {
                    v = f.add(v, f.mul(c[i], p[i]));
                }
                counts[v as usize] += 1;
            }
            let nonconstant = c[..n].iter().any(|&x| x != 0);
            let tv: f64 = (0..q)
                .map(|a| {
                    let pr = counts[a] as f64 / set.len() as f64;
                    let pu = if nonconstant {
                        1.0 / q as f64
                    } else if a == c[n] as usize {
                        1.0
                    } else {
                        0.0
                    };
                    (pr - pu).abs()
                })
                .sum();
            worst = worst.max(tv);
        }
        worst
    }

    #[test]
    fn exhaustive_examples() {
        let f2 = Gf::binary();
        assert_eq!(EvaluationSet::exhaustive(&f2, 3).unwrap().len(), 8);
        let f3 = Gf::new(3).unwrap();
        let s = EvaluationSet::exhaustive(&f3, 2).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.points()[0], vec![0, 0]);
        assert_eq!(s.points()[1], vec![0, 1]);
        assert!(matches!(EvaluationSet::exhaustive(&f2, 21), Err(Error::TooLarge(_))));
    }

    #[test]
    fn exhaustive_sets_fool_everything() {
        for (q, n) in [(2u32, 3usize), (3, 2), (4, 1)] {
            let f = Gf::new(q).unwrap();
            let s = EvaluationSet::exhaustive(&f, n).unwrap();
            let r = verify_fooling(&s, q - 1, SampleMode::Exhaustive).unwrap();
            assert_eq!(r.epsilon_numer, 0);
        }
    }

    #[test]
    fn point_mass_is_far_from_uniform() {
        let f2 = Gf::binary();
        let s = EvaluationSet::from_points(&f2, 2, vec![vec![0, 0]; 3]).unwrap();
        let r = verify_fooling(&s, 1, SampleMode::Exhaustive).unwrap();
        assert_eq!(r.epsilon_measured, 1.0);
        assert_eq!(r.polynomials_tested, 8);
        assert!((r.epsilon_measured - linear_bias_oracle(&s)).abs() < 1e-12);
    }

    #[test]
    fn sampled_mode_is_deterministic() {
        let f3 = Gf::new(3).unwrap();
        let s = small_bias_set(&f3, 2, 0.5).unwrap();
        let mode = SampleMode::Sampled { count: 200, seed: 9 };
        let a = verify_fooling(&s, 2, mode).unwrap();
        let b = verify_fooling(&s, 2, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.polynomials_tested, 200);
    }

    #[test]
    fn small_bias_examples() {
        let f3 = Gf::new(3).unwrap();
        let one = small_bias_set(&f3, 1, 0.1).unwrap();
        assert_eq!(one.points(), &[vec![0], vec![1], vec![2]]);

        let f2 = Gf::binary();
        let s = small_bias_set(&f2, 4, 0.5).unwrap();
        assert_eq!(s.len(), 64);
        assert_eq!(s.provenance(), &Provenance::SmallBias { epsilon: 0.5, t: 3 });
        let r = verify_fooling(&s, 1, SampleMode::Exhaustive).unwrap();
        assert!(r.epsilon_measured <= 0.5);
        assert!((r.epsilon_measured - linear_bias_oracle(&s)).abs() < 1e-12);
        assert_eq!(s, small_bias_set(&f2, 4, 0.5).unwrap());
        assert!(small_bias_set(&f2, 4, 0.0).is_err());
        assert!(matches!(small_bias_set(&f2, 4, 1e-9), Err(Error::SizeOverflow(_))));
    }

    #[test]
    fn small_bias_matches_oracle_over_fields() {
        for (q, n, eps) in [(3u32, 3usize, 0.6), (4, 2, 0.5), (5, 2, 0.9)] {
            let f = Gf::new(q).unwrap();
            let s = small_bias_set(&f, n, eps).unwrap();
            let r = verify_fooling(&s, 1, SampleMode::Exhaustive).unwrap();
            assert!((r.epsilon_measured - linear_bias_oracle(&s)).abs() < 1e-12);
            assert!(r.epsilon_measured <= eps + 1e-12);
        }
    }

    #[test]
    fn viola_sum_examples() {
        let f2 = Gf::binary();
        let base = small_bias_set(&f2, 3, 0.8).unwrap();
        assert_eq!(viola_sum(&base, 1).unwrap().points(), base.points());
        let two = viola_sum(&base, 2).unwrap();
        assert_eq!(two.len(), base.len() * base.len());
        let e1 = verify_fooling(&base, 1, SampleMode::Exhaustive).unwrap();
        let e2 = verify_fooling(&two, 1, SampleMode::Exhaustive).unwrap();
        assert!(e2.epsilon_measured <= e1.epsilon_measured);

        let ex = EvaluationSet::exhaustive(&f2, 3).unwrap();
        let ex2 = viola_sum(&ex, 2).unwrap();
        assert_eq!(verify_fooling(&ex2, 2, SampleMode::Exhaustive).unwrap().epsilon_numer, 0);
        assert!(viola_sum(&base, 0).is_err());
        assert!(matches!(viola_sum(&base, 9), Err(Error::SizeOverflow(_))));
    }

    #[test]
    fn nonzero_fraction_examples() {
        let f3 = Gf::new(3).unwrap();
        let plane = EvaluationSet::exhaustive(&f3, 2).unwrap();
        for e in 0..=2u32 {
            let r = verify_nonzero_fraction(&plane, e).unwrap();
            assert_eq!(r.fraction, Ratio::new(3 - e as u64, 3));
        }
        let r1 = verify_nonzero_fraction(&plane, 1).unwrap();
        let nonzero = plane
            .points()
            .iter()
            .filter(|p| {
                let v = r1.witness.iter().zip(&r1.monomials).fold(0, |acc, (&c, m)| {
                    f3.add(acc, f3.mul(c, monomials::eval(&f3, m, p)))
                });
                v != 0
            })
            .count();
        assert_eq!(nonzero, 6);
        assert!(!r1.witness_name().is_empty());

        let f2 = Gf::binary();
        let cube = EvaluationSet::exhaustive(&f2, 3).unwrap();
        assert_eq!(verify_nonzero_fraction(&cube, 1).unwrap().fraction, Ratio::new(1, 2));
    }
}
