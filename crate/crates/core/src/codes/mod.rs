//! Linear codes and affine subspaces over F_q.

pub(crate) mod families;
pub(crate) mod search;

pub use families::{
    componentwise_power, homogeneous_linear_code, polynomial_code, random_code, simplex_code,
    symmetric_subcode, symmetric_zero_diag_subcode, tensor,
};

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Gf};
use crate::linalg::{FMatrix, FVector};

/// Default cap on enumerated messages.
pub const DEFAULT_BUDGET: u128 = 1 << 30;

/// A linear code given by a full-rank generator matrix (rows are a basis).
#[derive(Clone)]
pub struct LinearCode {
    generator: FMatrix,
    parity: OnceLock<FMatrix>,
    decoder: OnceLock<FMatrix>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]_{} code", self.len(), self.dim(), self.field().q())
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
    }
}

impl LinearCode {
    /// Wraps a generator matrix whose rows must be linearly independent.
    pub fn new(generator: FMatrix) -> Result<Self> {
        let rank = generator.rank();
        if rank < generator.rows() {
            return Err(Error::RankDeficient(format!(
                "generator has rank {rank} < {} rows",
                generator.rows()
            )));
        }
        Ok(LinearCode {
            generator,
            parity: OnceLock::new(),
            decoder: OnceLock::new(),
        })
    }

    /// The code spanned by `rows`, keeping the first maximal independent
    /// subset in order.
    pub fn from_spanning(spanning: &FMatrix) -> Self {
        let info = spanning.transpose().rref();
        LinearCode {
            generator: spanning.select_rows(&info.pivots),
            parity: OnceLock::new(),
            decoder: OnceLock::new(),
        }
    }

    /// The zero code `{0}` of length `n`.
    pub fn zero(field: &Gf, n: usize) -> Self {
        LinearCode::from_spanning(&FMatrix::zeros(field, 0, n))
    }

    pub fn field(&self) -> &Gf {
        self.generator.field()
    }

    /// Block length.
    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.generator.cols() == 0
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &FMatrix {
        &self.generator
    }

    /// Parity-check matrix `H` with `H G^T = 0` and `rank H = n - k`.
    pub fn parity_check(&self) -> &FMatrix {
        self.parity.get_or_init(|| {
            let basis = self.generator.nullspace_basis();
            FMatrix::from_vectors(self.field(), self.len(), &basis).expect("uniform lengths")
        })
    }

    /// `D` with `encode(m) D^T = m`, from the left inverse of `G^T`.
    pub fn decoder(&self) -> &FMatrix {
        self.decoder.get_or_init(|| {
            self.generator
                .transpose()
                .left_inverse()
                .expect("generator has full row rank")
        })
    }

    pub fn encode(&self, message: &[Elem]) -> Result<FVector> {
        self.generator.vec_mul(message)
    }

    /// Message of a codeword (meaningless for non-codewords).
    pub fn decode(&self, word: &FVector) -> Result<FVector> {
        self.decoder().mul_vec(word)
    }

    pub fn contains(&self, word: &FVector) -> Result<bool> {
        if word.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "word of length {} for a code of length {}",
                word.len(),
                self.len()
            )));
        }
        Ok(self.parity_check().mul_vec(word)?.is_zero())
    }

    /// All codewords, in lexicographic message order.
    pub fn codewords(&self) -> impl Iterator<Item = FVector> + '_ {
        self.field()
            .vectors(self.dim())
            .map(move |m| self.generator.vec_mul(&m).expect("message length is k"))
    }

    /// Exact `d(C)` by enumerating all `q^k` messages.
    pub fn min_distance_exact(&self, budget: u128) -> Result<DistanceReport> {
        if self.dim() == 0 {
            return Ok(DistanceReport {
                distance: Distance::Infinite,
                witness: None,
                method: Method::ExactEnumeration,
                enumerated: 1,
            });
        }
        let (best, total) = search::min_weight(&self.generator, None, true, budget)?;
        let best = best.expect("nonzero messages exist");
        Ok(DistanceReport {
            distance: Distance::Finite(best.weight),
            witness: Some(FVector::new(self.field(), best.vector)),
            method: Method::ExactEnumeration,
            enumerated: total,
        })
    }
}

/// `offset + C`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace {
    pub code: LinearCode,
    pub offset: FVector,
}

impl AffineSubspace {
    pub fn new(code: LinearCode, offset: FVector) -> Result<Self> {
        if offset.len() != code.len() {
            return Err(Error::DimensionMismatch(format!(
                "offset of length {} for a code of length {}",
                offset.len(),
                code.len()
            )));
        }
        if offset.field() != code.field() {
            return Err(Error::FieldMismatch(offset.field().q(), code.field().q()));
        }
        Ok(AffineSubspace { code, offset })
    }

    pub fn field(&self) -> &Gf {
        self.code.field()
    }

    pub fn contains(&self, point: &FVector) -> Result<bool> {
        let diff = point.add(&self.offset.scale(self.field().neg(1)));
        self.code.contains(&diff)
    }

    /// Minimum weight over all points of the affine space.
    pub fn ncp_min_weight(&self, budget: u128) -> Result<DistanceReport> {
        let (best, total) = search::min_weight(
            self.code.generator(),
            Some(self.offset.entries()),
            false,
            budget,
        )?;
        let best = best.expect("the offset itself is visited");
        Ok(DistanceReport {
            distance: Distance::Finite(best.weight),
            witness: Some(FVector::new(self.field(), best.vector)),
            method: Method::ExactEnumeration,
            enumerated: total,
        })
    }
}

/// A distance value; the zero code has infinite distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEnumeration,
}

/// Result of an exact minimum-weight search. The witness is the
/// lexicographically smallest vector of minimum weight.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport {
    pub distance: Distance,
    pub witness: Option<FVector>,
    pub method: Method,
    pub enumerated: u128,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::checked_pow;

    fn hamming() -> LinearCode {
        let f2 = Gf::binary();
        let rows: Vec<Vec<Elem>> = vec![
            vec![1, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        LinearCode::new(FMatrix::from_rows(&f2, 7, &rows).unwrap()).unwrap()
    }

    /// Naive oracle: encode every message and take the minimum nonzero weight.
    fn brute_distance(c: &LinearCode) -> Option<usize> {
        c.codewords().map(|w| w.weight()).filter(|&w| w > 0).min()
    }

    #[test]
    fn distance_examples() {
        let f3 = Gf::new(3).unwrap();
        let id = LinearCode::new(FMatrix::identity(&f3, 4)).unwrap();
        assert_eq!(id.min_distance_exact(DEFAULT_BUDGET).unwrap().distance, Distance::Finite(1));

        let h = hamming();
        let report = h.min_distance_exact(DEFAULT_BUDGET).unwrap();
        assert_eq!(report.distance, Distance::Finite(3));
        assert_eq!(brute_distance(&h), Some(3));
        let w = report.witness.unwrap();
        assert!(h.contains(&w).unwrap());
        assert_eq!(w.weight(), 3);
        // lexicographically smallest weight-3 codeword
        let smallest = h.codewords().filter(|c| c.weight() == 3).map(|c| c.into_entries()).min();
        assert_eq!(Some(w.into_entries()), smallest);
        assert_eq!(report.enumerated, 16);

        let zero = LinearCode::zero(&f3, 5);
        assert_eq!(zero.min_distance_exact(DEFAULT_BUDGET).unwrap().distance, Distance::Infinite);
    }

    #[test]
    fn budget_is_enforced() {
        let err = hamming().min_distance_exact(15).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { needed: 16, budget: 15 });
    }

    #[test]
    fn parity_and_decoder() {
        let h = hamming();
        let par = h.parity_check();
        assert_eq!(par.rows(), 3);
        assert!(par.mul(&h.generator().transpose()).unwrap().is_zero());
        for m in h.field().vectors(4) {
            let c = h.encode(&m).unwrap();
            assert_eq!(h.decode(&c).unwrap().entries(), &m[..]);
        }
        assert!(!h.contains(&FVector::new(h.field(), vec![1, 0, 0, 0, 0, 0, 0])).unwrap());
    }

    #[test]
    fn rejects_dependent_generators() {
        let f2 = Gf::binary();
        let g = FMatrix::from_rows(&f2, 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(LinearCode::new(g.clone()), Err(Error::RankDeficient(_))));
        assert_eq!(LinearCode::from_spanning(&g).dim(), 1);
    }

    #[test]
    fn ncp_examples() {
        let f2 = Gf::binary();
        let h = hamming();
        let at_zero = AffineSubspace::new(h.clone(), FVector::zeros(&f2, 7)).unwrap();
        assert_eq!(at_zero.ncp_min_weight(DEFAULT_BUDGET).unwrap().distance, Distance::Finite(0));

        let w = FVector::new(&f2, vec![1, 1, 1, 1, 1, 0, 0]);
        let point = AffineSubspace::new(LinearCode::zero(&f2, 7), w).unwrap();
        assert_eq!(point.ncp_min_weight(DEFAULT_BUDGET).unwrap().distance, Distance::Finite(5));

        // every vector is within distance 1 of the perfect Hamming code
        let off = AffineSubspace::new(h, FVector::new(&f2, vec![1, 0, 0, 0, 0, 0, 0])).unwrap();
        let r = off.ncp_min_weight(DEFAULT_BUDGET).unwrap();
        assert_eq!(r.distance, Distance::Finite(1));
        assert!(off.contains(r.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn search_matches_oracle_over_fields() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for q in [2u32, 3, 4, 5, 7] {
            let f = Gf::new(q).unwrap();
            for _ in 0..6 {
                let k = rng.gen_range(1..=4);
                let n = rng.gen_range(k..=9);
                let data = (0..k * n).map(|_| rng.gen_range(0..q) as Elem).collect();
                let c = LinearCode::from_spanning(&FMatrix::from_data(&f, k, n, data).unwrap());
                if c.dim() == 0 {
                    continue;
                }
                let r = c.min_distance_exact(DEFAULT_BUDGET).unwrap();
                assert_eq!(r.distance.finite(), brute_distance(&c));
                assert_eq!(r.enumerated, checked_pow(q, c.dim()));
            }
        }
    }
}
