//! Max NAND instances: constraints `x_k = NAND(x_i, x_j) = 1 + x_i x_j`.

use num_rational::Ratio;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`MaxNandInstance::opt_exact`].
pub const OPT_MAX_VARS: usize = 24;

/// `x_k = NAND(x_i, x_j)`, 0-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub k: usize,
    pub i: usize,
    pub j: usize,
}

impl Constraint {
    pub fn new(k: usize, i: usize, j: usize) -> Self {
        Constraint { k, i, j }
    }

    pub fn holds(&self, bits: &[u8]) -> bool {
        bits[self.k] == 1 ^ (bits[self.i] & bits[self.j])
    }
}

/// A boolean assignment, one bit (0 or 1) per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    bits: Vec<u8>,
}

impl Assignment {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter("assignment bits must be 0 or 1".into()));
        }
        Ok(Assignment { bits })
    }

    /// Bits of `t` with the first variable most significant.
    fn from_index(t: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|i| ((t >> (n - 1 - i)) & 1) as u8).collect(),
        }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Exact optimum of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub opt: Ratio<u64>,
    pub satisfied: usize,
    /// Lexicographically smallest optimal assignment.
    pub witness: Assignment,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MaxNandInstance {
    n: usize,
    constraints: Vec<Constraint>,
}

impl MaxNandInstance {
    /// Validates indices, `m >= 1`, and that every variable occurs somewhere.
    pub fn new(n: usize, constraints: Vec<Constraint>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::InvalidInstance("no constraints".into()));
        }
        let mut seen = vec![false; n];
        for (idx, c) in constraints.iter().enumerate() {
            for v in [c.k, c.i, c.j] {
                if v >= n {
                    return Err(Error::InvalidInstance(format!(
                        "constraint {} uses variable {} but n = {n}",
                        idx + 1,
                        v + 1
                    )));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidInstance(format!(
                "variable {} appears in no constraint",
                v + 1
            )));
        }
        Ok(MaxNandInstance { n, constraints })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn satisfied_count(&self, beta: &Assignment) -> Result<usize> {
        if beta.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "assignment of length {} for {} variables",
                beta.len(),
                self.n
            )));
        }
        Ok(self.constraints.iter().filter(|c| c.holds(&beta.bits)).count())
    }

    pub fn is_satisfied_by(&self, beta: &Assignment) -> Result<bool> {
        Ok(self.satisfied_count(beta)? == self.m())
    }

    /// Exact optimum by enumerating all `2^n` assignments.
    pub fn opt_exact(&self) -> Result<OptResult> {
        if self.n > OPT_MAX_VARS {
            return Err(Error::TooLarge(format!(
                "opt_exact needs n <= {OPT_MAX_VARS}, got {}",
                self.n
            )));
        }
        let n = self.n;
        let total = 1u64 << n;
        // (satisfied, index) maximizing satisfied, then minimizing index
        let (best, t) = (0..total)
            .into_par_iter()
            .map(|t| {
                let a = Assignment::from_index(t, n);
                (self.constraints.iter().filter(|c| c.holds(&a.bits)).count(), t)
            })
            .reduce(
                || (0, u64::MAX),
                |a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                },
            );
        Ok(OptResult {
            opt: Ratio::new(best as u64, self.m() as u64),
            satisfied: best,
            witness: Assignment::from_index(t, n),
        })
    }
}

/// `{x_1 = NAND(x_1, x_1)}`, which no assignment satisfies.
pub fn contradiction() -> MaxNandInstance {
    contradiction_padded(1).expect("n = 1 is valid")
}

/// The contradiction padded to `n` variables with `x_v = NAND(x_1, x_1)`
/// for `v = 2..n`; optimum `(n - 1) / n`.
pub fn contradiction_padded(n: usize) -> Result<MaxNandInstance> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    MaxNandInstance::new(n, (0..n).map(|v| Constraint::new(v, 0, 0)).collect())
}

fn check_gen_params(n: usize, m: usize) -> Result<()> {
    if n < 2 || m < n {
        return Err(Error::InvalidParameter(format!(
            "generators need n >= 2 and m >= n (got n = {n}, m = {m})"
        )));
    }
    Ok(())
}

fn random_assignment(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    let mut bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    // both values must occur so every NAND output is available
    if bits.iter().all(|&b| b == bits[0]) {
        let v = rng.gen_range(0..n);
        bits[v] ^= 1;
    }
    bits
}

fn pick_with_value(rng: &mut ChaCha8Rng, bits: &[u8], value: u8) -> usize {
    let cands: Vec<usize> = (0..bits.len()).filter(|&v| bits[v] == value).collect();
    cands[rng.gen_range(0..cands.len())]
}

fn planted_with(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (Vec<Constraint>, Vec<u8>) {
    let bits = random_assignment(rng, n);
    let mut cons = Vec::with_capacity(m);
    for c in 0..m {
        // the first n constraints each cover variable c
        let i = if c < n { c } else { rng.gen_range(0..n) };
        let j = rng.gen_range(0..n);
        let k = pick_with_value(rng, &bits, 1 ^ (bits[i] & bits[j]));
        cons.push(Constraint::new(k, i, j));
    }
    (cons, bits)
}

/// A random instance satisfied by a random planted assignment. Deterministic
/// in `seed`.
pub fn gen_planted(n: usize, m: usize, seed: u64) -> Result<(MaxNandInstance, Assignment)> {
    check_gen_params(n, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cons, bits) = planted_with(&mut rng, n, m);
    Ok((MaxNandInstance::new(n, cons)?, Assignment { bits }))
}

/// A planted instance with `ceil(flip * m)` constraints rewired so that the
/// planted assignment violates them. The optimum is not controlled; measure
/// it with [`MaxNandInstance::opt_exact`].
pub fn gen_noisy(n: usize, m: usize, flip: f64, seed: u64) -> Result<MaxNandInstance> {
    check_gen_params(n, m)?;
    if !(0.0..=1.0).contains(&flip) {
        return Err(Error::InvalidParameter(format!("flip {flip} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cons, bits) = planted_with(&mut rng, n, m);
    let count = ((flip * m as f64).ceil() as usize).min(m);
    let chosen = index::sample(&mut rng, m, count).into_vec();
    for _ in 0..1000 {
        let mut trial = cons.clone();
        for &c in &chosen {
            let Constraint { i, j, .. } = trial[c];
            trial[c].k = pick_with_value(&mut rng, &bits, bits[i] & bits[j]);
        }
        if let Ok(inst) = MaxNandInstance::new(n, trial) {
            return Ok(inst);
        }
    }
    Err(Error::InvalidInstance(
        "could not rewire constraints while keeping every variable covered".into(),
    ))
}
