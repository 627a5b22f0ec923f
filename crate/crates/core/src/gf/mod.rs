//! Arithmetic in the finite fields F_q, q a prime power up to 16.
//!
//! Elements are plain `u8` indices in `[0, q)`. For `q = p^t` with `t > 1`
//! the index is the base-`p` digit vector of the residue polynomial, lowest
//! degree first, so the class of `x` in F_4 is index 2.
//!
//! Every field is built once per process from a fixed modulus table and shared
//! behind an `Arc`; all operations are table lookups.

mod poly;

pub use poly::Poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field element, encoded as its index in `[0, q)`.
pub type Elem = u8;

/// Orders for which a field can be constructed.
pub const SUPPORTED_ORDERS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

/// Conway polynomials, coefficients lowest degree first (leading 1 included).
const MODULI: [(u32, &[u8]); 4] = [
    (4, &[1, 1, 1]),    // x^2 + x + 1
    (8, &[1, 1, 0, 1]), // x^3 + x + 1
    (9, &[2, 2, 1]),    // x^2 + 2x + 2
    (16, &[1, 1, 0, 0, 1]), // x^4 + x + 1
];

/// Static description of a field: its order, characteristic, degree and modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub q: u32,
    pub p: u32,
    pub t: u32,
    /// Monic irreducible polynomial over F_p of degree `t`, lowest degree
    /// first. Empty for prime fields.
    pub modulus: Vec<u8>,
}

struct Tables {
    spec: FieldSpec,
    add: [u8; 256],
    mul: [u8; 256],
    neg: [u8; 16],
    inv: [u8; 16],
}

/// Shared handle to the arithmetic tables of F_q.
#[derive(Clone)]
pub struct Gf(Arc<Tables>);

static FIELDS: [OnceLock<Gf>; 17] = [const { OnceLock::new() }; 17];

/// Splits `q` as `p^t`, or `None` when `q` is not a prime power.
fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut t = 0;
    while rest % p == 0 {
        rest /= p;
        t += 1;
    }
    (rest == 1).then_some((p, t))
}

impl Gf {
    /// The canonical field of order `q`.
    pub fn new(q: u32) -> Result<Gf> {
        if q > 16 {
            return Err(Error::NotPrimePower(q));
        }
        let (p, t) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if let Some(f) = FIELDS[q as usize].get() {
            return Ok(f.clone());
        }
        let field = if t == 1 {
            Gf::build_prime(p)
        } else {
            let modulus = MODULI
                .iter()
                .find(|(order, _)| *order == q)
                .map(|(_, m)| m.to_vec())
                .ok_or(Error::NotPrimePower(q))?;
            let base = Gf::new(p)?;
            assert!(
                Poly::new(&base, modulus.clone()).is_irreducible(),
                "modulus table entry for q={q} is reducible"
            );
            Gf::build_extension(p, t, modulus)
        };
        Ok(FIELDS[q as usize].get_or_init(|| field).clone())
    }

    /// Shorthand for the binary field.
    pub fn binary() -> Gf {
        Gf::new(2).expect("F_2 exists")
    }

    fn build_prime(p: u32) -> Gf {
        let mut add = [0u8; 256];
        let mut mul = [0u8; 256];
        for a in 0..p {
            for b in 0..p {
                add[((a << 4) | b) as usize] = ((a + b) % p) as u8;
                mul[((a << 4) | b) as usize] = ((a * b) % p) as u8;
            }
        }
        Gf::finish(
            FieldSpec {
                q: p,
                p,
                t: 1,
                modulus: Vec::new(),
            },
            add,
            mul,
        )
    }

    fn build_extension(p: u32, t: u32, modulus: Vec<u8>) -> Gf {
        let q = p.pow(t);
        let t = t as usize;
        let digits = |x: u32| -> Vec<u32> {
            let mut v = vec![0; t];
            let mut x = x;
            for d in v.iter_mut() {
                *d = x % p;
                x /= p;
            }
            v
        };
        let index = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let mut add = [0u8; 256];
        let mut mul = [0u8; 256];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[((a << 4) | b) as usize] = index(&sum) as u8;

                let mut prod = vec![0u32; 2 * t - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // reduce by the monic modulus, top degree down
                for deg in (t..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    for (i, &m) in modulus.iter().enumerate() {
                        let k = deg - t + i;
                        prod[k] = (prod[k] + (p - c) * m as u32 % p) % p;
                    }
                }
                mul[((a << 4) | b) as usize] = index(&prod[..t]) as u8;
            }
        }
        Gf::finish(
            FieldSpec {
                q,
                p,
                t: t as u32,
                modulus,
            },
            add,
            mul,
        )
    }

    fn finish(spec: FieldSpec, add: [u8; 256], mul: [u8; 256]) -> Gf {
        let q = spec.q as usize;
        let mut neg = [0u8; 16];
        let mut inv = [0u8; 16];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[(a << 4) | b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..q)
                    .find(|&b| mul[(a << 4) | b] == 1)
                    .expect("nonzero element is invertible") as u8;
            }
        }
        Gf(Arc::new(Tables {
            spec,
            add,
            mul,
            neg,
            inv,
        }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.spec.q
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.spec.q as usize
    }

    pub fn characteristic(&self) -> u32 {
        self.0.spec.p
    }

    #[inline]
    pub fn is_binary(&self) -> bool {
        self.0.spec.q == 2
    }

    /// All elements in index order.
    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.q() as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[((a as usize) << 4) | b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[((a as usize) << 4) | b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::DivisionByZero(self.q()))
        } else {
            Ok(self.0.inv[a as usize])
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Raw addition table, indexed by `(a << 4) | b`.
    #[inline]
    pub fn add_table(&self) -> &[u8; 256] {
        &self.0.add
    }

    /// Raw multiplication table, indexed by `(a << 4) | b`.
    #[inline]
    pub fn mul_table(&self) -> &[u8; 256] {
        &self.0.mul
    }

    /// The smallest-index element of multiplicative order `q - 1`.
    pub fn generator(&self) -> Elem {
        let q = self.q() as u64;
        (1..self.q() as Elem)
            .find(|&g| (1..q - 1).all(|e| self.pow(g, e) != 1))
            .expect("multiplicative group is cyclic")
    }

    /// `sum_{x in F_q} x^a`, summed directly over the field.
    pub fn power_sum(&self, a: u64) -> Elem {
        self.elements()
            .fold(0, |acc, x| self.add(acc, self.pow(x, a)))
    }

    /// Iterates over all vectors of `F_q^len` in lexicographic order
    /// (first coordinate most significant).
    pub fn vectors(&self, len: usize) -> impl Iterator<Item = Vec<Elem>> {
        let q = self.q() as Elem;
        let mut next = Some(vec![0 as Elem; len]);
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let mut succ = cur.clone();
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                succ[i] += 1;
                if succ[i] < q {
                    next = Some(succ);
                    break;
                }
                succ[i] = 0;
            }
            Some(cur)
        })
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q()
    }
}

impl Eq for Gf {}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q())
    }
}
