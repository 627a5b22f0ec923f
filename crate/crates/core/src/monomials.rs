//! Monomials `X_1^{i_1} ... X_n^{i_n}` with every exponent at most `q - 1`.

use crate::gf::{Elem, Gf};

/// An exponent vector.
pub type Monomial = Vec<u32>;

/// All reduced monomials in `n` variables of total degree at most `d`,
/// graded by degree; within a degree, exponent vectors in decreasing
/// lexicographic order (`x1^2` before `x1 x2` before `x2^2`).
pub fn monomials(n: usize, d: u32, q: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut cur = vec![0u32; n];
        of_degree(n, deg, q - 1, 0, &mut cur, &mut out);
    }
    out
}

/// Appends the monomials of total degree exactly `deg`, each exponent at most `cap`.
fn of_degree(n: usize, deg: u32, cap: u32, pos: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
    if pos == n {
        if deg == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if pos + 1 == n {
        if deg <= cap {
            cur[pos] = deg;
            out.push(cur.clone());
            cur[pos] = 0;
        }
        return;
    }
    for e in (0..=deg.min(cap)).rev() {
        cur[pos] = e;
        of_degree(n, deg - e, cap, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

pub fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Evaluates a monomial at a point, with `0^0 = 1`.
pub fn eval(field: &Gf, m: &[u32], point: &[Elem]) -> Elem {
    m.iter()
        .zip(point)
        .fold(1, |acc, (&e, &x)| field.mul(acc, field.pow(x, e as u64)))
}

/// Human-readable name such as `x1^2*x3`, or `1` for the constant.
pub fn name(m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}
