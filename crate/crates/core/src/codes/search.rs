//! Exhaustive minimum-weight search over `offset + span(G)`.
//!
//! Messages are visited in modular q-ary Gray-code order: consecutive
//! messages differ in one digit, whose element index goes up by one mod q,
//! so each step adds a multiple of one generator row. In prime fields the
//! multiple is always 1; in prime-power fields it depends on the digit. The message space is split into contiguous chunks searched in
//! parallel; ties are broken towards the lexicographically smallest vector,
//! so the result does not depend on the split.

use rayon::prelude::*;

use crate::error::{ensure_budget, Result};
use crate::gf::{Elem, Gf};
use crate::linalg::{gf2, FMatrix};

const CHUNKS: u128 = 512;

/// Best vector found by a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Best {
    pub weight: usize,
    pub vector: Vec<Elem>,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        self.weight < other.weight || (self.weight == other.weight && self.vector < other.vector)
    }
}

fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if b.better_than(&a) { b } else { a }),
    }
}

/// Base-q digits of `t`, least significant first.
fn digits(t: u128, q: u32, k: usize) -> Vec<u32> {
    let mut out = vec![0; k];
    let mut t = t;
    for d in out.iter_mut() {
        *d = (t % q as u128) as u32;
        t /= q as u128;
    }
    out
}

/// Gray digits: `g_i = t_i - t_{i+1} mod q`.
pub(crate) fn gray(t: u128, q: u32, k: usize) -> Vec<Elem> {
    let d = digits(t, q, k);
    (0..k)
        .map(|i| {
            let next = if i + 1 < k { d[i + 1] } else { 0 };
            ((d[i] + q - next) % q) as Elem
        })
        .collect()
}

/// Minimum weight over `offset + span(G)`, skipping the zero message when
/// `skip_zero` is set. Returns `None` only when nothing was visited.
pub(crate) fn min_weight(
    gen: &FMatrix,
    offset: Option<&[Elem]>,
    skip_zero: bool,
    budget: u128,
) -> Result<(Option<Best>, u128)> {
    let f = gen.field().clone();
    let k = gen.rows();
    let total = ensure_budget(f.q(), k, budget)?;
    let chunk = total.div_ceil(CHUNKS).max(1);
    let n_chunks = total.div_ceil(chunk);
    let best = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            if f.is_binary() {
                search_binary(gen, offset, skip_zero, lo, hi)
            } else {
                search_generic(&f, gen, offset, skip_zero, lo, hi)
            }
        })
        .reduce(|| None, merge);
    Ok((best, total))
}

/// Visits every vector of `offset + span(G)` once, in Gray order within
/// each chunk, folding into per-chunk states that are then merged. `visit`
/// receives the message index `t` (decode with [`gray`]) and the vector.
/// `merge` must be associative for the result to be partition-independent.
pub(crate) fn fold_span<T, I, V, M>(
    gen: &FMatrix,
    offset: Option<&[Elem]>,
    budget: u128,
    init: I,
    visit: V,
    merge: M,
) -> Result<(T, u128)>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, u128, &[Elem]) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    let f = gen.field().clone();
    let q = f.q();
    let k = gen.rows();
    let total = ensure_budget(q, k, budget)?;
    let chunk = total.div_ceil(CHUNKS).max(1);
    let n_chunks = total.div_ceil(chunk);
    let moves = Moves::new(&f, gen);
    let add = f.add_table();
    let state = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            let mut acc = init();
            let mut v = start_vector(&f, gen, offset, lo);
            let mut walk = Walk::new(lo, q, k);
            visit(&mut acc, lo, &v);
            for t in lo + 1..hi {
                for &(x, e) in walk.step(&moves) {
                    v[x] = add[((v[x] as usize) << 4) | e as usize];
                }
                visit(&mut acc, t, &v);
            }
            acc
        })
        .reduce(&init, &merge);
    Ok((state, total))
}

/// `moves[j][g]`: sparse addend taking Gray digit `j` from index `g` to
/// `g + 1 mod q`, i.e. `(g + 1 - g) * row_j` in the field.
struct Moves(Vec<Vec<Vec<(usize, Elem)>>>);

impl Moves {
    fn new(f: &Gf, gen: &FMatrix) -> Self {
        let q = f.q();
        Moves(
            (0..gen.rows())
                .map(|i| {
                    (0..q)
                        .map(|g| {
                            let delta = f.sub(((g + 1) % q) as Elem, g as Elem);
                            gen.row(i)
                                .iter()
                                .enumerate()
                                .filter(|(_, &e)| e != 0)
                                .map(|(j, &e)| (j, f.mul(delta, e)))
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

/// Base-q counter and the Gray digits it induces.
struct Walk {
    counter: Vec<u32>,
    gray: Vec<u32>,
    q: u32,
}

impl Walk {
    fn new(t: u128, q: u32, k: usize) -> Self {
        Walk {
            counter: digits(t, q, k),
            gray: gray(t, q, k).into_iter().map(u32::from).collect(),
            q,
        }
    }

    /// Advances by one message and returns the addend for the vector.
    #[inline]
    fn step<'a>(&mut self, moves: &'a Moves) -> &'a [(usize, Elem)] {
        let j = step_counter(&mut self.counter, self.q);
        let g = self.gray[j];
        self.gray[j] = (g + 1) % self.q;
        &moves.0[j][g as usize]
    }
}

/// Position of the digit that changes between `t - 1` and `t`, given the
/// base-q counter of `t - 1`; advances the counter.
#[inline]
fn step_counter(counter: &mut [u32], q: u32) -> usize {
    let mut j = 0;
    while counter[j] == q - 1 {
        counter[j] = 0;
        j += 1;
    }
    counter[j] += 1;
    j
}

fn start_vector(f: &Gf, gen: &FMatrix, offset: Option<&[Elem]>, lo: u128) -> Vec<Elem> {
    let g = gray(lo, f.q(), gen.rows());
    let mut v = offset.map_or_else(|| vec![0; gen.cols()], |o| o.to_vec());
    for (i, &c) in g.iter().enumerate() {
        crate::linalg::axpy(f, &mut v, c, gen.row(i));
    }
    v
}

fn search_generic(
    f: &Gf,
    gen: &FMatrix,
    offset: Option<&[Elem]>,
    skip_zero: bool,
    lo: u128,
    hi: u128,
) -> Option<Best> {
    let add = f.add_table();
    let moves = Moves::new(f, gen);

    let mut v = start_vector(f, gen, offset, lo);
    let mut weight = v.iter().filter(|&&e| e != 0).count();
    let mut walk = Walk::new(lo, f.q(), gen.rows());
    let mut best: Option<Best> = None;
    let consider = |t: u128, v: &[Elem], weight: usize, best: &mut Option<Best>| {
        if skip_zero && t == 0 {
            return;
        }
        let better = match best {
            None => true,
            Some(b) => weight < b.weight || (weight == b.weight && v < &b.vector[..]),
        };
        if better {
            *best = Some(Best {
                weight,
                vector: v.to_vec(),
            });
        }
    };
    consider(lo, &v, weight, &mut best);
    for t in lo + 1..hi {
        for &(x, e) in walk.step(&moves) {
            let old = v[x];
            let new = add[((old as usize) << 4) | e as usize];
            v[x] = new;
            weight = weight + (new != 0) as usize - (old != 0) as usize;
        }
        consider(t, &v, weight, &mut best);
    }
    best
}

fn search_binary(
    gen: &FMatrix,
    offset: Option<&[Elem]>,
    skip_zero: bool,
    lo: u128,
    hi: u128,
) -> Option<Best> {
    let f = Gf::binary();
    let n = gen.cols();
    let k = gen.rows();
    let rows: Vec<Vec<u64>> = (0..k).map(|i| gf2::pack(gen.row(i))).collect();
    let mut v = gf2::pack(&start_vector(&f, gen, offset, lo));
    let mut counter = digits(lo, 2, k);
    let mut best: Option<(usize, Vec<u64>)> = None;
    let consider = |t: u128, v: &[u64], best: &mut Option<(usize, Vec<u64>)>| {
        if skip_zero && t == 0 {
            return;
        }
        let w = gf2::weight(v);
        let better = match best {
            None => true,
            Some((bw, bv)) => w < *bw || (w == *bw && gf2::lex_less(v, bv)),
        };
        if better {
            *best = Some((w, v.to_vec()));
        }
    };
    consider(lo, &v, &mut best);
    for t in lo + 1..hi {
        let j = step_counter(&mut counter, 2);
        gf2::xor_into(&mut v, &rows[j]);
        consider(t, &v, &mut best);
    }
    best.map(|(weight, words)| Best {
        weight,
        vector: gf2::unpack(&words, n),
    })
}
