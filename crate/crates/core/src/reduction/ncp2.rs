//! Max NAND → nearest codeword over F_2.
//!
//! Variables `x` (one per CSP variable), `S` (a function `{0,1}^2 → F_2` per
//! constraint, coordinate `2a + b`) and a constant pinned to 1. Per
//! constraint `x_k = NAND(x_i, x_j)`:
//!
//! ```text
//! S(0,0) + S(0,1) + S(1,0) + S(1,1) = 1
//! S(1,0) + S(1,1)                   = x_i
//! S(0,1) + S(1,1)                   = x_j
//! S(0,0) + S(0,1) + S(1,0)          = x_k
//! ```
//!
//! The output is the projection of the solutions onto the `S` coordinates.

use super::{finish, Draft, Kind, Params, ReductionArtifact};
use super::system::{ConstraintSystem, VariableLayout};
use crate::csp::{Assignment, MaxNandInstance};
use crate::error::Result;
use crate::gf::Gf;
use crate::linalg::FVector;

pub fn build_ncp2(psi: &MaxNandInstance) -> Result<ReductionArtifact> {
    let f2 = Gf::binary();
    let (n, m) = (psi.n(), psi.m());
    let mut layout = VariableLayout::new();
    let x = layout.push("x", &[n]);
    let s = layout.push("S", &[m, 2, 2]);
    let one = layout.push("one", &[1]);
    let mut sys = ConstraintSystem::new(&f2, layout);
    for (c, con) in psi.constraints().iter().enumerate() {
        let sv = |a: usize, b: usize| s + 4 * c + 2 * a + b;
        sys.push("sum", &[(sv(0, 0), 1), (sv(0, 1), 1), (sv(1, 0), 1), (sv(1, 1), 1), (one, 1)]);
        sys.push("x_i", &[(sv(1, 0), 1), (sv(1, 1), 1), (x + con.i, 1)]);
        sys.push("x_j", &[(sv(0, 1), 1), (sv(1, 1), 1), (x + con.j, 1)]);
        sys.push("x_k", &[(sv(0, 0), 1), (sv(0, 1), 1), (sv(1, 0), 1), (x + con.k, 1)]);
    }
    let projection = (s..s + 4 * m).map(|v| (v, 1)).collect();
    finish(Draft {
        kind: Kind::Ncp2,
        params: Params {
            q: 2,
            n,
            m,
            big_n: 0,
            r: 1,
        },
        instance: psi.clone(),
        system: sys,
        pinned: Some(one),
        projection,
        encoding: None,
        evaluation_set: None,
        completeness_weight: m,
        epsilon: 0.0,
    })
}

pub(super) fn intended(art: &ReductionArtifact, beta: &Assignment) -> FVector {
    let layout = art.layout();
    let mut v = vec![0; layout.total()];
    let x = layout.block("x").start;
    let s = layout.block("S");
    let b = beta.bits();
    v[x..x + b.len()].copy_from_slice(b);
    for (c, con) in art.instance().constraints().iter().enumerate() {
        v[s.at(&[c, b[con.i] as usize, b[con.j] as usize])] = 1;
    }
    v[layout.block("one").start] = 1;
    FVector::new(art.field(), v)
}
