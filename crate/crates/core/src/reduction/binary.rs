//! Max NAND → minimum distance over F_2.
//!
//! Variables: `x0`, `x` (n), `y` (N), `Y` (N x N), `S` (4 per constraint),
//! `Z` (4 per pair `(i, j)`). Constraints:
//!
//! - per NAND constraint, the NCP equations with the constant replaced by `x0`;
//! - per pair, `sum Z_ij = x0`, `Z_ij(1,0) + Z_ij(1,1) = y_i`,
//!   `Z_ij(0,1) + Z_ij(1,1) = y_j`, `Z_ij(1,1) = Y_ij`;
//! - `y = C(x)`, every row and column of `Y` in `C`, `diag(Y) = y`,
//!   `Y` symmetric.
//!
//! Output: all `Z` coordinates, then every `S` coordinate repeated `r` times.

use super::system::{ConstraintSystem, VariableLayout};
use super::{finish, Draft, Kind, Params, ReductionArtifact};
use crate::codes::{LinearCode, DEFAULT_BUDGET};
use crate::csp::{Assignment, MaxNandInstance};
use crate::error::{Error, Result};
use crate::linalg::FVector;

pub fn build_mindist2(psi: &MaxNandInstance, c: &LinearCode, r: usize) -> Result<ReductionArtifact> {
    let f2 = c.field().clone();
    if !f2.is_binary() {
        return Err(Error::FieldMismatch(c.field().q(), 2));
    }
    let (n, m, big_n) = (psi.n(), psi.m(), c.len());
    if c.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "encoding code has dimension {} but the instance has {n} variables",
            c.dim()
        )));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let mut layout = VariableLayout::new();
    let x0 = layout.push("x0", &[1]);
    let x = layout.push("x", &[n]);
    let y = layout.push("y", &[big_n]);
    layout.push("Y", &[big_n, big_n]);
    layout.push("S", &[m, 2, 2]);
    layout.push("Z", &[big_n, big_n, 2, 2]);
    let yy = layout.block("Y").clone();
    let s = layout.block("S").clone();
    let z = layout.block("Z").clone();
    let mut sys = ConstraintSystem::new(&f2, layout);

    for (ci, con) in psi.constraints().iter().enumerate() {
        let sv = |a: usize, b: usize| s.at(&[ci, a, b]);
        sys.push("S sum", &[(sv(0, 0), 1), (sv(0, 1), 1), (sv(1, 0), 1), (sv(1, 1), 1), (x0, 1)]);
        sys.push("S x_i", &[(sv(1, 0), 1), (sv(1, 1), 1), (x + con.i, 1)]);
        sys.push("S x_j", &[(sv(0, 1), 1), (sv(1, 1), 1), (x + con.j, 1)]);
        sys.push("S x_k", &[(sv(0, 0), 1), (sv(0, 1), 1), (sv(1, 0), 1), (x + con.k, 1)]);
    }
    for i in 0..big_n {
        for j in 0..big_n {
            let zv = |a: usize, b: usize| z.at(&[i, j, a, b]);
            sys.push("Z sum", &[(zv(0, 0), 1), (zv(0, 1), 1), (zv(1, 0), 1), (zv(1, 1), 1), (x0, 1)]);
            sys.push("Z y_i", &[(zv(1, 0), 1), (zv(1, 1), 1), (y + i, 1)]);
            sys.push("Z y_j", &[(zv(0, 1), 1), (zv(1, 1), 1), (y + j, 1)]);
            sys.push("Z Y_ij", &[(zv(1, 1), 1), (yy.at(&[i, j]), 1)]);
        }
    }
    let g = c.generator();
    for t in 0..big_n {
        let mut terms: Vec<_> = (0..n).filter(|&i| g.get(i, t) != 0).map(|i| (x + i, 1)).collect();
        terms.push((y + t, 1));
        sys.push("y = C(x)", &terms);
    }
    let h = c.parity_check();
    for k in 0..big_n {
        let col: Vec<usize> = (0..big_n).map(|i| yy.at(&[i, k])).collect();
        sys.member("Y columns in C", h, &col);
        let row: Vec<usize> = (0..big_n).map(|j| yy.at(&[k, j])).collect();
        sys.member("Y rows in C", h, &row);
    }
    for i in 0..big_n {
        sys.equal("diag Y = y", yy.at(&[i, i]), y + i);
        for j in i + 1..big_n {
            sys.equal("Y symmetric", yy.at(&[i, j]), yy.at(&[j, i]));
        }
    }

    let mut projection: Vec<(usize, usize)> = (z.start..z.end()).map(|v| (v, 1)).collect();
    projection.extend((s.start..s.end()).map(|v| (v, r)));
    let d = c.min_distance_exact(DEFAULT_BUDGET)?.distance.finite().unwrap_or(big_n);
    let epsilon = (0.5 - d as f64 / big_n as f64).abs();
    finish(Draft {
        kind: Kind::Mindist2,
        params: Params {
            q: 2,
            n,
            m,
            big_n,
            r,
        },
        instance: psi.clone(),
        system: sys,
        pinned: None,
        projection,
        encoding: Some(c.clone()),
        evaluation_set: None,
        completeness_weight: big_n * big_n + r * m,
        epsilon,
    })
}

pub(super) fn intended(art: &ReductionArtifact, beta: &Assignment) -> Result<FVector> {
    let layout = art.layout();
    let c = art.encoding().expect("binary artifacts keep C");
    let b = beta.bits();
    let yv = c.encode(b)?;
    let y = yv.entries();
    let big_n = y.len();
    let mut v = vec![0; layout.total()];
    v[layout.block("x0").start] = 1;
    let x = layout.block("x").start;
    v[x..x + b.len()].copy_from_slice(b);
    let ys = layout.block("y").start;
    v[ys..ys + big_n].copy_from_slice(y);
    let yy = layout.block("Y");
    let z = layout.block("Z");
    for i in 0..big_n {
        for j in 0..big_n {
            v[yy.at(&[i, j])] = y[i] & y[j];
            v[z.at(&[i, j, y[i] as usize, y[j] as usize])] = 1;
        }
    }
    let s = layout.block("S");
    for (ci, con) in art.instance().constraints().iter().enumerate() {
        v[s.at(&[ci, b[con.i] as usize, b[con.j] as usize])] = 1;
    }
    Ok(FVector::new(art.field(), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::simplex_code;
    use crate::csp::{contradiction_padded, gen_planted, Constraint};
    use crate::reduction::intended_codeword;

    #[test]
    fn layout_and_lengths() {
        let (psi, beta) = gen_planted(3, 3, 4).unwrap();
        let c = simplex_code(3).unwrap();
        let art = build_mindist2(&psi, &c, 2).unwrap();
        assert_eq!(art.output_len(), 4 * 49 + 4 * 2 * 3);
        assert!(art.injective);
        let w = intended_codeword(&art, &beta).unwrap();
        assert_eq!(w.weight(), 49 + 2 * 3);
        // one nonzero entry per S and Z block
        for blk in w.output.entries()[..4 * 49].chunks(4) {
            assert_eq!(blk.iter().filter(|&&e| e != 0).count(), 1);
        }
    }

    #[test]
    fn inverse_formulas_hold_on_every_basis_vector() {
        let psi = contradiction_padded(3).unwrap();
        let c = simplex_code(3).unwrap();
        let art = build_mindist2(&psi, &c, 1).unwrap();
        let l = art.layout();
        let (x0, x, s) = (l.block("x0").start, l.block("x").start, l.block("S"));
        for row in 0..art.lift().rows() {
            let v = art.lift().row(row);
            for (ci, con) in psi.constraints().iter().enumerate() {
                let (xi, xj, xk) = (v[x + con.i], v[x + con.j], v[x + con.k]);
                assert_eq!(v[s.at(&[ci, 0, 0])], xi ^ xj ^ xk);
                assert_eq!(v[s.at(&[ci, 0, 1])], v[x0] ^ xj ^ xk);
                assert_eq!(v[s.at(&[ci, 1, 0])], v[x0] ^ xi ^ xk);
                assert_eq!(v[s.at(&[ci, 1, 1])], v[x0] ^ xk);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let psi = MaxNandInstance::new(2, vec![Constraint::new(1, 0, 0)]).unwrap();
        let c = simplex_code(3).unwrap();
        assert!(matches!(build_mindist2(&psi, &c, 1), Err(Error::DimensionMismatch(_))));
        let c2 = simplex_code(2).unwrap();
        assert!(build_mindist2(&psi, &c2, 0).is_err());
    }
}
