//! Max NAND → minimum distance over F_q, q ≥ 3.
//!
//! Variables: `Y^e` (N each, `0 <= e <= 2(q-1)`), `Y^{e,f}` (N x N each,
//! `0 <= e, f <= q-1`), `Z_ij` (`q^2` each, coordinate `x q + y`) and `S`
//! (4 per constraint, coordinate `2a + b`). With `P_d` the degree-`d`
//! evaluation codes on `R`, `C` the homogeneous linear code, `D` its fixed
//! decoder, `alpha = D Y^1` and `Y_0 = Y^{0,0}(0,0)`:
//!
//! - `Y^e ∈ P_e` for `e <= q-1`, `Y^e = Y^{e-(q-1)}` for `e >= q`;
//! - columns of `Y^{e,f}` in `P_e`, rows in `P_f`, `diag Y^{e,f} = Y^{e+f}`;
//! - rows of `Y^{0,e}` identical, columns of `Y^{e,0}` identical;
//! - `Y^{q-1,q-1}` symmetric;
//! - per constraint: `sum S = Y_0`, `S(1,0) + S(1,1) = alpha_i`,
//!   `S(0,1) + S(1,1) = alpha_j`, `S(0,0) + S(0,1) + S(1,0) = alpha_k`;
//! - per pair and `(e, f)`: `Y^{e,f}(i,j) = sum_{x,y} x^e y^f Z_ij(x,y)`.
//!
//! Output: all `Z` coordinates, then every `S` coordinate repeated `r` times.

use super::system::{Block, ConstraintSystem, VariableLayout};
use super::{finish, Draft, Kind, Params, ReductionArtifact};
use crate::codes::{componentwise_power, homogeneous_linear_code, polynomial_code};
use crate::csp::{Assignment, MaxNandInstance};
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::linalg::FVector;
use crate::prg::EvaluationSet;

/// Coordinate lookup for the q-ary layout.
#[derive(Clone, Debug)]
pub struct QaryIndex {
    pub q: usize,
    pub big_n: usize,
    ye: Vec<usize>,
    yef: Vec<Vec<usize>>,
    pub z: Block,
    pub s: Block,
}

impl QaryIndex {
    pub fn from_layout(layout: &VariableLayout, q: usize) -> Self {
        let big_n = layout.block("Y0").len();
        QaryIndex {
            q,
            big_n,
            ye: (0..=2 * (q - 1)).map(|e| layout.block(&format!("Y{e}")).start).collect(),
            yef: (0..q)
                .map(|e| (0..q).map(|f| layout.block(&format!("Y{e},{f}")).start).collect())
                .collect(),
            z: layout.block("Z").clone(),
            s: layout.block("S").clone(),
        }
    }

    /// `Y^e_i`.
    pub fn ye(&self, e: usize, i: usize) -> usize {
        self.ye[e] + i
    }

    /// `Y^{e,f}(i, j)`.
    pub fn yef(&self, e: usize, f: usize, i: usize, j: usize) -> usize {
        self.yef[e][f] + i * self.big_n + j
    }

    /// `Z_ij(x, y)`.
    pub fn z(&self, i: usize, j: usize, x: usize, y: usize) -> usize {
        self.z.at(&[i, j, x, y])
    }

    /// `S_c(a, b)`.
    pub fn s(&self, c: usize, a: usize, b: usize) -> usize {
        self.s.at(&[c, a, b])
    }

    pub fn y0(&self) -> usize {
        self.yef(0, 0, 0, 0)
    }
}

pub fn build_mindistq(psi: &MaxNandInstance, set: &EvaluationSet, r: usize) -> Result<ReductionArtifact> {
    let field = set.field().clone();
    let q = field.q() as usize;
    if q == 2 {
        return Err(Error::UseBinaryReduction);
    }
    if set.dim() != psi.n() {
        return Err(Error::DimensionMismatch(format!(
            "evaluation set in dimension {} for {} variables",
            set.dim(),
            psi.n()
        )));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let (n, m, big_n) = (psi.n(), psi.m(), set.len());
    let c = homogeneous_linear_code(set)?;
    let dec = c.decoder().clone();
    let parity: Vec<_> = (0..q)
        .map(|e| polynomial_code(set, e as u32).map(|p| p.parity_check().clone()))
        .collect::<Result<_>>()?;

    let mut layout = VariableLayout::new();
    for e in 0..=2 * (q - 1) {
        layout.push(format!("Y{e}"), &[big_n]);
    }
    for e in 0..q {
        for f in 0..q {
            layout.push(format!("Y{e},{f}"), &[big_n, big_n]);
        }
    }
    layout.push("Z", &[big_n, big_n, q, q]);
    layout.push("S", &[m, 2, 2]);
    let ix = QaryIndex::from_layout(&layout, q);
    let mut sys = ConstraintSystem::new(&field, layout);
    let neg1 = field.neg(1);

    for e in 0..q {
        let coords: Vec<usize> = (0..big_n).map(|i| ix.ye(e, i)).collect();
        sys.member("Y^e in P_e", &parity[e], &coords);
    }
    for e in q..=2 * (q - 1) {
        for i in 0..big_n {
            sys.equal("Y^e = Y^(e-(q-1))", ix.ye(e, i), ix.ye(e - (q - 1), i));
        }
    }
    for e in 0..q {
        for f in 0..q {
            for k in 0..big_n {
                let col: Vec<usize> = (0..big_n).map(|i| ix.yef(e, f, i, k)).collect();
                sys.member("Y^ef columns in P_e", &parity[e], &col);
                let row: Vec<usize> = (0..big_n).map(|j| ix.yef(e, f, k, j)).collect();
                sys.member("Y^ef rows in P_f", &parity[f], &row);
            }
            for i in 0..big_n {
                sys.equal("diag Y^ef = Y^(e+f)", ix.yef(e, f, i, i), ix.ye(e + f, i));
            }
        }
    }
    for e in 0..q {
        for i in 1..big_n {
            for j in 0..big_n {
                sys.equal("rows of Y^0e identical", ix.yef(0, e, i, j), ix.yef(0, e, 0, j));
                sys.equal("columns of Y^e0 identical", ix.yef(e, 0, j, i), ix.yef(e, 0, j, 0));
            }
        }
    }
    for i in 0..big_n {
        for j in i + 1..big_n {
            sys.equal("Y^(q-1,q-1) symmetric", ix.yef(q - 1, q - 1, i, j), ix.yef(q - 1, q - 1, j, i));
        }
    }

    // alpha_v = sum_t D[v][t] Y^1_t, moved to the left-hand side with sign -1
    let minus_alpha = |v: usize| -> Vec<(usize, Elem)> {
        (0..big_n)
            .filter(|&t| dec.get(v, t) != 0)
            .map(|t| (ix.ye(1, t), field.neg(dec.get(v, t))))
            .collect()
    };
    for (ci, con) in psi.constraints().iter().enumerate() {
        let sv = |a: usize, b: usize| ix.s(ci, a, b);
        sys.push(
            "S sum = Y0",
            &[(sv(0, 0), 1), (sv(0, 1), 1), (sv(1, 0), 1), (sv(1, 1), 1), (ix.y0(), neg1)],
        );
        let mut t = vec![(sv(1, 0), 1), (sv(1, 1), 1)];
        t.extend(minus_alpha(con.i));
        sys.push("S alpha_i", &t);
        let mut t = vec![(sv(0, 1), 1), (sv(1, 1), 1)];
        t.extend(minus_alpha(con.j));
        sys.push("S alpha_j", &t);
        let mut t = vec![(sv(0, 0), 1), (sv(0, 1), 1), (sv(1, 0), 1)];
        t.extend(minus_alpha(con.k));
        sys.push("S alpha_k", &t);
    }

    // moment[e][f][x q + y] = x^e y^f
    let moment: Vec<Vec<Vec<Elem>>> = (0..q)
        .map(|e| {
            (0..q)
                .map(|f| {
                    let mut row = vec![0; q * q];
                    for x in 0..q {
                        for y in 0..q {
                            row[x * q + y] =
                                field.mul(field.pow(x as Elem, e as u64), field.pow(y as Elem, f as u64));
                        }
                    }
                    row
                })
                .collect()
        })
        .collect();
    for i in 0..big_n {
        for j in 0..big_n {
            for e in 0..q {
                for f in 0..q {
                    let mut t: Vec<(usize, Elem)> = moment[e][f]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(xy, &c)| (ix.z(i, j, xy / q, xy % q), c))
                        .collect();
                    t.push((ix.yef(e, f, i, j), neg1));
                    sys.push("Y^ef(i,j) = moments of Z_ij", &t);
                }
            }
        }
    }

    let mut projection: Vec<(usize, usize)> = (ix.z.start..ix.z.end()).map(|v| (v, 1)).collect();
    projection.extend((ix.s.start..ix.s.end()).map(|v| (v, r)));
    finish(Draft {
        kind: Kind::Mindistq,
        params: Params {
            q: q as u32,
            n,
            m,
            big_n,
            r,
        },
        instance: psi.clone(),
        system: sys,
        pinned: None,
        projection,
        encoding: Some(c),
        evaluation_set: Some(set.clone()),
        completeness_weight: big_n * big_n + r * m,
        epsilon: 0.0,
    })
}

pub(super) fn intended(art: &ReductionArtifact, beta: &Assignment) -> Result<FVector> {
    let f = art.field();
    let q = f.q() as usize;
    let ix = QaryIndex::from_layout(art.layout(), q);
    let c = art.encoding().expect("q-ary artifacts keep C");
    let b = beta.bits();
    let ca = c.encode(b)?;
    let big_n = ix.big_n;
    let mut v = vec![0; art.layout().total()];
    for e in 0..=2 * (q - 1) {
        let pe = componentwise_power(&ca, e as u32);
        for i in 0..big_n {
            v[ix.ye(e, i)] = pe.entries()[i];
        }
    }
    let a = ca.entries();
    for e in 0..q {
        for g in 0..q {
            for i in 0..big_n {
                for j in 0..big_n {
                    v[ix.yef(e, g, i, j)] = f.mul(f.pow(a[i], e as u64), f.pow(a[j], g as u64));
                }
            }
        }
    }
    for i in 0..big_n {
        for j in 0..big_n {
            v[ix.z(i, j, a[i] as usize, a[j] as usize)] = 1;
        }
    }
    for (ci, con) in art.instance().constraints().iter().enumerate() {
        v[ix.s(ci, b[con.i] as usize, b[con.j] as usize)] = 1;
    }
    Ok(FVector::new(f, v))
}
