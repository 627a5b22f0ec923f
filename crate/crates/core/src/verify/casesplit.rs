//! Lower bound on the distance of a q-ary artifact without enumerating the
//! whole code.
//!
//! Nonzero solutions are split by `Y_0` and by the smallest `e + f` with
//! `Y^{e,f} ≠ 0` (the layer `d`). With `Y_0 ≠ 0` every `Z_ij` is nonzero and
//! `S` is fixed by `(Y_0, alpha)`, so the floor is `N^2 + r min wt(S)`. In
//! layer `d` every `Z_ij` satisfies the moment conditions below `d`, and the
//! number of nonzero `Z_ij` is at least the weight of a nonzero `Y^{e,f}`
//! with `e + f = d`. A layer small enough to enumerate is searched directly,
//! which also covers every deeper layer.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::lemmas::moment_space;
use crate::codes::{polynomial_code, symmetric_zero_diag_subcode, LinearCode, DEFAULT_BUDGET};
use crate::error::{checked_pow, Error, Result};
use crate::gf::{Elem, Gf};
use crate::linalg::{FMatrix, FVector};
use crate::reduction::{Kind, QaryIndex, ReductionArtifact};

/// Layers with at most this many members are enumerated.
pub const CASE_SPLIT_BUDGET: u128 = 1 << 20;

const MOMENT_EXHAUSTIVE: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseFloor {
    pub case: String,
    /// Dimension of the subspace the case lives in, when computed.
    pub dim: Option<usize>,
    pub method: String,
    /// Weight floor; `None` when the case is empty.
    pub floor: Option<usize>,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSplit {
    pub target: f64,
    pub cases: Vec<CaseFloor>,
    /// Minimum floor over all cases: a lower bound on the distance.
    pub lower_bound: usize,
    /// False when some floor rests on a sampled moment bound.
    pub certified: bool,
    /// Solutions with every `Y^{e,f} = 0` are zero.
    pub covered: bool,
}

impl CaseSplit {
    pub fn pass(&self) -> bool {
        self.covered && self.cases.iter().all(|c| c.pass)
    }
}

/// Basis of `{v in span(basis) : v[c] = 0 for c in cols}`.
fn restrict(field: &Gf, basis: &[FVector], cols: &[usize]) -> Result<Vec<FVector>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let total = basis[0].len();
    let b = FMatrix::from_vectors(field, total, basis)?;
    let a = b.select_cols(cols).transpose();
    a.nullspace_basis().iter().map(|u| b.vec_mul(u.entries())).collect()
}

fn vanish(basis: &[FVector], cols: &[usize]) -> bool {
    basis.iter().all(|v| cols.iter().all(|&c| v.entries()[c] == 0))
}

fn distance(c: &LinearCode) -> Result<usize> {
    Ok(c.min_distance_exact(DEFAULT_BUDGET)?.distance.finite().unwrap_or(usize::MAX))
}

pub fn case_split(art: &ReductionArtifact, target: f64, layer_budget: u128) -> Result<CaseSplit> {
    if art.kind != Kind::Mindistq {
        return Err(Error::InvalidParameter("case split applies to q-ary artifacts".into()));
    }
    let f = art.field().clone();
    let q = f.q() as usize;
    let p = art.params;
    let big_n = p.big_n;
    let ix = QaryIndex::from_layout(art.layout(), q);
    let set = art.evaluation_set().expect("q-ary artifacts keep R");
    let lift: Vec<FVector> = (0..art.lift().rows())
        .map(|i| FVector::new(&f, art.lift().row(i).to_vec()))
        .collect();
    let mut cases = Vec::new();
    let mut certified = true;
    let passes = |floor: Option<usize>| floor.map_or(true, |w| w as f64 + 1e-9 >= target);

    let (min_s, witness) = min_s_weight(&f, art, layer_budget)?;
    let floor = big_n * big_n + p.r * min_s;
    cases.push(CaseFloor {
        case: "Y0 != 0".into(),
        dim: None,
        method: "every Z_ij nonzero; S minimized over all (Y0, alpha)".into(),
        floor: Some(floor),
        pass: passes(Some(floor)),
        detail: json!({ "min_s_weight": min_s, "y0": witness.0, "alpha": witness.1 }),
    });

    let yab = |d: usize| -> Vec<usize> {
        let mut cols = Vec::new();
        for a in 0..q {
            for b in 0..q {
                if a + b < d {
                    for i in 0..big_n {
                        for j in 0..big_n {
                            cols.push(ix.yef(a, b, i, j));
                        }
                    }
                }
            }
        }
        cols
    };
    let block = |e: usize, g: usize| -> Vec<usize> {
        (0..big_n).flat_map(|i| (0..big_n).map(move |j| (i, j))).map(|(i, j)| ix.yef(e, g, i, j)).collect()
    };
    let dist_p: Vec<usize> = (0..q)
        .map(|e| polynomial_code(set, e as u32).and_then(|c| distance(&c)))
        .collect::<Result<_>>()?;

    let covered = restrict(&f, &lift, &yab(2 * q - 1))?.is_empty();

    for d in 1..=2 * (q - 1) {
        let layer = restrict(&f, &lift, &yab(d))?;
        let name = format!("layer d={d}");
        if layer.is_empty() {
            cases.push(CaseFloor {
                case: name,
                dim: Some(0),
                method: "empty".into(),
                floor: None,
                pass: true,
                detail: Value::Null,
            });
            break;
        }
        let dim = layer.len();
        if checked_pow(q as u32, dim) <= layer_budget {
            let rows: Vec<FVector> = layer.iter().map(|v| art.project(v)).collect();
            let code = LinearCode::new(FMatrix::from_vectors(&f, art.output_len(), &rows)?)?;
            let r = code.min_distance_exact(layer_budget)?;
            let w = r.distance.finite().expect("layer is nonzero");
            cases.push(CaseFloor {
                case: format!("layers d>={d}"),
                dim: Some(dim),
                method: "exhaustive".into(),
                floor: Some(w),
                pass: passes(Some(w)),
                detail: json!({ "enumerated": r.enumerated as u64 }),
            });
            break;
        }

        let space = moment_space(&f, d);
        let support = if checked_pow(q as u32, space.dim()) <= MOMENT_EXHAUSTIVE {
            space.min_distance_exact(MOMENT_EXHAUSTIVE)?.distance.finite().expect("nonzero space")
        } else {
            certified = false;
            if d <= q - 1 {
                d + 1
            } else {
                q * (d + 2 - q)
            }
        };
        let mut pairs: Vec<(usize, usize)> = (0..q).filter(|&e| d >= e && d - e < q).map(|e| (e, d - e)).collect();
        let mut notes = serde_json::Map::new();
        if d == q - 1 {
            // Y^{0,d} ≠ 0 forces a nonzero Y^{e,f} with e f ≠ 0 on the same layer
            let mixed: Vec<usize> = pairs.iter().filter(|(e, g)| e * g != 0).flat_map(|&(e, g)| block(e, g)).collect();
            let rest = restrict(&f, &layer, &mixed)?;
            let edges: Vec<usize> = block(0, d).into_iter().chain(block(d, 0)).collect();
            let ok = !mixed.is_empty() && vanish(&rest, &edges);
            notes.insert("edge_pairs_excluded".into(), json!(ok));
            if ok {
                pairs.retain(|(e, g)| e * g != 0);
            }
        }
        let mut best: Option<(usize, (usize, usize), usize)> = None;
        for &(e, g) in &pairs {
            let weight = if (e, g) == (q - 1, q - 1) {
                let diag: Vec<usize> = (0..big_n).map(|i| ix.yef(e, g, i, i)).collect();
                if vanish(&layer, &diag) {
                    let pq = polynomial_code(set, (q - 1) as u32)?;
                    let zd = symmetric_zero_diag_subcode(&pq);
                    notes.insert("zero_diagonal".into(), json!(true));
                    distance(&zd)?
                } else {
                    dist_p[e] * dist_p[g]
                }
            } else {
                dist_p[e] * dist_p[g]
            };
            let w = weight.saturating_mul(support);
            if best.map_or(true, |b| w < b.0) {
                best = Some((w, (e, g), weight));
            }
        }
        let (w, pair, ywt) = best.expect("some pair has e + f = d");
        notes.insert("pair".into(), json!([pair.0, pair.1]));
        notes.insert("nonzero_z_blocks".into(), json!(ywt));
        notes.insert("z_support".into(), json!(support));
        cases.push(CaseFloor {
            case: name,
            dim: Some(dim),
            method: "moment support times Y^{e,f} weight".into(),
            floor: Some(w),
            pass: passes(Some(w)),
            detail: Value::Object(notes),
        });
    }

    let lower_bound = cases.iter().filter_map(|c| c.floor).min().expect("case 1 has a floor");
    Ok(CaseSplit {
        target,
        cases,
        lower_bound,
        certified,
        covered,
    })
}

/// Minimum total `S` weight over `Y_0 ≠ 0` and all `alpha ∈ F_q^n`, with
/// each `S_c` solved from its four equations.
fn min_s_weight(f: &Gf, art: &ReductionArtifact, budget: u128) -> Result<(usize, (Elem, Vec<Elem>))> {
    let n = art.params.n;
    let q = f.q();
    let count = checked_pow(q, n).saturating_mul(q as u128 - 1);
    if count > budget {
        return Err(Error::BudgetExceeded { needed: count, budget });
    }
    // rows: sum, alpha_i, alpha_j, alpha_k; columns S(0,0), S(0,1), S(1,0), S(1,1)
    let a = FMatrix::from_rows(
        f,
        4,
        &[vec![1, 1, 1, 1], vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![1, 1, 1, 0]],
    )?;
    let inv = a.inverse()?;
    let alphas: Vec<Vec<Elem>> = f.vectors(n).collect();
    let cons = art.instance().constraints();
    (1..q as Elem)
        .flat_map(|y0| alphas.iter().map(move |al| (y0, al)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(y0, al)| {
            let w: usize = cons
                .iter()
                .map(|c| {
                    let rhs = FVector::new(f, vec![y0, al[c.i], al[c.j], al[c.k]]);
                    inv.mul_vec(&rhs).expect("4 entries").weight()
                })
                .sum();
            (w, (y0, al.clone()))
        })
        .min()
        .ok_or_else(|| Error::InvalidParameter("empty assignment space".into()))
}
