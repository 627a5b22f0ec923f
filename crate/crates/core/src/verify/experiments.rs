//! End-to-end experiments on built reduction artifacts.

use std::time::Instant;

use num_rational::Ratio;
use serde_json::{json, Value};

use super::casesplit::case_split;
use super::{report, Draft, LemmaReport, Mode, Relation};
use crate::codes::{polynomial_code, DistanceReport};
use crate::csp::OPT_MAX_VARS;
use crate::error::{checked_pow, Error, Result};
use crate::reduction::{intended_codeword, Kind, ReductionArtifact};

fn params(art: &ReductionArtifact) -> Value {
    let p = art.params;
    json!({
        "kind": art.kind.name(),
        "q": p.q,
        "n": p.n,
        "m": p.m,
        "N": p.big_n,
        "r": p.r,
        "dim": art.code().dim(),
        "length": art.output_len(),
    })
}

/// Exact distance of the output (minimum weight of the affine space for
/// NCP), or `None` when the enumeration would exceed `budget`.
fn exact_distance(art: &ReductionArtifact, budget: u128) -> Result<Option<DistanceReport>> {
    let k = art.code().dim();
    if checked_pow(art.field().q(), k) > budget {
        return Ok(None);
    }
    let r = match art.affine() {
        Some(a) => a.ncp_min_weight(budget)?,
        None => art.code().min_distance_exact(budget)?,
    };
    Ok(Some(r))
}

fn distance_json(r: &DistanceReport) -> Value {
    json!({
        "distance": r.distance.finite(),
        "codeword": r.witness.as_ref().map(|w| w.entries().to_vec()),
        "enumerated": r.enumerated as u64,
    })
}

fn opt_of(art: &ReductionArtifact) -> Result<Ratio<u64>> {
    if art.params.n > OPT_MAX_VARS {
        return Err(Error::TooLarge(format!(
            "exact optimum needs n <= {OPT_MAX_VARS}, got {}",
            art.params.n
        )));
    }
    Ok(art.instance().opt_exact()?.opt)
}

/// The intended codeword of a satisfying assignment has exactly the
/// completeness weight; when the distance is computable it is at most that.
pub fn experiment_completeness(art: &ReductionArtifact, budget: u128) -> Result<LemmaReport> {
    let start = Instant::now();
    if art.params.n > OPT_MAX_VARS {
        return Err(Error::TooLarge(format!("n = {} > {OPT_MAX_VARS}", art.params.n)));
    }
    let opt = art.instance().opt_exact()?;
    if opt.opt < Ratio::from_integer(1) {
        return Err(Error::InvalidInstance(format!(
            "completeness needs a satisfiable instance (Opt = {})",
            opt.opt
        )));
    }
    let w = intended_codeword(art, &opt.witness)?;
    let claimed = art.bounds.completeness_weight;
    let dist = exact_distance(art, budget)?;
    let upper_ok = dist
        .as_ref()
        .and_then(|d| d.distance.finite())
        .map_or(true, |d| d <= claimed);
    let mut r = report(
        start,
        Draft {
            lemma: "completeness",
            params: params(art),
            claimed: claimed as f64,
            relation: Relation::Equal,
            measured: w.weight() as f64,
            witness: json!({
                "assignment": opt.witness.bits(),
                "distance": dist.as_ref().map(distance_json),
                "distance_at_most_weight": upper_ok,
            }),
            mode: Mode::Exhaustive,
        },
    );
    r.pass &= upper_ok;
    Ok(r)
}

/// The distance (or a certified lower bound on it) is at least the
/// soundness floor at `delta = 1 - Opt`.
pub fn experiment_soundness(art: &ReductionArtifact, budget: u128, layer_budget: u128) -> Result<LemmaReport> {
    let start = Instant::now();
    let opt = opt_of(art)?;
    let delta = 1.0 - *opt.numer() as f64 / *opt.denom() as f64;
    let floor = art.floor_at(delta);
    let p = art.params;
    let (n2, rm) = ((p.big_n * p.big_n) as f64, (p.r * p.m) as f64);
    let (assign_term, code_term) = match art.kind {
        Kind::Ncp2 => (floor, f64::INFINITY),
        Kind::Mindist2 => (
            (1.0 + 2.0 * delta) * rm + n2,
            (1.5 - 12.0 * art.bounds.epsilon) * n2,
        ),
        Kind::Mindistq => (n2 + (1.0 + delta) * rm, (1.0 + 1.0 / p.q as f64) * n2),
    };
    let active = if assign_term <= code_term { "assignment" } else { "code" };
    let mut pr = params(art);
    pr["opt"] = json!(opt.to_string());
    pr["delta"] = json!(delta);
    pr["epsilon"] = json!(art.bounds.epsilon);
    pr["active_branch"] = json!(active);

    if let Some(d) = exact_distance(art, budget)? {
        let measured = d.distance.finite().unwrap_or(usize::MAX);
        let upper_ok = measured <= art.bounds.completeness_weight || delta > 0.0;
        let mut r = report(
            start,
            Draft {
                lemma: "soundness",
                params: pr,
                claimed: floor,
                relation: Relation::AtLeast,
                measured: measured as f64,
                witness: distance_json(&d),
                mode: Mode::Exhaustive,
            },
        );
        r.pass &= upper_ok;
        return Ok(r);
    }
    if art.kind != Kind::Mindistq {
        return Err(Error::BudgetExceeded {
            needed: checked_pow(art.field().q(), art.code().dim()),
            budget,
        });
    }
    let cs = case_split(art, floor, layer_budget)?;
    let mut r = report(
        start,
        Draft {
            lemma: "soundness",
            params: pr,
            claimed: floor,
            relation: Relation::AtLeast,
            measured: cs.lower_bound as f64,
            witness: serde_json::to_value(&cs).expect("case split serializes"),
            mode: Mode::CaseSplit,
        },
    );
    r.pass &= cs.pass() && cs.certified;
    Ok(r)
}

/// Dimension at least `k (k + 1) / 2 - N` with `k = dim P_{q-1}`, and
/// distance at least `N^2` when it can be established.
pub fn experiment_goodcode(art: &ReductionArtifact, budget: u128, layer_budget: u128) -> Result<LemmaReport> {
    let start = Instant::now();
    if art.kind != Kind::Mindistq {
        return Err(Error::InvalidParameter("goodcode applies to the q-ary construction".into()));
    }
    let set = art.evaluation_set().expect("q-ary artifacts keep R");
    let q = art.field().q();
    let k = polynomial_code(set, q - 1)?.dim();
    let big_n = art.params.big_n;
    let claimed = (k * (k + 1) / 2).saturating_sub(big_n);
    let dim = art.code().dim();
    let len = art.output_len();
    let n2 = big_n * big_n;
    let (dist, method) = match exact_distance(art, budget)? {
        Some(d) => (d.distance.finite(), "exhaustive"),
        None => {
            let cs = case_split(art, n2 as f64, layer_budget)?;
            if cs.covered && cs.certified {
                (Some(cs.lower_bound), "case_split_lower_bound")
            } else {
                (None, "skipped")
            }
        }
    };
    let dist_ok = dist.map_or(true, |d| d >= n2);
    let mut r = report(
        start,
        Draft {
            lemma: "goodcode",
            params: params(art),
            claimed: claimed as f64,
            relation: Relation::AtLeast,
            measured: dim as f64,
            witness: json!({
                "dim_p_top": k,
                "rate": dim as f64 / len as f64,
                "distance": dist,
                "distance_method": method,
                "distance_floor": n2,
                "relative_distance": dist.map(|d| d as f64 / len as f64),
            }),
            mode: Mode::Exhaustive,
        },
    );
    r.pass &= dist_ok;
    Ok(r)
}
