//! Max NAND → NCP over F_2, Max NAND → minimum distance over F_2 and F_q.
//!
//! Each construction writes down a homogeneous linear system over named
//! variable blocks, takes its solution space, and projects it onto the
//! output coordinates (some repeated `r` times). The projection is checked to
//! be injective on the solution space.

mod binary;
mod ncp2;
mod qary;
mod system;

pub use binary::build_mindist2;
pub use ncp2::build_ncp2;
pub use qary::{build_mindistq, QaryIndex};
pub use system::{project, Block, ConstraintSystem, VariableLayout};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::codes::{tensor, AffineSubspace, LinearCode};
use crate::csp::{Assignment, MaxNandInstance, OPT_MAX_VARS};
use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::linalg::{FMatrix, FVector};
use crate::prg::EvaluationSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ncp2,
    Mindist2,
    Mindistq,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Ncp2 => "ncp2",
            Kind::Mindist2 => "mindist2",
            Kind::Mindistq => "mindistq",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub q: u32,
    pub n: usize,
    pub m: usize,
    /// Length of the encoding code.
    #[serde(rename = "N")]
    pub big_n: usize,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// Weight of the intended codeword of a satisfying assignment.
    pub completeness_weight: usize,
    /// `1 - Opt`, when the optimum was computed.
    pub delta: Option<f64>,
    /// Distance defect of the encoding code (binary case) or of `R`.
    pub epsilon: f64,
    /// Distance floor for the measured `delta`.
    pub soundness_floor: Option<f64>,
}

/// The soundness floor of each construction at gap `delta` and defect
/// `epsilon`.
pub fn soundness_floor(kind: Kind, p: &Params, delta: f64, epsilon: f64) -> f64 {
    let (m, r, n2) = (p.m as f64, p.r as f64, (p.big_n * p.big_n) as f64);
    match kind {
        Kind::Ncp2 => (1.0 + 2.0 * delta) * m,
        Kind::Mindist2 => ((1.0 + 2.0 * delta) * r * m + n2).min((1.5 - 12.0 * epsilon) * n2),
        Kind::Mindistq => (n2 + (1.0 + delta) * r * m).min((1.0 + 1.0 / p.q as f64) * n2),
    }
}

/// Repetition count for the distance reductions, at least 1.
pub fn choose_r(kind: Kind, big_n: usize, m: usize, q: u32, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1]")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let n2 = (big_n * big_n) as f64;
    let r = match kind {
        Kind::Ncp2 => 1.0,
        Kind::Mindist2 => n2 / (2.0 * (1.0 + 2.0 * delta) * m as f64),
        Kind::Mindistq => n2 / ((1.0 + delta) * q as f64 * m as f64),
    };
    Ok((r.round() as usize).max(1))
}

/// `delta` for automatic `r`: `1 - Opt` when that is computable and
/// positive, otherwise 1.
pub fn auto_delta(psi: &MaxNandInstance) -> f64 {
    if psi.n() > OPT_MAX_VARS {
        return 1.0;
    }
    match psi.opt_exact() {
        Ok(o) if o.opt < Ratio::from_integer(1) => 1.0 - ratio_f64(o.opt),
        _ => 1.0,
    }
}

pub(crate) fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `t` successive tensor squares of `c`.
pub fn tensor_boost(c: &LinearCode, t: u32) -> Result<LinearCode> {
    let mut cur = c.clone();
    for _ in 0..t {
        let entries = (cur.len() as u128).pow(2) * (cur.dim() as u128).pow(2);
        if entries > 1 << 28 {
            return Err(Error::SizeOverflow(format!(
                "tensor square of a [{}, {}] code",
                cur.len(),
                cur.dim()
            )));
        }
        cur = tensor(&cur, &cur)?;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Affine(AffineSubspace),
    Code(LinearCode),
}

/// A built reduction: the output code (or affine space), the system it came
/// from, and a basis of the system's solutions.
#[derive(Clone, Debug)]
pub struct ReductionArtifact {
    pub kind: Kind,
    pub params: Params,
    pub bounds: Bounds,
    pub injective: bool,
    instance: MaxNandInstance,
    system: ConstraintSystem,
    lift: FMatrix,
    particular: Option<FVector>,
    projection: Vec<(usize, usize)>,
    output: Output,
    encoding: Option<LinearCode>,
    evaluation_set: Option<EvaluationSet>,
}

impl ReductionArtifact {
    pub fn field(&self) -> &Gf {
        self.system.field()
    }

    pub fn instance(&self) -> &MaxNandInstance {
        &self.instance
    }

    pub fn system(&self) -> &ConstraintSystem {
        &self.system
    }

    pub fn layout(&self) -> &VariableLayout {
        self.system.layout()
    }

    /// Rows form a basis of the homogeneous solution space; row `i` projects
    /// to generator row `i` of the output code.
    pub fn lift(&self) -> &FMatrix {
        &self.lift
    }

    /// A solution with the pinned constant set to 1 (NCP only).
    pub fn particular(&self) -> Option<&FVector> {
        self.particular.as_ref()
    }

    pub fn projection(&self) -> &[(usize, usize)] {
        &self.projection
    }

    pub fn output(&self) -> &Output {
        &self.output
    }

    /// The linear output code (the homogeneous part for NCP).
    pub fn code(&self) -> &LinearCode {
        match &self.output {
            Output::Affine(a) => &a.code,
            Output::Code(c) => c,
        }
    }

    pub fn affine(&self) -> Option<&AffineSubspace> {
        match &self.output {
            Output::Affine(a) => Some(a),
            Output::Code(_) => None,
        }
    }

    /// The encoding code `C` (not used by the NCP construction).
    pub fn encoding(&self) -> Option<&LinearCode> {
        self.encoding.as_ref()
    }

    /// The evaluation set `R` (q-ary construction only).
    pub fn evaluation_set(&self) -> Option<&EvaluationSet> {
        self.evaluation_set.as_ref()
    }

    pub fn output_len(&self) -> usize {
        self.projection.iter().map(|p| p.1).sum()
    }

    pub fn project(&self, full: &FVector) -> FVector {
        FVector::new(self.field(), project(full.entries(), &self.projection))
    }

    /// Soundness floor at an arbitrary gap.
    pub fn floor_at(&self, delta: f64) -> f64 {
        soundness_floor(self.kind, &self.params, delta, self.bounds.epsilon)
    }
}

/// Everything a builder hands to [`finish`].
pub(crate) struct Draft {
    pub kind: Kind,
    pub params: Params,
    pub instance: MaxNandInstance,
    pub system: ConstraintSystem,
    /// Coordinate pinned to 1 (NCP only).
    pub pinned: Option<usize>,
    pub projection: Vec<(usize, usize)>,
    pub encoding: Option<LinearCode>,
    pub evaluation_set: Option<EvaluationSet>,
    pub completeness_weight: usize,
    pub epsilon: f64,
}

pub(crate) fn finish(d: Draft) -> Result<ReductionArtifact> {
    let f = d.system.field().clone();
    let total = d.system.layout().total();
    let mut h = d.system.matrix();
    let mut particular = None;
    if let Some(pin) = d.pinned {
        let mut row = FMatrix::zeros(&f, 1, total);
        row.set(0, pin, 1);
        h = h.vstack(&row)?;
        let mut b = vec![0; h.rows()];
        b[h.rows() - 1] = 1;
        particular = Some(h.solve(&FVector::new(&f, b))?);
    }
    let basis = h.nullspace_basis();
    let lift = FMatrix::from_vectors(&f, total, &basis)?;
    let rows: Vec<Vec<_>> = basis
        .iter()
        .map(|v| project(v.entries(), &d.projection))
        .collect();
    let out_len = d.projection.iter().map(|p| p.1).sum();
    let gen = FMatrix::from_rows(&f, out_len, &rows)?;
    let rank = gen.rank();
    if rank < lift.rows() {
        return Err(Error::NotInjective {
            rank,
            dim: lift.rows(),
        });
    }
    let code = LinearCode::new(gen)?;
    let output = match &particular {
        Some(p) => Output::Affine(AffineSubspace::new(
            code,
            FVector::new(&f, project(p.entries(), &d.projection)),
        )?),
        None => Output::Code(code),
    };
    let delta = if d.instance.n() <= OPT_MAX_VARS {
        Some(1.0 - ratio_f64(d.instance.opt_exact()?.opt))
    } else {
        None
    };
    let bounds = Bounds {
        completeness_weight: d.completeness_weight,
        delta,
        epsilon: d.epsilon,
        soundness_floor: delta.map(|x| soundness_floor(d.kind, &d.params, x, d.epsilon)),
    };
    Ok(ReductionArtifact {
        kind: d.kind,
        params: d.params,
        bounds,
        injective: true,
        instance: d.instance,
        system: d.system,
        lift,
        particular,
        projection: d.projection,
        output,
        encoding: d.encoding,
        evaluation_set: d.evaluation_set,
    })
}

/// The designed codeword of a satisfying assignment, on all variables and on
/// the output coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct IntendedCodeword {
    pub full: FVector,
    pub output: FVector,
}

impl IntendedCodeword {
    pub fn weight(&self) -> usize {
        self.output.weight()
    }
}

/// Builds the intended codeword of `beta` and checks that it solves the
/// system, lies in the output code, and has the completeness weight.
pub fn intended_codeword(art: &ReductionArtifact, beta: &Assignment) -> Result<IntendedCodeword> {
    let psi = &art.instance;
    let satisfied = psi.satisfied_count(beta)?;
    if satisfied < psi.m() {
        return Err(Error::NotSatisfying {
            satisfied,
            total: psi.m(),
        });
    }
    let full = match art.kind {
        Kind::Ncp2 => ncp2::intended(art, beta),
        Kind::Mindist2 => binary::intended(art, beta)?,
        Kind::Mindistq => qary::intended(art, beta)?,
    };
    let broken = art.system.violations(&full)?;
    if !broken.is_empty() {
        let mut tags: Vec<_> = broken.into_iter().collect();
        tags.dedup();
        return Err(Error::MembershipFailure(format!("violates {}", tags.join(", "))));
    }
    let output = art.project(&full);
    let member = match &art.output {
        Output::Affine(a) => a.contains(&output)?,
        Output::Code(c) => c.contains(&output)?,
    };
    if !member {
        return Err(Error::MembershipFailure("projection is not in the output code".into()));
    }
    if output.weight() != art.bounds.completeness_weight {
        return Err(Error::MembershipFailure(format!(
            "weight {} != {}",
            output.weight(),
            art.bounds.completeness_weight
        )));
    }
    Ok(IntendedCodeword { full, output })
}
