//! `mindist`: generate Max NAND instances, run the reductions, and check
//! distances and lemma bounds.
//!
//! Exit codes: 0 success (every report passes), 1 usage or parse error,
//! 2 budget exceeded, 3 invariant failure (including a failing report).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mindist::codes::{simplex_code, DEFAULT_BUDGET};
use mindist::csp::{contradiction, contradiction_padded, gen_noisy, gen_planted, OPT_MAX_VARS};
use mindist::io;
use mindist::prg::{small_bias_set, verify_fooling, verify_nonzero_fraction, viola_sum, SampleMode};
use mindist::reduction::{
    auto_delta, build_mindist2, build_mindistq, build_ncp2, choose_r, intended_codeword, Kind,
    ReductionArtifact,
};
use mindist::verify::{self, LemmaReport, CASE_SPLIT_BUDGET};
use mindist::{EvaluationSet, Gf, MaxNandInstance};

#[derive(Parser)]
#[command(name = "mindist", version, about = "Max NAND to minimum-distance reductions and their checks")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest number of vectors a single enumeration may visit.
    #[arg(long, global = true, env = "MINDIST_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a Max NAND instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Write an evaluation set.
    Evalset {
        #[command(subcommand)]
        kind: SetKind,
    },
    /// Build a reduction artifact directory.
    Reduce {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Minimum distance of a code, or minimum weight of an affine space.
    Distance {
        #[arg(long)]
        exact: bool,
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
    /// Check one of the standalone lemmas.
    Verify(VerifyArgs),
    /// Run an end-to-end experiment on a freshly built artifact.
    Experiment {
        which: Experiment,
        #[command(flatten)]
        build: BuildArgs,
        /// Layers of the case split up to this size are enumerated.
        #[arg(long, default_value_t = CASE_SPLIT_BUDGET)]
        layer_budget: u128,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Instance satisfied by a hidden random assignment.
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Planted instance with a fraction of constraints rewired to fail.
    Noisy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        flip: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// `x1 = NAND(x1, x1)`, optionally padded to `n` variables.
    Contradiction {
        #[arg(long)]
        pad: Option<usize>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SetKind {
    /// All of F_q^n.
    Exhaustive {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Small-bias set for linear tests.
    SmallBias {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Sums of `d` points of a base set.
    Viola {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Ncp2,
    Md2,
    Mdq,
}

#[derive(Args)]
struct BuildArgs {
    /// Instance file.
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "mdq")]
    target: Target,
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Repetitions of each S coordinate: `auto` or a positive integer.
    #[arg(long, default_value = "auto")]
    r: String,
    /// Encoding code for md2 (default: simplex code of dimension n).
    #[arg(long)]
    code: Option<PathBuf>,
    /// Evaluation set for mdq (default: all of F_q^n).
    #[arg(long)]
    evalset: Option<PathBuf>,
    /// Build a small-bias evaluation set with this bias instead.
    #[arg(long, conflicts_with = "evalset")]
    epsilon: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    Claim11,
    Lemma9,
    Lemma10,
    Lemma3,
    Fact4,
    Fact2,
    Claim12,
    Fooling,
    Nonzero,
}

#[derive(Args)]
struct VerifyArgs {
    lemma: Lemma,
    /// Field order (claim11 checks every supported field when omitted).
    #[arg(long)]
    q: Option<u32>,
    /// Moment degree for lemma9/lemma10, polynomial degree for fooling/nonzero.
    #[arg(long)]
    d: Option<usize>,
    /// Code file (lemma3, fact4, claim12, fact2) or evaluation set (fooling, nonzero).
    #[arg(short = 'i', long = "input")]
    input: Option<PathBuf>,
    /// Second code for fact2 (defaults to the first).
    #[arg(short = 'j', long = "second")]
    second: Option<PathBuf>,
    /// Sample this many polynomials for fooling instead of enumerating.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Completeness,
    Soundness,
    Goodcode,
}

/// What a command produced: JSON to print, and whether every check passed.
struct Outcome {
    json: Value,
    pass: bool,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { json, pass: true }
    }

    fn reports(reports: Vec<LemmaReport>) -> Self {
        let pass = reports.iter().all(|r| r.pass);
        let json = if reports.len() == 1 {
            serde_json::to_value(&reports[0]).expect("report serializes")
        } else {
            serde_json::to_value(&reports).expect("reports serialize")
        };
        Outcome { json, pass }
    }
}

fn emit_text(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => io::write_text(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_instance(p: &Path) -> anyhow::Result<MaxNandInstance> {
    Ok(io::parse_instance(&io::read_text(p)?).with_context(|| format!("reading {}", p.display()))?)
}

fn parse_r(s: &str) -> anyhow::Result<Option<usize>> {
    if s == "auto" {
        return Ok(None);
    }
    match s.parse::<usize>() {
        Ok(r) if r >= 1 => Ok(Some(r)),
        _ => bail!(mindist::Error::InvalidParameter(format!("--r must be `auto` or a positive integer, got {s}"))),
    }
}

fn build(args: &BuildArgs) -> anyhow::Result<ReductionArtifact> {
    let psi = read_instance(&args.input)?;
    let r = parse_r(&args.r)?;
    let pick_r = |kind: Kind, big_n: usize, q: u32| -> mindist::Result<usize> {
        match r {
            Some(r) => Ok(r),
            None => choose_r(kind, big_n, psi.m(), q, auto_delta(&psi)),
        }
    };
    let art = match args.target {
        Target::Ncp2 => build_ncp2(&psi)?,
        Target::Md2 => {
            let c = match &args.code {
                Some(p) => io::parse_code(&io::read_text(p)?)?,
                None => simplex_code(psi.n())?,
            };
            let r = pick_r(Kind::Mindist2, c.len(), 2)?;
            build_mindist2(&psi, &c, r)?
        }
        Target::Mdq => {
            if args.q == 2 {
                return Err(mindist::Error::UseBinaryReduction.into());
            }
            let field = Gf::new(args.q)?;
            let set = match (&args.evalset, args.epsilon) {
                (Some(p), _) => io::parse_evalset(&io::read_text(p)?)?,
                (None, Some(eps)) => small_bias_set(&field, psi.n(), eps)?,
                (None, None) => EvaluationSet::exhaustive(&field, psi.n())?,
            };
            if set.field() != &field {
                return Err(mindist::Error::FieldMismatch(set.field().q(), field.q()).into());
            }
            let r = pick_r(Kind::Mindistq, set.len(), args.q)?;
            build_mindistq(&psi, &set, r)?
        }
    };
    Ok(art)
}

fn cmd_gen(kind: GenKind) -> anyhow::Result<Outcome> {
    let (psi, out) = match kind {
        GenKind::Planted { n, m, seed, out } => (gen_planted(n, m, seed)?.0, out),
        GenKind::Noisy { n, m, flip, seed, out } => (gen_noisy(n, m, flip, seed)?, out),
        GenKind::Contradiction { pad, out } => match pad {
            Some(n) => (contradiction_padded(n)?, out),
            None => (contradiction(), out),
        },
    };
    emit_text(&out, &io::format_instance(&psi))?;
    Ok(Outcome::ok(Value::Null))
}

fn cmd_evalset(kind: SetKind) -> anyhow::Result<Outcome> {
    let (set, out) = match kind {
        SetKind::Exhaustive { q, n, out } => (EvaluationSet::exhaustive(&Gf::new(q)?, n)?, out),
        SetKind::SmallBias { q, n, epsilon, out } => (small_bias_set(&Gf::new(q)?, n, epsilon)?, out),
        SetKind::Viola { input, d, out } => (viola_sum(&io::parse_evalset(&io::read_text(&input)?)?, d)?, out),
    };
    emit_text(&out, &io::format_evalset(&set))?;
    Ok(Outcome::ok(Value::Null))
}

fn cmd_reduce(args: &BuildArgs, out: &Path) -> anyhow::Result<Outcome> {
    let art = build(args)?;
    let psi = art.instance();
    let intended = if psi.n() <= OPT_MAX_VARS {
        let opt = psi.opt_exact()?;
        if opt.satisfied == psi.m() {
            Some(intended_codeword(&art, &opt.witness)?)
        } else {
            None
        }
    } else {
        None
    };
    let manifest = io::write_artifact(out, &art, intended.as_ref())?;
    Ok(Outcome::ok(serde_json::to_value(manifest)?))
}

fn cmd_distance(exact: bool, input: &Path, budget: u128) -> anyhow::Result<Outcome> {
    if !exact {
        bail!(mindist::Error::InvalidParameter("only exact distances are supported; pass --exact".into()));
    }
    let text = io::read_text(input)?;
    let (kind, report, code) = if text.trim_start().starts_with("gfaffine") {
        let a = io::parse_affine(&text)?;
        let r = a.ncp_min_weight(budget)?;
        ("affine", r, a.code)
    } else {
        let c = io::parse_code(&text)?;
        let r = c.min_distance_exact(budget)?;
        ("code", r, c)
    };
    Ok(Outcome::ok(json!({
        "input": kind,
        "q": code.field().q(),
        "length": code.len(),
        "dim": code.dim(),
        "distance": report.distance.finite(),
        "witness": report.witness.map(|w| w.into_entries()),
        "method": report.method,
        "enumerated": report.enumerated as u64,
    })))
}

fn need<T>(x: Option<T>, what: &str) -> anyhow::Result<T> {
    x.ok_or_else(|| mindist::Error::InvalidParameter(format!("missing {what}")).into())
}

fn cmd_verify(a: &VerifyArgs, budget: u128) -> anyhow::Result<Outcome> {
    let code = |p: &Option<PathBuf>| -> anyhow::Result<mindist::LinearCode> {
        let p = need(p.as_ref(), "-i <code file>")?;
        Ok(io::parse_code(&io::read_text(p)?)?)
    };
    let reports = match a.lemma {
        Lemma::Claim11 => match a.q {
            Some(q) => vec![verify::check_claim11(&Gf::new(q)?)],
            None => mindist::gf::SUPPORTED_ORDERS
                .iter()
                .map(|&q| Gf::new(q).map(|f| verify::check_claim11(&f)))
                .collect::<mindist::Result<_>>()?,
        },
        Lemma::Lemma9 => vec![verify::check_lemma9(&Gf::new(need(a.q, "--q")?)?, need(a.d, "--d")?)?],
        Lemma::Lemma10 => vec![verify::check_lemma10(&Gf::new(need(a.q, "--q")?)?, need(a.d, "--d")?)?],
        Lemma::Lemma3 => vec![verify::check_lemma3(&code(&a.input)?, budget)?],
        Lemma::Fact4 => vec![verify::check_fact4(&code(&a.input)?, budget)?],
        Lemma::Claim12 => vec![verify::check_claim12(&code(&a.input)?)?],
        Lemma::Fact2 => {
            let c1 = code(&a.input)?;
            let c2 = if a.second.is_some() { code(&a.second)? } else { c1.clone() };
            vec![verify::check_fact2(&c1, &c2, budget)?]
        }
        Lemma::Fooling | Lemma::Nonzero => {
            let p = need(a.input.as_ref(), "-i <evalset file>")?;
            let set = io::parse_evalset(&io::read_text(p)?)?;
            let d = need(a.d, "--d")? as u32;
            return Ok(if matches!(a.lemma, Lemma::Fooling) {
                let mode = match a.samples {
                    Some(count) => SampleMode::Sampled { count, seed: a.seed },
                    None => SampleMode::Exhaustive,
                };
                Outcome::ok(serde_json::to_value(verify_fooling(&set, d, mode)?)?)
            } else {
                let r = verify_nonzero_fraction(&set, d)?;
                Outcome::ok(json!({
                    "e": d,
                    "fraction": r.fraction.to_string(),
                    "fraction_value": *r.fraction.numer() as f64 / *r.fraction.denom() as f64,
                    "witness": r.witness_name(),
                }))
            });
        }
    };
    Ok(Outcome::reports(reports))
}

fn cmd_experiment(which: Experiment, args: &BuildArgs, budget: u128, layer_budget: u128) -> anyhow::Result<Outcome> {
    let art = build(args)?;
    let r = match which {
        Experiment::Completeness => verify::experiment_completeness(&art, budget)?,
        Experiment::Soundness => verify::experiment_soundness(&art, budget, layer_budget)?,
        Experiment::Goodcode => verify::experiment_goodcode(&art, budget, layer_budget)?,
    };
    Ok(Outcome::reports(vec![r]))
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let budget = cli.budget;
    match cli.cmd {
        Cmd::Gen { kind } => cmd_gen(kind),
        Cmd::Evalset { kind } => cmd_evalset(kind),
        Cmd::Reduce { build, out } => cmd_reduce(&build, &out),
        Cmd::Distance { exact, input } => cmd_distance(exact, &input, budget),
        Cmd::Verify(a) => cmd_verify(&a, budget),
        Cmd::Experiment {
            which,
            build,
            layer_budget,
        } => cmd_experiment(which, &build, budget, layer_budget),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    e.chain()
        .find_map(|c| c.downcast_ref::<mindist::Error>())
        .map_or(1, |e| e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = cli.report.clone();
    match run(cli) {
        Ok(out) => {
            if !out.json.is_null() {
                let text = io::to_json(&out.json);
                print!("{text}");
                if let Some(p) = report {
                    if let Err(e) = io::write_text(&p, &text) {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
            }
            ExitCode::from(if out.pass { 0 } else { 3 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
