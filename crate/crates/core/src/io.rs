//! Text formats for instances, codes, affine spaces and evaluation sets, and
//! the on-disk layout of reduction artifacts.
//!
//! Every text format starts with a versioned header line. Blank lines and
//! lines starting with `#` are ignored, except `# provenance <json>` in
//! evaluation-set files. Field elements are written as decimal indices and
//! instance variables are 1-indexed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codes::{AffineSubspace, LinearCode};
use crate::csp::{Constraint, MaxNandInstance};
use crate::error::{Error, Result};
use crate::gf::{Elem, Gf};
use crate::linalg::{FMatrix, FVector};
use crate::prg::{EvaluationSet, Provenance};
use crate::reduction::{Block, Bounds, IntendedCodeword, Kind, Output, Params, ReductionArtifact};

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Error::parse(line, format!("not a number: {t}"))))
        .collect()
}

/// Parses `<tag> 1 <a> <b> ...` and returns the numbers after the version.
fn header(lines: &mut dyn Iterator<Item = (usize, &str)>, tag: &str, count: usize) -> Result<Vec<u64>> {
    let (ln, l) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut parts = l.splitn(2, char::is_whitespace);
    if parts.next() != Some(tag) {
        return Err(Error::parse(ln, format!("expected header `{tag}`")));
    }
    let nums = numbers(ln, parts.next().unwrap_or(""))?;
    if nums.first() != Some(&1) {
        return Err(Error::parse(ln, format!("unsupported {tag} version")));
    }
    if nums.len() != count + 1 {
        return Err(Error::parse(ln, format!("{tag} header needs {count} fields after the version")));
    }
    Ok(nums[1..].to_vec())
}

fn field_row(line: usize, s: &str, field: &Gf, len: usize) -> Result<Vec<Elem>> {
    let nums = numbers(line, s)?;
    if nums.len() != len {
        return Err(Error::parse(line, format!("expected {len} entries, found {}", nums.len())));
    }
    nums.into_iter()
        .map(|x| {
            if x < field.q() as u64 {
                Ok(x as Elem)
            } else {
                Err(Error::parse(line, format!("{x} is not an element of F_{}", field.q())))
            }
        })
        .collect()
}

fn rows(
    lines: &mut dyn Iterator<Item = (usize, &str)>,
    field: &Gf,
    count: usize,
    len: usize,
) -> Result<Vec<Vec<Elem>>> {
    (0..count)
        .map(|_| {
            let (ln, l) = lines.next().ok_or_else(|| Error::parse(0, "unexpected end of input"))?;
            field_row(ln, l, field, len)
        })
        .collect()
}

fn no_trailing(lines: &mut dyn Iterator<Item = (usize, &str)>) -> Result<()> {
    match lines.next() {
        Some((ln, _)) => Err(Error::parse(ln, "trailing content")),
        None => Ok(()),
    }
}

fn push_row(out: &mut String, row: &[Elem]) {
    let mut first = true;
    for x in row {
        if !first {
            out.push(' ');
        }
        first = false;
        write!(out, "{x}").expect("write to string");
    }
    out.push('\n');
}

fn field_from(q: u64, line: usize) -> Result<Gf> {
    u32::try_from(q)
        .map_err(|_| Error::parse(line, "field order too large"))
        .and_then(Gf::new)
}

pub fn format_instance(psi: &MaxNandInstance) -> String {
    let mut out = format!("maxnand 1 {} {}\n", psi.n(), psi.m());
    for c in psi.constraints() {
        writeln!(out, "{} {} {}", c.k + 1, c.i + 1, c.j + 1).expect("write to string");
    }
    out
}

pub fn parse_instance(text: &str) -> Result<MaxNandInstance> {
    let mut lines = content_lines(text);
    let h = header(&mut lines, "maxnand", 2)?;
    let (n, m) = (h[0] as usize, h[1] as usize);
    let mut cons = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, l) = lines.next().ok_or_else(|| Error::parse(0, "missing constraint lines"))?;
        let v = numbers(ln, l)?;
        if v.len() != 3 || v.iter().any(|&x| x == 0 || x as usize > n) {
            return Err(Error::parse(ln, format!("constraint needs three indices in 1..={n}")));
        }
        cons.push(Constraint::new(v[0] as usize - 1, v[1] as usize - 1, v[2] as usize - 1));
    }
    no_trailing(&mut lines)?;
    MaxNandInstance::new(n, cons)
}

pub fn format_code(c: &LinearCode) -> String {
    let g = c.generator();
    let mut out = format!("gfcode 1 {} {} {}\n", c.field().q(), c.len(), c.dim());
    for i in 0..g.rows() {
        push_row(&mut out, g.row(i));
    }
    out
}

fn parse_generator(lines: &mut dyn Iterator<Item = (usize, &str)>, tag: &str) -> Result<(Gf, usize, FMatrix)> {
    let h = header(lines, tag, 3)?;
    let field = field_from(h[0], 1)?;
    let (n, k) = (h[1] as usize, h[2] as usize);
    let g = rows(lines, &field, k, n)?;
    let m = FMatrix::from_rows(&field, n, &g)?;
    Ok((field, n, m))
}

pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut lines = content_lines(text);
    let (_, _, g) = parse_generator(&mut lines, "gfcode")?;
    no_trailing(&mut lines)?;
    LinearCode::new(g)
}

pub fn format_affine(a: &AffineSubspace) -> String {
    let c = &a.code;
    let g = c.generator();
    let mut out = format!("gfaffine 1 {} {} {}\n", c.field().q(), c.len(), c.dim());
    for i in 0..g.rows() {
        push_row(&mut out, g.row(i));
    }
    push_row(&mut out, a.offset.entries());
    out
}

pub fn parse_affine(text: &str) -> Result<AffineSubspace> {
    let mut lines = content_lines(text);
    let (field, n, g) = parse_generator(&mut lines, "gfaffine")?;
    let off = rows(&mut lines, &field, 1, n)?.pop().expect("one row");
    no_trailing(&mut lines)?;
    AffineSubspace::new(LinearCode::new(g)?, FVector::new(&field, off))
}

pub fn format_evalset(set: &EvaluationSet) -> String {
    let mut out = format!("evalset 1 {} {} {}\n", set.field().q(), set.dim(), set.len());
    if *set.provenance() != Provenance::Explicit {
        let p = serde_json::to_string(set.provenance()).expect("provenance serializes");
        writeln!(out, "# provenance {p}").expect("write to string");
    }
    for p in set.points() {
        push_row(&mut out, p);
    }
    out
}

pub fn parse_evalset(text: &str) -> Result<EvaluationSet> {
    let mut provenance = Provenance::Explicit;
    for (i, l) in text.lines().enumerate() {
        if let Some(json) = l.trim().strip_prefix("# provenance ") {
            provenance = serde_json::from_str(json).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        }
    }
    let mut lines = content_lines(text);
    let h = header(&mut lines, "evalset", 3)?;
    let field = field_from(h[0], 1)?;
    let (n, size) = (h[1] as usize, h[2] as usize);
    let points = rows(&mut lines, &field, size, n)?;
    no_trailing(&mut lines)?;
    Ok(EvaluationSet::from_points(&field, n, points)?.with_provenance(provenance))
}

pub fn format_vector(v: &FVector) -> String {
    let mut out = String::new();
    push_row(&mut out, v.entries());
    out
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Everything about an artifact except the generator, as written to
/// `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactManifest {
    pub format: String,
    pub kind: Kind,
    pub params: Params,
    pub bounds: Bounds,
    pub injective: bool,
    pub dim: usize,
    pub length: usize,
    /// File holding the code or affine space, relative to the manifest.
    pub output_file: String,
    pub blocks: Vec<Block>,
    /// `(source variable, repetitions)` per output run.
    pub projection: Vec<(usize, usize)>,
    pub intended_file: Option<String>,
}

impl ArtifactManifest {
    pub fn of(art: &ReductionArtifact, with_intended: bool) -> Self {
        let output_file = match art.output() {
            Output::Affine(_) => "output.gfaffine",
            Output::Code(_) => "output.gfcode",
        };
        ArtifactManifest {
            format: "mindist-artifact 1".into(),
            kind: art.kind,
            params: art.params,
            bounds: art.bounds.clone(),
            injective: art.injective,
            dim: art.code().dim(),
            length: art.output_len(),
            output_file: output_file.into(),
            blocks: art.layout().blocks().to_vec(),
            projection: art.projection().to_vec(),
            intended_file: with_intended.then(|| "intended.txt".into()),
        }
    }
}

/// Writes the output code, the manifest, and optionally the intended
/// codeword into `dir`, creating it if needed.
pub fn write_artifact(dir: &Path, art: &ReductionArtifact, intended: Option<&IntendedCodeword>) -> Result<ArtifactManifest> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let manifest = ArtifactManifest::of(art, intended.is_some());
    let body = match art.output() {
        Output::Affine(a) => format_affine(a),
        Output::Code(c) => format_code(c),
    };
    write_text(&dir.join(&manifest.output_file), &body)?;
    if let (Some(w), Some(name)) = (intended, &manifest.intended_file) {
        write_text(&dir.join(name), &format_vector(&w.output))?;
    }
    write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// The manifest and output of an artifact directory.
pub fn read_artifact(dir: &Path) -> Result<(ArtifactManifest, Output)> {
    let text = read_text(&dir.join("manifest.json"))?;
    let manifest: ArtifactManifest =
        serde_json::from_str(&text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let body = read_text(&dir.join(&manifest.output_file))?;
    let output = if manifest.output_file.ends_with(".gfaffine") {
        Output::Affine(parse_affine(&body)?)
    } else {
        Output::Code(parse_code(&body)?)
    };
    Ok((manifest, output))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::simplex_code;
    use crate::csp::{contradiction, gen_planted};
    use crate::prg::small_bias_set;
    use crate::reduction::build_ncp2;

    #[test]
    fn contradiction_file() {
        let s = format_instance(&contradiction());
        assert_eq!(s, "maxnand 1 1 1\n1 1 1\n");
        assert_eq!(parse_instance(&s).unwrap(), contradiction());
    }

    #[test]
    fn instance_round_trip_with_comments() {
        let (psi, _) = gen_planted(5, 9, 3).unwrap();
        let s = format!("# generated\n\n{}", format_instance(&psi));
        assert_eq!(parse_instance(&s).unwrap(), psi);
    }

    #[test]
    fn instance_errors_carry_lines() {
        let e = parse_instance("maxnand 1 2 1\n1 2 3\n").unwrap_err();
        assert_eq!(e, Error::parse(2, "constraint needs three indices in 1..=2"));
        assert!(matches!(parse_instance("maxnand 2 1 1\n1 1 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_instance("maxnand 1 1 1\n1 1 1\n1 1 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_instance(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn code_and_affine_round_trip() {
        let c = simplex_code(3).unwrap();
        let s = format_code(&c);
        assert!(s.starts_with("gfcode 1 2 7 3\n"));
        assert_eq!(parse_code(&s).unwrap(), c);

        let a = build_ncp2(&contradiction()).unwrap().affine().unwrap().clone();
        assert_eq!(parse_affine(&format_affine(&a)).unwrap(), a);
        assert!(parse_code("gfcode 1 3 2 1\n1 3\n").is_err());
    }

    #[test]
    fn evalset_round_trip_keeps_provenance() {
        let f = Gf::new(3).unwrap();
        let set = small_bias_set(&f, 2, 0.5).unwrap();
        let back = parse_evalset(&format_evalset(&set)).unwrap();
        assert_eq!(back, set);
        let plain = EvaluationSet::from_points(&f, 1, vec![vec![2], vec![0]]).unwrap();
        assert_eq!(format_evalset(&plain), "evalset 1 3 1 2\n2\n0\n");
        assert_eq!(parse_evalset(&format_evalset(&plain)).unwrap(), plain);
    }

    #[test]
    fn artifact_directory_round_trip() {
        let dir = std::env::temp_dir().join(format!("mindist-io-{}", std::process::id()));
        let art = build_ncp2(&contradiction()).unwrap();
        let m = write_artifact(&dir, &art, None).unwrap();
        let (back, out) = read_artifact(&dir).unwrap();
        assert_eq!(back, m);
        assert_eq!(&out, art.output());
        assert_eq!(m.length, 4);
        fs::remove_dir_all(&dir).unwrap();
    }
}
