//! Command-line front end. Reports are `key: value` lines in a fixed order.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::bitangent::{bitangent_locus, BitangentClass, BitangentError};
use crate::gw::{computed_gw, gw_mult_of_class, qtype_of_lift, signed_count, table_gw, GWElement, GwError};
use crate::lifting::{class_lifts_over, rational_total, LiftDecision, LiftError, LineLifts};
use crate::quartic::{check_smooth, lattice_points, newton_subdivision, parse_quartic, Lattice, QuarticError};
use crate::residue::{InitialAssignment, Rational, ResidueError, ResidueField, Symbol};
use crate::svg::{emit_svg, SvgError};
use crate::tropcurve::{build_curve, check_generic, TropicalCurve};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error(transparent)]
    Quartic(#[from] QuarticError),
    #[error("non-generic input: {0}")]
    NonGeneric(String),
    #[error(transparent)]
    Bitangent(BitangentError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Svg(#[from] SvgError),
}

impl From<BitangentError> for CliError {
    fn from(e: BitangentError) -> Self {
        match e {
            BitangentError::NotSevenClasses(_) | BitangentError::NotSmooth | BitangentError::UnknownShape { .. } => {
                CliError::NonGeneric(e.to_string())
            }
            e => CliError::Bitangent(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NonGeneric(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tropbt", version, about = "Tropical bitangents of plane quartics over valued fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smoothness and genericity of the tropicalization.
    Check(Input),
    /// Tropical curve and Newton subdivision.
    Tropicalize {
        #[command(flatten)]
        input: Input,
        /// Write a picture of the curve.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// The seven bitangent classes.
    Bitangents {
        #[command(flatten)]
        input: Input,
        /// Write a picture of the curve and its classes.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Whether the lifts of each class are defined over the residue field.
    Lift(FieldInput),
    /// Quadratically enriched multiplicity of each class and their sum.
    Gw(FieldInput),
}

#[derive(Args, Debug)]
struct Input {
    /// Quartic in the `A i j valuation initial` format.
    file: PathBuf,
}

#[derive(Args, Debug)]
struct FieldInput {
    #[command(flatten)]
    input: Input,
    /// reals, complex, rationals or fp:P.
    #[arg(long, default_value = "reals")]
    field: String,
    /// Initial coefficient override, `i,j=value`.
    #[arg(long = "assign", value_name = "I,J=VALUE", allow_hyphen_values = true)]
    assign: Vec<String>,
    /// File of `i,j=value` lines.
    #[arg(long = "assignments")]
    assignments: Option<PathBuf>,
}

/// Exit code and the text written to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Ordered `key: value` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report(Vec<(String, String)>);

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

pub fn parse_field(s: &str) -> Result<ResidueField, CliError> {
    match s {
        "reals" => Ok(ResidueField::Reals),
        "complex" => Ok(ResidueField::Complex),
        "rationals" => Ok(ResidueField::Rationals),
        _ => {
            let p = s
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| CliError::Usage(format!("unknown field {s:?}; use reals, complex, rationals or fp:P")))?;
            ResidueField::prime(p).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i128 = d.trim().parse().ok()?;
            (d != 0).then_some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.trim().parse().ok()?)),
    }
}

/// Parses `i,j=value` with `i + j <= 4` and a nonzero rational value.
pub fn parse_assignment(s: &str) -> Result<(Symbol, Rational), CliError> {
    let bad = || CliError::Usage(format!("bad assignment {s:?}; expected i,j=value"));
    let (ij, v) = s.split_once('=').ok_or_else(bad)?;
    let (i, j) = ij.split_once(',').ok_or_else(bad)?;
    let (i, j): (u8, u8) = (i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?);
    let v = parse_rational(v).ok_or_else(bad)?;
    if i + j > 4 || v == Rational::from_integer(0) {
        return Err(bad());
    }
    Ok((Symbol::new(i, j), v))
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn lattice(p: Lattice) -> String {
    format!("({},{})", p.0, p.1)
}

fn cells(cs: &[Lattice]) -> String {
    cs.iter().map(|&p| lattice(p)).collect::<Vec<_>>().join(" ")
}

struct Loaded {
    curve: TropicalCurve,
    smooth: bool,
    subdivision: crate::quartic::RegularSubdivision,
    assignment: InitialAssignment,
}

fn load(input: &Input) -> Result<Loaded, CliError> {
    let q = parse_quartic(&read(&input.file)?)?;
    let s = newton_subdivision(&q.heights());
    Ok(Loaded { curve: build_curve(&s, 4), smooth: check_smooth(&s), subdivision: s, assignment: q.assignment() })
}

fn classes_of(l: &Loaded) -> Result<Vec<BitangentClass>, CliError> {
    if !l.smooth {
        return Err(CliError::NonGeneric("the Newton subdivision is not a unimodular triangulation".into()));
    }
    let g = check_generic(&l.curve);
    if !g.is_generic() {
        let (a, b, d) = g.alignments[0];
        return Err(CliError::NonGeneric(format!(
            "curve vertices {a} and {b} are aligned in direction ({},{})",
            d.0, d.1
        )));
    }
    Ok(bitangent_locus(&l.curve, &l.subdivision)?)
}

fn check(input: &Input) -> Result<(Report, i32), CliError> {
    let l = load(input)?;
    let mut r = Report::default();
    r.push("command", "check");
    r.push("smooth", if l.smooth { "yes" } else { "no" });
    r.push("vertices", l.curve.vertices.len());
    if !l.smooth {
        r.push("generic", "no");
        return Ok((r, 2));
    }
    let g = check_generic(&l.curve);
    r.push("alignments", g.alignments.len());
    for (a, b, d) in &g.alignments {
        r.push("alignment", format!("{a} {b} ({},{})", d.0, d.1));
    }
    r.push("harmless_alignments", g.harmless.len());
    let mut code = 0;
    if g.is_generic() {
        match bitangent_locus(&l.curve, &l.subdivision) {
            Ok(cs) => r.push("classes", cs.len()),
            Err(e) => {
                r.push("classification", e);
                code = 2;
            }
        }
    } else {
        code = 2;
    }
    r.push("generic", if code == 0 { "yes" } else { "no" });
    Ok((r, code))
}

fn tropicalize(input: &Input, svg: Option<&PathBuf>) -> Result<Report, CliError> {
    let l = load(input)?;
    let mut r = Report::default();
    r.push("command", "tropicalize");
    r.push("smooth", if l.smooth { "yes" } else { "no" });
    r.push("faces", l.subdivision.faces.len());
    for f in &l.subdivision.faces {
        r.push("face", cells(f));
    }
    r.push("vertices", l.curve.vertices.len());
    for (k, v) in l.curve.vertices.iter().enumerate() {
        r.push("vertex", format!("{k} {} {}", v.point.x, v.point.y));
    }
    r.push("edges", l.curve.edges.len());
    for e in &l.curve.edges {
        r.push(
            "edge",
            format!("{} {} {} {} {}", e.ends[0], e.ends[1], e.direction.0, e.direction.1, e.weight),
        );
    }
    r.push("rays", l.curve.rays.len());
    for ray in &l.curve.rays {
        r.push("ray", format!("{} {} {} {}", ray.base, ray.direction.0, ray.direction.1, ray.weight));
    }
    if let Some(p) = svg {
        emit_svg(&l.curve, None, p)?;
        r.push("svg", p.display());
    }
    Ok(r)
}

fn bitangents(input: &Input, svg: Option<&PathBuf>) -> Result<Report, CliError> {
    let l = load(input)?;
    let cs = classes_of(&l)?;
    let mut r = Report::default();
    r.push("command", "bitangents");
    r.push("classes", cs.len());
    for (k, b) in cs.iter().enumerate() {
        let key = |s: &str| format!("class.{k}.{s}");
        r.push(key("shape"), &b.shape);
        r.push(key("dim"), b.dim);
        r.push(key("bounded"), if b.bounded { "yes" } else { "no" });
        r.push(key("anchor"), b.anchor());
        r.push(key("cells"), b.cells.len());
        let pattern = match b.pattern() {
            Some(p) => p.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
            None => "unknown".into(),
        };
        r.push(key("pattern"), pattern);
        for (j, rep) in b.representatives.iter().enumerate() {
            let m = rep.multiplicity.map_or("unknown".to_string(), |m| m.to_string());
            let note = if rep.inferred { " inferred" } else { "" };
            r.push(key(&format!("rep.{j}")), format!("{} multiplicity {m}{note}", rep.line.vertex));
        }
        let tris: Vec<String> = b.motif.triangles.iter().map(|t| format!("[{}]", cells(t))).collect();
        let edges: Vec<String> = b.motif.edges.iter().map(|e| format!("[{}]", cells(e))).collect();
        r.push(key("motif.triangles"), tris.join(" "));
        r.push(key("motif.edges"), edges.join(" "));
    }
    if let Some(p) = svg {
        emit_svg(&l.curve, Some(&cs), p)?;
        r.push("svg", p.display());
    }
    Ok(r)
}

/// The file's initials with command-line overrides; `None` if some initial stays symbolic.
fn assignment(l: &Loaded, fi: &FieldInput) -> Result<Option<InitialAssignment>, CliError> {
    let mut asg = l.assignment.clone();
    let mut lines: Vec<String> = Vec::new();
    if let Some(p) = &fi.assignments {
        lines.extend(
            read(p)?
                .lines()
                .map(|s| s.split('#').next().unwrap_or("").trim().to_string())
                .filter(|s| !s.is_empty()),
        );
    }
    lines.extend(fi.assign.iter().cloned());
    for s in &lines {
        let (sym, v) = parse_assignment(s)?;
        asg.set(sym, v);
    }
    let complete = lattice_points(4).into_iter().all(|(i, j)| asg.get(Symbol::new(i as u8, j as u8)).is_some());
    Ok(complete.then_some(asg))
}

fn symbolic_reps(r: &mut Report, k: usize, b: &BitangentClass, with_qtype: bool) -> Result<(), CliError> {
    for (j, rep) in b.representatives.iter().enumerate() {
        let key = |s: &str| format!("class.{k}.rep.{j}.{s}");
        match &rep.lifts {
            LineLifts::Lifts(d) => {
                for (n, g) in d.generators().into_iter().enumerate() {
                    r.push(key(&format!("radicand.{n}")), &d.table.radicands[g]);
                }
                if with_qtype {
                    r.push(key("qtype"), qtype_of_lift(d)?);
                }
            }
            LineLifts::Unsupported(why) => r.push(key("unsupported"), why),
            _ => {}
        }
    }
    Ok(())
}

fn lift(fi: &FieldInput) -> Result<Report, CliError> {
    let k = parse_field(&fi.field)?;
    let l = load(&fi.input)?;
    let asg = assignment(&l, fi)?;
    let cs = classes_of(&l)?;
    let mut r = Report::default();
    r.push("command", "lift");
    r.push("field", k);
    r.push("classes", cs.len());
    let mut decisions = Vec::new();
    for (n, b) in cs.iter().enumerate() {
        r.push(format!("class.{n}.shape"), &b.shape);
        match &asg {
            Some(asg) => {
                let d = class_lifts_over(b, asg, k)?;
                r.push(format!("class.{n}.decision"), &d);
                decisions.push(d);
            }
            None => {
                r.push(format!("class.{n}.decision"), "symbolic");
                symbolic_reps(&mut r, n, b, false)?;
            }
        }
    }
    if asg.is_some() {
        let unknown = decisions.iter().filter(|d| matches!(d, LiftDecision::Unknown(_))).count();
        r.push("rational_total", rational_total(&decisions));
        r.push("undetermined_classes", unknown);
    }
    Ok(r)
}

fn gw(fi: &FieldInput) -> Result<Report, CliError> {
    let k = parse_field(&fi.field)?;
    let l = load(&fi.input)?;
    let asg = assignment(&l, fi)?;
    let cs = classes_of(&l)?;
    let mut r = Report::default();
    r.push("command", "gw");
    r.push("field", k);
    r.push("classes", cs.len());
    let Some(asg) = asg else {
        for (n, b) in cs.iter().enumerate() {
            r.push(format!("class.{n}.shape"), &b.shape);
            r.push(format!("class.{n}.gw"), "symbolic");
            symbolic_reps(&mut r, n, b, true)?;
        }
        return Ok(r);
    };
    let mut total = Some(GWElement::zero());
    let none = || "none".to_string();
    for (n, b) in cs.iter().enumerate() {
        r.push(format!("class.{n}.shape"), &b.shape);
        match gw_mult_of_class(b, &asg, k) {
            Ok(g) => {
                total = total.map(|t| t.add(&g, k));
                r.push(format!("class.{n}.gw"), &g);
            }
            Err(e @ GwError::Undetermined { .. }) => {
                total = None;
                r.push(format!("class.{n}.gw"), format!("undetermined ({e})"));
            }
            Err(e) => return Err(e.into()),
        }
        let c = computed_gw(b, &asg, k)?.map_or_else(none, |g| g.to_string());
        let t = table_gw(&b.shape, &asg, k)?.map_or_else(none, |g| g.to_string());
        r.push(format!("class.{n}.computed"), c);
        r.push(format!("class.{n}.table"), t);
    }
    match total {
        Some(t) => {
            r.push("total", &t);
            r.push("degree", t.degree());
            if k == ResidueField::Reals {
                r.push("signed_count", signed_count(&t, k)?);
            }
        }
        None => r.push("total", "undetermined"),
    }
    Ok(r)
}

fn dispatch(cli: &Cli) -> Result<(Report, i32), CliError> {
    match &cli.command {
        Command::Check(i) => check(i),
        Command::Tropicalize { input, svg } => Ok((tropicalize(input, svg.as_ref())?, 0)),
        Command::Bitangents { input, svg } => Ok((bitangents(input, svg.as_ref())?, 0)),
        Command::Lift(fi) => Ok((lift(fi)?, 0)),
        Command::Gw(fi) => Ok((gw(fi)?, 0)),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok((r, code)) => Outcome { code, stdout: r.render(), stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
