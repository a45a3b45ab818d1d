//! Argument model and report assembly for the `fedder` binary.
//!
//! Every subcommand produces one JSON document; the human rendering is a
//! flattening of that same document, so both carry identical fields.

use std::path::PathBuf;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fedder_core::census::{census_with_progress, CensusError, CensusMode, CensusSpace, CensusSpec};
use fedder_core::classify::{classify_with_bound, ClassifyError};
use fedder_core::dp1::{DP1Equation, Dp1Error, DEFAULT_SEARCH_BOUND};
use fedder_core::fedder::{is_fsplit_hypersurface, FedderError};
use fedder_core::fields::{make_field, Field, FieldError};
use fedder_core::mpoly::{parse_dp1, parse_poly, Alphabet, BinaryForm, MultiPoly, PolyError};
use fedder_core::pgl2::{la5_normalize, la5_target, Pgl2Error};
use fedder_core::unifactor::{roots, splitting_degree, squarefree_decomposition, RootError};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_ID: &str = "fedder-dp1/1";
pub const SEED_ENV: &str = "FEDDER_SEED";
/// The JSON schema every report validates against.
pub const SCHEMA: &str = include_str!("../schema/fedder-dp1-1.schema.json");

#[derive(Parser, Debug, Clone)]
#[command(name = "fedder", version, about = "F-splitting and classification of degree-1 del Pezzo surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit the JSON report instead of the text rendering.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled censuses; the FEDDER_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for censuses (default: available cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Fedder's criterion for a hypersurface.
    Check {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated variables for a generic polynomial (default: the sextic in s, t, x, y).
        #[arg(long)]
        vars: Option<String>,
    },
    /// Full classification report of a sextic in P(1,1,2,3).
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Largest extension degree over the base field searched for singular points.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: usize,
    },
    /// Root divisor of a binary form in s, t.
    Roots {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Also move three roots to 0, 1, infinity (forms in the span of s^(p+1), s^p t, s t^p, t^(p+1)).
        #[arg(long)]
        la5: bool,
    },
    /// Compare Fedder's verdict with the closed-form predicate over a coefficient space.
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = SpaceArg::Full)]
        space: SpaceArg,
        /// `exhaustive` or `sample=N`.
        #[arg(long, default_value = "exhaustive", value_parser = parse_mode)]
        mode: ModeArg,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Characteristic p.
    #[arg(long = "char")]
    pub p: u64,
    /// Field order q = p^n (default p).
    #[arg(long = "field")]
    pub order: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Inline expression.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub expr: Option<String>,
    /// Read the input from a file: an expression, or `a1: c0 c1` coefficient lines.
    #[arg(long, short = 'f')]
    pub file: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceArg {
    Full,
    Normalized,
    A6Only,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    Sample(u64),
}

fn parse_mode(s: &str) -> Result<ModeArg, String> {
    if s == "exhaustive" {
        return Ok(ModeArg::Exhaustive);
    }
    s.strip_prefix("sample=")
        .and_then(|n| n.parse().ok())
        .map(ModeArg::Sample)
        .ok_or_else(|| format!("expected `exhaustive` or `sample=N`, got `{s}`"))
}

/// Exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    /// Exit 1: the input is well formed but the computation is undefined or refused.
    Math,
    /// Exit 2: malformed flags or input.
    Input,
}

impl ErrorKind {
    pub fn status(self) -> i32 {
        match self {
            ErrorKind::Math => 1,
            ErrorKind::Input => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    /// Byte offset into `source` for syntax errors.
    pub offset: Option<usize>,
    #[serde(skip)]
    pub source: Option<String>,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError { kind: ErrorKind::Input, message: message.into(), offset: None, source: None }
    }

    fn math(message: impl ToString) -> CliError {
        CliError { kind: ErrorKind::Math, message: message.to_string(), offset: None, source: None }
    }

    fn at(mut self, source: &str) -> CliError {
        self.source = Some(source.to_string());
        self
    }

    /// Message followed by the offending line and a caret, when an offset is known.
    pub fn diagnostic(&self) -> String {
        let mut out = format!("error: {}", self.message);
        if let (Some(off), Some(src)) = (self.offset, &self.source) {
            let off = off.min(src.len());
            let line_start = src[..off].rfind('\n').map_or(0, |i| i + 1);
            let line_end = src[off..].find('\n').map_or(src.len(), |i| off + i);
            let col = src[line_start..off].chars().count();
            out.push_str(&format!("\n  {}\n  {}^", &src[line_start..line_end], " ".repeat(col)));
        }
        out
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> CliError {
        let offset = match &e {
            PolyError::Syntax { offset, .. }
            | PolyError::UnknownVariable { offset, .. }
            | PolyError::Coefficient { offset, .. } => Some(*offset),
            _ => None,
        };
        CliError { kind: ErrorKind::Input, message: e.to_string(), offset, source: None }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> CliError {
        match e {
            FieldError::Parse { offset, .. } => {
                CliError { kind: ErrorKind::Input, message: e.to_string(), offset: Some(offset), source: None }
            }
            FieldError::NotPrime(_) | FieldError::DegreeOutOfRange(_) => CliError::input(e.to_string()),
            e => CliError::math(e),
        }
    }
}

impl From<Dp1Error> for CliError {
    fn from(e: Dp1Error) -> CliError {
        match e {
            Dp1Error::Poly(e) => e.into(),
            Dp1Error::Field(e) => e.into(),
            Dp1Error::Shape(_) | Dp1Error::Degree { .. } => CliError::input(e.to_string()),
            e => CliError::math(e),
        }
    }
}

impl From<Pgl2Error> for CliError {
    fn from(e: Pgl2Error) -> CliError {
        match e {
            Pgl2Error::Dp1(e) => e.into(),
            e => CliError::math(e),
        }
    }
}

impl From<RootError> for CliError {
    fn from(e: RootError) -> CliError {
        CliError::math(e)
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> CliError {
        CliError::math(e)
    }
}

impl From<FedderError> for CliError {
    fn from(e: FedderError) -> CliError {
        match e {
            FedderError::Poly(e) => e.into(),
            e => CliError::math(e),
        }
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> CliError {
        match e {
            CensusError::Field(e) => e.into(),
            e => CliError::math(e),
        }
    }
}

/// Where the effective seed came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedSource {
    Flag,
    Env,
}

/// A parsed command line plus everything needed to replay it.
#[derive(Debug, Clone)]
pub struct CliInvocation {
    pub argv: Vec<String>,
    pub cli: Cli,
    pub seed: u64,
    pub seed_source: SeedSource,
    pub workers: usize,
}

impl CliInvocation {
    /// `env_seed` is the value of `FEDDER_SEED`, if set.
    pub fn new(argv: Vec<String>, cli: Cli, env_seed: Option<&str>) -> Result<CliInvocation, CliError> {
        let (seed, seed_source) = match env_seed {
            Some(v) => (
                v.trim().parse().map_err(|_| CliError::input(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?,
                SeedSource::Env,
            ),
            None => (cli.seed, SeedSource::Flag),
        };
        let workers = cli
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1);
        Ok(CliInvocation { argv, cli, seed, seed_source, workers })
    }

    pub fn subcommand(&self) -> &'static str {
        match self.cli.command {
            Command::Check { .. } => "check",
            Command::Classify { .. } => "classify",
            Command::Roots { .. } => "roots",
            Command::Census { .. } => "census",
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "argv": self.argv,
            "subcommand": self.subcommand(),
            "json": self.cli.json,
            "seed": self.seed,
            "seed_source": self.seed_source,
            "workers": self.workers,
        });
        let m = v.as_object_mut().unwrap();
        let (field, input) = match &self.cli.command {
            Command::Check { field, input, vars } => {
                m.insert("vars".into(), json!(vars));
                (field, Some(input))
            }
            Command::Classify { field, input, search_bound } => {
                m.insert("search_bound".into(), json!(search_bound));
                (field, Some(input))
            }
            Command::Roots { field, input, la5 } => {
                m.insert("la5".into(), json!(la5));
                (field, Some(input))
            }
            Command::Census { field, space, mode } => {
                m.insert("space".into(), json!(space_of(*space)));
                m.insert("mode".into(), json!(mode_string(*mode)));
                (field, None)
            }
        };
        m.insert("char".into(), json!(field.p));
        m.insert("field_order".into(), json!(field.order));
        if let Some(i) = input {
            m.insert("expr".into(), json!(i.expr));
            m.insert("file".into(), json!(i.file.as_ref().map(|f| f.display().to_string())));
        }
        v
    }
}

fn space_of(s: SpaceArg) -> CensusSpace {
    match s {
        SpaceArg::Full => CensusSpace::Full,
        SpaceArg::Normalized => CensusSpace::Normalized,
        SpaceArg::A6Only => CensusSpace::A6Only,
    }
}

fn mode_string(m: ModeArg) -> String {
    match m {
        ModeArg::Exhaustive => "exhaustive".into(),
        ModeArg::Sample(n) => format!("sample={n}"),
    }
}

/// Output of one run: exit status and the document for standard output.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: i32,
    pub document: Value,
    pub error: Option<CliError>,
}

impl Outcome {
    /// Text for standard output in the requested format.
    pub fn stdout(&self, json: bool) -> String {
        if json {
            format!("{}\n", serde_json::to_string_pretty(&self.document).unwrap())
        } else if self.error.is_some() {
            String::new()
        } else {
            render_text(&self.document)
        }
    }
}

pub fn run(inv: &CliInvocation, progress: &(dyn Fn(&str) + Sync)) -> Outcome {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA_ID));
    doc.insert("subcommand".into(), json!(inv.subcommand()));
    let result = dispatch(inv, progress);
    let (status, error) = match result {
        Ok(Value::Object(report)) => {
            doc.extend(report);
            (0, None)
        }
        Ok(_) => unreachable!("reports are objects"),
        Err(e) => {
            doc.insert("error".into(), serde_json::to_value(&e).unwrap());
            (e.kind.status(), Some(e))
        }
    };
    doc.insert("invocation".into(), inv.to_json());
    Outcome { status, document: Value::Object(doc), error }
}

fn resolve_field(a: &FieldArgs) -> Result<Field, CliError> {
    let p = a.p;
    let n = match a.order {
        None => 1,
        Some(q) => {
            let mut n = 0usize;
            let mut r = q;
            while r > 1 && r % p == 0 {
                r /= p;
                n += 1;
            }
            if r != 1 || n == 0 {
                return Err(CliError::input(format!("--field {q} is not a power of --char {p}")));
            }
            n
        }
    };
    Ok(make_field(p, n)?)
}

fn read_input(input: &InputArgs) -> Result<(String, bool), CliError> {
    match (&input.expr, &input.file) {
        (Some(e), _) => Ok((e.clone(), false)),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map(|t| (t, true))
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(CliError::input("no input given")),
    }
}

/// Coefficient files are recognized by a leading `aN:` line.
fn looks_like_coefficients(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.split_once(':').is_some_and(|(n, _)| ["a1", "a2", "a3", "a4", "a6"].contains(&n.trim())))
}

fn read_equation(input: &InputArgs, k: &Field) -> Result<DP1Equation, CliError> {
    let (text, from_file) = read_input(input)?;
    let parsed = if from_file && looks_like_coefficients(&text) {
        DP1Equation::parse_coefficients(&text, k)
    } else {
        DP1Equation::parse(text.trim_end(), k)
    };
    parsed.map_err(|e| CliError::from(e).at(&text))
}

fn dispatch(inv: &CliInvocation, progress: &(dyn Fn(&str) + Sync)) -> Result<Value, CliError> {
    match &inv.cli.command {
        Command::Check { field, input, vars } => check(field, input, vars.as_deref()),
        Command::Classify { field, input, search_bound } => {
            let k = resolve_field(field)?;
            let eq = read_equation(input, &k)?;
            Ok(serde_json::to_value(classify_with_bound(&eq, *search_bound)?).unwrap())
        }
        Command::Roots { field, input, la5 } => roots_report(field, input, *la5),
        Command::Census { field, space, mode } => {
            let k = resolve_field(field)?;
            let mode = match *mode {
                ModeArg::Exhaustive => CensusMode::Exhaustive,
                ModeArg::Sample(count) => CensusMode::Sample { count, seed: inv.seed },
            };
            let spec =
                CensusSpec::new(k.characteristic(), k.degree(), space_of(*space), mode).with_workers(inv.workers);
            let last = Mutex::new(u64::MAX);
            let summary = census_with_progress(&spec, |done, total| {
                let pct = done * 100 / total.max(1);
                let mut l = last.lock().unwrap();
                if *l != pct {
                    *l = pct;
                    progress(&format!("census: {done}/{total} ({pct}%)"));
                }
            })?;
            Ok(serde_json::to_value(summary).unwrap())
        }
    }
}

fn check(field: &FieldArgs, input: &InputArgs, vars: Option<&str>) -> Result<Value, CliError> {
    let k = resolve_field(field)?;
    let (f, kind): (MultiPoly, &str) = match vars {
        Some(v) => {
            let (text, _) = read_input(input)?;
            let names: Vec<&str> = v.split(',').map(str::trim).collect();
            let alphabet = Alphabet::flat(&names)?;
            (parse_poly(text.trim_end(), &k, &alphabet).map_err(|e| CliError::from(e).at(&text))?, "hypersurface")
        }
        None => (read_equation(input, &k)?.to_poly(), "dp1"),
    };
    let verdict = is_fsplit_hypersurface(&f)?;
    Ok(json!({
        "field": k.desc(),
        "kind": kind,
        "variables": f.alphabet().names(),
        "polynomial": f.to_string(),
        "f_split": verdict.f_split,
        "witness": verdict.witness_string(&k, f.alphabet()),
    }))
}

fn roots_report(field: &FieldArgs, input: &InputArgs, la5: bool) -> Result<Value, CliError> {
    let k = resolve_field(field)?;
    let (text, _) = read_input(input)?;
    let f = parse_dp1(text.trim_end(), &k).map_err(|e| CliError::from(e).at(&text))?;
    let degree = f.terms().iter().map(|(m, _)| m.0[0] as usize + m.0[1] as usize).max().unwrap_or(0);
    let g = BinaryForm::from_poly(&f, degree)?;
    let d = roots(&g)?;
    let sqf = squarefree_decomposition(&g)?;
    let mut report = json!({
        "field": k.desc(),
        "form": g.to_string(),
        "degree": degree,
        "splitting_degree": splitting_degree(&g)?,
        "splitting_field": d.field().desc(),
        "divisor": d.to_string(),
        "points": d.points().iter().map(|(pt, m)| json!({"point": pt.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
        "multiplicity_profile": d.multiplicity_profile(),
        "squarefree": sqf.factors.iter().map(|(h, m)| json!({"factor": h.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
    });
    if la5 {
        let n = la5_normalize(&g, k.characteristic())?;
        let target = la5_target(n.matrix.field());
        report["la5"] = json!({
            "matrix": n.matrix,
            "lambda": n.lambda.0.format_elem(n.lambda.1),
            "normal_form": target.scale(n.lambda.1).to_string(),
        });
    }
    Ok(report)
}

/// `path: value` lines, one per leaf of the document, in document order.
pub fn render_text(doc: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) if !m.is_empty() => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(a) if !a.is_empty() => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
            other => out.push_str(&format!("{prefix}: {other}\n")),
        }
    }
    let mut out = String::new();
    walk("", doc, &mut out);
    out
}
