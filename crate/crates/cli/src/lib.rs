//! Command-line driver: argument parsing, engine dispatch, the JSON
//! certificate document and exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use posicert_core::form::{simplex_size, Form};
use posicert_core::handelman::{handelman_decide, Answer, HandelmanBudget, HandelmanVerdict};
use posicert_core::newton::{
    enumerate_relative_faces_with_limit, simplex_faces, RelativeFace, FACE_ENUMERATION_LIMIT,
};
use posicert_core::positivity::{
    certify_eventual_positivity, find_power_exponent, orthant_positivity, CertifyBudget,
    CertifyOutcome, CoefficientMode, OrthantPositivityOutcome, PolyaBudget, PowerSearch, Verdict,
    DEFAULT_GRID_DEPTH, DEFAULT_M_MAX, DEFAULT_POLYA_MAX, DEFAULT_S_CAP,
};
use posicert_core::strata::{
    closed_form_strata, enumerate_strata_bounded, is_violation, Stratum, StratumBounds,
};
use posicert_core::{parse, verify, Error};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "posicert",
    version,
    about = "Exact positivity certificates for homogeneous forms on the positive orthant"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand p^m and summarize its coefficients.
    Expand(ExpandArgs),
    /// Relative faces of the Newton diagram of p, with witnesses.
    Faces(FacesArgs),
    /// Strata of Log(q) with respect to each face of Log(p).
    Strata(StrataArgs),
    /// Pólya certificate or refutation for q > 0 on the punctured orthant.
    Polya(PolyaArgs),
    /// Least m with p^m q having nonnegative or strictly positive coefficients.
    Power(PowerArgs),
    /// Certificate that p^m q has strictly positive coefficients for all large m.
    Certify(CertifyArgs),
    /// Decide whether some p^m q has nonnegative coefficients.
    Handelman(HandelmanArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Number of variables.
    #[arg(short = 'n', long = "nvars")]
    pub nvars: usize,
    /// Also write the JSON document to this path.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short = 'p')]
    pub p: String,
    #[arg(short = 'm')]
    pub m: u32,
}

#[derive(Debug, Args)]
pub struct FacesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short = 'p')]
    pub p: String,
    /// Largest support handed to generic face enumeration.
    #[arg(long, default_value_t = FACE_ENUMERATION_LIMIT)]
    pub face_limit: usize,
}

#[derive(Debug, Args)]
pub struct StrataArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short = 'p')]
    pub p: String,
    #[arg(short = 'q')]
    pub q: String,
    /// Largest dilate searched; defaults to ceil(deg q / deg p) + 2.
    #[arg(long)]
    pub k_max: Option<u32>,
    #[arg(long, default_value_t = FACE_ENUMERATION_LIMIT)]
    pub face_limit: usize,
}

#[derive(Debug, Args)]
pub struct PolyaCaps {
    /// Largest Pólya exponent tried.
    #[arg(long, default_value_t = DEFAULT_POLYA_MAX)]
    pub n_max: u32,
    /// Levels of grid refinement in the refutation search.
    #[arg(long, default_value_t = DEFAULT_GRID_DEPTH)]
    pub grid_depth: u32,
}

impl PolyaCaps {
    fn budget(&self) -> PolyaBudget {
        PolyaBudget {
            n_max: self.n_max,
            grid_depth: self.grid_depth,
        }
    }
}

#[derive(Debug, Args)]
pub struct PolyaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short = 'q')]
    pub q: String,
    #[command(flatten)]
    pub caps: PolyaCaps,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Nonneg,
    Strict,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short = 'p')]
    pub p: String,
    #[arg(short = 'q')]
    pub q: String,
    #[arg(long, value_enum, default_value = "nonneg")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    pub m_max: u32,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short = 'p')]
    pub p: String,
    #[arg(short = 'q')]
    pub q: String,
    /// Largest power of p tried for strict positivity.
    #[arg(long, default_value_t = DEFAULT_S_CAP)]
    pub s_cap: u32,
    /// Largest start of the window.
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    pub m_max: u32,
    #[command(flatten)]
    pub caps: PolyaCaps,
}

#[derive(Debug, Args)]
pub struct HandelmanArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short = 'p')]
    pub p: String,
    #[arg(short = 'q')]
    pub q: String,
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    pub m_max: u32,
    #[arg(long, default_value_t = FACE_ENUMERATION_LIMIT)]
    pub face_limit: usize,
    #[command(flatten)]
    pub caps: PolyaCaps,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub nvars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<CoefficientMode>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_limit: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandOutcome {
    pub power: Form,
    pub terms: usize,
    /// Monomials of the degree that do not appear.
    pub missing: String,
    pub negative: usize,
    pub nonnegative: bool,
    pub strictly_positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacesOutcome {
    /// Log(p) is a full dilated simplex and the faces are the `F_J`.
    pub closed_form: bool,
    pub faces: Vec<RelativeFace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<u32>>,
    pub stratum: Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceStrata {
    pub face: RelativeFace,
    pub improper: bool,
    pub strata: Vec<StratumEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataOutcome {
    pub closed_form: bool,
    pub faces: Vec<FaceStrata>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Expand(ExpandOutcome),
    Faces(FacesOutcome),
    Strata(StrataOutcome),
    Polya(OrthantPositivityOutcome),
    Power(PowerSearch),
    Certify(CertifyOutcome),
    Handelman(HandelmanVerdict),
    /// An engine stopped on a size or budget limit.
    BudgetExceeded {
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: String,
    pub command: String,
    pub inputs: Inputs,
    pub outcome: Outcome,
    pub budgets: Budgets,
    pub timings: Timings,
}

impl CertificateDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// The document with timings zeroed, for comparisons.
    pub fn canonical(&self) -> CertificateDocument {
        CertificateDocument {
            timings: Timings::default(),
            ..self.clone()
        }
    }
}

/// A finished run: the document (absent on input errors), the exit code,
/// and any diagnostic for standard error.
#[derive(Debug)]
pub struct RunResult {
    pub document: Option<CertificateDocument>,
    pub code: i32,
    pub diagnostic: Option<String>,
}

fn input_error(message: impl Into<String>) -> RunResult {
    RunResult {
        document: None,
        code: EXIT_INPUT,
        diagnostic: Some(message.into()),
    }
}

fn is_budget_error(e: &Error) -> bool {
    matches!(
        e,
        Error::TermBudget { .. } | Error::EnumerationBudget { .. } | Error::BudgetExhausted(_)
    )
}

fn parse_form(text: &str, nvars: usize, name: &str) -> Result<Form, String> {
    parse(text, nvars).map_err(|e| format!("cannot read {name}: {e}"))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> RunResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return RunResult {
                    document: None,
                    code: EXIT_OK,
                    diagnostic: Some(e.to_string()),
                };
            }
            return input_error(e.to_string());
        }
    };
    execute(&cli.command)
}

pub fn execute(command: &Command) -> RunResult {
    let start = Instant::now();
    let prepared = match prepare(command) {
        Ok(p) => p,
        Err(msg) => return input_error(msg),
    };
    let (name, inputs, budgets, result) = prepared;
    let (outcome, code, diagnostic) = match result {
        Ok((outcome, code)) => (outcome, code, None),
        Err(e) if is_budget_error(&e) => (
            Outcome::BudgetExceeded {
                message: e.to_string(),
            },
            EXIT_INCONCLUSIVE,
            None,
        ),
        Err(e) => return input_error(e.to_string()),
    };
    let (code, diagnostic) = match recheck(&outcome, &inputs) {
        Ok(()) => (code, diagnostic),
        Err(msg) => (EXIT_INCONCLUSIVE, Some(msg)),
    };
    let document = CertificateDocument {
        schema_version: SCHEMA_VERSION.into(),
        command: name.into(),
        inputs,
        outcome,
        budgets,
        timings: Timings {
            wall_ms: start.elapsed().as_millis() as u64,
        },
    };
    RunResult {
        document: Some(document),
        code,
        diagnostic,
    }
}

type Prepared = (
    &'static str,
    Inputs,
    Budgets,
    posicert_core::Result<(Outcome, i32)>,
);

fn inputs(nvars: usize, p: Option<&Form>, q: Option<&Form>) -> Inputs {
    Inputs {
        nvars,
        p: p.map(|f| f.to_string()),
        q: q.map(|f| f.to_string()),
        m: None,
        mode: None,
    }
}

fn prepare(command: &Command) -> Result<Prepared, String> {
    Ok(match command {
        Command::Expand(a) => {
            let p = parse_form(&a.p, a.common.nvars, "p")?;
            let mut inp = inputs(a.common.nvars, Some(&p), None);
            inp.m = Some(a.m);
            ("expand", inp, Budgets::default(), run_expand(&p, a.m))
        }
        Command::Faces(a) => {
            let p = parse_form(&a.p, a.common.nvars, "p")?;
            let budgets = Budgets {
                face_limit: Some(a.face_limit),
                ..Budgets::default()
            };
            let inp = inputs(a.common.nvars, Some(&p), None);
            ("faces", inp, budgets, run_faces(&p, a.face_limit))
        }
        Command::Strata(a) => {
            let p = parse_form(&a.p, a.common.nvars, "p")?;
            let q = parse_form(&a.q, a.common.nvars, "q")?;
            let k_max = a
                .k_max
                .unwrap_or_else(|| StratumBounds::default_for(p.degree(), q.degree()).k_max);
            let budgets = Budgets {
                k_max: Some(k_max),
                face_limit: Some(a.face_limit),
                ..Budgets::default()
            };
            let inp = inputs(a.common.nvars, Some(&p), Some(&q));
            let result = run_strata(&p, &q, k_max, a.face_limit);
            ("strata", inp, budgets, result)
        }
        Command::Polya(a) => {
            let q = parse_form(&a.q, a.common.nvars, "q")?;
            let budgets = Budgets {
                n_max: Some(a.caps.n_max),
                grid_depth: Some(a.caps.grid_depth),
                ..Budgets::default()
            };
            let inp = inputs(a.common.nvars, None, Some(&q));
            let result = orthant_positivity(&q, a.caps.budget()).map(|o| {
                let code = match o.verdict {
                    Verdict::CertifiedPositive => EXIT_OK,
                    Verdict::Refuted => EXIT_REFUTED,
                    Verdict::Inconclusive => EXIT_INCONCLUSIVE,
                };
                (Outcome::Polya(o), code)
            });
            ("polya", inp, budgets, result)
        }
        Command::Power(a) => {
            let p = parse_form(&a.p, a.common.nvars, "p")?;
            let q = parse_form(&a.q, a.common.nvars, "q")?;
            let mode = match a.mode {
                ModeArg::Nonneg => CoefficientMode::Nonnegative,
                ModeArg::Strict => CoefficientMode::Strict,
            };
            let budgets = Budgets {
                m_max: Some(a.m_max),
                ..Budgets::default()
            };
            let mut inp = inputs(a.common.nvars, Some(&p), Some(&q));
            inp.mode = Some(mode);
            let result = find_power_exponent(&p, &q, mode, a.m_max).map(|r| {
                let code = match r.outcome {
                    PowerSearch::Found { .. } => EXIT_OK,
                    PowerSearch::ProvablyNever { .. } => EXIT_REFUTED,
                    PowerSearch::NotFound { .. } => EXIT_INCONCLUSIVE,
                };
                (Outcome::Power(r.outcome), code)
            });
            ("power", inp, budgets, result)
        }
        Command::Certify(a) => {
            let p = parse_form(&a.p, a.common.nvars, "p")?;
            let q = parse_form(&a.q, a.common.nvars, "q")?;
            let budget = CertifyBudget {
                s_cap: a.s_cap,
                m_max: a.m_max,
                polya: a.caps.budget(),
            };
            let budgets = Budgets {
                n_max: Some(a.caps.n_max),
                grid_depth: Some(a.caps.grid_depth),
                m_max: Some(a.m_max),
                s_cap: Some(a.s_cap),
                ..Budgets::default()
            };
            let inp = inputs(a.common.nvars, Some(&p), Some(&q));
            let result = certify_eventual_positivity(&p, &q, budget).map(|o| {
                let code = match o {
                    CertifyOutcome::Certified { .. } => EXIT_OK,
                    CertifyOutcome::Refuted { .. } => EXIT_REFUTED,
                    CertifyOutcome::Inconclusive { .. } => EXIT_INCONCLUSIVE,
                };
                (Outcome::Certify(o), code)
            });
            ("certify", inp, budgets, result)
        }
        Command::Handelman(a) => {
            let p = parse_form(&a.p, a.common.nvars, "p")?;
            let q = parse_form(&a.q, a.common.nvars, "q")?;
            let budget = HandelmanBudget {
                polya: a.caps.budget(),
                m_max: a.m_max,
                face_limit: a.face_limit,
            };
            let budgets = Budgets {
                n_max: Some(a.caps.n_max),
                grid_depth: Some(a.caps.grid_depth),
                m_max: Some(a.m_max),
                face_limit: Some(a.face_limit),
                ..Budgets::default()
            };
            let inp = inputs(a.common.nvars, Some(&p), Some(&q));
            let result = handelman_decide(&p, &q, budget).map(|v| {
                let code = match v.verdict {
                    Answer::Yes => EXIT_OK,
                    Answer::No => EXIT_REFUTED,
                    Answer::Inconclusive => EXIT_INCONCLUSIVE,
                };
                (Outcome::Handelman(v), code)
            });
            ("handelman", inp, budgets, result)
        }
    })
}

fn run_expand(p: &Form, m: u32) -> posicert_core::Result<(Outcome, i32)> {
    let power = p.pow(m)?;
    let total = simplex_size(power.nvars(), power.degree());
    let missing = match total {
        Some(t) => (t - power.len() as u128).to_string(),
        None => "overflow".into(),
    };
    let negative = power
        .terms()
        .filter(|(_, c)| c < &&posicert_core::Rational::from_integer(0.into()))
        .count();
    let outcome = ExpandOutcome {
        terms: power.len(),
        missing,
        negative,
        nonnegative: power.has_nonnegative_coefficients(),
        strictly_positive: power.has_strictly_positive_coefficients(),
        power,
    };
    Ok((Outcome::Expand(outcome), EXIT_OK))
}

fn run_faces(p: &Form, face_limit: usize) -> posicert_core::Result<(Outcome, i32)> {
    if p.is_zero() {
        return Err(Error::ZeroForm);
    }
    let logp = p.support();
    let (closed_form, faces) = if logp.is_dilated_simplex() {
        let mut faces: Vec<RelativeFace> = simplex_faces(p.nvars(), p.degree())
            .into_iter()
            .map(|sf| sf.face)
            .collect();
        faces.sort_by(|a, b| {
            a.points
                .len()
                .cmp(&b.points.len())
                .then_with(|| a.points.iter().cmp(b.points.iter()))
        });
        (true, faces)
    } else {
        (
            false,
            enumerate_relative_faces_with_limit(&logp, face_limit)?,
        )
    };
    Ok((Outcome::Faces(FacesOutcome { closed_form, faces }), EXIT_OK))
}

fn run_strata(
    p: &Form,
    q: &Form,
    k_max: u32,
    face_limit: usize,
) -> posicert_core::Result<(Outcome, i32)> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroForm);
    }
    if p.nvars() != q.nvars() {
        return Err(Error::NvarsMismatch {
            left: p.nvars(),
            right: q.nvars(),
        });
    }
    let n = p.nvars();
    let logp = p.support();
    let logq = q.support();
    let mut out = Vec::new();
    let closed_form = logp.is_dilated_simplex() && logq.is_dilated_simplex();
    if closed_form {
        for sf in simplex_faces(n, p.degree()) {
            if sf.zeroed.len() == n {
                continue;
            }
            let strata = closed_form_strata(n, p.degree(), q.degree(), &sf.zeroed)?
                .into_iter()
                .map(|s| StratumEntry {
                    beta: Some(s.beta),
                    stratum: s.stratum,
                })
                .collect();
            out.push(FaceStrata {
                improper: sf.zeroed.is_empty(),
                face: sf.face,
                strata,
            });
        }
    } else {
        let bounds = StratumBounds { k_max };
        for face in enumerate_relative_faces_with_limit(&logp, face_limit)? {
            if face.points.is_empty() {
                continue;
            }
            let strata = enumerate_strata_bounded(&logq, &logp, &face.points, bounds)?
                .into_iter()
                .map(|stratum| StratumEntry {
                    beta: None,
                    stratum,
                })
                .collect();
            out.push(FaceStrata {
                improper: face.points.len() == logp.len(),
                face,
                strata,
            });
        }
    }
    Ok((
        Outcome::Strata(StrataOutcome {
            closed_form,
            faces: out,
        }),
        EXIT_OK,
    ))
}

/// Re-checks the outcome from the printed inputs through the independent
/// expansion path.
fn recheck(outcome: &Outcome, inputs: &Inputs) -> Result<(), String> {
    let read = |text: &Option<String>| -> Result<Option<Form>, String> {
        text.as_ref()
            .map(|t| parse(t, inputs.nvars).map_err(|e| e.to_string()))
            .transpose()
    };
    let p = read(&inputs.p)?;
    let q = read(&inputs.q)?;
    let bad = |e: verify::VerificationError| e.to_string();
    match outcome {
        Outcome::Expand(e) => {
            let p = p.expect("expand has p");
            let one = Form::constant(p.nvars(), posicert_core::Rational::from_integer(1.into()));
            let dense = verify::expand_power_times(&p, inputs.m.unwrap_or(0), &one).map_err(bad)?;
            if dense != verify::DenseForm::from_form(&e.power).map_err(bad)? {
                return Err("expansion disagrees with the dense product".into());
            }
            Ok(())
        }
        Outcome::Faces(f) => {
            let logp = p.expect("faces has p").support_points();
            for face in &f.faces {
                match &face.witness {
                    Some(w) if w.certifies(&logp, &face.points) => {}
                    _ => return Err("a face witness does not certify its face".into()),
                }
            }
            Ok(())
        }
        Outcome::Strata(s) => {
            let p = p.expect("strata has p");
            let q = q.expect("strata has q");
            let logp = p.support();
            let logq = q.support();
            for fs in &s.faces {
                for entry in &fs.strata {
                    if let Some(v) = &entry.stratum.violation {
                        if !is_violation(&entry.stratum.points, &logq, &logp, &fs.face.points, v) {
                            return Err("a dominance violation does not re-check".into());
                        }
                    }
                }
            }
            Ok(())
        }
        Outcome::Polya(o) => o.verify(&q.expect("polya has q")).map_err(bad),
        Outcome::Power(PowerSearch::Found { m }) => {
            let strict = inputs.mode == Some(CoefficientMode::Strict);
            verify::check_power(&p.expect("p"), &q.expect("q"), *m, strict).map_err(bad)
        }
        Outcome::Power(PowerSearch::ProvablyNever { refutation }) => {
            let q = q.expect("q");
            let v = verify::DenseForm::from_form(&q)
                .and_then(|d| d.eval(&refutation.point))
                .map_err(bad)?;
            if v != refutation.value {
                return Err("refutation value does not re-check".into());
            }
            Ok(())
        }
        Outcome::Certify(CertifyOutcome::Certified { certificate }) => {
            if Some(certificate.p.to_string()) != inputs.p
                || Some(certificate.q.to_string()) != inputs.q
            {
                return Err("certificate is for different forms".into());
            }
            certificate.verify().map_err(bad)
        }
        Outcome::Certify(CertifyOutcome::Refuted {
            input, refutation, ..
        }) => {
            let target = match input {
                posicert_core::positivity::RefutedInput::P => p.expect("p"),
                posicert_core::positivity::RefutedInput::Q => q.expect("q"),
            };
            let v = verify::DenseForm::from_form(&target)
                .and_then(|d| d.eval(&refutation.point))
                .map_err(bad)?;
            if v != refutation.value {
                return Err("refutation value does not re-check".into());
            }
            Ok(())
        }
        Outcome::Handelman(v) => v.verify(&p.expect("p"), &q.expect("q")).map_err(bad),
        Outcome::Power(PowerSearch::NotFound { .. })
        | Outcome::Certify(CertifyOutcome::Inconclusive { .. })
        | Outcome::BudgetExceeded { .. } => Ok(()),
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Where `--output` points, if the command has one.
pub fn output_path(command: &Command) -> Option<&Path> {
    let common = match command {
        Command::Expand(a) => &a.common,
        Command::Faces(a) => &a.common,
        Command::Strata(a) => &a.common,
        Command::Polya(a) => &a.common,
        Command::Power(a) => &a.common,
        Command::Certify(a) => &a.common,
        Command::Handelman(a) => &a.common,
    };
    common.output.as_deref()
}
