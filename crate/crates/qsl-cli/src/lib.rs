//! Command-line front end: argument handling, input parsing and output.

pub mod report;
pub mod source;

use std::collections::BTreeMap;
use std::io::IsTerminal;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use qsl_core::classify::{classify, consistency_check, representative, ClassifyError, ConfigLabel};
use qsl_core::invlines::extract_lines;
use qsl_core::polyring::rational::{parse_rational, Rational};
use qsl_core::system::{apply_affine, AffineTransform, QuadraticSystem, Validity};
use qsl_core::verify::{cross_validate, oracle_lines, perturbation_check, PerturbError};

use report::Style;
pub use source::{coeff_list, parse_system, print_poly, SystemSource};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qsl", version, about = "Invariant straight lines of planar quadratic systems")]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SystemArgs {
    /// Right-hand side of x' (e.g. "x^2 - 1").
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Right-hand side of y'.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// a00,a10,a01,a20,a11,a02,b00,b10,b01,b20,b11,b02 (a11, b11 are half the xy coefficients).
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full pipeline: label, evidence, lines and consistency.
    Classify {
        #[command(flatten)]
        system: SystemArgs,
        /// File with one JSON system per line.
        #[arg(long)]
        batch: Option<PathBuf>,
        /// Worker threads for --batch.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Lines from the E-polynomials, checked against the oracle.
    Lines {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// All named comitants with their metadata.
    Comitants {
        #[command(flatten)]
        system: SystemArgs,
        /// Verify degrees and weights on this system.
        #[arg(long)]
        check: bool,
    },
    /// Orbit representative of a configuration.
    Rep {
        #[arg(long)]
        label: String,
        /// name=value, e.g. g=1/2.
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Printed perturbation of a configuration against the oracle.
    Perturb {
        #[arg(long)]
        label: String,
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(long, default_value = "1/7", allow_hyphen_values = true)]
        eps: String,
    },
    /// Image of a system under x~ = M(x - B), t~ = timescale * t.
    Transform {
        #[command(flatten)]
        system: SystemArgs,
        /// m11,m12,m21,m22,b1,b2
        #[arg(long, allow_hyphen_values = true)]
        affine: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        timescale: String,
    },
    /// Brute-force invariant lines only.
    Oracle {
        #[command(flatten)]
        system: SystemArgs,
    },
}

/// Output of one command: text and JSON forms, plus a failure to report after printing.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub failure: Option<CliError>,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            failure: None,
        }
    }
}

pub fn read_system(a: &SystemArgs) -> Result<QuadraticSystem, CliError> {
    let src = match (&a.p, &a.q, &a.coeffs) {
        (Some(p), Some(q), None) => SystemSource::Text {
            p: p.clone(),
            q: q.clone(),
        },
        (None, None, Some(c)) => coeff_list(c),
        _ => return Err(CliError::Usage("give either --p and --q, or --coeffs".into())),
    };
    parse_system(&src)
}

fn rational_arg(what: &str, t: &str) -> Result<Rational, CliError> {
    parse_rational(t.trim()).ok_or_else(|| CliError::Parse(format!("{what}: '{t}' is not a rational")))
}

fn params_arg(list: &[String]) -> Result<BTreeMap<String, Rational>, CliError> {
    let mut out = BTreeMap::new();
    for p in list {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter '{p}' is not name=value")))?;
        out.insert(k.trim().to_string(), rational_arg(k, v)?);
    }
    Ok(out)
}

fn label_arg(t: &str) -> Result<ConfigLabel, CliError> {
    let l: ConfigLabel = t.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    if !l.is_config() {
        return Err(CliError::Usage(format!("{l} is not a configuration")));
    }
    Ok(l)
}

fn require_valid(s: &QuadraticSystem) -> Result<(), CliError> {
    match s.validate() {
        Validity::Ok => Ok(()),
        Validity::Degenerate => Err(CliError::Degenerate(format!(
            "degenerate system (p and q share a factor): {s}"
        ))),
        Validity::NotQuadratic => Err(CliError::Degenerate(format!("system is not quadratic: {s}"))),
    }
}

pub fn classify_system(s: &QuadraticSystem, st: Style) -> Result<Output, CliError> {
    require_valid(s)?;
    let (label, trace) = classify(s).map_err(|e| match e {
        ClassifyError::ZeroC2 => CliError::Degenerate(e.to_string()),
        e => CliError::Verification(e.to_string()),
    })?;
    let cfg = extract_lines(s).map_err(|e| CliError::Degenerate(e.to_string()))?;
    let cons = label.is_config().then(|| consistency_check(s, label, &cfg));
    let failure = cons
        .as_ref()
        .filter(|c| !c.ok())
        .map(|c| CliError::Verification(c.diagnostics.join("; ")));
    Ok(Output {
        text: report::classify_text(st, label, &trace, &cfg, cons.as_ref()),
        json: report::classify_json(label, &trace, &cfg, cons.as_ref()),
        failure,
    })
}

fn lines_cmd(s: &QuadraticSystem, st: Style) -> Result<Output, CliError> {
    require_valid(s)?;
    let cfg = extract_lines(s).map_err(|e| CliError::Degenerate(e.to_string()))?;
    let cross = cross_validate(s);
    let mut text = format!("M_IL = {}, N_C = {}, N_R = {}, deg gcd = {}\n", cfg.m_il, cfg.n_c, cfg.n_r, cfg.gcd_degree);
    for l in &cfg.lines {
        text += &format!("  {}\n", report::line_text(l));
    }
    for p in &cfg.singular_annotations {
        text += &format!("  singular point ({}, {}) on line {} of multiplicity {}\n", p.x, p.y, p.line, p.multiplicity);
    }
    text += &format!("oracle cross-check: {}\n", st.verdict(cross.ok()));
    for n in cross.necessity.iter().chain(&cross.errors) {
        text += &format!("  {n}\n");
    }
    let failure = (!cross.ok()).then(|| CliError::Verification("pipeline and oracle disagree".into()));
    Ok(Output {
        json: report::lines_json(&cfg, &cross),
        text,
        failure,
    })
}

fn oracle_cmd(s: &QuadraticSystem) -> Result<Output, CliError> {
    require_valid(s)?;
    let lines = oracle_lines(s);
    let mut text = format!("{} affine invariant line(s)\n", lines.len());
    for l in &lines {
        text += &format!("  {}\n", report::line_text(l));
    }
    Ok(Output::ok(text, report::oracle_json(&lines)))
}

fn comitants_cmd(s: &QuadraticSystem, check: bool, st: Style) -> Result<Output, CliError> {
    let (json, ok) = report::comitants_json(s, check);
    let mut text = String::new();
    for c in json["comitants"].as_array().unwrap() {
        text += &format!(
            "{} = {}  (deg_a {}, deg_xy {}, weight {}, valid {})",
            st.bold(c["name"].as_str().unwrap()),
            c["value"].as_str().unwrap(),
            c["deg_a"],
            c["deg_xy"],
            c["weight"],
            c["validity"].as_str().unwrap()
        );
        if check {
            text += &format!(" check {}", st.verdict(c["check"]["passed"].as_bool().unwrap()));
        }
        text.push('\n');
    }
    let failure = (!ok).then(|| CliError::Verification("metadata check failed".into()));
    Ok(Output { text, json, failure })
}

fn system_output(s: &QuadraticSystem, label: Option<ConfigLabel>) -> Output {
    let mut json = report::system_json(s);
    if let Some(l) = label {
        json["label"] = Value::from(l.to_string());
    }
    let text = format!("p = {}\nq = {}\n", print_poly(&s.p()), print_poly(&s.q()));
    Output::ok(text, json)
}

fn perturb_cmd(label: &str, params: &[String], eps: &str, st: Style) -> Result<Output, CliError> {
    let label = label_arg(label)?;
    let params = params_arg(params)?;
    let eps = rational_arg("eps", eps)?;
    let r = perturbation_check(label, &params, &eps).map_err(|e| match e {
        PerturbError::Degenerate(_) => CliError::Degenerate(e.to_string()),
        e => CliError::Usage(e.to_string()),
    })?;
    let mut text = format!(
        "{label} at e = {}: {} expected, {} found: {}\n",
        qsl_core::polyring::rational::fmt_rational(&eps),
        r.expected.len(),
        r.found.len(),
        st.verdict(r.ok())
    );
    for d in &r.limit_diagnostics {
        text += &format!("  {d}\n");
    }
    if !r.missing.is_empty() || !r.extra.is_empty() {
        text += &format!("  {} listed line(s) not found, {} extra\n", r.missing.len(), r.extra.len());
    }
    let failure = (!r.ok()).then(|| CliError::Verification(format!("{label}: perturbation mismatch")));
    Ok(Output {
        json: report::perturb_json(&r),
        text,
        failure,
    })
}

fn transform_cmd(s: &QuadraticSystem, affine: &str, timescale: &str) -> Result<Output, CliError> {
    let parts: Vec<Rational> = affine
        .split(',')
        .map(|t| rational_arg("affine", t))
        .collect::<Result<_, _>>()?;
    if parts.len() != 6 {
        return Err(CliError::Usage("--affine takes m11,m12,m21,m22,b1,b2".into()));
    }
    let t = rational_arg("timescale", timescale)?;
    let g = AffineTransform::new(
        [[parts[0].clone(), parts[1].clone()], [parts[2].clone(), parts[3].clone()]],
        [parts[4].clone(), parts[5].clone()],
        t,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(system_output(&apply_affine(s, &g), None))
}

/// One batch line: a JSON system source.
fn batch_item(line: &str, st: Style) -> Result<Output, CliError> {
    let src: SystemSource =
        serde_json::from_str(line).map_err(|e| CliError::Parse(format!("batch entry: {e}")))?;
    classify_system(&parse_system(&src)?, st)
}

fn batch(path: &PathBuf, jobs: usize, st: Style, as_json: bool) -> Result<(String, Option<CliError>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<Result<Output, CliError>> =
        pool.install(|| lines.par_iter().map(|l| batch_item(l, st)).collect());
    let mut out = String::new();
    let mut first_failure = None;
    for (i, r) in results.into_iter().enumerate() {
        let (body, failure) = match r {
            Ok(o) => (if as_json { o.json.to_string() } else { o.text }, o.failure),
            Err(e) => {
                let body = if as_json {
                    json!({ "error": e.to_string(), "exit_code": e.exit_code() }).to_string()
                } else {
                    format!("error: {e}\n")
                };
                (body, Some(e))
            }
        };
        if as_json {
            out += &body;
            out.push('\n');
        } else {
            out += &format!("# input {}\n{body}", i + 1);
        }
        if first_failure.is_none() {
            first_failure = failure;
        }
    }
    Ok((out, first_failure))
}

fn style_from_env() -> Style {
    let mode = std::env::var("QSL_COLOR").unwrap_or_else(|_| "auto".into());
    let color = match mode.as_str() {
        "never" => false,
        "always" => true,
        _ => std::io::stdout().is_terminal(),
    };
    Style { color }
}

/// Runs a parsed command; returns stdout text and the error to report, if any.
pub fn execute(cli: &Cli, st: Style) -> (String, Option<CliError>) {
    let render = |o: Result<Output, CliError>| match o {
        Ok(o) => {
            let body = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&o.json).unwrap())
            } else {
                o.text
            };
            (body, o.failure)
        }
        Err(e) => (String::new(), Some(e)),
    };
    match &cli.command {
        Command::Classify { system, batch: Some(path), jobs } => {
            if system.p.is_some() || system.q.is_some() || system.coeffs.is_some() {
                return (String::new(), Some(CliError::Usage("--batch excludes --p/--q/--coeffs".into())));
            }
            match batch(path, *jobs, st, cli.json) {
                Ok(r) => r,
                Err(e) => (String::new(), Some(e)),
            }
        }
        Command::Classify { system, .. } => render(read_system(system).and_then(|s| classify_system(&s, st))),
        Command::Lines { system } => render(read_system(system).and_then(|s| lines_cmd(&s, st))),
        Command::Oracle { system } => render(read_system(system).and_then(|s| oracle_cmd(&s))),
        Command::Comitants { system, check } => {
            render(read_system(system).and_then(|s| comitants_cmd(&s, *check, st)))
        }
        Command::Rep { label, params } => render((|| {
            let l = label_arg(label)?;
            let s = representative(l, &params_arg(params)?).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(system_output(&s, Some(l)))
        })()),
        Command::Perturb { label, params, eps } => render(perturb_cmd(label, params, eps, st)),
        Command::Transform { system, affine, timescale } => {
            render(read_system(system).and_then(|s| transform_cmd(&s, affine, timescale)))
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (out, err) = execute(&cli, style_from_env());
    print!("{out}");
    match err {
        Some(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        None => 0,
    }
}
