//! Command-line driver for the orf-core toolkit.
//!
//! Every subcommand is a thin wrapper: inputs are parsed, one library call is
//! made, and its result is serialized. Exit codes: 0 on success, 2 on
//! validation errors, 3 on numerical errors; failures print a JSON body
//! `{"error":{"kind":...,"message":...}}` on stderr. Output is deterministic:
//! identical inputs produce byte-identical bytes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use orf_core::{
    build_matrix, cluster_limit_points, krein_two_point, limit_point_sequence, lopez_arc,
    mass_at_infinity_check, matrix_to_csv, matrix_to_json, orf_from_measure, porf_quadrature,
    reconstruct_measure, rl_excluded_v, rl_op_mobius, rl_quadrature, rl_reconstruct_measure,
    zeros_orf, DiagParam, Direction, DiscreteMeasure, Domain, OrfError, ParamSeq, PoleSeq,
    RepKind, RepSpec, Result, ZeroRoute,
};
use serde::Deserialize;
use serde_json::{json, Value};

/// Spectral computations for orthogonal rational functions on the unit
/// circle and the extended real line.
#[derive(Parser)]
#[command(name = "orf", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract recurrence parameters from a measure JSON file.
    Params(Job),
    /// Emit a truncated matrix representation.
    Matrix(Job),
    /// Compute the zeros of the order-n basis function.
    Zeros(Job),
    /// Compute a quadrature rule from a para-orthogonal combination.
    Quad(Job),
    /// Rebuild the generating measure from parameters with a terminal value.
    Reconstruct(Job),
    /// Report spectral diagnostics for the tail of a parameter sequence.
    Diagnose(Job),
    /// Check a job config file and report every violated invariant.
    Validate {
        /// Path of the JSON config to check.
        file: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Params(_) => "params",
            Command::Matrix(_) => "matrix",
            Command::Zeros(_) => "zeros",
            Command::Quad(_) => "quad",
            Command::Reconstruct(_) => "reconstruct",
            Command::Diagnose(_) => "diagnose",
            Command::Validate { .. } => "validate",
        }
    }
}

/// Shared inputs. Complex values are written as "re,im", as "theta:t" for a
/// point of the unit circle, or as a plain real number; lists separate
/// entries with ';'.
#[derive(Args, Default)]
struct Job {
    /// Poles as a ';'-separated complex list; empty when omitted.
    #[arg(long, allow_hyphen_values = true)]
    poles: Option<String>,
    /// Recurrence parameters as a ';'-separated complex list.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// Unimodular terminal value closing the parameter sequence.
    #[arg(long, allow_hyphen_values = true)]
    terminal: Option<String>,
    /// Truncation order n.
    #[arg(long)]
    order: Option<usize>,
    /// Boundary value: v for quad, u for closed matrices.
    #[arg(long, allow_hyphen_values = true)]
    boundary: Option<String>,
    /// Domain: circle (default) or line.
    #[arg(long)]
    domain: Option<String>,
    /// Measure JSON input path (params).
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Matrix kind (matrix): CMV, CMV_ODD, CMV_EVEN, HESSENBERG, HAT_CMV,
    /// HAT_HESSENBERG, V_TRUNC, or U_TRUNC.
    #[arg(long)]
    kind: Option<String>,
    /// Zero route (zeros): V, U, or PAIR.
    #[arg(long)]
    route: Option<String>,
    /// First circle point of the two-point diagnostics (diagnose).
    #[arg(long, allow_hyphen_values = true)]
    lambda1: Option<String>,
    /// Second circle point of the two-point diagnostics (diagnose).
    #[arg(long, allow_hyphen_values = true)]
    lambda2: Option<String>,
    /// Pole limit for the arc prediction (diagnose).
    #[arg(long, allow_hyphen_values = true)]
    lopez_alpha: Option<String>,
    /// Modulus limit in [0, 1] for the arc prediction (diagnose).
    #[arg(long, allow_hyphen_values = true)]
    lopez_a: Option<f64>,
    /// Unimodular direction limit for the arc prediction (diagnose).
    #[arg(long, allow_hyphen_values = true)]
    lopez_lam: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json (default depends on the subcommand).
    #[arg(long)]
    format: Option<String>,
    /// Worker threads for future parallel kernels; accepted and validated,
    /// current kernels are sequential.
    #[arg(long)]
    threads: Option<usize>,
    /// JSON job file; its fields override the flags given here.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// On-disk job description; the same fields as the flags, complex values in
/// the same string syntax.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    command: Option<String>,
    poles: Option<String>,
    params: Option<String>,
    terminal: Option<String>,
    order: Option<usize>,
    boundary: Option<String>,
    domain: Option<String>,
    measure: Option<String>,
    kind: Option<String>,
    route: Option<String>,
    lambda1: Option<String>,
    lambda2: Option<String>,
    lopez_alpha: Option<String>,
    lopez_a: Option<f64>,
    lopez_lam: Option<String>,
    out: Option<String>,
    format: Option<String>,
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            emit_error("validation", e.to_string().trim_end());
            return ExitCode::from(2);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let (kind, code) =
                if err.is_validation() { ("validation", 2) } else { ("numerical", 3) };
            emit_error(kind, &err.to_string());
            ExitCode::from(code)
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": { "kind": kind, "message": message } }));
}

fn dispatch(command: Command) -> Result<u8> {
    let name = command.name();
    match command {
        Command::Validate { file } => return run_validate(&file),
        Command::Params(job) => {
            let job = resolve(job, name)?;
            let text = run_params(&job)?;
            write_output(&job, text)?;
        }
        Command::Matrix(job) => {
            let job = resolve(job, name)?;
            let text = run_matrix(&job)?;
            write_output(&job, text)?;
        }
        Command::Zeros(job) => {
            let job = resolve(job, name)?;
            let text = run_zeros(&job)?;
            write_output(&job, text)?;
        }
        Command::Quad(job) => {
            let job = resolve(job, name)?;
            let text = run_quad(&job)?;
            write_output(&job, text)?;
        }
        Command::Reconstruct(job) => {
            let job = resolve(job, name)?;
            let text = run_reconstruct(&job)?;
            write_output(&job, text)?;
        }
        Command::Diagnose(job) => {
            let job = resolve(job, name)?;
            let text = run_diagnose(&job)?;
            write_output(&job, text)?;
        }
    }
    Ok(0)
}

// flag parsing

fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("theta:") {
        let theta: f64 = rest
            .trim()
            .parse()
            .map_err(|e| OrfError::Invalid(format!("angle in {t:?}: {e}")))?;
        return Ok(Complex64::from_polar(1.0, theta));
    }
    if let Some((re, im)) = t.split_once(',') {
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|e| OrfError::Invalid(format!("real part of {t:?}: {e}")))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|e| OrfError::Invalid(format!("imaginary part of {t:?}: {e}")))?;
        return Ok(Complex64::new(re, im));
    }
    let re: f64 = t
        .parse()
        .map_err(|e| OrfError::Invalid(format!("complex value {t:?}: {e}")))?;
    Ok(Complex64::new(re, 0.0))
}

fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_complex).collect()
}

fn parse_domain(job: &Job) -> Result<Domain> {
    match job.domain.as_deref() {
        None => Ok(Domain::Circle),
        Some(s) => match s.trim().to_ascii_lowercase().as_str() {
            "circle" => Ok(Domain::Circle),
            "line" => Ok(Domain::Line),
            other => Err(OrfError::Invalid(format!(
                "unknown domain '{other}' (expected circle or line)"
            ))),
        },
    }
}

fn parse_format(job: &Job, default: Format) -> Result<Format> {
    match job.format.as_deref() {
        None => Ok(default),
        Some(s) => match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => {
                Err(OrfError::Invalid(format!("unknown format '{other}' (expected csv or json)")))
            }
        },
    }
}

fn parse_poles(job: &Job, domain: Domain) -> Result<PoleSeq> {
    let vals = match &job.poles {
        Some(s) => parse_complex_list(s)?,
        None => Vec::new(),
    };
    match domain {
        Domain::Circle => PoleSeq::circle(vals),
        Domain::Line => PoleSeq::line(vals),
    }
}

fn parse_params(job: &Job) -> Result<ParamSeq> {
    let vals = match &job.params {
        Some(s) => parse_complex_list(s)?,
        None => return Err(OrfError::Invalid("this command needs --params".into())),
    };
    match &job.terminal {
        Some(s) => ParamSeq::with_terminal(vals, parse_complex(s)?),
        None => ParamSeq::new(vals),
    }
}

fn require_order(job: &Job) -> Result<usize> {
    job.order.ok_or_else(|| OrfError::Invalid("this command needs --order".into()))
}

fn require_unimodular(name: &str, z: Complex64) -> Result<Complex64> {
    if (z.norm() - 1.0).abs() > 1e-10 {
        return Err(OrfError::Invalid(format!(
            "{name} has modulus {:.17}, must lie on the unit circle",
            z.norm()
        )));
    }
    Ok(z)
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| OrfError::Invalid(format!("cannot read {}: {e}", path.display())))
}

/// Loads the config file when given and lets its fields override the flags.
fn resolve(mut job: Job, command: &str) -> Result<Job> {
    if let Some(path) = job.config.clone() {
        let text = read_file(&path)?;
        let file: JobFile = serde_json::from_str(&text)
            .map_err(|e| OrfError::Invalid(format!("config {}: {e}", path.display())))?;
        if let Some(named) = &file.command {
            if named != command {
                return Err(OrfError::Invalid(format!(
                    "config names command '{named}' but '{command}' was invoked"
                )));
            }
        }
        let JobFile {
            command: _,
            poles,
            params,
            terminal,
            order,
            boundary,
            domain,
            measure,
            kind,
            route,
            lambda1,
            lambda2,
            lopez_alpha,
            lopez_a,
            lopez_lam,
            out,
            format,
            threads,
        } = file;
        job.poles = poles.or(job.poles);
        job.params = params.or(job.params);
        job.terminal = terminal.or(job.terminal);
        job.order = order.or(job.order);
        job.boundary = boundary.or(job.boundary);
        job.domain = domain.or(job.domain);
        job.measure = measure.map(PathBuf::from).or(job.measure);
        job.kind = kind.or(job.kind);
        job.route = route.or(job.route);
        job.lambda1 = lambda1.or(job.lambda1);
        job.lambda2 = lambda2.or(job.lambda2);
        job.lopez_alpha = lopez_alpha.or(job.lopez_alpha);
        job.lopez_a = lopez_a.or(job.lopez_a);
        job.lopez_lam = lopez_lam.or(job.lopez_lam);
        job.out = out.map(PathBuf::from).or(job.out);
        job.format = format.or(job.format);
        job.threads = threads.or(job.threads);
    }
    if let Some(t) = job.threads {
        if t == 0 {
            return Err(OrfError::Invalid("--threads must be at least 1".into()));
        }
    }
    Ok(job)
}

fn write_output(job: &Job, mut text: String) -> Result<()> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &job.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| OrfError::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cjson(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

// subcommands

fn run_params(job: &Job) -> Result<String> {
    let path = job
        .measure
        .as_ref()
        .ok_or_else(|| OrfError::Invalid("params needs --measure".into()))?;
    let mu = DiscreteMeasure::from_json(&read_file(path)?)?;
    if job.domain.is_some() && parse_domain(job)? != mu.domain() {
        return Err(OrfError::Invalid("--domain disagrees with the measure file".into()));
    }
    let poles = parse_poles(job, mu.domain())?;
    let order = require_order(job)?;
    let res = orf_from_measure(&mu, &poles, order)?;
    match parse_format(job, Format::Json)? {
        Format::Json => {
            let a: Vec<Value> = res.a.values().iter().map(|&v| cjson(v)).collect();
            let terminal = res.a.terminal().map(cjson).unwrap_or(Value::Null);
            Ok(json!({ "a": a, "terminal": terminal }).to_string())
        }
        Format::Csv => {
            let mut out = String::from("index,re,im\n");
            for (k, v) in res.a.values().iter().enumerate() {
                out.push_str(&format!("{},{:?},{:?}\n", k + 1, v.re, v.im));
            }
            if let Some(u) = res.a.terminal() {
                out.push_str(&format!("terminal,{:?},{:?}\n", u.re, u.im));
            }
            Ok(out)
        }
    }
}

fn run_matrix(job: &Job) -> Result<String> {
    let domain = parse_domain(job)?;
    let a = parse_params(job)?;
    let poles = parse_poles(job, domain)?;
    let n = require_order(job)?;
    let kind = RepKind::from_str(job.kind.as_deref().unwrap_or("cmv"))?;
    let boundary = match &job.boundary {
        Some(s) => Some(require_unimodular("--boundary", parse_complex(s)?)?),
        None => None,
    };
    let (m, label) = match domain {
        Domain::Circle => (build_matrix(&a, &poles, &RepSpec { kind, n, boundary })?, kind.as_str()),
        Domain::Line => {
            if kind != RepKind::Cmv {
                return Err(OrfError::Invalid(
                    "line matrices support only kind CMV (its self-adjoint image)".into(),
                ));
            }
            let cmv = build_matrix(&a, &poles, &RepSpec { kind, n, boundary })?;
            let diag = DiagParam::from_poles(&poles, n)?;
            (rl_op_mobius(&diag, &cmv, Direction::Inverse)?, "LINE_SELF_ADJOINT")
        }
    };
    match parse_format(job, Format::Csv)? {
        Format::Csv => Ok(matrix_to_csv(&m)),
        Format::Json => Ok(matrix_to_json(&m, label)),
    }
}

fn run_zeros(job: &Job) -> Result<String> {
    let domain = parse_domain(job)?;
    let a = parse_params(job)?;
    let poles = parse_poles(job, domain)?;
    let n = require_order(job)?;
    let route = ZeroRoute::from_str(job.route.as_deref().unwrap_or("u"))?;
    let zeros = zeros_orf(&a, &poles, n, route)?;
    match parse_format(job, Format::Csv)? {
        Format::Csv => {
            let mut out = String::from("zero_re,zero_im\n");
            for z in &zeros {
                out.push_str(&format!("{:?},{:?}\n", z.re, z.im));
            }
            Ok(out)
        }
        Format::Json => {
            let list: Vec<Value> = zeros.iter().map(|&z| cjson(z)).collect();
            Ok(json!({ "zeros": list }).to_string())
        }
    }
}

fn run_quad(job: &Job) -> Result<String> {
    let domain = parse_domain(job)?;
    let a = parse_params(job)?;
    let poles = parse_poles(job, domain)?;
    let n = require_order(job)?;
    let v = match &job.boundary {
        Some(s) => parse_complex(s)?,
        None => return Err(OrfError::Invalid("quad needs --boundary (the parameter v)".into())),
    };
    let quad = match domain {
        Domain::Circle => porf_quadrature(&a, &poles, n, v)?,
        Domain::Line => rl_quadrature(&a, &poles, n, v)?,
    };
    match parse_format(job, Format::Csv)? {
        Format::Csv => Ok(quad.to_csv()),
        Format::Json => Ok(quad.to_json()),
    }
}

fn run_reconstruct(job: &Job) -> Result<String> {
    let domain = parse_domain(job)?;
    let a = parse_params(job)?;
    if a.terminal().is_none() {
        return Err(OrfError::Invalid("reconstruct needs --terminal".into()));
    }
    let poles = parse_poles(job, domain)?;
    let mu = match domain {
        Domain::Circle => reconstruct_measure(&a, &poles)?,
        Domain::Line => rl_reconstruct_measure(&a, &poles)?,
    };
    match parse_format(job, Format::Json)? {
        Format::Json => Ok(mu.to_json()),
        Format::Csv => {
            let mut out = String::from("point_re,point_im,infinity,weight\n");
            for (p, w) in mu.points().iter().zip(mu.weights()) {
                out.push_str(&format!("{:?},{:?},{},{:?}\n", p.re, p.im, p.at_infinity, w));
            }
            Ok(out)
        }
    }
}

fn run_diagnose(job: &Job) -> Result<String> {
    if parse_format(job, Format::Json)? != Format::Json {
        return Err(OrfError::Invalid("diagnose emits JSON only".into()));
    }
    let domain = parse_domain(job)?;
    let a = parse_params(job)?;
    let poles = parse_poles(job, domain)?;
    match domain {
        Domain::Circle => {
            let w = limit_point_sequence(&a, &poles)?;
            let clusters: Vec<Value> = cluster_limit_points(&w)
                .into_iter()
                .map(|(center, count)| json!({ "center": cjson(center), "count": count }))
                .collect();
            let mut report = json!({
                "limit_points": w.iter().map(|&z| cjson(z)).collect::<Vec<Value>>(),
                "clusters": clusters,
            });
            match (&job.lambda1, &job.lambda2) {
                (Some(l1), Some(l2)) => {
                    let l1 = parse_complex(l1)?;
                    let l2 = parse_complex(l2)?;
                    let k = krein_two_point(&a, &poles, l1, l2)?;
                    report["krein"] = json!({
                        "rho_products": k.rho_products,
                        "mixed": k.mixed,
                        "kernel": k.kernel,
                    });
                }
                (None, None) => {}
                _ => {
                    return Err(OrfError::Invalid(
                        "the two-point diagnostics need both --lambda1 and --lambda2".into(),
                    ));
                }
            }
            let lopez_given =
                job.lopez_alpha.is_some() || job.lopez_a.is_some() || job.lopez_lam.is_some();
            if lopez_given {
                let (alpha, modulus, lam) = match (&job.lopez_alpha, job.lopez_a, &job.lopez_lam) {
                    (Some(al), Some(m), Some(lm)) => {
                        (parse_complex(al)?, m, parse_complex(lm)?)
                    }
                    _ => {
                        return Err(OrfError::Invalid(
                            "the arc prediction needs --lopez-alpha, --lopez-a, and --lopez-lam"
                                .into(),
                        ));
                    }
                };
                let arc = lopez_arc(alpha, modulus, lam)?;
                report["lopez"] = json!({
                    "alpha": cjson(arc.alpha),
                    "a": arc.a,
                    "lam": cjson(arc.lam),
                    "half_angle": arc.half_angle,
                    "endpoints": [cjson(arc.endpoints.0), cjson(arc.endpoints.1)],
                });
            }
            Ok(report.to_string())
        }
        Domain::Line => {
            let excluded = rl_excluded_v(&a, &poles, a.len())?;
            let mass = match a.terminal() {
                Some(_) => {
                    let report = mass_at_infinity_check(&a, a.len() + 1)?;
                    serde_json::from_str::<Value>(&report.to_json())
                        .expect("report serializes to valid JSON")
                }
                None => Value::Null,
            };
            Ok(json!({ "excluded_v": cjson(excluded), "mass_at_infinity": mass }).to_string())
        }
    }
}

// config checking

fn run_validate(path: &Path) -> Result<u8> {
    let text = read_file(path)?;
    let mut findings: Vec<(String, String)> = Vec::new();
    let file: JobFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => {
            findings.push(("config".into(), format!("not a valid job config: {e}")));
            JobFile::default()
        }
    };
    check_config(&file, &mut findings);
    let report: Vec<Value> = findings
        .iter()
        .map(|(field, message)| json!({ "field": field, "message": message }))
        .collect();
    println!("{}", json!(report));
    Ok(if report.is_empty() { 0 } else { 2 })
}

fn note(findings: &mut Vec<(String, String)>, field: &str, r: Result<()>) {
    if let Err(e) = r {
        findings.push((field.to_string(), e.to_string()));
    }
}

fn check_config(file: &JobFile, findings: &mut Vec<(String, String)>) {
    if let Some(cmd) = &file.command {
        let known = ["params", "matrix", "zeros", "quad", "reconstruct", "diagnose"];
        if !known.contains(&cmd.as_str()) {
            findings.push(("command".into(), format!("unknown command '{cmd}'")));
        }
    }
    let domain = match file.domain.as_deref() {
        None | Some("circle") => Domain::Circle,
        Some("line") => Domain::Line,
        Some(other) => {
            findings
                .push(("domain".into(), format!("unknown domain '{other}' (circle or line)")));
            Domain::Circle
        }
    };
    if let Some(s) = &file.poles {
        note(
            findings,
            "poles",
            parse_complex_list(s).and_then(|vals| {
                match domain {
                    Domain::Circle => PoleSeq::circle(vals),
                    Domain::Line => PoleSeq::line(vals),
                }
                .map(|_| ())
            }),
        );
    }
    if let Some(s) = &file.params {
        let terminal = file.terminal.as_deref().map(parse_complex).transpose();
        note(
            findings,
            "params",
            parse_complex_list(s).and_then(|vals| {
                match terminal? {
                    Some(u) => ParamSeq::with_terminal(vals, u),
                    None => ParamSeq::new(vals),
                }
                .map(|_| ())
            }),
        );
    } else if let Some(s) = &file.terminal {
        note(
            findings,
            "terminal",
            parse_complex(s).and_then(|u| require_unimodular("terminal", u)).map(|_| ()),
        );
    }
    if let Some(s) = &file.boundary {
        note(
            findings,
            "boundary",
            parse_complex(s).and_then(|v| require_unimodular("boundary", v)).map(|_| ()),
        );
    }
    for (field, value) in [("lambda1", &file.lambda1), ("lambda2", &file.lambda2)] {
        if let Some(s) = value {
            note(
                findings,
                field,
                parse_complex(s).and_then(|z| require_unimodular(field, z)).map(|_| ()),
            );
        }
    }
    if let Some(s) = &file.lopez_alpha {
        note(findings, "lopez_alpha", parse_complex(s).map(|_| ()));
    }
    if let Some(m) = file.lopez_a {
        if !(0.0..=1.0).contains(&m) {
            findings.push(("lopez_a".into(), format!("modulus limit {m} outside [0, 1]")));
        }
    }
    if let Some(s) = &file.lopez_lam {
        note(
            findings,
            "lopez_lam",
            parse_complex(s).and_then(|z| require_unimodular("lopez_lam", z)).map(|_| ()),
        );
    }
    if let Some(order) = file.order {
        if order == 0 {
            findings.push(("order".into(), "order must be at least 1".into()));
        }
    }
    if let Some(t) = file.threads {
        if t == 0 {
            findings.push(("threads".into(), "threads must be at least 1".into()));
        }
    }
    if let Some(f) = &file.format {
        if !matches!(f.as_str(), "csv" | "json") {
            findings.push(("format".into(), format!("unknown format '{f}' (csv or json)")));
        }
    }
    if let Some(path) = &file.measure {
        note(
            findings,
            "measure",
            read_file(Path::new(path))
                .and_then(|text| DiscreteMeasure::from_json(&text))
                .map(|_| ()),
        );
    }
}
