//! `mostowkit` command line: decompose, bounds, validate, sweep.
//!
//! Exit codes: 0 ok, 2 usage or parse error, 3 mathematical precondition
//! failure, 4 bound violation.

mod io;

pub use io::{
    parse_matrix_file, parse_report, render_matrix_file, render_report, ErrorInfo, MatrixFile, Meta, Report,
    ReportKind, Tolerances,
};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{bipolar_bounds_for, mostow_bounds_for};
use crate::decompose::{bipolar, mostow, unitary_split_spec, BranchSpec};
use crate::error::Error;
use crate::matcore::{classify, tol, ComplexMatrix, NormKind};
use crate::validate::{linspace, run_trials, zn_sweep};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mostowkit", version, about = "Bipolar matrix decompositions and their perturbation bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Mostow,
    Unitary,
    Bipolar,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factor a matrix.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// auto, principal, or an angle in [-pi, 0).
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        branch_alpha: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mostow and bipolar perturbation bounds.
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "spectral")]
        norm: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random perturbation trials against the bounds.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-5)]
        eps_min: f64,
        #[arg(long, default_value = "frobenius")]
        norm: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// f_n and g_n of the diagonal family Z_n(t) as CSV.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command, already mapped to its exit code.
struct Failure {
    code: i32,
    message: String,
    report: Option<Box<Report>>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into(), report: None }
    }

    fn math(kind: ReportKind, meta: Meta, e: &Error) -> Self {
        let report = Report {
            kind,
            meta,
            payload: Value::Null,
            error: Some(ErrorInfo { code: e.code().to_string(), message: e.to_string() }),
        };
        Failure { code: EXIT_MATH, message: e.to_string(), report: Some(Box::new(report)) }
    }
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(m)).expect("matrix serializes")
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_matrix_file(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse_norm(s: &str) -> Result<NormKind, Failure> {
    s.parse().map_err(|e: Error| Failure::usage(e.to_string()))
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => writeln!(stdout, "{text}").map_err(|e| Failure::usage(e.to_string())),
    }
}

/// Rejects factors whose structural residuals exceed the decomposition tolerance.
fn check_invariants(checks: &[(&str, f64)]) -> Result<(), Error> {
    for (what, residual) in checks {
        if *residual > tol::DEC {
            return Err(Error::InvalidArgument(format!("{what} residual {residual:e} exceeds tolerance")));
        }
    }
    Ok(())
}

fn residuals(m: &ComplexMatrix) -> crate::matcore::ClassResiduals {
    classify(m).expect("square factor").residuals
}

fn decompose(z: &ComplexMatrix, kind: Kind, spec: BranchSpec, meta: &mut Meta) -> Result<Value, Error> {
    match kind {
        Kind::Mostow => {
            let f = mostow(z)?;
            let (w, p1, p2) = (residuals(&f.w), residuals(&f.p1), residuals(&f.p2));
            check_invariants(&[
                ("W unitary", w.unitary),
                ("P1 circular", p1.circular),
                ("P1 positive definite", p1.positive_definite),
                ("P2 real", p2.real),
                ("P2 positive definite", p2.positive_definite),
            ])?;
            Ok(json!({
                "w": matrix_json(&f.w), "k": matrix_json(&f.k), "s": matrix_json(&f.s),
                "p1": matrix_json(&f.p1), "p2": matrix_json(&f.p2),
            }))
        }
        Kind::Unitary => {
            let s = unitary_split_spec(z, spec)?;
            let (w1, w2) = (residuals(&s.w1), residuals(&s.w2));
            check_invariants(&[
                ("W1 real", w1.real),
                ("W1 orthogonal", w1.unitary),
                ("W2 symmetric", w2.symmetric),
                ("W2 unitary", w2.unitary),
            ])?;
            meta.branch = Some(serde_json::to_value(s.branches).expect("branches serialize"));
            Ok(json!({
                "w1": matrix_json(&s.w1), "w2": matrix_json(&s.w2),
                "l": matrix_json(&s.l), "t": matrix_json(&s.t),
                "branches": s.branches,
            }))
        }
        Kind::Bipolar => {
            let f = bipolar(z, spec)?;
            let residual = crate::decompose::relative_residual(z, &f.reconstruct());
            check_invariants(&[("reconstruction", residual)])?;
            meta.branch = Some(serde_json::to_value(f.branches).expect("branches serialize"));
            Ok(json!({
                "l": matrix_json(&f.l), "t": matrix_json(&f.t),
                "k": matrix_json(&f.k), "s": matrix_json(&f.s),
                "w": matrix_json(&f.mostow.w),
                "branches": f.branches,
                "reconstruction_residual": residual,
            }))
        }
    }
}

fn run_command(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Decompose { input, kind, branch_alpha, out } => {
            let z = read_matrix(&input)?;
            let spec: BranchSpec = branch_alpha.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
            let mut meta = Meta::new();
            meta.branch = Some(Value::String(branch_alpha));
            let payload = decompose(&z, kind, spec, &mut meta)
                .map_err(|e| Failure::math(ReportKind::Decomposition, meta.clone(), &e))?;
            let report = Report { kind: ReportKind::Decomposition, meta, payload, error: None };
            emit(&render_report(&report), out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Bounds { input, norm, out } => {
            let z = read_matrix(&input)?;
            let kind = parse_norm(&norm)?;
            let mut meta = Meta::new();
            meta.norm_kind = Some(kind);
            let result = bipolar(&z, BranchSpec::Auto).and_then(|f| {
                let m = mostow_bounds_for(&z, &f.mostow, kind)?;
                let b = bipolar_bounds_for(&z, &f, kind)?;
                Ok((f.branches, json!({ "mostow": m, "bipolar": b })))
            });
            let (branches, payload) = result.map_err(|e| Failure::math(ReportKind::Bounds, meta.clone(), &e))?;
            meta.branch = Some(serde_json::to_value(branches).expect("branches serialize"));
            let report = Report { kind: ReportKind::Bounds, meta, payload, error: None };
            emit(&render_report(&report), out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Validate { input, trials, seed, eps_min, norm, out } => {
            let z = read_matrix(&input)?;
            let kind = parse_norm(&norm)?;
            if !(eps_min > 0.0 && eps_min <= 1e-2) {
                return Err(Failure::usage(format!("--eps-min {eps_min} outside (0, 1e-2]")));
            }
            let epsilons: Vec<f64> = (2..)
                .map(|k| 10f64.powi(-k))
                .take_while(|&e| e >= eps_min * (1.0 - 1e-12))
                .collect();
            let mut meta = Meta::new();
            meta.norm_kind = Some(kind);
            meta.seed = Some(seed);
            let results = run_trials(&z, seed, trials, kind, &epsilons);
            let mut records = Vec::new();
            let mut violations = Vec::new();
            let mut worst: Option<f64> = None;
            for r in results {
                let t = r.map_err(|e| Failure::math(ReportKind::Trial, meta.clone(), &e))?;
                if let Some(row) = t.decisive_row() {
                    let w = row.factors.iter().map(|f| f.ratio).fold(0.0, f64::max);
                    worst = Some(worst.map_or(w, |x| x.max(w)));
                } else {
                    violations.push(json!({ "seed": t.seed, "factor": null, "epsilon": null, "ratio": null }));
                }
                for (factor, epsilon, ratio) in t.violations() {
                    violations.push(json!({ "seed": t.seed, "factor": factor, "epsilon": epsilon, "ratio": ratio }));
                }
                meta.branch = Some(serde_json::to_value(t.branches).expect("branches serialize"));
                records.push(t);
            }
            let failed = records.iter().filter(|t| !t.passed()).count();
            let payload = json!({
                "passed": records.len() - failed,
                "failed": failed,
                "worst_ratio": worst,
                "violations": violations,
                "trials": records,
            });
            let report = Report { kind: ReportKind::Trial, meta, payload, error: None };
            emit(&render_report(&report), out.as_deref(), stdout)?;
            if failed > 0 {
                for v in &violations {
                    writeln!(stderr, "bound violation: {v}").ok();
                }
                return Ok(EXIT_VIOLATION);
            }
            Ok(EXIT_OK)
        }
        Command::Sweep { n, t_min, t_max, steps, out } => {
            if n == 0 || steps == 0 || !t_min.is_finite() || !t_max.is_finite() {
                return Err(Failure::usage("need n >= 1, steps >= 1 and finite t range"));
            }
            let rows = zn_sweep(n, &linspace(t_min, t_max, steps))
                .map_err(|e| Failure::math(ReportKind::Sweep, Meta::new(), &e))?;
            let mut csv = String::from("n,t,f_n,g_n\n");
            for r in rows {
                csv.push_str(&format!("{},{:.16e},{:.16e},{:.16e}\n", r.n, r.t, r.f_n, r.g_n));
            }
            match out {
                Some(p) => std::fs::write(&p, csv).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
                None => stdout.write_all(csv.as_bytes()).map_err(|e| Failure::usage(e.to_string()))?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                write!(stderr, "{text}").ok();
            } else {
                write!(stdout, "{text}").ok();
            }
            return code;
        }
    };
    match run_command(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            writeln!(stderr, "error: {}", f.message).ok();
            if let Some(r) = f.report {
                writeln!(stdout, "{}", render_report(&r)).ok();
            }
            f.code
        }
    }
}
