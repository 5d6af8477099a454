//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 hard failure (an exact or
//! deterministic check disagreed), 3 a Monte Carlo estimate fell outside its
//! band, 64 unparseable command line.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::exact_core::{i_mn, i_mn_closed, BigRational};
use crate::hypergeometric::check_2f1_identity;
use crate::moment_combinatorics::{i_mn_expand, mixed_moment, MultiIndex};
use crate::sampling::{mutually_consistent, sample_stream, MCEstimate, DEFAULT_SEED};
use crate::so4_orbit::{
    mc_component_product, mc_orbit_hypothesis, mc_orthogonality, pf_direction_comparison,
    scan_invariants, self_dual_direction,
};
use crate::sphere_oracle::{
    axis_moment, mc_projected_moment, quad_axis_moment, sample_sphere, sphere_volume, UnitVector,
};
use crate::vortex_gas::{compare, SweepRow, VortexParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HARD_FAIL: i32 = 2;
pub const EXIT_STATISTICAL_FAIL: i32 = 3;
pub const EXIT_BAD_FLAGS: i32 = 64;

/// Width of the Monte Carlo acceptance band, in standard errors.
pub const SIGMA_BAND: f64 = 3.0;

/// Tolerance for the per-sample orbit invariants.
pub const ORBIT_INVARIANT_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "hmoments", version, about = "Exact homogeneous moments and their numerical verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of the exact constants I(m, n), cross-checked three ways.
    Imn(ImnArgs),
    /// Exact mixed moment for the exponent vector r (normalized C = 1).
    Moment(MomentArgs),
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Vortex gas partition function, series versus closed form.
    Vortex(VortexArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Seed for every random stream.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Numerical tolerance (subcommand specific default).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImnArgs {
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub m_max: u64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    /// Exponents r1 r2 ... rn.
    #[arg(required = true, num_args = 1..)]
    pub r: Vec<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Sphere,
    Orbit,
    Hyperg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,
    /// Dimension n (sphere, hyperg).
    #[arg(long, default_value_t = 3)]
    pub n: u64,
    /// Moment order m.
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// Random directions tested for isotropy.
    #[arg(long, default_value_t = 10)]
    pub directions: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VortexArgs {
    /// Vortex numbers N (comma separated).
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    /// Sphere radius squared R^2 (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub r2: Vec<f64>,
    /// Coupling mu^2 (comma separated).
    #[arg(long, value_delimiter = ',', conflicts_with = "coupling")]
    pub mu2: Vec<f64>,
    /// Dimensionless coupling mu^2 A^2 / T, used instead of --mu2.
    #[arg(long, value_delimiter = ',')]
    pub coupling: Vec<f64>,
    /// Temperature T (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub hbar: Vec<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// One line of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    pub expected: Value,
    pub observed: Value,
    pub metric: f64,
    pub metric_kind: &'static str,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip)]
    pub statistical: bool,
}

impl Check {
    fn exact(name: impl Into<String>, expected: &BigRational, observed: &BigRational) -> Self {
        let pass = expected == observed;
        Check {
            check: name.into(),
            expected: json!(expected.to_string()),
            observed: json!(observed.to_string()),
            metric: if pass { 0.0 } else { 1.0 },
            metric_kind: "mismatch",
            threshold: 0.0,
            pass,
            statistical: false,
        }
    }

    fn abs_err(name: impl Into<String>, expected: f64, observed: f64, threshold: f64) -> Self {
        let err = (expected - observed).abs();
        Check {
            check: name.into(),
            expected: json!(expected),
            observed: json!(observed),
            metric: err,
            metric_kind: "abs_err",
            threshold,
            pass: err <= threshold,
            statistical: false,
        }
    }

    fn rel_err(name: impl Into<String>, expected: f64, observed: f64, threshold: f64) -> Self {
        let err = if expected == observed {
            0.0
        } else {
            (expected - observed).abs() / expected.abs()
        };
        Check {
            check: name.into(),
            expected: json!(expected),
            observed: json!(observed),
            metric: err,
            metric_kind: "rel_err",
            threshold,
            pass: err <= threshold,
            statistical: false,
        }
    }

    fn sigma(name: impl Into<String>, expected: f64, est: &MCEstimate) -> Self {
        let metric = est.sigma_distance(expected);
        Check {
            check: name.into(),
            expected: json!(expected),
            observed: json!({
                "mean": est.mean,
                "std_error": est.std_error,
                "n_samples": est.n_samples,
                "seed": est.seed,
            }),
            metric,
            metric_kind: "sigma",
            threshold: SIGMA_BAND,
            pass: metric <= SIGMA_BAND,
            statistical: true,
        }
    }

    fn consistency(name: impl Into<String>, estimates: &[MCEstimate]) -> Self {
        let worst = estimates
            .iter()
            .enumerate()
            .flat_map(|(i, a)| estimates[i + 1..].iter().map(move |b| a.joint_sigma_distance(b)))
            .fold(0.0, f64::max);
        Check {
            check: name.into(),
            expected: json!("mutually consistent"),
            observed: json!(estimates.iter().map(|e| e.mean).collect::<Vec<_>>()),
            metric: worst,
            metric_kind: "max_joint_sigma",
            threshold: SIGMA_BAND,
            pass: mutually_consistent(estimates, SIGMA_BAND),
            statistical: true,
        }
    }
}

/// Exit code summarizing a list of checks.
pub fn report_exit_code(checks: &[Check]) -> i32 {
    if checks.iter().any(|c| !c.pass && !c.statistical) {
        EXIT_HARD_FAIL
    } else if checks.iter().any(|c| !c.pass) {
        EXIT_STATISTICAL_FAIL
    } else {
        EXIT_OK
    }
}

/// Failure of a subcommand: exit code plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn hard(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_HARD_FAIL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Domain(_) => Failure::usage(err.to_string()),
            other => Failure::hard(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::hard(format!("i/o error: {err}"))
    }
}

/// Rendered output and the exit code it implies.
pub struct Output {
    pub body: String,
    pub code: i32,
}

pub fn cmd_imn(args: &ImnArgs) -> Result<Output, Failure> {
    let mut cells = Vec::new();
    let mut mismatches = Vec::new();
    for m in 0..=args.m_max {
        for n in 1..=args.n_max {
            let value = i_mn(m, n)?;
            let closed = i_mn_closed(m, n)?;
            let expanded = i_mn_expand(m, n)?;
            if closed != value || expanded != value {
                mismatches.push(format!(
                    "I({m}, {n}): gamma {value}, closed {closed}, expansion {expanded}"
                ));
            }
            cells.push((m, n, value));
        }
    }
    if !mismatches.is_empty() {
        return Err(Failure::hard(format!(
            "cross-check failed:\n{}",
            mismatches.join("\n")
        )));
    }
    let body = match args.common.format {
        OutputFormat::Text => {
            let width = cells
                .iter()
                .map(|(_, _, v)| v.to_string().len())
                .max()
                .unwrap_or(1)
                .max(4);
            let mut s = format!("{:>5}", "m\\n");
            for n in 1..=args.n_max {
                s.push_str(&format!(" {n:>width$}"));
            }
            s.push('\n');
            for row in cells.chunks(args.n_max as usize) {
                s.push_str(&format!("{:>5}", row[0].0));
                for (_, _, v) in row {
                    s.push_str(&format!(" {:>width$}", v.to_string()));
                }
                s.push('\n');
            }
            s
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["m", "n", "I"]).map_err(csv_failure)?;
            for (m, n, v) in &cells {
                w.write_record([m.to_string(), n.to_string(), v.to_string()])
                    .map_err(csv_failure)?;
            }
            csv_string(w)?
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = cells
                .iter()
                .map(|(m, n, v)| json!({"m": m, "n": n, "I": v.to_string()}))
                .collect();
            json_string(&rows)?
        }
    };
    Ok(Output { body, code: EXIT_OK })
}

pub fn cmd_moment(args: &MomentArgs) -> Result<Output, Failure> {
    let r = MultiIndex::new(args.r.clone())?;
    let value = mixed_moment(&r)?;
    let body = match args.common.format {
        OutputFormat::Text => format!("{value}\n"),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "moment"]).map_err(csv_failure)?;
            let parts: Vec<String> = r.parts().iter().map(u64::to_string).collect();
            w.write_record([parts.join(" "), value.to_string()])
                .map_err(csv_failure)?;
            csv_string(w)?
        }
        OutputFormat::Json => json_string(&json!({"r": r.parts(), "moment": value.to_string()}))?,
    };
    Ok(Output { body, code: EXIT_OK })
}

fn samples(common: &CommonArgs) -> Result<usize, Failure> {
    usize::try_from(common.samples)
        .ok()
        .filter(|&s| s >= 2)
        .ok_or_else(|| Failure::usage("--samples must be at least 2 for Monte Carlo checks"))
}

fn sphere_checks(args: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let (n, m) = (args.n, args.m);
    if n < 2 {
        return Err(Failure::usage("verify sphere needs --n >= 2"));
    }
    let tol = args.common.tol.unwrap_or(1e-10);
    let seed = args.common.seed;
    let n_samples = samples(&args.common)?;
    let mut checks = Vec::new();

    let constant = i_mn(m, n)?;
    let ratio = sphere_volume(n)? / axis_moment(n, m)?;
    let observed = ratio
        .as_rational()
        .cloned()
        .ok_or_else(|| Failure::hard("volume / axis moment is not rational"))?;
    checks.push(Check::exact("sphere.volume_over_axis_moment", &constant, &observed));

    let exact_axis = axis_moment(n, m)?.to_f64();
    let quad = quad_axis_moment(n, m, tol)?;
    checks.push(Check::abs_err("sphere.quadrature_axis_moment", exact_axis, quad, tol));

    let target = 1.0 / num_traits::ToPrimitive::to_f64(&constant).unwrap_or(f64::NAN);
    let dim = n as usize;
    let m32 = u32::try_from(m).map_err(|_| Failure::usage("--m too large"))?;
    let axis = UnitVector::basis(dim, dim - 1)?;
    let est = mc_projected_moment(dim, m32, &axis, n_samples, seed)?;
    checks.push(Check::sigma("sphere.mc_axis_direction", target, &est));

    let mut direction_rng = sample_stream(seed, u64::MAX);
    let mut estimates = Vec::new();
    for k in 0..args.directions {
        let v = sample_sphere(dim, &mut direction_rng);
        let est = mc_projected_moment(dim, m32, &v, n_samples, seed.wrapping_add(1 + k as u64))?;
        checks.push(Check::sigma(format!("sphere.mc_random_direction[{k}]"), target, &est));
        estimates.push(est);
    }
    if estimates.len() > 1 {
        checks.push(Check::consistency("sphere.mc_direction_independence", &estimates));
    }
    Ok(checks)
}

fn orbit_checks(args: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let seed = args.common.seed;
    let n_samples = samples(&args.common)?;
    let m = u32::try_from(args.m).map_err(|_| Failure::usage("--m too large"))?;
    let mut checks = Vec::new();

    let scan = scan_invariants(n_samples, seed);
    checks.push(Check::abs_err("orbit.max_norm_error", 0.0, scan.max_norm_error, ORBIT_INVARIANT_TOL));
    checks.push(Check::abs_err("orbit.max_abs_pfaffian", 0.0, scan.max_pfaffian, ORBIT_INVARIANT_TOL));

    checks.push(Check::sigma("orbit.mean_J12_J34", 0.0, &mc_orthogonality(n_samples, seed)?));
    checks.push(Check::sigma(
        "orbit.mean_J13_J24",
        0.0,
        &mc_component_product(1, 4, n_samples, seed.wrapping_add(1))?,
    ));

    if m <= 1 {
        let target = if m == 0 { 1.0 } else { 1.0 / 6.0 };
        let e12 = UnitVector::basis(6, 0)?;
        let est = mc_orbit_hypothesis(m, &e12, n_samples, seed.wrapping_add(2))?;
        checks.push(Check::sigma("orbit.hypothesis_pf_zero_direction", target, &est));
        let est = mc_orbit_hypothesis(m, &self_dual_direction(), n_samples, seed.wrapping_add(3))?;
        checks.push(Check::sigma("orbit.hypothesis_pf_nonzero_direction", target, &est));
    } else {
        let report = pf_direction_comparison(m, args.directions.max(2), n_samples, seed)?;
        let estimates: Vec<_> = report.pf_zero.iter().map(|d| d.estimate).collect();
        checks.push(Check::consistency("orbit.pf_zero_directions_consistent", &estimates));
        // Reported only; constancy off the Pf = 0 hypersurface is not asserted.
        let nonzero = report.pf_nonzero.estimate;
        checks.push(Check {
            check: "orbit.pf_nonzero_direction_report".into(),
            expected: Value::Null,
            observed: json!({
                "mean": nonzero.mean,
                "std_error": nonzero.std_error,
                "pf_zero_mean": estimates.iter().map(|e| e.mean).sum::<f64>() / estimates.len() as f64,
                "pfaffian": report.pf_nonzero.pfaffian,
            }),
            metric: 0.0,
            metric_kind: "report_only",
            threshold: 0.0,
            pass: true,
            statistical: true,
        });
    }
    Ok(checks)
}

fn hyperg_checks(args: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let tol = args.common.tol.unwrap_or(1e-10);
    let c = check_2f1_identity(args.m, args.n, tol)?;
    Ok(vec![Check::rel_err("hyperg.2F1_equals_I_mn", c.rhs, c.lhs, tol)])
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Output, Failure> {
    let checks = match args.target {
        VerifyTarget::Sphere => sphere_checks(args)?,
        VerifyTarget::Orbit => orbit_checks(args)?,
        VerifyTarget::Hyperg => hyperg_checks(args)?,
    };
    let code = report_exit_code(&checks);
    let body = match args.common.format {
        OutputFormat::Json | OutputFormat::Text => json_string(&checks)?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check", "expected", "observed", "metric", "metric_kind", "threshold", "pass"])
                .map_err(csv_failure)?;
            for c in &checks {
                w.write_record([
                    c.check.clone(),
                    c.expected.to_string(),
                    c.observed.to_string(),
                    c.metric.to_string(),
                    c.metric_kind.to_string(),
                    c.threshold.to_string(),
                    c.pass.to_string(),
                ])
                .map_err(csv_failure)?;
            }
            csv_string(w)?
        }
    };
    Ok(Output { body, code })
}

pub fn cmd_vortex(args: &VortexArgs) -> Result<Output, Failure> {
    let tol = args.common.tol.unwrap_or(1e-8);
    let couplings: Vec<(bool, f64)> = if !args.coupling.is_empty() {
        args.coupling.iter().map(|&g| (true, g)).collect()
    } else if !args.mu2.is_empty() {
        args.mu2.iter().map(|&mu2| (false, mu2)).collect()
    } else {
        vec![(false, 0.0)]
    };
    let mut rows: Vec<SweepRow> = Vec::new();
    for &n in &args.n {
        for &r2 in &args.r2 {
            if !(r2 > n as f64) {
                return Err(Failure::usage(format!(
                    "radius condition R^2 > N violated (N = {n}, R^2 = {r2})"
                )));
            }
            for &(is_coupling, value) in &couplings {
                for &t in &args.t {
                    for &hbar in &args.hbar {
                        let params = if is_coupling {
                            VortexParams::with_coupling(n, r2, value, t, hbar)?
                        } else {
                            VortexParams::new(n, r2, value, t, hbar)?
                        };
                        rows.push(compare(&params)?);
                    }
                }
            }
        }
    }
    let code = if rows.iter().any(|r| !(r.rel_diff <= tol)) {
        EXIT_HARD_FAIL
    } else {
        EXIT_OK
    };
    let body = match args.common.format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(csv_failure)?;
            }
            csv_string(w)?
        }
        OutputFormat::Json => json_string(&rows)?,
        OutputFormat::Text => {
            let mut s = format!(
                "{:>3} {:>10} {:>12} {:>8} {:>8} {:>24} {:>24} {:>10} {:>6}\n",
                "N", "R2", "mu2", "T", "hbar", "Z_series", "Z_closed", "rel_diff", "terms"
            );
            for r in &rows {
                s.push_str(&format!(
                    "{:>3} {:>10} {:>12.6e} {:>8} {:>8} {:>24.16e} {:>24.16e} {:>10.2e} {:>6}\n",
                    r.n, r.r2, r.mu2, r.t, r.hbar, r.z_series, r.z_closed, r.rel_diff, r.terms_used
                ));
            }
            s
        }
    };
    Ok(Output { body, code })
}

fn csv_failure(err: csv::Error) -> Failure {
    Failure::hard(format!("csv error: {err}"))
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::hard(format!("csv error: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Failure::hard(e.to_string()))
}

fn json_string<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::hard(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn common(command: &Command) -> &CommonArgs {
    match command {
        Command::Imn(a) => &a.common,
        Command::Moment(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Vortex(a) => &a.common,
    }
}

fn validate_common(c: &CommonArgs) -> Result<(), Failure> {
    if let Some(tol) = c.tol {
        if !(tol > 0.0) {
            return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first), writing the result to
/// `stdout` or the `--out` file and diagnostics to `stderr`. Returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let rendered = err.render().to_string();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    EXIT_BAD_FLAGS
                }
            };
        }
    };
    let result = validate_common(common(&cli.command)).and_then(|_| match &cli.command {
        Command::Imn(a) => cmd_imn(a),
        Command::Moment(a) => cmd_moment(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Vortex(a) => cmd_vortex(a),
    });
    let output = match result {
        Ok(output) => output,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            return failure.code;
        }
    };
    let written = match &common(&cli.command).out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(output.body.as_bytes())),
        None => stdout.write_all(output.body.as_bytes()),
    };
    if let Err(err) = written {
        let _ = writeln!(stderr, "error: cannot write output: {err}");
        return EXIT_HARD_FAIL;
    }
    output.code
}
