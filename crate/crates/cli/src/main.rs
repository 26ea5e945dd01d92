//! Command-line surface for the xilab toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 argument or parse
//! error, 3 evaluation error.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xilab::divisibility::{ggc_diagnostics, kristiansen_lt, phi_sigma, DiscreteMixture};
use xilab::mixture::{g_density, triangle_weight};
use xilab::numerics::cm_test;
use xilab::pipeline::{
    any_toleranced_failure, report_to_json, run_step, summary_to_json, StepId, StepParams,
    StepReport, Verdict,
};
use xilab::scanner::{scan_critical_line, scan_strip, xi_line_value};
use xilab::theta::{psi_kernel, psi_with_truncation};
use xilab::xi::{xi_direct, zeta, XiRoute};
use xilab::{Cplx, NumericConfig, Real, RunConfig};

use output::{fmt_sig, write_text, CsvWriter, ManifestBuilder};

#[derive(Parser)]
#[command(name = "xilab", version, about = "Numerical toolkit for the completed Riemann xi function: two-route evaluation, kernel transforms, mixture decompositions, divisibility diagnostics, and zero scans")]
struct Cli {
    /// Flat `key = value` config file overriding the numeric defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Write a run manifest (command line, config snapshot, timestamps,
    /// output paths) to this file. Timestamps make the manifest itself
    /// non-reproducible; all other outputs stay byte-identical.
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at a point.
    Eval(EvalArgs),
    /// Run derivation-chain verification steps and write JSON reports.
    Verify(VerifyArgs),
    /// Scan the critical line for zeros, or census |xi| over a strip grid.
    Scan(ScanArgs),
    /// Run infinite-divisibility diagnostics.
    Idcheck(IdcheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFunction {
    /// Theta sum psi(x).
    #[value(name = "psi")]
    ThetaSum,
    /// Even kernel Psi(u).
    #[value(name = "Psi")]
    Kernel,
    /// Riemann zeta.
    #[value(name = "zeta")]
    Zeta,
    /// Completed xi(s).
    #[value(name = "xi")]
    XiLower,
    /// Xi(t) = xi(1/2 + it) on the real axis.
    #[value(name = "Xi")]
    XiUpper,
    /// Normalized kernel transform phi_sigma(s).
    #[value(name = "phi")]
    Phi,
    /// Mixture density g_n(x).
    #[value(name = "g_n")]
    GDensity,
    /// Triangle weight J_n(lambda).
    #[value(name = "J_n")]
    Triangle,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(value_enum)]
    function: EvalFunction,
    /// Argument x (psi, g_n).
    #[arg(long, allow_negative_numbers = true)]
    x: Option<Real>,
    /// Argument u (Psi).
    #[arg(long, allow_negative_numbers = true)]
    u: Option<Real>,
    /// Real part of s (zeta, xi, phi).
    #[arg(long, allow_negative_numbers = true)]
    s: Option<Real>,
    /// Imaginary part of s (zeta, xi, phi); defaults to 0.
    #[arg(long, allow_negative_numbers = true)]
    im: Option<Real>,
    /// Argument t (Xi).
    #[arg(long, allow_negative_numbers = true)]
    t: Option<Real>,
    /// Parameter sigma (phi).
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<Real>,
    /// Level n (g_n, J_n).
    #[arg(long)]
    n: Option<u32>,
    /// Argument lambda (J_n).
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<Real>,
    /// Emit a JSON object instead of text.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit a CSV row instead of text.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run every step S1..S10.
    #[arg(long, conflicts_with = "steps")]
    all: bool,
    /// Comma-separated step ids, e.g. S1,S4,S7.
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    steps: Vec<String>,
    /// Directory for the per-step and summary JSON reports.
    #[arg(long, default_value = "reports", value_name = "DIR")]
    out: PathBuf,
    /// Include wall-clock runtimes in the serialized reports (makes the
    /// files non-reproducible across runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Direct,
    Integral,
}

impl From<RouteArg> for XiRoute {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Direct => XiRoute::Direct,
            RouteArg::Integral => XiRoute::CosineIntegral,
        }
    }
}

#[derive(Args)]
struct ScanArgs {
    /// Zero scan of Xi over [T_LO, T_HI].
    #[arg(long, num_args = 2, value_names = ["T_LO", "T_HI"], conflicts_with = "strip")]
    line: Option<Vec<Real>>,
    /// Census of |xi| over sigma in [S_LO, S_HI], t in [T_LO, T_HI].
    #[arg(long, num_args = 4, value_names = ["S_LO", "S_HI", "T_LO", "T_HI"])]
    strip: Option<Vec<Real>>,
    /// Grid step along t (defaults to scan_step from the config).
    #[arg(long)]
    step: Option<Real>,
    /// Grid step along sigma for strip scans (defaults to scan_dsigma).
    #[arg(long)]
    dsigma: Option<Real>,
    /// Evaluation route for line scans.
    #[arg(long, value_enum, default_value = "direct")]
    route: RouteArg,
    /// Write grid samples as CSV here and the JSON result next to it
    /// (same path with a .json extension). Without --out the JSON goes
    /// to standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdSource {
    /// Gamma(2) scale mixture read from a CSV file of x,weight rows.
    Kristiansen,
    /// The ratio diagnostics of the normalized kernel transform.
    Phi,
}

#[derive(Args)]
struct IdcheckArgs {
    #[arg(long, value_enum)]
    source: IdSource,
    /// Mixture CSV file (x,weight per row) for the kristiansen source.
    #[arg(long, value_name = "FILE")]
    file: Option<PathBuf>,
    /// Sigma for the phi source.
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<Real>,
    /// Override the finite-difference order K.
    #[arg(long)]
    order: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// CLI-level failure: an exit code plus a message for standard error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn arg(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<xilab::Error> for Failure {
    fn from(err: xilab::Error) -> Self {
        Failure {
            code: if err.is_argument_like() { 2 } else { 3 },
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure {
            code: 3,
            message: format!("i/o error: {err}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut manifest = ManifestBuilder::start(cli.manifest.as_deref());

    let result = load_config(cli.config.as_deref()).and_then(|config| {
        manifest.set_config(&config);
        match &cli.command {
            Command::Eval(args) => cmd_eval(args, &config),
            Command::Verify(args) => cmd_verify(args, &config, &mut manifest),
            Command::Scan(args) => cmd_scan(args, &config, &mut manifest),
            Command::Idcheck(args) => cmd_idcheck(args, &config, &mut manifest),
        }
    });

    match result {
        Ok(code) => {
            if let Err(err) = manifest.finish() {
                eprintln!("warning: could not write manifest: {err}");
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::arg(format!("cannot read config {}: {e}", path.display())))?;
    let config: RunConfig = toml::from_str(&text)
        .map_err(|e| Failure::arg(format!("cannot parse config {}: {e}", path.display())))?;
    config.validate()?;
    Ok(config)
}

fn require<T: Copy>(value: Option<T>, flag: &str, function: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::arg(format!("{function} requires {flag}")))
}

struct EvalOutcome {
    label: String,
    input: String,
    value: Cplx,
    note: Option<String>,
}

fn cmd_eval(args: &EvalArgs, config: &RunConfig) -> Result<u8, Failure> {
    let cfg: NumericConfig<Real> = config.numeric();
    let outcome = match args.function {
        EvalFunction::ThetaSum => {
            let x = require(args.x, "--x", "psi")?;
            let (value, trunc) = psi_with_truncation(x, &cfg)?;
            EvalOutcome {
                label: "psi".into(),
                input: fmt_sig(x),
                value: Cplx::new(value, 0.0),
                note: Some(format!(
                    "terms: {}, tail_bound: {}",
                    trunc.n_terms,
                    fmt_sig(trunc.tail_bound)
                )),
            }
        }
        EvalFunction::Kernel => {
            let u = require(args.u, "--u", "Psi")?;
            EvalOutcome {
                label: "Psi".into(),
                input: fmt_sig(u),
                value: Cplx::new(psi_kernel(u, &cfg)?, 0.0),
                note: None,
            }
        }
        EvalFunction::Zeta => {
            let s = Cplx::new(require(args.s, "--s", "zeta")?, args.im.unwrap_or(0.0));
            EvalOutcome {
                label: "zeta".into(),
                input: format!("{}+{}i", fmt_sig(s.re), fmt_sig(s.im)),
                value: zeta(s, &cfg)?,
                note: None,
            }
        }
        EvalFunction::XiLower => {
            let s = Cplx::new(require(args.s, "--s", "xi")?, args.im.unwrap_or(0.0));
            EvalOutcome {
                label: "xi".into(),
                input: format!("{}+{}i", fmt_sig(s.re), fmt_sig(s.im)),
                value: xi_direct(s, &cfg)?,
                note: None,
            }
        }
        EvalFunction::XiUpper => {
            let t = require(args.t, "--t", "Xi")?;
            EvalOutcome {
                label: "Xi".into(),
                input: fmt_sig(t),
                value: Cplx::new(xi_line_value(t, XiRoute::Direct, &cfg)?, 0.0),
                note: None,
            }
        }
        EvalFunction::Phi => {
            let s = Cplx::new(require(args.s, "--s", "phi")?, args.im.unwrap_or(0.0));
            let sigma = require(args.sigma, "--sigma", "phi")?;
            let eval = phi_sigma(s, sigma, &cfg)?;
            EvalOutcome {
                label: "phi".into(),
                input: format!("s={}+{}i sigma={}", fmt_sig(s.re), fmt_sig(s.im), fmt_sig(sigma)),
                value: eval.value,
                note: Some(format!("normalizer: {}", fmt_sig(eval.normalizer))),
            }
        }
        EvalFunction::GDensity => {
            let n = require(args.n, "--n", "g_n")?;
            let x = require(args.x, "--x", "g_n")?;
            if n == 0 {
                return Err(Failure::arg("g_n requires n >= 1"));
            }
            EvalOutcome {
                label: format!("g_{n}"),
                input: fmt_sig(x),
                value: Cplx::new(g_density(n, x), 0.0),
                note: None,
            }
        }
        EvalFunction::Triangle => {
            let n = require(args.n, "--n", "J_n")?;
            let lambda = require(args.lambda, "--lambda", "J_n")?;
            if n == 0 {
                return Err(Failure::arg("J_n requires n >= 1"));
            }
            if lambda < 0.0 {
                return Err(Failure::arg("J_n requires lambda >= 0"));
            }
            EvalOutcome {
                label: format!("J_{n}"),
                input: fmt_sig(lambda),
                value: Cplx::new(triangle_weight(n, lambda), 0.0),
                note: None,
            }
        }
    };

    if args.json {
        let note = outcome.note.as_deref().unwrap_or("");
        println!(
            "{}",
            serde_json::json!({
                "function": outcome.label,
                "input": outcome.input,
                "value": { "re": outcome.value.re, "im": outcome.value.im },
                "note": note,
            })
        );
    } else if args.csv {
        println!("function,input,value_re,value_im");
        println!(
            "{},{},{},{}",
            outcome.label,
            outcome.input,
            fmt_sig(outcome.value.re),
            fmt_sig(outcome.value.im)
        );
    } else {
        let rendered = if outcome.value.im == 0.0 {
            fmt_sig(outcome.value.re)
        } else {
            format!("{} + {}i", fmt_sig(outcome.value.re), fmt_sig(outcome.value.im))
        };
        match &outcome.note {
            Some(note) => println!("{}({}) = {rendered} ({note})", outcome.label, outcome.input),
            None => println!("{}({}) = {rendered}", outcome.label, outcome.input),
        }
    }
    Ok(0)
}

fn cmd_verify(
    args: &VerifyArgs,
    config: &RunConfig,
    manifest: &mut ManifestBuilder,
) -> Result<u8, Failure> {
    let ids: Vec<StepId> = if args.all || args.steps.is_empty() {
        StepId::ALL.to_vec()
    } else {
        args.steps
            .iter()
            .map(|s| s.trim().parse::<StepId>())
            .collect::<Result<_, _>>()?
    };

    let cfg = config.numeric();
    let params = StepParams {
        n_max: config.n_max as u32,
        ..StepParams::default()
    };

    std::fs::create_dir_all(&args.out)?;
    let mut reports: Vec<StepReport> = Vec::with_capacity(ids.len());
    for id in &ids {
        let report = run_step(*id, &params, &cfg);
        let path = args.out.join(format!("{id}.json"));
        write_text(&path, &report_to_json(&report, args.timings))?;
        manifest.add_output(&path);
        println!(
            "{} {} abs_residual={}",
            report.step_id,
            match report.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::MeasuredOnly => "measured_only",
            },
            report
                .abs_residual
                .map(fmt_sig)
                .unwrap_or_else(|| "n/a".into()),
        );
        reports.push(report);
    }

    let summary_path = args.out.join("summary.json");
    write_text(&summary_path, &summary_to_json(&reports, args.timings))?;
    manifest.add_output(&summary_path);

    Ok(if any_toleranced_failure(&reports) { 1 } else { 0 })
}

fn cmd_scan(
    args: &ScanArgs,
    config: &RunConfig,
    manifest: &mut ManifestBuilder,
) -> Result<u8, Failure> {
    let cfg = config.numeric();
    let step = args.step.unwrap_or(config.scan_step);
    let dsigma = args.dsigma.unwrap_or(config.scan_dsigma);

    let json = if let Some(range) = &args.line {
        let (t_lo, t_hi) = (range[0], range[1]);
        let route: XiRoute = args.route.into();
        let list = scan_critical_line(t_lo, t_hi, step, route, &cfg)?;
        if let Some(out) = &args.out {
            let mut csv = CsvWriter::create(out, "t,Xi")?;
            let mut t = t_lo;
            while t <= t_hi + 1e-12 {
                csv.row(&[t, xi_line_value(t, route, &cfg)?])?;
                t += step;
            }
            csv.done()?;
            manifest.add_output(out);
        }
        serde_json::to_string_pretty(&list).expect("zero list serializes")
    } else if let Some(range) = &args.strip {
        let (s_lo, s_hi, t_lo, t_hi) = (range[0], range[1], range[2], range[3]);
        let census = scan_strip(s_lo, s_hi, t_lo, t_hi, dsigma, step, &cfg)?;
        if let Some(out) = &args.out {
            let mut csv = CsvWriter::create(out, "sigma,t,abs_xi")?;
            for &sigma in &census.sigma_grid {
                for &t in &census.t_grid {
                    let v = xi_direct(Cplx::new(sigma, t), &cfg)?.norm();
                    csv.row(&[sigma, t, v])?;
                }
            }
            csv.done()?;
            manifest.add_output(out);
        }
        serde_json::to_string_pretty(&census).expect("census serializes")
    } else {
        return Err(Failure::arg("scan needs --line T_LO T_HI or --strip S_LO S_HI T_LO T_HI"));
    };

    match &args.out {
        Some(out) => {
            let json_path = out.with_extension("json");
            write_text(&json_path, &json)?;
            manifest.add_output(&json_path);
            println!("wrote {} and {}", out.display(), json_path.display());
        }
        None => println!("{json}"),
    }
    Ok(0)
}

fn cmd_idcheck(
    args: &IdcheckArgs,
    config: &RunConfig,
    manifest: &mut ManifestBuilder,
) -> Result<u8, Failure> {
    let mut cfg = config.numeric();
    if let Some(order) = args.order {
        if order == 0 {
            return Err(Failure::arg("--order must be >= 1"));
        }
        cfg.cm_order = order;
    }

    let (json, exit) = match args.source {
        IdSource::Kristiansen => {
            let path = args
                .file
                .as_ref()
                .ok_or_else(|| Failure::arg("kristiansen source requires --file"))?;
            let mix = read_mixture(path)?;
            let grid = [0.5, 0.8, 1.2, 1.7, 2.3];
            let report = cm_test(|s| kristiansen_lt(&mix, s).unwrap_or(Real::NAN), &grid, &cfg)?;
            let exit = if report.passed { 0 } else { 1 };
            (
                serde_json::to_string_pretty(&report).expect("report serializes"),
                exit,
            )
        }
        IdSource::Phi => {
            let sigma = args
                .sigma
                .ok_or_else(|| Failure::arg("phi source requires --sigma"))?;
            let grid: Vec<Real> = (1..=8).map(|i| 2.5e-4 * i as Real).collect();
            let diagnostics = ggc_diagnostics(sigma, &grid, &cfg)?;
            // measured-only: violations are findings, not failures
            (
                serde_json::to_string_pretty(&diagnostics).expect("diagnostics serialize"),
                0,
            )
        }
    };

    match &args.out {
        Some(out) => {
            write_text(out, &json)?;
            manifest.add_output(out);
            println!("wrote {}", out.display());
        }
        None => println!("{json}"),
    }
    Ok(exit)
}

/// Reads a two-column `x,weight` CSV, tolerating one header line.
fn read_mixture(path: &Path) -> Result<DiscreteMixture<Real>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::arg(format!("cannot read {}: {e}", path.display())))?;
    let mut atoms = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Failure::arg(format!(
                "{}:{}: expected two comma-separated fields",
                path.display(),
                idx + 1
            )));
        }
        match (fields[0].parse::<Real>(), fields[1].parse::<Real>()) {
            (Ok(x), Ok(w)) => atoms.push((x, w)),
            _ if idx == 0 => continue, // header row
            _ => {
                return Err(Failure::arg(format!(
                    "{}:{}: cannot parse numbers",
                    path.display(),
                    idx + 1
                )))
            }
        }
    }
    Ok(DiscreteMixture::new(atoms)?)
}
