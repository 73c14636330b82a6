//! Command line front end: evaluate harmonics and d-tensors, run the
//! verification suites, and expand Finsler metric quantities on a grid.
//!
//! Output is JSON by default; `--format table` renders the same data for
//! reading. Exit codes are stable: 0 on success, 1 when a verification
//! suite fails or a metric degenerates, 2 on invalid input.

mod lagrangian;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use tangent_harmonics::dtensor::{ComponentTensor, DTensorSignature, HarmonicCombination};
use tangent_harmonics::finsler::{finsler_metric, inverse_metric, momenta, LagrangianModel};
use tangent_harmonics::geometry::CylindricalChart;
use tangent_harmonics::scalar::{eval_harmonic, AnglePoint, AngularTriple};
use tangent_harmonics::verify::{run_suite, Suite, SuiteReport, VerifyConfig};

#[derive(Parser)]
#[command(name = "tangent-harmonics", version, about = None)]
struct Cli {
    /// JSON file with verification knobs; flags below override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Seed for the sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Gauss-Legendre order of the theta quadrature.
    #[arg(long, global = true, value_name = "N")]
    quad_theta: Option<usize>,

    /// Uniform points on the phi circle.
    #[arg(long, global = true, value_name = "N")]
    quad_phi: Option<usize>,

    /// Uniform points on the beta circle.
    #[arg(long, global = true, value_name = "N")]
    quad_beta: Option<usize>,

    /// Step for the finite-difference flow operators.
    #[arg(long, global = true, value_name = "H")]
    fd_step: Option<f64>,

    /// Coefficients below this norm are dropped from reported combinations.
    #[arg(long, global = true, value_name = "TOL")]
    tol_prune: Option<f64>,

    /// Scales every check tolerance; 1 runs the suites as specified.
    #[arg(long, global = true, value_name = "SCALE")]
    tol_verify: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a harmonic or a d-tensor at a point of the unit tangent bundle fiber.
    Eval {
        #[command(subcommand)]
        kind: EvalKind,
    },
    /// Run a verification suite and report every check.
    Verify {
        /// One of coupling, scalar, dtensor, geometry, finsler, all.
        suite: String,
    },
    /// Expand a metric quantity of a Lagrangian model over a grid of charts.
    Finsler {
        /// Builtin model (euclidean, anisotropic-quadratic, quartic) or a
        /// 2-homogeneous polynomial in rho and z, e.g. "rho^2 + 2*z^2".
        #[arg(long)]
        model: String,

        /// Which expansion to report.
        #[arg(long, value_enum)]
        task: Task,

        /// Semicolon-separated charts, each "r,theta,phi,rhobar,zbar,beta".
        #[arg(long)]
        grid: String,
    },
}

#[derive(Subcommand)]
enum EvalKind {
    /// Evaluate one harmonic; labels are "l,m,n".
    Scalar {
        labels: String,

        /// Evaluation point "theta,phi,beta".
        #[arg(long, value_name = "THETA,PHI,BETA")]
        point: String,

        /// Complex prefactor, "re" or "re,im".
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        scale: String,
    },
    /// Evaluate one d-tensor; labels are a signature "l0|l1,...,lk;m,n;v,c".
    Dtensor {
        labels: String,

        /// Evaluation point "theta,phi,beta".
        #[arg(long, value_name = "THETA,PHI,BETA")]
        point: String,

        /// Complex prefactor, "re" or "re,im".
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        scale: String,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    Momenta,
    Metric,
    Inverse,
}

enum CliError {
    /// Invalid input: exit 2.
    Usage(String),
    /// Valid input, failing result: exit 1.
    Failure(String),
}

fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = load_config(&cli)?;
    let (output, code) = match &cli.command {
        Command::Eval { kind } => cmd_eval(kind, cli.format)?,
        Command::Verify { suite } => cmd_verify(suite, &cfg, cli.format)?,
        Command::Finsler { model, task, grid } => {
            cmd_finsler(model, *task, grid, &cfg, cli.format)?
        }
    };
    emit(&output);
    Ok(code)
}

/// Writes the finished output in one pass. A broken pipe means the reader
/// left early; the verdict in the exit code still stands, so it is not an
/// error here.
fn emit(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let result = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush());
    if let Err(e) = result {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write output: {e}");
            std::process::exit(1);
        }
    }
}

fn load_config(cli: &Cli) -> Result<VerifyConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?
        }
        None => VerifyConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(order) = cli.quad_theta {
        cfg.theta_order = order;
    }
    if let Some(points) = cli.quad_phi {
        cfg.phi_points = points;
    }
    if let Some(points) = cli.quad_beta {
        cfg.beta_points = points;
    }
    if let Some(step) = cli.fd_step {
        cfg.fd_step = step;
    }
    if let Some(tol) = cli.tol_prune {
        cfg.prune_tol = tol;
    }
    if let Some(scale) = cli.tol_verify {
        cfg.tol_scale = scale;
    }
    if cfg.theta_order < 2 || cfg.phi_points < 2 || cfg.beta_points < 2 {
        return Err(usage("quadrature orders must be at least 2"));
    }
    if !(cfg.fd_step > 0.0) || !(cfg.prune_tol > 0.0) || !(cfg.tol_scale > 0.0) {
        return Err(usage(
            "fd-step, tol-prune and tol-verify must be positive and finite",
        ));
    }
    Ok(cfg)
}

fn cmd_eval(kind: &EvalKind, format: Format) -> Result<(String, ExitCode), CliError> {
    let output = match kind {
        EvalKind::Scalar { labels, point, scale } => {
            let triple = parse_triple(labels)?;
            let point = parse_point(point)?;
            let scale = parse_complex(scale)?;
            let value = scale * eval_harmonic(triple, point);
            match format {
                Format::Json => render_json(&json!({
                    "kind": "scalar",
                    "labels": { "l": triple.l(), "m": triple.m(), "n": triple.n() },
                    "point": point_json(point),
                    "scale": complex_json(scale),
                    "value": complex_json(value),
                })),
                Format::Table => format!(
                    "Y(l={}, m={}, n={}) at theta={:.6}, phi={:.6}, beta={:.6}\nvalue = {}\n",
                    triple.l(),
                    triple.m(),
                    triple.n(),
                    point.theta,
                    point.phi,
                    point.beta,
                    format_complex(value)
                ),
            }
        }
        EvalKind::Dtensor { labels, point, scale } => {
            let sig: DTensorSignature = labels.parse().map_err(usage)?;
            let point = parse_point(point)?;
            let scale = parse_complex(scale)?;
            let combination = HarmonicCombination::single(&sig, scale);
            let tensor = combination.evaluate(point);
            match format {
                Format::Json => render_json(&json!({
                    "kind": "dtensor",
                    "labels": sig.to_string(),
                    "variances": variance_names(&sig),
                    "point": point_json(point),
                    "scale": complex_json(scale),
                    "components": tensor_json(&tensor),
                })),
                Format::Table => format!(
                    "{} at theta={:.6}, phi={:.6}, beta={:.6}\n{}",
                    sig,
                    point.theta,
                    point.phi,
                    point.beta,
                    format_tensor(&tensor)
                ),
            }
        }
    };
    Ok((output, ExitCode::SUCCESS))
}

fn cmd_verify(
    suite: &str,
    cfg: &VerifyConfig,
    format: Format,
) -> Result<(String, ExitCode), CliError> {
    let suite = Suite::from_str(suite).map_err(usage)?;
    let report = run_suite(suite, cfg);
    let output = match format {
        Format::Json => {
            render_json(&serde_json::to_value(&report).expect("report serializes"))
        }
        Format::Table => report_table(&report),
    };
    let code = if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    Ok((output, code))
}

fn report_table(report: &SuiteReport) -> String {
    let mut out = format!("suite: {}\n", report.suite);
    let _ = writeln!(
        out,
        "{:<6} {:<6} {:>12} {:>12}  description",
        "id", "state", "measured", "tolerance"
    );
    for check in &report.checks {
        let _ = writeln!(
            out,
            "{:<6} {:<6} {:>12.3e} {:>12.3e}  {}",
            check.id,
            if check.passed { "pass" } else { "FAIL" },
            check.measured,
            check.tolerance,
            check.description
        );
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", report.checks.len(), failed);
    out
}

fn cmd_finsler(
    model: &str,
    task: Task,
    grid: &str,
    cfg: &VerifyConfig,
    format: Format,
) -> Result<(String, ExitCode), CliError> {
    let lagrangian = resolve_model(model)?;
    let combination = match task {
        Task::Momenta => momenta(&lagrangian),
        Task::Metric => finsler_metric(&lagrangian),
        Task::Inverse => inverse_metric(&lagrangian),
    };
    let charts = parse_grid(grid)?;
    let mut points = Vec::new();
    for chart in &charts {
        let mut coefficients = combination
            .at(chart.r, chart.rhobar, chart.zbar)
            .map_err(|e| CliError::Failure(e.to_string()))?;
        coefficients.prune(cfg.prune_tol);
        let tensor = combination
            .evaluate(chart)
            .map_err(|e| CliError::Failure(e.to_string()))?;
        points.push((chart, coefficients, tensor));
    }
    let task_name = match task {
        Task::Momenta => "momenta",
        Task::Metric => "metric",
        Task::Inverse => "inverse",
    };
    let output = match format {
        Format::Json => {
            let points: Vec<Value> = points
                .iter()
                .map(|(chart, coefficients, tensor)| {
                    json!({
                        "chart": chart_json(chart),
                        "coefficients": serde_json::to_value(coefficients)
                            .expect("combination serializes"),
                        "components": tensor_json(tensor),
                    })
                })
                .collect();
            render_json(&json!({
                "model": model,
                "task": task_name,
                "points": points,
            }))
        }
        Format::Table => {
            let mut out = format!("model: {model}\ntask: {task_name}\n");
            for (index, (chart, coefficients, tensor)) in points.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "point {index}: r={}, theta={}, phi={}, rhobar={}, zbar={}, beta={}",
                    chart.r, chart.theta, chart.phi, chart.rhobar, chart.zbar, chart.beta
                );
                let mut terms: Vec<(String, Complex64)> = coefficients
                    .terms()
                    .map(|(sig, c)| (sig.to_string(), *c))
                    .collect();
                terms.sort_by(|a, b| a.0.cmp(&b.0));
                for (sig, c) in terms {
                    let _ = writeln!(out, "  {:<24} {}", sig, format_complex(c));
                }
                out.push_str(&format_tensor(tensor));
            }
            out
        }
    };
    Ok((output, ExitCode::SUCCESS))
}

fn resolve_model(name: &str) -> Result<LagrangianModel, CliError> {
    match name {
        "euclidean" => Ok(LagrangianModel::euclidean()),
        "anisotropic-quadratic" => Ok(LagrangianModel::anisotropic_quadratic()),
        "quartic" => Ok(LagrangianModel::quartic()),
        expr => lagrangian::parse(expr).map_err(usage),
    }
}

fn parse_triple(labels: &str) -> Result<AngularTriple, CliError> {
    let parts: Vec<&str> = labels.split(',').collect();
    if parts.len() != 3 {
        return Err(usage(format!(
            "labels must be three integers \"l,m,n\", got '{labels}'"
        )));
    }
    let ints: Vec<i64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| usage(format!("'{}' is not an integer", p.trim())))
        })
        .collect::<Result<_, _>>()?;
    if ints[0] < 0 {
        return Err(usage(format!("need l >= 0, got l={}", ints[0])));
    }
    let l = u32::try_from(ints[0]).map_err(|_| usage(format!("l={} is out of range", ints[0])))?;
    let m = i32::try_from(ints[1]).map_err(|_| usage(format!("m={} is out of range", ints[1])))?;
    let n = i32::try_from(ints[2]).map_err(|_| usage(format!("n={} is out of range", ints[2])))?;
    AngularTriple::new(l, m, n).map_err(usage)
}

fn parse_point(point: &str) -> Result<AnglePoint, CliError> {
    let values = parse_floats(point, 3, "point")?;
    AnglePoint::new(values[0], values[1], values[2]).map_err(usage)
}

fn parse_complex(scale: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = scale.split(',').collect();
    let parse = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("'{}' is not a number", p.trim())))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(usage(format!(
            "a complex scale is \"re\" or \"re,im\", got '{scale}'"
        ))),
    }
}

fn parse_floats(text: &str, count: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| usage(format!("'{}' in {what} is not a number", p.trim())))
        })
        .collect::<Result<_, _>>()?;
    if values.len() != count {
        return Err(usage(format!(
            "{what} needs {count} comma-separated numbers, got {}",
            values.len()
        )));
    }
    Ok(values)
}

fn parse_grid(grid: &str) -> Result<Vec<CylindricalChart>, CliError> {
    let charts: Vec<CylindricalChart> = grid
        .split(';')
        .filter(|chunk| !chunk.trim().is_empty())
        .map(|chunk| {
            let v = parse_floats(chunk, 6, "a grid chart")?;
            CylindricalChart::new(v[0], v[1], v[2], v[3], v[4], v[5]).map_err(usage)
        })
        .collect::<Result<_, _>>()?;
    if charts.is_empty() {
        return Err(usage("the grid is empty"));
    }
    Ok(charts)
}

fn point_json(p: AnglePoint) -> Value {
    json!({ "theta": p.theta, "phi": p.phi, "beta": p.beta })
}

fn chart_json(chart: &CylindricalChart) -> Value {
    json!({
        "r": chart.r,
        "theta": chart.theta,
        "phi": chart.phi,
        "rhobar": chart.rhobar,
        "zbar": chart.zbar,
        "beta": chart.beta,
    })
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn variance_names(sig: &DTensorSignature) -> Value {
    serde_json::to_value(sig.variances()).expect("variances serialize")
}

/// Nested arrays over the Cartesian axes, depth equal to the rank, leaves
/// `[re, im]`.
fn tensor_json(tensor: &ComponentTensor) -> Value {
    fn level(tensor: &ComponentTensor, index: &mut Vec<usize>, depth: usize) -> Value {
        if depth == 0 {
            return complex_json(tensor.get(index));
        }
        Value::Array(
            (0..3)
                .map(|axis| {
                    index.push(axis);
                    let value = level(tensor, index, depth - 1);
                    index.pop();
                    value
                })
                .collect(),
        )
    }
    level(tensor, &mut Vec::new(), tensor.rank())
}

fn format_complex(z: Complex64) -> String {
    format!("{:+.12e} {:+.12e}i", z.re, z.im)
}

fn format_tensor(tensor: &ComponentTensor) -> String {
    let mut out = String::new();
    if tensor.rank() == 0 {
        let _ = writeln!(out, "  value = {}", format_complex(tensor.get(&[])));
        return out;
    }
    for index in ComponentTensor::indices(tensor.rank()) {
        let labels: Vec<String> = index.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(
            out,
            "  [{}] {}",
            labels.join(","),
            format_complex(tensor.get(&index))
        );
    }
    out
}

fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    text
}
