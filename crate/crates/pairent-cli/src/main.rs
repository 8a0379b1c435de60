//! `pairent`: entanglement measures and EOF lower bounds for pair-basis
//! states, ensemble experiments, convexity certification and squeezed-state
//! sweeps.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 validation failure,
//! 3 certification failure.

mod statefile;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pairent::bounds::best_bound;
use pairent::convexity::{grid_rows, scan_grid};
use pairent::ensembles::{run_comparison_experiment, KPolicy, ScatterRecord};
use pairent::measures::{measure_mixed, measure_pure};
use pairent::oracle::{eof_convex_roof, RoofSettings};
use pairent::pairstate::PairDensityMatrix;
use pairent::squeezed::{sweep_curve, SweepRow};
use pairent::LogBase;
use statefile::{LoadedState, StateFile};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "pairent", version, about = "Entanglement measures and EOF bounds in a pair basis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    /// Base-2 logarithms (ebits).
    #[value(name = "2")]
    Two,
    /// Natural logarithms (nats).
    #[value(name = "e")]
    Natural,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Two => LogBase::Two,
            BaseArg::Natural => LogBase::Natural,
        }
    }
}

#[derive(Args)]
struct CommonIo {
    /// Input state file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Logarithm base for entropies.
    #[arg(long = "log-base", default_value = "2")]
    log_base: BaseArg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Entropy, concurrence, negativity and log-negativity of one state.
    Measure(CommonIo),
    /// The EOF lower bounds F, G, s and their maximum for one state.
    Bounds(CommonIo),
    /// Certify the convexity grid scan and report the minima.
    VerifyConvexity {
        /// Grid points per axis.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// Margin excluded at the domain boundary.
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long = "log-base", default_value = "2")]
        log_base: BaseArg,
        /// Write the JSON certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional CSV heatmap dump (r, g2, alpha, eta, det).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sample random decompositions; write per-sample CSV and a summary.
    Sample {
        /// Pair-basis dimension d.
        #[arg(long)]
        dim: usize,
        /// Number of samples.
        #[arg(long)]
        num: usize,
        /// Fixed decomposition length (default: uniform in {d, ..., 2d}).
        #[arg(long)]
        members: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long = "log-base", default_value = "2")]
        log_base: BaseArg,
        /// CSV output path (one row per sample).
        #[arg(long)]
        out: PathBuf,
        /// Write the summary JSON here instead of stdout.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Optional SVG scatter (average entropy vs G, with the bisector).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Closed-form squeezed-state sweep (r, S, F, N) as CSV.
    Squeezed {
        #[arg(long = "r-min", default_value_t = 0.0)]
        r_min: f64,
        #[arg(long = "r-max", default_value_t = 3.0)]
        r_max: f64,
        #[arg(long, default_value_t = 300)]
        steps: usize,
        #[arg(long = "log-base", default_value = "2")]
        log_base: BaseArg,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG with the S and F curves.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Convex-roof EOF search (d <= 4) for one state.
    Oracle {
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, default_value_t = 12)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        /// Decomposition length (default: rank + 2).
        #[arg(long)]
        members: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum AppError {
    Usage(String),
    Io(String),
    Parse(String),
    Core(pairent::Error),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) | AppError::Io(_) => 1,
            AppError::Parse(_) => 2,
            AppError::Core(e) => match e {
                pairent::Error::Certification(_) | pairent::Error::ToleranceExceeded(_) => 3,
                _ => 2,
            },
        }
    }

    fn code(&self) -> &str {
        match self {
            AppError::Usage(_) => "usage_error",
            AppError::Io(_) => "io_error",
            AppError::Parse(_) => "parse_error",
            AppError::Core(e) => e.code(),
        }
    }

    fn message(&self) -> String {
        match self {
            AppError::Usage(m) | AppError::Io(m) | AppError::Parse(m) => m.clone(),
            AppError::Core(e) => e.to_string(),
        }
    }
}

impl From<pairent::Error> for AppError {
    fn from(e: pairent::Error) -> Self {
        AppError::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits; everything else is a
            // usage error (exit 1).
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    init_thread_pool();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let payload = json!({
                "error": { "code": err.code(), "message": err.message() }
            });
            eprintln!("{payload}");
            ExitCode::from(err.exit_code())
        }
    }
}

/// PAIRENT_THREADS caps the worker pool used by the parallel module paths.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("PAIRENT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cmd: Cmd) -> Result<(), AppError> {
    match cmd {
        Cmd::Measure(io) => cmd_measure(io),
        Cmd::Bounds(io) => cmd_bounds(io),
        Cmd::VerifyConvexity {
            grid,
            eps,
            log_base,
            out,
            csv,
        } => cmd_verify_convexity(grid, eps, log_base.into(), out, csv),
        Cmd::Sample {
            dim,
            num,
            members,
            seed,
            log_base,
            out,
            summary,
            svg,
        } => cmd_sample(dim, num, members, seed, log_base.into(), out, summary, svg),
        Cmd::Squeezed {
            r_min,
            r_max,
            steps,
            log_base,
            out,
            svg,
        } => cmd_squeezed(r_min, r_max, steps, log_base.into(), out, svg),
        Cmd::Oracle {
            io,
            restarts,
            iters,
            members,
            seed,
        } => cmd_oracle(io, restarts, iters, members, seed),
    }
}

fn read_state(path: &Path) -> Result<LoadedState, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("cannot read {}: {e}", path.display())))?;
    let file: StateFile =
        serde_json::from_str(&text).map_err(|e| AppError::Parse(format!("invalid state file: {e}")))?;
    Ok(file.into_state()?)
}

fn write_output(out: &Option<PathBuf>, payload: &serde_json::Value) -> Result<(), AppError> {
    let text = serde_json::to_string_pretty(payload).expect("serializable");
    match out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), AppError> {
    fs::write(path, text).map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))
}

fn envelope(command: &str, base: LogBase) -> serde_json::Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "pairent",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "log_base": base.label(),
    })
}

fn cmd_measure(io: CommonIo) -> Result<(), AppError> {
    let base: LogBase = io.log_base.into();
    let mut payload = envelope("measure", base);
    let report = match read_state(&io.input)? {
        LoadedState::Pure(psi) => {
            payload["kind"] = json!("pure");
            payload["dim"] = json!(psi.dim());
            measure_pure(&psi, base)
        }
        LoadedState::Mixed(rho) => {
            payload["kind"] = json!("mixed");
            payload["dim"] = json!(rho.dim());
            measure_mixed(&rho, base)
        }
    };
    payload["report"] = serde_json::to_value(&report).expect("serializable");
    write_output(&io.out, &payload)
}

fn cmd_bounds(io: CommonIo) -> Result<(), AppError> {
    let base: LogBase = io.log_base.into();
    let mut payload = envelope("bounds", base);
    let (rho, kind) = match read_state(&io.input)? {
        LoadedState::Pure(psi) => (PairDensityMatrix::from_pure(&psi), "pure"),
        LoadedState::Mixed(rho) => (rho, "mixed"),
    };
    let report = best_bound(&rho, base)?;
    payload["kind"] = json!(kind);
    payload["dim"] = json!(rho.dim());
    payload["report"] = serde_json::to_value(&report).expect("serializable");
    write_output(&io.out, &payload)
}

fn cmd_verify_convexity(
    grid: usize,
    eps: f64,
    base: LogBase,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> Result<(), AppError> {
    let cert = scan_grid(grid, eps, base)?;
    if let Some(path) = csv {
        let mut text = String::from("r,g2,alpha,eta,det\n");
        // The dump grid is capped so heatmap files stay manageable.
        let dump_n = grid.min(200);
        for row in grid_rows(dump_n, eps, base)? {
            text.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                row.r, row.g2, row.alpha, row.eta, row.det
            ));
        }
        write_text(&path, &text)?;
    }
    let mut payload = envelope("verify-convexity", base);
    payload["certificate"] = serde_json::to_value(&cert).expect("serializable");
    write_output(&out, &payload)?;
    if cert.pass {
        Ok(())
    } else {
        Err(AppError::Core(pairent::Error::Certification(format!(
            "grid minima {:.3e} {:.3e} {:.3e} below floor",
            cert.min_alpha, cert.min_eta, cert.min_det
        ))))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    dim: usize,
    num: usize,
    members: Option<usize>,
    seed: u64,
    base: LogBase,
    out: PathBuf,
    summary: Option<PathBuf>,
    svg: Option<PathBuf>,
) -> Result<(), AppError> {
    if dim < 2 {
        return Err(AppError::Usage("--dim must be at least 2".into()));
    }
    if members == Some(0) {
        return Err(AppError::Usage("--members must be at least 1".into()));
    }
    let outcome = run_comparison_experiment_with_policy(dim, num, members, seed, base);

    let mut csv = String::from(ScatterRecord::CSV_HEADER);
    csv.push('\n');
    for record in &outcome.records {
        csv.push_str(&record.csv_row());
        csv.push('\n');
    }
    write_text(&out, &csv)?;

    if let Some(path) = svg {
        let max_s = outcome
            .records
            .iter()
            .map(|r| r.avg_entropy)
            .fold(0.0f64, f64::max)
            .max(1e-9);
        let mut fig = svg::Figure::new(0.0, max_s, 0.0, max_s);
        fig.line([(0.0, 0.0), (max_s, max_s)].into_iter(), "#999999");
        fig.scatter(
            outcome.records.iter().map(|r| (r.avg_entropy, r.g)),
            "#b03030",
        );
        write_text(&path, &fig.finish("average entropy", "G"))?;
    }

    let mut payload = envelope("sample", base);
    payload["dim"] = json!(dim);
    payload["num"] = json!(num);
    payload["seed"] = json!(seed);
    payload["k_policy"] = match members {
        Some(k) => json!({ "fixed": k }),
        None => json!("uniform_dim_to_2dim"),
    };
    payload["weights_distribution"] = json!("flat_dirichlet");
    payload["coefficients_distribution"] = json!("flat_dirichlet_sqrt");
    payload["g_violations"] = json!(outcome.g_violations);
    payload["f_violations"] = json!(outcome.f_violations);
    payload["f_attains_best"] = json!(outcome.f_attains_best);
    payload["g_attains_best"] = json!(outcome.g_attains_best);
    payload["s_attains_best"] = json!(outcome.s_attains_best);
    payload["g_exceeds_f"] = json!(outcome.g_exceeds_f);
    payload["s_curve"] = serde_json::to_value(&outcome.s_curve).expect("serializable");
    write_output(&summary, &payload)
}

/// The comparison experiment with an optional fixed decomposition length.
fn run_comparison_experiment_with_policy(
    dim: usize,
    num: usize,
    members: Option<usize>,
    seed: u64,
    base: LogBase,
) -> pairent::ensembles::ComparisonOutcome {
    match members {
        None => run_comparison_experiment(dim, num, seed, base),
        Some(k) => {
            // Reuse the bisector runner for fixed K, then assemble the
            // comparison statistics over its records.
            let bis = pairent::ensembles::run_bisector_experiment(
                dim,
                num,
                KPolicy::Fixed(k),
                seed,
                base,
            );
            pairent::ensembles::comparison_from_records(dim, seed, bis.records, base)
        }
    }
}

fn cmd_squeezed(
    r_min: f64,
    r_max: f64,
    steps: usize,
    base: LogBase,
    out: PathBuf,
    svg: Option<PathBuf>,
) -> Result<(), AppError> {
    if !(r_min >= 0.0 && r_min < r_max) {
        return Err(AppError::Usage(format!(
            "need 0 <= r-min < r-max, got [{r_min}, {r_max}]"
        )));
    }
    if steps < 2 {
        return Err(AppError::Usage("--steps must be at least 2".into()));
    }
    let rows = sweep_curve(r_min, r_max, steps, base)?;
    let mut csv = String::from(SweepRow::CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.csv_row());
        csv.push('\n');
    }
    write_text(&out, &csv)?;

    if let Some(path) = svg {
        let y_max = rows.iter().map(|r| r.entropy).fold(0.0f64, f64::max).max(1e-9);
        let mut fig = svg::Figure::new(r_min, r_max, 0.0, y_max);
        fig.line(rows.iter().map(|r| (r.r, r.entropy)), "#2060b0");
        fig.line(rows.iter().map(|r| (r.r, r.bound_f)), "#b03030");
        write_text(&path, &fig.finish("r", "S (blue), F (red)"))?;
    }
    Ok(())
}

fn cmd_oracle(
    io: CommonIo,
    restarts: usize,
    iters: usize,
    members: Option<usize>,
    seed: u64,
) -> Result<(), AppError> {
    let base: LogBase = io.log_base.into();
    let rho = match read_state(&io.input)? {
        LoadedState::Pure(psi) => PairDensityMatrix::from_pure(&psi),
        LoadedState::Mixed(rho) => rho,
    };
    let settings = RoofSettings {
        members,
        restarts,
        iters,
        seed,
        base,
    };
    let result = eof_convex_roof(&rho, &settings)?;
    let decomposition = &result.best_decomposition;
    let states_re: Vec<Vec<f64>> = decomposition
        .states
        .iter()
        .map(|s| s.coeffs().iter().map(|c| c.re).collect())
        .collect();
    let states_im: Vec<Vec<f64>> = decomposition
        .states
        .iter()
        .map(|s| s.coeffs().iter().map(|c| c.im).collect())
        .collect();

    let mut payload = envelope("oracle", base);
    payload["dim"] = json!(rho.dim());
    payload["seed"] = json!(seed);
    payload["eof_estimate"] = json!(result.eof_estimate);
    payload["restarts_used"] = json!(result.restarts_used);
    payload["converged"] = json!(result.converged);
    payload["decomposition"] = json!({
        "weights": decomposition.weights,
        "avg_entropy": decomposition.avg_entropy,
        "states_re": states_re,
        "states_im": states_im,
    });
    write_output(&io.out, &payload)
}
