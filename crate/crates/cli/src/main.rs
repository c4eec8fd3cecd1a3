//! `irsi`: rate-region sweeps and analysis reports for IRS-assisted secure multicasting.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 infeasible scenario,
//! 3 solver failure.

mod input;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use irsi_core::algorithms::{rm_grid, sweep_targets, AlgorithmParams, RegionBoundary, RegionContext, Scheme};
use irsi_core::analysis::{complexity_estimate, enhancement_analysis, gap_bound_report};
use irsi_core::channel::parse_power;
use irsi_core::linalg::real_trace;
use irsi_core::model::{feasibility_check, lifted_forms};
use irsi_core::{Error, Feasibility, PhaseVector};

use input::{load_phases, load_scenario, Scenario};
use output::{write_json, write_phases, write_region_csv, AnalysisReport, Region};

/// Environment variable selecting the number of worker threads.
const THREADS_VAR: &str = "IRSI_THREADS";

#[derive(Parser)]
#[command(name = "irsi", version, about = "Secrecy/multicast rate regions of IRS-assisted service integration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace one rate region and write it as CSV plus a companion phase file.
    Region(RunArgs),
    /// Report feasibility, enhancement, gap bounds and complexity for one design.
    Analyze(AnalyzeArgs),
    /// Trace one region per transmit power on a common multicast grid.
    SweepPower {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated powers in watts, or with a dBm/dB suffix.
        #[arg(long, value_delimiter = ',', required = true)]
        powers: Vec<String>,
    },
}

#[derive(Args)]
struct Tuning {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Power levels in the confidential-power grid.
    #[arg(long, default_value_t = 80)]
    t_alpha: usize,
    /// Weights in the WSCM sweep.
    #[arg(long, default_value_t = 80)]
    t_lambda: usize,
    /// Gaussian randomization draws per rounding.
    #[arg(long, default_value_t = 1000)]
    t_g: usize,
    /// Seed for channel draws and randomized design steps; defaults to the scenario's.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    tuning: Tuning,
    #[arg(long, default_value = "cct", value_parser = parse_scheme)]
    scheme: Scheme,
    /// Number of multicast targets on the region grid.
    #[arg(long, default_value_t = 20)]
    grid: usize,
    /// Output CSV path; phases go to `<out>.phases.json`.
    #[arg(long)]
    out: PathBuf,
    /// Report raw per-target designs instead of the Pareto envelope.
    #[arg(long)]
    no_pareto_filter: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    tuning: Tuning,
    /// Phase source: a JSON array of N phases in radians, or a scheme name to optimize.
    #[arg(long, default_value = "cct")]
    v: String,
    /// Confidential power in watts; defaults to the optimized design's.
    #[arg(long)]
    alpha: Option<f64>,
    /// Multicast floor used when optimizing the phases.
    #[arg(long, default_value_t = 0.0)]
    r_m: f64,
    /// Report path; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Infeasible(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Infeasible(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Infeasible(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Solver(_) => Failure::Solver(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

impl Tuning {
    fn params(&self) -> Outcome<AlgorithmParams> {
        let params = AlgorithmParams { t_alpha: self.t_alpha, t_lambda: self.t_lambda, t_g: self.t_g, ..AlgorithmParams::default() };
        params.validate()?;
        Ok(params)
    }
}

fn require_feasible(scenario: &Scenario) -> Outcome<()> {
    match feasibility_check(&scenario.channels) {
        Feasibility::Infeasible { user } => Err(Failure::Infeasible(infeasible_message(user))),
        _ => Ok(()),
    }
}

fn infeasible_message(user: usize) -> String {
    format!("scenario infeasible: user {user} receives at least user 0's best-case gain for every phase configuration")
}

fn phases_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".phases.json");
    PathBuf::from(s)
}

fn configure_threads() -> Outcome<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Config(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))
}

/// Traces the region of `scenario` at power `p` on `targets`, or on its own grid.
fn trace(scenario: &Scenario, p: f64, run: &RunArgs, targets: Option<&[f64]>) -> Outcome<RegionBoundary> {
    let params = run.tuning.params()?;
    let ctx = RegionContext::new(&scenario.channels, p, &params, scenario.seed)?;
    let own;
    let targets = match targets {
        Some(t) => t,
        None => {
            own = rm_grid(ctx.r_m_up(), run.grid);
            &own
        }
    };
    Ok(sweep_targets(&ctx, run.scheme, targets, !run.no_pareto_filter, scenario.seed)?)
}

fn check_grid(run: &RunArgs) -> Outcome<()> {
    if run.grid < 2 {
        return Err(Failure::Config("--grid must be at least 2".into()));
    }
    Ok(())
}

fn cmd_region(run: &RunArgs) -> Outcome<()> {
    check_grid(run)?;
    let scenario = load_scenario(&run.tuning.scenario, run.tuning.seed)?;
    require_feasible(&scenario)?;
    let boundary = trace(&scenario, scenario.total_power_w, run, None)?;
    let regions = [Region { power_w: None, boundary: &boundary }];
    write_region_csv(&run.out, &regions, run.scheme, scenario.seed)?;
    write_phases(&phases_path(&run.out), &regions)?;
    Ok(())
}

fn cmd_sweep_power(run: &RunArgs, powers: &[String]) -> Outcome<()> {
    check_grid(run)?;
    let powers = powers
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_power(s))
        .collect::<irsi_core::Result<Vec<f64>>>()?;
    if powers.is_empty() {
        return Err(Failure::Config("--powers needs at least one value".into()));
    }
    let scenario = load_scenario(&run.tuning.scenario, run.tuning.seed)?;
    require_feasible(&scenario)?;
    // All regions share the grid of the largest power so that they can be compared pointwise.
    let p_max = powers.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let params = run.tuning.params()?;
    let top = RegionContext::new(&scenario.channels, p_max, &params, scenario.seed)?.r_m_up();
    let targets = rm_grid(top, run.grid);
    let boundaries = powers
        .iter()
        .map(|&p| trace(&scenario, p, run, Some(&targets)))
        .collect::<Outcome<Vec<_>>>()?;
    let regions: Vec<Region> = powers.iter().zip(&boundaries).map(|(&p, b)| Region { power_w: Some(p), boundary: b }).collect();
    write_region_csv(&run.out, &regions, run.scheme, scenario.seed)?;
    write_phases(&phases_path(&run.out), &regions)?;
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Outcome<()> {
    let scenario = load_scenario(&args.tuning.scenario, args.tuning.seed)?;
    let ch = &scenario.channels;
    let p = scenario.total_power_w;
    let params = args.tuning.params()?;
    if !(args.r_m.is_finite() && args.r_m >= 0.0) {
        return Err(Failure::Config(format!("--r-m must be non-negative, got {}", args.r_m)));
    }
    let feasibility = feasibility_check(ch);

    let (v, design_alpha, delta_c): (PhaseVector, Option<f64>, f64) = match args.v.parse::<Scheme>() {
        Ok(scheme) => {
            let ctx = RegionContext::new(ch, p, &params, scenario.seed)?;
            let point = sweep_targets(&ctx, scheme, &[args.r_m], false, scenario.seed)?.points.remove(0);
            let alpha = point.feasible.then_some(point.alpha);
            (point.phase_vector, alpha, point.delta_c.unwrap_or(0.0))
        }
        Err(_) => (load_phases(Path::new(&args.v), ch.n())?, None, 0.0),
    };
    let alpha = args.alpha.or(design_alpha).unwrap_or(p);
    if !(alpha.is_finite() && (0.0..=p).contains(&alpha)) {
        return Err(Failure::Config(format!("--alpha must lie in [0, {p}], got {alpha}")));
    }

    let enhancement = if ch.k() == 2 { Some(enhancement_analysis(ch, &v, alpha, p, args.r_m)?) } else { None };
    let tr_t1 = real_trace(&lifted_forms(ch)[0].matrix);
    let report = AnalysisReport {
        feasibility,
        classification: enhancement.as_ref().map(|e| e.classification),
        e_factors: enhancement.as_ref().map(|e| e.e_factors.clone()),
        eta: enhancement.as_ref().map(|e| e.eta),
        gap_bounds: gap_bound_report(p, ch.n(), tr_t1, ch.sigma2[0], params.t_alpha, delta_c)?,
        complexity: complexity_estimate(ch.n(), ch.k(), params.t_alpha, params.t_lambda, params.t_g)?,
        alpha_w: alpha,
        phases: v.phases(),
    };
    write_json(args.out.as_deref(), &report)?;
    if let Feasibility::Infeasible { user } = feasibility {
        return Err(Failure::Infeasible(infeasible_message(user)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Region(run) => cmd_region(run),
        Command::Analyze(args) => cmd_analyze(args),
        Command::SweepPower { run, powers } => cmd_sweep_power(run, powers),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("irsi: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
