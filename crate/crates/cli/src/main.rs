mod commands;
mod error;
mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::{RunContext, Sinks};
use crate::source::{FamilyArgs, GraphArgs};

/// Curvature, spectra, walks and local profiles of finite graphs.
#[derive(Parser, Debug)]
#[command(name = "ricci-gap", version)]
struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write the JSON summary here instead of stderr.
    #[arg(long, global = true, value_name = "PATH")]
    summary: Option<PathBuf>,
    /// Write the run manifest here (default: `<out>.manifest.json`, or stderr).
    #[arg(long, global = true, value_name = "PATH")]
    run_manifest: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "RICCI_GAP_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a family member as graph JSON.
    Generate(FamilyArgs),
    /// Exact edge curvatures as CSV, with a JSON summary.
    Curvature(CurvatureArgs),
    /// Lazy-walk eigenvalues, local spectral measures and counts.
    Spectrum(SpectrumArgs),
    /// Walk laws, entropy and radius series, coupled meeting times.
    Walk(WalkArgs),
    /// Ball census, profile distances and stationarity.
    Profile(ProfileArgs),
    /// Evaluate the three clauses for one graph.
    Trichotomy(TrichotomyArgs),
    /// Evaluate the clauses over a list of family specs and an epsilon grid.
    Sweep(SweepArgs),
    /// Per-instance table of every checked quantity for a list of family specs.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Epsilons for the negative fraction, comma separated (`0.01` or `1/100`).
    #[arg(long, value_delimiter = ',', default_value = "0")]
    eps: Vec<String>,
    /// Idleness of the kernel; 1/2 is the lazy walk.
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Emit the local spectral measure at this vertex.
    #[arg(long, value_name = "VERTEX", conflicts_with_all = ["count_above", "delocalization"])]
    local_measure: Option<usize>,
    /// Print the number of eigenvalues strictly above RHO.
    #[arg(long, value_name = "RHO", conflicts_with = "delocalization")]
    count_above: Option<f64>,
    /// Count eigenvalues at or above RHO instead.
    #[arg(long, requires = "count_above")]
    at_least_rho: bool,
    /// Print the fraction of vertices whose local measure puts at most EPS on [RHO, 1].
    #[arg(long, num_args = 2, value_names = ["RHO", "EPS"])]
    delocalization: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Auto,
    Exact,
    Float,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("op").required(true).args(["t", "entropy", "radius", "gap", "meet"])))]
struct WalkArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Starting vertex.
    #[arg(long, default_value_t = 0)]
    origin: usize,
    /// Law of the walk after T steps.
    #[arg(long)]
    t: Option<usize>,
    /// Entropy series up to T_MAX.
    #[arg(long, value_name = "T_MAX")]
    entropy: Option<usize>,
    /// Even-time radius estimates up to T_MAX.
    #[arg(long, value_name = "T_MAX")]
    radius: Option<usize>,
    /// Entropy rate minus twice the log inverse radius estimate at T.
    #[arg(long, value_name = "T")]
    gap: Option<usize>,
    /// Coupled walkers started at X and Y.
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    meet: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 1000)]
    horizon: usize,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Census depth, or the largest depth compared.
    #[arg(long = "ball-depth", default_value_t = 2)]
    ball_depth: usize,
    /// Graph file to compare against, depth by depth.
    #[arg(long, value_name = "PATH", conflicts_with = "stationarity")]
    compare: Option<PathBuf>,
    /// Print the exact stationarity residual of the degree-biased measure.
    #[arg(long)]
    stationarity: bool,
}

#[derive(Args, Debug)]
struct ClauseParams {
    #[arg(long)]
    delta: usize,
    #[arg(long)]
    rho: f64,
    /// Count eigenvalues equal to rho as well.
    #[arg(long)]
    at_least_rho: bool,
}

#[derive(Args, Debug)]
struct TrichotomyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    params: ClauseParams,
    #[arg(long)]
    eps: String,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// JSON list of family specs.
    #[arg(long, value_name = "PATH")]
    specs: PathBuf,
    #[command(flatten)]
    params: ClauseParams,
    #[arg(long, value_delimiter = ',', required = true)]
    eps_grid: Vec<String>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// JSON list of family specs.
    #[arg(long, value_name = "PATH")]
    specs: PathBuf,
    #[arg(long, default_value_t = 4)]
    delta: usize,
    #[arg(long, default_value_t = 0.9)]
    rho: f64,
    #[arg(long, default_value = "0.001")]
    eps: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sinks = Sinks {
        out: cli.out.clone(),
        summary: cli.summary.clone(),
        run_manifest: cli.run_manifest.clone(),
    };
    let mut ctx = RunContext::new(std::env::args().collect());
    let result = commands::configure_threads(cli.threads).and_then(|()| commands::run(cli.command, &sinks, &mut ctx));
    match result.and_then(|()| sinks.manifest(&ctx)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
