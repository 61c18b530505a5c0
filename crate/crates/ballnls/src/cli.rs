//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::{
    BesselModeName, BilinearKind, Experiment, LatticeMode, ModeSpec, Params, RunConfig, SchemeName,
    SourceName,
};
use crate::error::{exit, invalid, CliResult};
use crate::experiments::execute;
use crate::report::{write_all, SUMMARY_FILE};

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "BALLNLS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "ballnls",
    version,
    about = "Experiments for the cubic Schrödinger equation on the unit ball"
)]
struct Cli {
    /// JSON configuration document; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the equation from a few excited modes.
    Simulate(SimulateArgs),
    /// Bilinear eigenfunction norms, flow norms and Bessel products.
    Bilinear(BilinearArgs),
    /// First Bessel zeros against the asymptotic model.
    Zeros(ZerosArgs),
    /// Λ and Γ counting profiles.
    Lattice(LatticeArgs),
    /// L^p growth of single eigenfunctions.
    Strichartz(StrichartzArgs),
    /// Combine cached sweeps into the regularity index.
    #[command(name = "report-zn1")]
    ReportZn1(Zn1Args),
}

#[derive(Debug, Args)]
struct Shared {
    /// Block ratio δ in (1, 1.2247].
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated sweep sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<f64>>,
    /// Grid size (or grid factor for strichartz).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    shared: Shared,
    /// Number of modes.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeName>,
    #[arg(long)]
    focusing: Option<bool>,
    #[arg(long)]
    output_every: Option<usize>,
    /// Initial amplitudes as `k:re[:im]`, repeatable.
    #[arg(long = "mode", value_name = "K:RE[:IM]")]
    modes: Vec<ModeSpec>,
}

#[derive(Debug, Args)]
struct BilinearArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long, value_enum)]
    kind: Option<BilinearKind>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Random-phase trials per size (flow only).
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Debug, Args)]
struct ZerosArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long)]
    nu_min: Option<f64>,
    #[arg(long)]
    nu_max: Option<f64>,
    /// Smallest order entering the model fit.
    #[arg(long)]
    fit_min: Option<f64>,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long, value_enum)]
    mode: Option<LatticeMode>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    l: Option<f64>,
    #[arg(long, value_enum)]
    source: Option<SourceName>,
    /// Compare exact and model zero sources.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    compare: Option<bool>,
}

#[derive(Debug, Args)]
struct StrichartzArgs {
    #[command(flatten)]
    shared: Shared,
    /// Lebesgue exponent: 2, 4 or 6.
    #[arg(long)]
    p: Option<u32>,
}

#[derive(Debug, Args)]
struct Zn1Args {
    #[arg(long, value_name = "FILE")]
    gamma_sweep: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    bessel_sweep: Option<PathBuf>,
    #[arg(long, value_enum)]
    bessel_mode: Option<BesselModeName>,
}

impl Shared {
    fn params(self) -> Params {
        Params {
            delta: self.delta,
            seed: self.seed,
            sizes: self.sizes,
            grid: self.grid,
            tolerance: self.tolerance,
            ..Params::default()
        }
    }
}

impl Command {
    fn split(self) -> (Experiment, Params) {
        match self {
            Command::Simulate(a) => (
                Experiment::Simulate,
                Params {
                    k: a.k,
                    dt: a.dt,
                    t_final: a.t_final,
                    scheme: a.scheme,
                    focusing: a.focusing,
                    output_every: a.output_every,
                    modes: (!a.modes.is_empty()).then_some(a.modes),
                    ..a.shared.params()
                },
            ),
            Command::Bilinear(a) => (
                Experiment::Bilinear,
                Params {
                    kind: a.kind,
                    k_max: a.k_max,
                    samples: a.samples,
                    trials: a.trials,
                    ..a.shared.params()
                },
            ),
            Command::Zeros(a) => (
                Experiment::Zeros,
                Params {
                    nu_min: a.nu_min,
                    nu_max: a.nu_max,
                    fit_min: a.fit_min,
                    ..a.shared.params()
                },
            ),
            Command::Lattice(a) => (
                Experiment::Lattice,
                Params {
                    mode: a.mode,
                    n: a.n,
                    l: a.l,
                    source: a.source,
                    compare: a.compare,
                    ..a.shared.params()
                },
            ),
            Command::Strichartz(a) => (
                Experiment::Strichartz,
                Params {
                    p: a.p,
                    ..a.shared.params()
                },
            ),
            Command::ReportZn1(a) => (
                Experiment::ReportZn1,
                Params {
                    gamma_sweep: a.gamma_sweep,
                    bessel_sweep: a.bessel_sweep,
                    bessel_mode: a.bessel_mode,
                    ..Params::default()
                },
            ),
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = match value.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            return Err(invalid!(
                "{THREADS_VAR} = {value:?} must be a positive integer"
            ))
        }
    };
    // A second call in the same process keeps the existing pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn assemble(cli: Cli) -> CliResult<RunConfig> {
    let (experiment, flags) = cli.command.split();
    let mut config = match &cli.config {
        Some(path) => {
            let doc = RunConfig::load(path)?;
            if doc.experiment != experiment {
                return Err(invalid!(
                    "{} describes experiment {:?}, not {:?}",
                    path.display(),
                    doc.experiment.name(),
                    experiment.name()
                ));
            }
            doc
        }
        None => RunConfig::new(experiment),
    };
    config.params.overlay(&flags);
    if let Some(out) = cli.out {
        config.output_dir = out;
    }
    config.finalize()
}

fn execute_cli(cli: Cli) -> CliResult<PathBuf> {
    configure_threads()?;
    let config = assemble(cli)?;
    let (effective, artifacts) = execute(&config)?;
    write_all(
        &config.output_dir,
        effective.experiment,
        &effective,
        &artifacts,
    )?;
    Ok(config.output_dir.join(SUMMARY_FILE))
}

/// Parses `args` (including the program name), runs, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::SUCCESS,
                ErrorKind::InvalidValue | ErrorKind::ValueValidation => exit::VALIDATION,
                _ => exit::USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute_cli(cli) {
        Ok(summary) => {
            println!("{}", summary.display());
            exit::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
