//! `anyonchain`: experiment driver for anyon-chain entanglement.

mod commands;
mod config;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::Params;

#[derive(Parser)]
#[command(name = "anyonchain", version, about = "Anyonic entanglement and golden-chain experiments")]
struct Cli {
    /// Flat `key = value` config file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: ANYONCHAIN_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Category data checks and export.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Fusion-space dimensions by counting and by the Verlinde formula.
    Dims(Opts),
    /// Average AEE per cut, exact or by Haar sampling.
    PageCurve {
        /// Closed-form average, asymptotics and variance.
        #[arg(long)]
        analytic: bool,
        /// Monte-Carlo average over Haar-random states.
        #[arg(long)]
        montecarlo: bool,
        #[command(flatten)]
        opts: Opts,
    },
    /// Exact Haar variance against chain length.
    Variance(Opts),
    /// Resolved average AEE around f = 1/2.
    Crossover(Opts),
    /// q-deformed symmetry-resolved entropy for SU(2)_k.
    Qsree(Opts),
    /// Golden-chain exact diagonalisation.
    GoldenChain {
        #[command(subcommand)]
        action: ChainAction,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    /// Pentagon, hexagon, unitarity and Verlinde residuals.
    Validate(Opts),
    /// The model as JSON.
    Dump(Opts),
}

#[derive(Subcommand)]
enum ChainAction {
    /// All eigenvalues.
    Spectrum(Opts),
    /// Eigenvalues with level-spacing ratios.
    Levels(Opts),
    /// Mid-spectrum eigenstate AEE per cut.
    AeeCurve(Opts),
    /// Difference between the AEE at f and at 1 − f.
    Asymmetry(Opts),
}

/// Run parameters. Each may also be given in the config file under the
/// same name.
#[derive(Args, Default)]
struct Opts {
    /// fibonacci, su2k, zn or a model .json file.
    #[arg(long)]
    model: Option<String>,
    /// SU(2) level.
    #[arg(long)]
    k: Option<String>,
    /// Order of Z_n.
    #[arg(long)]
    n: Option<String>,
    /// Label of the chain anyons, e.g. tau or 1/2.
    #[arg(long)]
    jext: Option<String>,
    /// Chain length, or a list/range such as 8:20:2 where accepted.
    #[arg(long = "L")]
    l: Option<String>,
    /// Subsystem sizes, e.g. 1:7 or 2,4,8.
    #[arg(long = "LA")]
    l_a: Option<String>,
    /// Total charge.
    #[arg(long = "J")]
    total: Option<String>,
    /// Next-nearest-neighbour coupling(s).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Crossover offsets, e.g. -4:4:0.5.
    #[arg(long = "Lambda", allow_hyphen_values = true)]
    big_lambda: Option<String>,
    /// Crossover scaling exponent.
    #[arg(long)]
    s: Option<String>,
    /// Subsystem fraction(s).
    #[arg(long)]
    f: Option<String>,
    /// Reflection sector: +1, -1 or all.
    #[arg(long, allow_hyphen_values = true)]
    parity: Option<String>,
    /// Spin class for qsree: integer, half-integer or both.
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    samples: Option<String>,
    /// Number of mid-spectrum states.
    #[arg(long)]
    window: Option<String>,
    /// Poisson reference density for plots: standard or caption.
    #[arg(long)]
    poisson: Option<String>,
    /// CSV destination (stdout if absent); the resolved config goes next to it.
    #[arg(long)]
    out: Option<String>,
    /// SVG plot destination.
    #[arg(long)]
    plot: Option<String>,
}

impl Opts {
    fn flags(self) -> Vec<(&'static str, String)> {
        let all = [
            ("model", self.model),
            ("k", self.k),
            ("n", self.n),
            ("jext", self.jext),
            ("L", self.l),
            ("LA", self.l_a),
            ("J", self.total),
            ("lambda", self.lambda),
            ("Lambda", self.big_lambda),
            ("s", self.s),
            ("f", self.f),
            ("parity", self.parity),
            ("case", self.case),
            ("seed", self.seed),
            ("samples", self.samples),
            ("window", self.window),
            ("poisson", self.poisson),
            ("out", self.out),
            ("plot", self.plot),
        ];
        all.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect()
    }
}

fn threads(cli: &Cli) -> Result<Option<usize>> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    if let Some(path) = &cli.config {
        if let Some(n) = config::file_threads(path)? {
            return Ok(Some(n));
        }
    }
    match std::env::var("ANYONCHAIN_THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            Ok(Some(v.trim().parse().map_err(|e| anyhow!("invalid ANYONCHAIN_THREADS '{v}': {e}"))?))
        }
        _ => Ok(None),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = threads(&cli)? {
        if n == 0 {
            return Err(anyhow!("thread count must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring threads")?;
    }
    let config = cli.config.as_deref();
    let (opts, action): (Opts, fn(&mut Params) -> Result<commands::Run>) = match cli.command {
        Command::Model { action: ModelAction::Validate(o) } => (o, commands::model_validate),
        Command::Model { action: ModelAction::Dump(o) } => (o, commands::model_dump),
        Command::Dims(o) => (o, commands::dims),
        Command::PageCurve { analytic, montecarlo, opts } => {
            let mut p = Params::new(config, opts.flags())?;
            let (out, plot) = commands::destinations(&mut p);
            let run = commands::page_curve(&mut p, analytic, montecarlo)?;
            return finish(&p, out, plot, run);
        }
        Command::Variance(o) => (o, commands::variance),
        Command::Crossover(o) => (o, commands::crossover),
        Command::Qsree(o) => (o, commands::qsree),
        Command::GoldenChain { action } => match action {
            ChainAction::Spectrum(o) => (o, commands::chain_spectrum),
            ChainAction::Levels(o) => (o, commands::chain_levels),
            ChainAction::AeeCurve(o) => (o, commands::chain_aee_curve),
            ChainAction::Asymmetry(o) => (o, commands::chain_asymmetry),
        },
    };
    let mut p = Params::new(config, opts.flags())?;
    let (out, plot) = commands::destinations(&mut p);
    let run = action(&mut p)?;
    finish(&p, out, plot, run)
}

fn finish(p: &Params, out: Option<PathBuf>, plot: Option<PathBuf>, run: commands::Run) -> Result<ExitCode> {
    commands::emit(p, out, plot, &run)?;
    match run.failed {
        Some(msg) => {
            eprintln!("anyonchain: {msg}");
            Ok(ExitCode::from(1))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("anyonchain: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
