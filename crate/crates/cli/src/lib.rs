//! Argument parsing and dispatch for the `oexp` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use oexp::experiments::{
    cmd_convergence, cmd_evolve, cmd_fig1, cmd_fig2, cmd_spectrum, cmd_stability, parse_complex,
    BoundaryChoice, ConvergenceConfig, Equation, InitialSpec, RunConfig, StabilityConfig,
};
use oexp::{Error, SchemeKind};

pub use oexp;

#[derive(Parser, Debug)]
#[command(
    name = "oexp",
    version,
    about = "Operator-exponential time stepping experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve one scheme and compare with the exact solution at every step.
    Evolve(Common),
    /// Even-eigenvalue errors of the Dirichlet S2 step against Crank–Nicolson.
    Fig1(Common),
    /// S2 and Crank–Nicolson relative errors side by side.
    Fig2(Common),
    /// Global errors and observed orders over a step ladder.
    Convergence(Convergence),
    /// Operator norms of dense step matrices.
    Stability(Stability),
    /// The full Dirichlet S2 spectrum from the dispersion equation.
    Spectrum(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long)]
    n: Option<usize>,
    /// Step size (the step `t` for fig1 and spectrum).
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// s1, s2, euler, cn or exact.
    #[arg(long)]
    scheme: Option<SchemeKind>,
    /// diffusion or schrodinger.
    #[arg(long)]
    equation: Option<Equation>,
    /// Left ghost factor, e.g. -1 or 0.3-0.2i.
    #[arg(long, allow_hyphen_values = true, value_parser = complex)]
    alpha: Option<Complex64>,
    /// Right ghost factor.
    #[arg(long, allow_hyphen_values = true, value_parser = complex)]
    beta: Option<Complex64>,
    /// delta[:K], random, eigen:J or file:PATH.
    #[arg(long)]
    initial: Option<InitialSpec>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Prefix the CSV with the configuration as `#` lines.
    #[arg(long)]
    echo: bool,
}

#[derive(Args, Debug, Clone)]
struct Convergence {
    #[command(flatten)]
    common: Common,
    /// Comma-separated schemes.
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<SchemeKind>>,
    /// Final time T.
    #[arg(long)]
    horizon: Option<f64>,
    /// Strictly decreasing step sizes, each dividing T.
    #[arg(long, value_delimiter = ',')]
    dts: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone)]
struct Stability {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<SchemeKind>>,
    /// dirichlet, neumann, periodic or third:ALPHA:BETA, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    bcs: Option<Vec<BoundaryChoice>>,
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
}

fn complex(s: &str) -> Result<Complex64, Error> {
    parse_complex(s)
}

fn run_config(c: &Common, defaults: RunConfig) -> RunConfig {
    RunConfig {
        n: c.n.unwrap_or(defaults.n),
        dt: c.dt.unwrap_or(defaults.dt),
        steps: c.steps.unwrap_or(defaults.steps),
        scheme: c.scheme.unwrap_or(defaults.scheme),
        equation: c.equation.unwrap_or(defaults.equation),
        alpha: c.alpha.unwrap_or(defaults.alpha),
        beta: c.beta.unwrap_or(defaults.beta),
        initial: c.initial.clone().unwrap_or(defaults.initial),
        seed: c.seed,
        jobs: c.jobs,
        echo: c.echo,
    }
}

/// A finished command: its CSV and where to write it (stdout when `None`).
#[derive(Debug)]
pub struct Output {
    pub csv: String,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(clap::Error),
    Run(Error),
}

impl Failure {
    /// 2 for usage and configuration errors, 3 for numerical failures, 1 for
    /// I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Run(e) if e.is_numerical() => 3,
            Failure::Run(Error::Io(_)) => 1,
            Failure::Run(_) => 2,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn execute<I, T>(args: I) -> Result<Output, Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(Failure::Usage)?;
    let (csv, out) = run(cli.command).map_err(Failure::Run)?;
    Ok(Output { csv, out })
}

fn run(command: Command) -> Result<(String, Option<PathBuf>), Error> {
    let base = RunConfig::default();
    match command {
        Command::Evolve(c) => Ok((cmd_evolve(&run_config(&c, base))?, c.out)),
        Command::Fig1(c) => {
            let cfg = run_config(&c, RunConfig { n: 1024, ..base });
            Ok((cmd_fig1(cfg.dt, cfg.n, cfg.jobs, cfg.echo)?, c.out))
        }
        Command::Fig2(c) => {
            let defaults = RunConfig {
                steps: 4000,
                equation: Equation::Schrodinger,
                ..base
            };
            Ok((cmd_fig2(&run_config(&c, defaults))?, c.out))
        }
        Command::Spectrum(c) => {
            let cfg = run_config(&c, RunConfig { n: 16, ..base });
            Ok((
                cmd_spectrum(cfg.dt, cfg.n, cfg.equation, cfg.jobs, cfg.echo)?,
                c.out,
            ))
        }
        Command::Convergence(v) => {
            let cfg = ConvergenceConfig {
                base: run_config(&v.common, RunConfig { n: 32, ..base }),
                schemes: v
                    .schemes
                    .unwrap_or_else(|| vec![SchemeKind::S1, SchemeKind::S2]),
                horizon: v.horizon.unwrap_or(1.0),
                dts: v
                    .dts
                    .unwrap_or_else(|| vec![0.25, 0.125, 0.0625, 0.03125, 0.015625]),
            };
            Ok((cmd_convergence(&cfg)?, v.common.out))
        }
        Command::Stability(v) => {
            let common = run_config(&v.common, RunConfig { n: 64, ..base });
            let cfg = StabilityConfig {
                n: common.n,
                equation: common.equation,
                bcs: match v.bcs {
                    Some(b) => b,
                    None => vec!["dirichlet".parse()?, "neumann".parse()?],
                },
                schemes: v
                    .schemes
                    .unwrap_or_else(|| vec![SchemeKind::S1, SchemeKind::S2]),
                times: v.times.unwrap_or_else(|| vec![0.1, 0.5, 1.0, 5.0]),
                jobs: common.jobs,
                echo: common.echo,
            };
            Ok((cmd_stability(&cfg)?, v.common.out))
        }
    }
}
