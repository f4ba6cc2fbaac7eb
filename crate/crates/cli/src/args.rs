//! Command line flags. Each flag overrides the matching configuration key.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use maslov_core::scenarios::SweepKind;

use crate::config::{Command, LambdaInf, PotentialInput, RunConfig, ScenarioKind};
use crate::RunError;

#[derive(Debug, Parser)]
#[command(name = "maslov", version, about = "Maslov index, spectral flow and Morse index identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Maslov index of a tabulated path against a plane or a second path.
    Path(PathArgs),
    /// Morse index difference against the Maslov index for theta-periodic conditions.
    #[command(name = "verify-periodic-1d")]
    VerifyPeriodic1d(IntervalArgs),
    /// Morse index monotonicity along scalar Robin conditions.
    #[command(name = "verify-robin-1d")]
    VerifyRobin1d(IntervalArgs),
    /// Maslov indices of the four sides of the homotopy square.
    Square(SquareArgs),
    /// Morse indices and spectral flow of a scaled lattice family.
    Band(BandArgs),
    /// Spectral flow identity of a registered scenario.
    Flow(FlowArgs),
}

impl Sub {
    pub fn command(&self) -> Command {
        match self {
            Sub::Path(_) => Command::Path,
            Sub::VerifyPeriodic1d(_) => Command::VerifyPeriodic1d,
            Sub::VerifyRobin1d(_) => Command::VerifyRobin1d,
            Sub::Square(_) => Command::Square,
            Sub::Band(_) => Command::Band,
            Sub::Flow(_) => Command::Flow,
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Sub::Path(a) => &a.common,
            Sub::VerifyPeriodic1d(a) | Sub::VerifyRobin1d(a) => &a.common,
            Sub::Square(a) => &a.common,
            Sub::Band(a) => &a.common,
            Sub::Flow(a) => &a.common,
        }
    }

    /// Writes every given flag into `cfg`.
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), RunError> {
        self.common().apply(cfg);
        match self {
            Sub::Path(a) => {
                set(&mut cfg.planes, &a.planes);
                set(&mut cfg.reference, &a.reference);
                set(&mut cfg.second, &a.second);
            }
            Sub::VerifyPeriodic1d(a) | Sub::VerifyRobin1d(a) => {
                set_potential(cfg, &a.potential)?;
                set(&mut cfg.theta1, &a.theta1);
                set(&mut cfg.theta2, &a.theta2);
            }
            Sub::Square(a) => {
                set_potential(cfg, &a.potential)?;
                set(&mut cfg.family, &a.family);
                set(&mut cfg.alpha, &a.alpha);
                set(&mut cfg.beta, &a.beta);
                set(&mut cfg.lambda_inf, &a.lambda_inf);
            }
            Sub::Band(a) => {
                set_potential(cfg, &a.potential)?;
                a.lattice.apply(cfg);
                if a.verify_y19 {
                    cfg.verify_y19 = Some(true);
                }
                set(&mut cfg.t_grid, &a.t_grid);
                set(&mut cfg.lowest, &a.lowest);
            }
            Sub::Flow(a) => {
                set(&mut cfg.scenario, &a.scenario);
                set_potential(cfg, &a.potential)?;
                set(&mut cfg.alpha, &a.alpha);
                set(&mut cfg.beta, &a.beta);
                set(&mut cfg.lambda_inf, &a.lambda_inf);
                a.lattice.apply(cfg);
            }
        }
        Ok(())
    }
}

fn set<T: Clone>(slot: &mut Option<T>, flag: &Option<T>) {
    if let Some(v) = flag {
        *slot = Some(v.clone());
    }
}

fn set_potential(cfg: &mut RunConfig, flag: &Option<String>) -> Result<(), RunError> {
    if let Some(text) = flag {
        crate::config::parse_inline_potential(text)?;
        cfg.potential = Some(PotentialInput::Inline(text.clone()));
    }
    Ok(())
}

fn parse_family(s: &str) -> Result<SweepKind, String> {
    match s {
        "theta_periodic" => Ok(SweepKind::ThetaPeriodic),
        "scalar_robin" => Ok(SweepKind::ScalarRobin),
        _ => Err(format!("unknown family `{s}` (theta_periodic, scalar_robin)")),
    }
}

fn parse_scenario(s: &str) -> Result<ScenarioKind, String> {
    match s {
        "theta_sweep_1d" => Ok(ScenarioKind::ThetaSweep1d),
        "robin_sweep_1d" => Ok(ScenarioKind::RobinSweep1d),
        "scaled_band" => Ok(ScenarioKind::ScaledBand),
        _ => Err(format!("unknown scenario `{s}` (theta_sweep_1d, robin_sweep_1d, scaled_band)")),
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write eigenvalue or eigenphase tracks as CSV.
    #[arg(long)]
    pub tracks: Option<PathBuf>,
    /// Write the crossing inventory as CSV.
    #[arg(long)]
    pub crossings: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// RK4 steps for solution traces.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Coarse grid of the spectral oracle.
    #[arg(long)]
    pub oracle_grid: Option<usize>,
    /// Half-width of the arc treated as a crossing.
    #[arg(long)]
    pub zero_tol: Option<f64>,
}

impl CommonArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.output.report, &self.report);
        set(&mut cfg.output.tracks, &self.tracks);
        set(&mut cfg.output.crossings, &self.crossings);
        set(&mut cfg.seed, &self.seed);
        if let Some(v) = self.steps {
            cfg.numerics.steps = v;
        }
        if let Some(v) = self.oracle_grid {
            cfg.numerics.oracle_grid = v;
        }
        if let Some(v) = self.zero_tol {
            cfg.numerics.maslov.zero_tol = v;
        }
    }
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Samples of the path, one row per parameter value.
    #[arg(long)]
    pub planes: Option<PathBuf>,
    /// Fixed reference plane.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Second path, sampled like the first.
    #[arg(long)]
    pub second: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `const:v`, `diag:v1,v2,...` or `cos:offset,amplitude`.
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SquareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<String>,
    /// `theta_periodic` or `scalar_robin`.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<SweepKind>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Lower spectral bound, or `auto`.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_inf: Option<LambdaInf>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Quasi-momentum in cell coordinates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<f64>>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Largest Fourier mode in each direction.
    #[arg(long)]
    pub cutoff: Option<usize>,
}

impl LatticeArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.theta, &self.theta);
        set(&mut cfg.tau, &self.tau);
        set(&mut cfg.cutoff, &self.cutoff);
    }
}

#[derive(Debug, Args)]
pub struct BandArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Constant or diagonal potential; Fourier tables go in the config file.
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<String>,
    /// Check the spectral flow and small-scale identities on `[tau, 1]`.
    #[arg(long)]
    pub verify_y19: bool,
    /// Scales at which to report Morse indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<f64>>,
    /// Number of lowest eigenvalues reported per scale.
    #[arg(long)]
    pub lowest: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `theta_sweep_1d`, `robin_sweep_1d` or `scaled_band`.
    #[arg(long, value_parser = parse_scenario)]
    pub scenario: Option<ScenarioKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub potential: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_inf: Option<LambdaInf>,
    #[command(flatten)]
    pub lattice: LatticeArgs,
}
