use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use euler_stab::stability::Window;
use euler_stab::verify::Suite;
use euler_stab::{DomainSpec, ModeIndex};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Linear stability of shear flows `Ω* = 2Γcos(p₁x₁ + κp₂x₂)` on the
/// rectangular torus, and sine-bracket simulations of their nonlinear
/// dynamics.
///
/// Exit status: 0 computed (any verdict), 2 invalid input, 3 numerical
/// failure, 4 verification failure. EULER_STAB_THREADS sets the number of
/// worker threads (0 = one per core).
#[derive(Debug, Parser)]
#[command(name = "euler-stab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stability verdict, unstable classes, λ* bounds and energy-Casimir diagnosis.
    Classify(SpectrumArgs),
    /// Eigenvalues of every unstable candidate class, with discrete-spectrum counts.
    Spectrum(SpectrumArgs),
    /// Lattice points inside the unstable ellipse.
    Lattice(LatticeArgs),
    /// Lie-Poisson simulation of a perturbed shear flow in the sine-bracket truncation.
    Simulate(SimulateArgs),
    /// Runs the self-verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    /// First component of the wave vector p.
    #[arg(long, allow_hyphen_values = true)]
    pub p1: i64,
    /// Second component of the wave vector p.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub p2: i64,
    /// Aspect ratio: the domain is [0, 2π) × [0, 2π/κ).
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: f64,
    /// Amplitude of the shear flow.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub flow: FlowArgs,
    /// Truncation window `m,n` of class offsets [default: -50,50, widened to
    /// three times the largest interior span]
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    pub window: Option<(i64, i64)>,
    /// Real parts above this count as growth.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub flow: FlowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub flow: FlowArgs,
    /// Truncation size: modes with |k₁|, |k₂| ≤ N.
    #[arg(short = 'N', long = "n", default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub dt: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Perturbation amplitude per mode pair.
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Steps between state snapshots (0: initial and final only).
    #[arg(long, default_value_t = 0)]
    pub snapshot_every: usize,
    /// Steps between conservation records.
    #[arg(long, default_value_t = 10)]
    pub log_every: usize,
    /// Also sample each snapshot on a resolution × resolution grid.
    #[arg(long, value_name = "RESOLUTION")]
    pub grid: Option<usize>,
    /// Grid snapshot file [default: <out>.grid]
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite to run; repeat for several [default: all]
    #[arg(long, value_parser = parse_suite)]
    pub suite: Vec<Suite>,
    /// JSON report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (m, n) = s.split_once(',').ok_or_else(|| format!("expected m,n, got '{s}'"))?;
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("'{x}': {e}"));
    Ok((parse(m)?, parse(n)?))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// Validated parameters of one run, echoed into every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p1: i64,
    pub p2: i64,
    pub kappa: f64,
    pub gamma: f64,
    pub window: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub simulation: Option<SimulationConfig>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub delta: f64,
    pub seed: u64,
    pub snapshot_every: usize,
    pub log_every: usize,
    pub grid: Option<usize>,
}

impl RunConfig {
    fn from_flow(flow: &FlowArgs, format: Format) -> Result<Self, CliError> {
        if !(flow.kappa.is_finite() && flow.kappa > 0.0) {
            return Err(CliError::Invalid(format!("--kappa must be positive and finite, got {}", flow.kappa)));
        }
        if !flow.gamma.is_finite() {
            return Err(CliError::Invalid(format!("--gamma must be finite, got {}", flow.gamma)));
        }
        if flow.p1 == 0 && flow.p2 == 0 {
            return Err(CliError::Invalid("p = (0, 0) is not a shear flow".into()));
        }
        Ok(RunConfig {
            p1: flow.p1,
            p2: flow.p2,
            kappa: flow.kappa,
            gamma: flow.gamma,
            window: None,
            simulation: None,
            format,
        })
    }

    pub fn spectrum(args: &SpectrumArgs) -> Result<Self, CliError> {
        let mut c = Self::from_flow(&args.flow, args.output.format)?;
        if let Some((m, n)) = args.window {
            if m > -2 || n < 2 {
                return Err(CliError::Invalid(format!("--window {m},{n} must satisfy m <= -2 and n >= 2")));
            }
        }
        if !(args.tol.is_finite() && args.tol >= 0.0) {
            return Err(CliError::Invalid(format!("--tol must be nonnegative, got {}", args.tol)));
        }
        c.window = args.window;
        Ok(c)
    }

    pub fn lattice(args: &LatticeArgs) -> Result<Self, CliError> {
        Self::from_flow(&args.flow, args.output.format)
    }

    pub fn simulate(args: &SimulateArgs) -> Result<Self, CliError> {
        let mut c = Self::from_flow(&args.flow, args.output.format)?;
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(CliError::Invalid(format!("--{name} must be positive and finite, got {x}")))
            }
        };
        positive("dt", args.dt)?;
        positive("t-end", args.t_end)?;
        if !(args.delta.is_finite() && args.delta >= 0.0) {
            return Err(CliError::Invalid(format!("--delta must be nonnegative, got {}", args.delta)));
        }
        if args.n == 0 {
            return Err(CliError::Invalid("-N must be at least 1".into()));
        }
        if args.log_every == 0 {
            return Err(CliError::Invalid("--log-every must be at least 1".into()));
        }
        if args.grid == Some(0) {
            return Err(CliError::Invalid("--grid resolution must be at least 1".into()));
        }
        c.simulation = Some(SimulationConfig {
            n: args.n,
            dt: args.dt,
            t_end: args.t_end,
            delta: args.delta,
            seed: args.seed,
            snapshot_every: args.snapshot_every,
            log_every: args.log_every,
            grid: args.grid,
        });
        Ok(c)
    }

    pub fn domain(&self) -> Result<DomainSpec<f64>, CliError> {
        Ok(DomainSpec::new(self.kappa, ModeIndex::new(self.p1, self.p2), self.gamma)?)
    }

    pub fn window(&self) -> Option<Window> {
        self.window.map(|(m, n)| Window::new(m, n))
    }
}
