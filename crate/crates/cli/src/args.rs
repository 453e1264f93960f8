use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use convex_trig_core::Tolerances;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "convex-trig", version, about = "Convex trigonometry, the generalized pendulum and sub-Finsler extremals")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Geometric tolerance for membership and convexity checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_geo: f64,
    /// Relative error target of the adaptive integrator (absolute target is 1e-3 of it).
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_ode: f64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for run manifests (default: next to the first output file).
    #[arg(long, global = true)]
    pub manifest_dir: Option<PathBuf>,
}

impl Global {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            geo: self.tol_geo,
            corner: self.tol_geo,
            ode_rel: self.tol_ode,
            ode_abs: self.tol_ode * 1e-3,
            ..Tolerances::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of cos, sin, the polar correspondence and right derivatives.
    Trig(TrigArgs),
    /// Vertex angle tables of a polygon and its polar.
    PolygonTables(OutArgs),
    /// Writes the polar body as JSON.
    Polar(OutArgs),
    /// Prints area, period and polar period.
    Area(BodyArgs),
    /// Simulates the generalized pendulum.
    Pendulum(PendulumArgs),
    /// Level curves of the pendulum energy.
    Portrait(PortraitArgs),
    /// Extremal of a time-optimal control problem.
    Extremal(ExtremalArgs),
    /// Compares the library against the brute-force oracles.
    Verify(VerifyArgs),
    /// Re-runs the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Trig(_) => "trig",
            Command::PolygonTables(_) => "polygon-tables",
            Command::Polar(_) => "polar",
            Command::Area(_) => "area",
            Command::Pendulum(_) => "pendulum",
            Command::Portrait(_) => "portrait",
            Command::Extremal(_) => "extremal",
            Command::Verify(_) => "verify",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BodyArgs {
    /// Body JSON file.
    pub body: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutArgs {
    pub body: PathBuf,
    /// Output file (default: standard output).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrigArgs {
    pub body: PathBuf,
    /// Angles: `a,b,c` or `start:stop:step` (stop excluded).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PendulumArgs {
    pub body: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_polar0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: f64,
    /// Duration T.
    #[arg(long)]
    pub duration: f64,
    /// Uniform grid size; events are added on top.
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    /// Coefficient g in front of sin.
    #[arg(long, default_value_t = 1.0)]
    pub gain: f64,
    /// Separatrix policy: `stay`, `dwell:<time>`, `exit:increasing`, `exit:decreasing`.
    #[arg(long)]
    pub policy: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also draw the phase portrait with the trajectory to this SVG file.
    #[arg(long)]
    pub portrait: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PortraitArgs {
    pub body: PathBuf,
    /// Energy levels (list or range); default is a grid around both equilibrium levels.
    #[arg(long, allow_hyphen_values = true)]
    pub levels: Option<String>,
    /// Points per branch.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gain: f64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExtremalArgs {
    /// heisenberg, grushin, martinet, engel or cartan.
    pub system: String,
    pub body: PathBuf,
    /// JSON with `h` and optionally `q`, `phi0`, `theta_polar0`, `omega0`, `x0`.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub duration: f64,
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    #[arg(long)]
    pub policy: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Integrate the raw state equations and print the sup-norm disagreement.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 100_000)]
    pub verify_steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    pub body: PathBuf,
    /// Random boundary points for the sector-area check.
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub boundary_samples: usize,
    /// RK4 steps for the trajectory check.
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
