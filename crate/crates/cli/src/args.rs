use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable holding the default thread budget.
pub const THREADS_ENV: &str = "DFF_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dff", version, about = "Depth from a focal stack with a thin-lens defocus model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a synthetic focal stack from an all-in-focus image and a depth map.
    Render(RenderArgs),
    /// Estimate depth from a focal stack.
    Estimate(EstimateArgs),
    /// Check scale invariance and the affine CoC decomposition.
    VerifyInvariance(VerifyArgs),
    /// Time cost-volume construction and readout across thread budgets.
    Bench(BenchArgs),
    /// Compare a predicted depth map against ground truth.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Defocusnet,
    Nyu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadoutArg {
    Hard,
    Soft,
}

#[derive(Debug, Clone, Args)]
pub struct CameraArgs {
    /// Camera settings file (`focal_length`, `f_number`, `pixel_pitch_m`,
    /// optional `focus_distances`).
    #[arg(long)]
    pub settings: Option<PathBuf>,
    /// Built-in camera used when no settings file is given.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Focus distances in meters, comma separated; overrides every other source.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub focus_distances: Option<Vec<f64>>,
}

/// Procedural scene selection for commands that can run without files.
#[derive(Debug, Clone, Args)]
pub struct SceneArgs {
    /// `standard` (texture over a depth ramp) or `plane:<depth_m>`.
    #[arg(long, default_value = "standard")]
    pub scene: String,
    /// Side length of the procedural scene in pixels.
    #[arg(long, default_value_t = 64)]
    pub size: usize,
}

/// Sweep, cost and readout parameters. Flags win over `--config`, which
/// wins over built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Key-value file with defaults for any of the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub depth_min: Option<f64>,
    #[arg(long)]
    pub depth_max: Option<f64>,
    #[arg(long)]
    pub depth_samples: Option<usize>,
    #[arg(long)]
    pub window_radius: Option<usize>,
    #[arg(long)]
    pub gaussian_sigma: Option<f64>,
    #[arg(long)]
    pub c_max: Option<f64>,
    #[arg(long)]
    pub f1: Option<f64>,
    #[arg(long)]
    pub reg_weight: Option<f64>,
    /// Skip per-pixel min-max normalization.
    #[arg(long)]
    pub no_normalize: bool,
    #[arg(long, value_enum)]
    pub readout: Option<ReadoutArg>,
    /// Soft-argmin temperature.
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Worker threads for cost-volume construction. Defaults to the
    /// DFF_THREADS environment variable, then to all available cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    /// All-in-focus PNG; a procedural scene is rendered when omitted.
    #[arg(long, requires = "depth")]
    pub image: Option<PathBuf>,
    /// Ground-truth depth PFM matching `--image`.
    #[arg(long, requires = "image")]
    pub depth: Option<PathBuf>,
    #[command(flatten)]
    pub scene: SceneArgs,
    #[command(flatten)]
    pub camera: CameraArgs,
    /// Scale factor applied to focus distances, focal length, depth and
    /// inverse pixel pitch; the rendered pixels do not change.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Standard deviation of additive Gaussian noise.
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub noise_seed: u64,
    /// Treat PNG samples as gamma-2.2 encoded.
    #[arg(long)]
    pub gamma_encoded: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// Stack manifest written by `render`, or a comma-separated PNG list
    /// ordered by focus distance.
    #[arg(long)]
    pub stack: String,
    #[command(flatten)]
    pub camera: CameraArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Radius of the Gaussian cost aggregation before readout (0 disables).
    #[arg(long, default_value_t = 0)]
    pub aggregate_radius: usize,
    #[arg(long, default_value_t = 1.0)]
    pub aggregate_sigma: f64,
    /// Ground-truth depth PFM; writes a metric report when given.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Median-rescale the prediction before computing metrics.
    #[arg(long)]
    pub rescale: bool,
    /// Write the finished cost volume in the binary container format.
    #[arg(long)]
    pub save_cost_volume: Option<PathBuf>,
    /// Treat PNG samples as gamma-2.2 encoded.
    #[arg(long)]
    pub gamma_encoded: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    #[command(flatten)]
    pub camera: CameraArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    /// Negative control: leave the focal length unscaled.
    #[arg(long)]
    pub corrupt_focal_length: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Stack manifest or PNG list; the standard scene is rendered when omitted.
    #[arg(long)]
    pub stack: Option<String>,
    #[arg(long, default_value_t = 256)]
    pub size: usize,
    #[command(flatten)]
    pub camera: CameraArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Thread budgets to time; `max` is always appended.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    pub budgets: Vec<usize>,
    #[arg(long)]
    pub gamma_encoded: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Predicted depth PFM.
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth depth PFM.
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub rescale: bool,
    /// Write |pred - truth| as an 8-bit PNG scaled by its maximum.
    #[arg(long)]
    pub diff_png: Option<PathBuf>,
}
