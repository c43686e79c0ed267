use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Quantum Chernoff bound metric for thermal states of the anisotropic XY
/// chain: single-point tensors, phase-diagram contours, temperature-scaling
/// exponents and density-matrix oracle checks.
#[derive(Debug, Parser)]
#[command(name = "qcb", version, about)]
pub struct Cli {
    /// JSON file holding a full run configuration (fields mirror the
    /// subcommand flags, plus a "command" key). Used when no subcommand is
    /// given on the command line.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate all nine tensor components at a single point.
    Metric(MetricArgs),
    /// Maximum-eigenvalue map over a (λ, γ) grid at fixed temperature.
    Contour(ContourArgs),
    /// Temperature sweep and scaling-exponent fits at one coupling.
    Scaling(ScalingArgs),
    /// Finite-difference density-matrix cross-checks of the tensor.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

fn default_points() -> usize {
    16
}
fn default_n() -> usize {
    11
}
fn default_step() -> f64 {
    1e-2
}
fn default_threshold() -> f64 {
    1e-4
}
fn default_rel_tol() -> f64 {
    1e-9
}
fn default_max_depth() -> u32 {
    40
}
fn default_contour_t() -> f64 {
    1e-2
}
fn default_lambda_min() -> f64 {
    -1.5
}
fn default_lambda_max() -> f64 {
    1.5
}
fn default_lambda_count() -> usize {
    121
}
fn default_gamma_min() -> f64 {
    -1.0
}
fn default_gamma_max() -> f64 {
    1.0
}
fn default_gamma_count() -> usize {
    81
}
fn default_cap() -> String {
    "3".into()
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeArgs {
    /// Evaluate exact mode sums for an odd chain of N sites instead of the
    /// thermodynamic limit.
    #[arg(long, value_name = "N")]
    pub finite_n: Option<usize>,

    /// Relative quadrature tolerance (thermodynamic limit).
    #[arg(long, default_value_t = default_rel_tol())]
    pub rel_tol: f64,

    /// Maximum quadrature panel-bisection depth.
    #[arg(long, default_value_t = default_max_depth())]
    pub max_depth: u32,
}

impl Default for SchemeArgs {
    fn default() -> Self {
        Self {
            finite_n: None,
            rel_tol: default_rel_tol(),
            max_depth: default_max_depth(),
        }
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricArgs {
    /// Temperature (1/β).
    #[arg(long, conflicts_with_all = ["beta", "zero_t"])]
    pub t: Option<f64>,

    /// Inverse temperature β.
    #[arg(long, conflicts_with = "zero_t")]
    pub beta: Option<f64>,

    /// Evaluate at β = +∞ (nonclassical part only; the classical part is
    /// reported as its zero-temperature limit).
    #[arg(long)]
    pub zero_t: bool,

    /// Anisotropy γ ∈ [−1, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,

    /// Transverse field λ.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,

    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Default for MetricArgs {
    fn default() -> Self {
        Self {
            t: None,
            beta: None,
            zero_t: false,
            gamma: 0.0,
            lambda: 0.0,
            scheme: SchemeArgs::default(),
            format: OutputFormat::Json,
            out: None,
        }
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourArgs {
    /// Temperature of the map.
    #[arg(long, default_value_t = default_contour_t())]
    pub t: f64,

    #[arg(long, default_value_t = default_lambda_min(), allow_hyphen_values = true)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = default_lambda_max(), allow_hyphen_values = true)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = default_lambda_count())]
    pub lambda_count: usize,

    #[arg(long, default_value_t = default_gamma_min(), allow_hyphen_values = true)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = default_gamma_max(), allow_hyphen_values = true)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = default_gamma_count())]
    pub gamma_count: usize,

    /// Clip max_eig at this value for plotting parity ("none" disables).
    #[arg(long, default_value_t = default_cap())]
    pub cap: String,

    /// Worker threads for the grid sweep (0 = all cores). Row order is
    /// deterministic regardless.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Default for ContourArgs {
    fn default() -> Self {
        Self {
            t: default_contour_t(),
            lambda_min: default_lambda_min(),
            lambda_max: default_lambda_max(),
            lambda_count: default_lambda_count(),
            gamma_min: default_gamma_min(),
            gamma_max: default_gamma_max(),
            gamma_count: default_gamma_count(),
            cap: default_cap(),
            jobs: 0,
            scheme: SchemeArgs::default(),
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingArgs {
    /// Anisotropy γ ∈ [−1, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,

    /// Transverse field λ.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,

    /// Force the quantum-critical window/fit (required when the coupling is
    /// on a critical line; rejected otherwise).
    #[arg(long)]
    pub critical: bool,

    /// Components to fit (repeatable); defaults to all nine in the
    /// quasi-classical regime and to the three nonclassical ones at
    /// criticality.
    #[arg(long = "component", value_name = "LABEL")]
    pub components: Vec<String>,

    /// Sweep window; defaults to [Δ/500, Δ/20] (quasi-classical) or
    /// [1e-4, 1e-2] (critical).
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,

    /// Number of geometric grid points.
    #[arg(long, default_value_t = default_points())]
    pub points: usize,

    /// Annotate each fit with the expected table value and a pass flag;
    /// exit code 3 when any expected check fails.
    #[arg(long)]
    pub expected: bool,

    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Default for ScalingArgs {
    fn default() -> Self {
        Self {
            gamma: 0.0,
            lambda: 0.0,
            critical: false,
            components: Vec::new(),
            t_min: None,
            t_max: None,
            points: default_points(),
            expected: false,
            scheme: SchemeArgs::default(),
            format: OutputFormat::Json,
            out: None,
        }
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleArgs {
    /// Points "beta,gamma,lambda" (repeatable).
    #[arg(long = "point", value_name = "B,G,L")]
    pub points: Vec<String>,

    /// Directions "vb,vg,vl" in (β, γ, λ) coordinates (repeatable);
    /// defaults to the three axes and the three axis-pair diagonals.
    #[arg(long = "direction", value_name = "VB,VG,VL")]
    pub directions: Vec<String>,

    /// Chain length for the exact mode states.
    #[arg(long, default_value_t = default_n())]
    pub n: usize,

    /// Base finite-difference step (Richardson uses {step, step/2}).
    #[arg(long, default_value_t = default_step())]
    pub step: f64,

    /// Maximum accepted relative error; exit code 4 on breach.
    #[arg(long, default_value_t = default_threshold())]
    pub threshold: f64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Default for OracleArgs {
    fn default() -> Self {
        Self {
            points: Vec::new(),
            directions: Vec::new(),
            n: default_n(),
            step: default_step(),
            threshold: default_threshold(),
            format: OutputFormat::Json,
            out: None,
        }
    }
}
