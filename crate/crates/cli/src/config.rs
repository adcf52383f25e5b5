//! JSON experiment configuration: strict schema, kernel construction, and
//! per-command blocks.

use fkpp_core::critical::{examples, KernelFamily};
use fkpp_core::{Kernel, ModelParams};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelBlock,
    #[serde(default)]
    pub kernels: Option<KernelsBlock>,
    #[serde(default)]
    pub critical: Option<CriticalBlock>,
    #[serde(default)]
    pub branch: Option<BranchBlock>,
    #[serde(default)]
    pub stability: Option<StabilityBlock>,
    #[serde(default)]
    pub evolve: Option<EvolveBlock>,
    #[serde(default)]
    pub limit: Option<LimitBlock>,
    #[serde(default)]
    pub uniqueness: Option<UniquenessBlock>,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub m: f64,
}

impl ModelBlock {
    pub fn build(&self) -> Result<ModelParams, String> {
        ModelParams::new(self.kappa_plus, self.kappa_minus, self.m).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelsBlock {
    pub a_plus: KernelSpec,
    pub a_minus: KernelSpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    /// centered Gaussian, variance l
    Gaussian { l: f64 },
    /// Gaussians at +-h, each of variance q
    GaussianPair { q: f64, h: f64 },
    /// uniform on [-l, l]
    Uniform { l: f64 },
    /// uniform on +-[h_tilde, h_tilde + q], each side of width q
    UniformPair { q: f64, h_tilde: f64 },
    /// two-column CSV x,a(x) on a uniform symmetric grid
    Tabulated { path: PathBuf },
}

impl KernelSpec {
    pub fn build(&self, base_dir: &Path) -> Result<Kernel, String> {
        let k = match self {
            KernelSpec::Gaussian { l } => Kernel::gaussian(*l),
            KernelSpec::GaussianPair { q, h } => Kernel::gaussian_pair(*q, *h),
            KernelSpec::Uniform { l } => Kernel::uniform(*l),
            KernelSpec::UniformPair { q, h_tilde } => Kernel::uniform_pair(*q, *h_tilde),
            KernelSpec::Tabulated { path } => {
                let full = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| format!("kernel table {}: {e}", full.display()))?;
                Kernel::tabulated_from_csv(&text)
            }
        };
        k.map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// a+ gaussian(2), a-(h) gaussian pair(2, h)
    Gaussian,
    /// a+ uniform(1), a-(h) uniform pair(2, h - 1)
    Uniform,
}

impl FamilyKind {
    pub fn build(&self) -> KernelFamily {
        match self {
            FamilyKind::Gaussian => examples::gaussian_family(),
            FamilyKind::Uniform => examples::uniform_family(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalBlock {
    pub family: FamilyKind,
    pub h_min: f64,
    pub h_max: f64,
}

fn default_n() -> usize {
    16
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchBlock {
    pub eps_grid: Vec<f64>,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_n")]
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityBlock {
    pub eps: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_n")]
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveBlock {
    pub eps: f64,
    pub t_max: f64,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_n")]
    pub n: usize,
    /// amplitude of the cos(k_c x) perturbation of theta
    pub initial_amplitude: f64,
    /// amplitude of seeded random higher-mode noise (0 disables)
    #[serde(default)]
    pub noise_amplitude: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitBlock {
    pub sigma_list: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniquenessBlock {
    pub periods: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub m_values: Vec<f64>,
    pub h_values: Vec<f64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}
