//! Numerical bifurcation toolkit for the doubly-nonlocal Fisher-KPP equation
//! kappa+ (a+ * u) - m u - kappa- u (a- * u) = 0 on 2*pi/k-periodic fields.
//!
//! The crate locates the Turing-type bifurcation point, computes the
//! stationary pattern branch by Fourier-Galerkin Newton iteration, verifies
//! the amplitude and eigenvalue asymptotics, integrates the evolution
//! equation, reproduces the local-diffusion scaling limit, and evaluates
//! computable uniqueness certificates around the homogeneous state.

pub mod critical;
pub mod dispersion;
pub mod error;
pub mod evolution;
pub mod fields;
pub mod kernels;
pub mod model;
pub mod quad;
pub mod scaling;
pub mod stability;
pub mod stationary;
pub mod uniqueness;

pub use critical::CriticalPoint;
pub use dispersion::{AssumptionCheck, AssumptionReport, TOL_ROOT, TOL_SEP};
pub use error::{Error, Result};
pub use fields::{FourierField, TrigSeries};
pub use kernels::Kernel;
pub use model::{EpsParams, ModelParams};
pub use stability::SpectrumReport;
pub use stationary::BranchPoint;
