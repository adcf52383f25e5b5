use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the solvers and certificate evaluators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Tabulated kernel grid too coarse for the requested wave number.
    #[error("tabulated kernel resolution too coarse for wave number {p} (Nyquist limit {limit})")]
    Resolution { p: f64, limit: f64 },

    #[error("no tangency: sup_p alpha(0,p;h) stays below zero on h in [{h_min}, {h_max}] (max {sup})")]
    NoTangency { h_min: f64, h_max: f64, sup: f64 },

    #[error("tangency not unique: second near-critical mode at p = {p} (alpha = {value})")]
    NonUnique { p: f64, value: f64 },

    #[error("Newton did not converge after {iters} iterations (residual {residual})")]
    NewtonDiverged { iters: usize, residual: f64 },

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("(eps, delta) outside the existence wedge: Omega = {omega}")]
    OutsideWedge { omega: f64 },

    #[error("Newton iterates collapsed to the constant solution {which}")]
    CollapsedToConstant { which: String },

    #[error("sigma <= 0 extension of the rescaled dispersion is defined only at eps = 0")]
    UnsupportedExtension,

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("certificate not applicable: {0}")]
    NotApplicable(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("solver failed at eps = {eps}: {source}")]
    AtEps {
        eps: f64,
        #[source]
        source: Box<Error>,
    },
}
