//! Model parameters and their epsilon-deformation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Base rates (kappa_plus, kappa_minus, m) of the doubly-nonlocal
/// Fisher-KPP equation kappa+ (a+ * u) - m u - kappa- u (a- * u) = 0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModelParams {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub m: f64,
}

impl ModelParams {
    pub fn new(kappa_plus: f64, kappa_minus: f64, m: f64) -> Result<Self> {
        if !(kappa_plus > m && m > 0.0 && kappa_minus > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need kappa_plus > m > 0 and kappa_minus > 0, got ({kappa_plus}, {kappa_minus}, {m})"
            )));
        }
        Ok(Self {
            kappa_plus,
            kappa_minus,
            m,
        })
    }

    /// The positive constant solution theta = (kappa+ - m)/kappa-.
    pub fn theta(&self) -> f64 {
        (self.kappa_plus - self.m) / self.kappa_minus
    }

    /// Linear growth rate at u = 0: kappa+ - m.
    pub fn gamma_lin(&self) -> f64 {
        self.kappa_plus - self.m
    }

    pub fn at_eps(&self, eps: f64) -> EpsParams {
        EpsParams::new(*self, eps)
    }
}

/// The eps-deformed rates. The deformation is chosen so that theta is
/// invariant: kappa+_eps = (1+eps) kappa+, kappa-_eps = (1 + eps kappa+/(kappa+ - m)) kappa-,
/// m unchanged.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EpsParams {
    pub base: ModelParams,
    pub eps: f64,
}

impl EpsParams {
    pub fn new(base: ModelParams, eps: f64) -> Self {
        Self { base, eps }
    }

    /// Raw-rate constructor bypassing the kappa+ > m invariant; used for
    /// the decay regime kappa+ < m where the only attractor is u = 0.
    pub fn from_rates_unchecked(kappa_plus: f64, kappa_minus: f64, m: f64) -> Self {
        Self {
            base: ModelParams {
                kappa_plus,
                kappa_minus,
                m,
            },
            eps: 0.0,
        }
    }

    pub fn kappa_plus_eps(&self) -> f64 {
        (1.0 + self.eps) * self.base.kappa_plus
    }

    pub fn kappa_minus_eps(&self) -> f64 {
        (1.0 + self.eps * self.base.kappa_plus / (self.base.kappa_plus - self.base.m))
            * self.base.kappa_minus
    }

    pub fn m(&self) -> f64 {
        self.base.m
    }

    pub fn theta(&self) -> f64 {
        self.base.theta()
    }
}
