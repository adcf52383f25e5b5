//! Dispersion relation alpha(eps, p), its derivatives, the normal-form
//! coefficients Omega and omega, and the assumption checklist (A1)-(A8).

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::model::{EpsParams, ModelParams};
use serde::Serialize;

/// Residual tolerance: quantities that should vanish.
pub const TOL_ROOT: f64 = 1e-10;
/// Separation tolerance: quantities that must stay away from zero.
pub const TOL_SEP: f64 = 1e-8;

/// alpha(eps, p) = kappa+_eps a+^(p) - (kappa+_eps - m) a-^(p) - kappa+_eps.
pub fn alpha(params: &EpsParams, a_plus: &Kernel, a_minus: &Kernel, p: f64) -> Result<f64> {
    let kp = params.kappa_plus_eps();
    Ok(kp * a_plus.fourier(p)? - (kp - params.m()) * a_minus.fourier(p)? - kp)
}

/// d/d eps alpha(eps, p) = kappa+ (a+^(p) - a-^(p) - 1); independent of eps.
pub fn alpha_deps(params: &EpsParams, a_plus: &Kernel, a_minus: &Kernel, p: f64) -> Result<f64> {
    let kp = params.base.kappa_plus;
    Ok(kp * (a_plus.fourier(p)? - a_minus.fourier(p)? - 1.0))
}

/// d/dp alpha(eps, p).
pub fn alpha_dk(params: &EpsParams, a_plus: &Kernel, a_minus: &Kernel, p: f64) -> Result<f64> {
    let kp = params.kappa_plus_eps();
    Ok(kp * a_plus.fourier_d1(p)? - (kp - params.m()) * a_minus.fourier_d1(p)?)
}

/// d2/dp2 alpha(eps, p).
pub fn alpha_dk2(params: &EpsParams, a_plus: &Kernel, a_minus: &Kernel, p: f64) -> Result<f64> {
    let kp = params.kappa_plus_eps();
    Ok(kp * a_plus.fourier_d2(p)? - (kp - params.m()) * a_minus.fourier_d2(p)?)
}

/// Cubic (Landau) coefficient
/// omega = (kappa-)^2 a-^(k_c) [ (a-^(k_c)+a-^(2k_c))/alpha(0,2k_c) + (2+2a-^(k_c))/alpha(0,0) ].
pub fn omega_coefficient(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    k_c: f64,
) -> Result<f64> {
    let eps0 = params.at_eps(0.0);
    let a0 = alpha(&eps0, a_plus, a_minus, 0.0)?;
    let a2 = alpha(&eps0, a_plus, a_minus, 2.0 * k_c)?;
    if a0.abs() < 1e-12 {
        return Err(Error::DegenerateDenominator("alpha(0,0) ~ 0".into()));
    }
    if a2.abs() < 1e-12 {
        return Err(Error::DegenerateDenominator("alpha(0,2k_c) ~ 0".into()));
    }
    let am1 = a_minus.fourier(k_c)?;
    let am2 = a_minus.fourier(2.0 * k_c)?;
    let km = params.kappa_minus;
    Ok(km * km * am1 * ((am1 + am2) / a2 + (2.0 + 2.0 * am1) / a0))
}

/// Normal-form drive Omega(eps, delta) = d_eps alpha(0,k_c) eps + 1/2 d2_k alpha(0,k_c) delta^2.
pub fn capital_omega(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    k_c: f64,
    eps: f64,
    delta: f64,
) -> Result<f64> {
    let eps0 = params.at_eps(0.0);
    let de = alpha_deps(&eps0, a_plus, a_minus, k_c)?;
    let dkk = alpha_dk2(&eps0, a_plus, a_minus, k_c)?;
    Ok(de * eps + 0.5 * dkk * delta * delta)
}

/// Positive half-width of the admissible delta-interval at the given eps:
/// delta^2 < 2 eps d_eps alpha / (-d2_k alpha).
pub fn delta_bound(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    k_c: f64,
    eps: f64,
) -> Result<f64> {
    if eps == 0.0 {
        return Ok(0.0);
    }
    let eps0 = params.at_eps(0.0);
    let de = alpha_deps(&eps0, a_plus, a_minus, k_c)?;
    let dkk = alpha_dk2(&eps0, a_plus, a_minus, k_c)?;
    if dkk >= 0.0 || de <= 0.0 {
        return Err(Error::Numerical(
            "wedge undefined: need d_eps alpha > 0 and d2_k alpha < 0".into(),
        ));
    }
    Ok((2.0 * eps * de / (-dkk)).sqrt())
}

/// Smallest wave number beyond which |alpha(eps, p) + kappa+_eps| <= threshold,
/// certified via the kernel Fourier envelopes.
pub fn decay_horizon(
    params: &EpsParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    threshold: f64,
) -> Result<f64> {
    let kp = params.kappa_plus_eps();
    let w_minus = (kp - params.m()).abs();
    let bound = |p: f64| kp * a_plus.fourier_envelope(p) + w_minus * a_minus.fourier_envelope(p);
    let mut p = 1.0;
    while bound(p) > threshold {
        p *= 2.0;
        if p > 1e12 {
            return Err(Error::Numerical(format!(
                "kernel envelopes do not reach decay threshold {threshold}"
            )));
        }
    }
    // refine by bisection to a modest relative width
    let mut lo = p / 2.0;
    let mut hi = p;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) > threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// One (A_i) entry of the checklist.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionCheck {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
}

/// Full (A1)-(A8) report at a candidate critical wave number.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    pub k_c: f64,
    pub checks: Vec<AssumptionCheck>,
    /// 2 d_eps alpha / (-d2_k alpha): delta^2/eps wedge slope of (A7).
    pub wedge_slope: f64,
    /// a-^(k_c); negative at any genuine tangency.
    pub a_minus_hat_kc: f64,
    /// a-(0) > 0 is a hypothesis of the scaling-limit section only; reported
    /// separately rather than folded into (A1).
    pub a_minus_at_zero_positive: bool,
}

impl AssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Evaluates (A1)-(A8) at (params, kernels, k_c).
pub fn check_assumptions(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    k_c: f64,
) -> Result<AssumptionReport> {
    let eps0 = params.at_eps(0.0);
    let mut checks = Vec::new();

    // (A1): parameter ordering plus kernel normalization.
    let mass_defect = (a_plus.mass() - 1.0).abs().max((a_minus.mass() - 1.0).abs());
    checks.push(AssumptionCheck {
        name: "A1".into(),
        pass: params.kappa_plus > params.m && params.m > 0.0 && mass_defect < 1e-10,
        value: mass_defect,
        tolerance: 1e-10,
    });

    // (A2): alpha(0, k_c) = 0.
    let a_at = alpha(&eps0, a_plus, a_minus, k_c)?;
    checks.push(AssumptionCheck {
        name: "A2".into(),
        pass: a_at.abs() < TOL_ROOT && k_c > 0.0,
        value: a_at,
        tolerance: TOL_ROOT,
    });

    // (A3): alpha(0, j k_c) bounded away from 0 for j != +-1, checked up to
    // the decay horizon; beyond it alpha < -kappa+/2 automatically.
    let p_max = decay_horizon(&eps0, a_plus, a_minus, params.kappa_plus / 2.0)?;
    let j_max = (p_max / k_c).ceil() as i64;
    let mut min_sep = f64::INFINITY;
    for j in 0..=j_max {
        if j == 1 {
            continue;
        }
        min_sep = min_sep.min(alpha(&eps0, a_plus, a_minus, j as f64 * k_c)?.abs());
    }
    checks.push(AssumptionCheck {
        name: "A3".into(),
        pass: min_sep > TOL_SEP,
        value: min_sep,
        tolerance: TOL_SEP,
    });

    // (A4): d_k alpha(0, k_c) = 0.
    let dk = alpha_dk(&eps0, a_plus, a_minus, k_c)?;
    checks.push(AssumptionCheck {
        name: "A4".into(),
        pass: dk.abs() < TOL_ROOT,
        value: dk,
        tolerance: TOL_ROOT,
    });

    // (A5): transversality is automatic (d_eps alpha(0,k_c) = -m a-^(k_c) at a
    // tangency); the value is recorded and must be positive.
    let de = alpha_deps(&eps0, a_plus, a_minus, k_c)?;
    checks.push(AssumptionCheck {
        name: "A5".into(),
        pass: de > TOL_SEP,
        value: de,
        tolerance: TOL_SEP,
    });

    // (A6): d2_k alpha(0, k_c) < 0.
    let dkk = alpha_dk2(&eps0, a_plus, a_minus, k_c)?;
    checks.push(AssumptionCheck {
        name: "A6".into(),
        pass: dkk < -TOL_SEP,
        value: dkk,
        tolerance: TOL_SEP,
    });

    // (A7): the wedge delta^2 < 2 eps d_eps alpha / (-d2_k alpha) is non-empty
    // exactly when the (A5)/(A6) signs hold.
    let wedge_slope = if dkk < 0.0 { 2.0 * de / (-dkk) } else { f64::NAN };
    checks.push(AssumptionCheck {
        name: "A7".into(),
        pass: wedge_slope.is_finite() && wedge_slope > 0.0,
        value: wedge_slope,
        tolerance: 0.0,
    });

    // (A8): omega > 0.
    let (omega, omega_pass) = match omega_coefficient(params, a_plus, a_minus, k_c) {
        Ok(w) => (w, w > TOL_SEP),
        Err(_) => (f64::NAN, false),
    };
    checks.push(AssumptionCheck {
        name: "A8".into(),
        pass: omega_pass,
        value: omega,
        tolerance: TOL_SEP,
    });

    Ok(AssumptionReport {
        k_c,
        checks,
        wedge_slope,
        a_minus_hat_kc: a_minus.fourier(k_c)?,
        a_minus_at_zero_positive: a_minus.evaluate(0.0) > 0.0,
    })
}
