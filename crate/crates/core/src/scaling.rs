//! The sigma-rescaled problem whose sigma -> 0 limit is the classical
//! diffusion equation with nonlocal reaction, and the continuation of
//! (k_c(sigma), kappa(sigma)) down to the local dispersion data.

use crate::dispersion::{TOL_ROOT, TOL_SEP};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::model::ModelParams;
use serde::Serialize;

/// Rescaled rates at dispersal scale sigma with compensation kappa_extra:
/// kappa+~_eps = (1+eps)(kappa+ + kappa)/sigma^2, m~ = m + (kappa+ + kappa)/sigma^2 - kappa+,
/// kappa-~_eps chosen to keep theta invariant.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScaledParams {
    pub base: ModelParams,
    pub sigma: f64,
    pub kappa_extra: f64,
}

impl ScaledParams {
    pub fn new(base: ModelParams, sigma: f64, kappa_extra: f64) -> Result<Self> {
        if sigma <= 0.0 {
            return Err(Error::InvalidParameter("sigma must be > 0".into()));
        }
        let s = Self {
            base,
            sigma,
            kappa_extra,
        };
        if s.m_tilde() <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "m~ = {} <= 0: sigma too large or kappa too negative",
                s.m_tilde()
            )));
        }
        Ok(s)
    }

    fn big_c(&self) -> f64 {
        (self.base.kappa_plus + self.kappa_extra) / (self.sigma * self.sigma)
    }

    pub fn kappa_plus_tilde(&self, eps: f64) -> f64 {
        (1.0 + eps) * self.big_c()
    }

    pub fn kappa_minus_tilde(&self, eps: f64) -> f64 {
        (1.0 + eps * self.big_c() / (self.base.kappa_plus - self.base.m)) * self.base.kappa_minus
    }

    pub fn m_tilde(&self) -> f64 {
        self.base.m + self.big_c() - self.base.kappa_plus
    }
}

/// Local dispersion relation d(mu, k) = -k^2 - mu a-^(k).
pub fn d_local(a_minus: &Kernel, mu: f64, k: f64) -> Result<f64> {
    Ok(-k * k - mu * a_minus.fourier(k)?)
}

/// Dispersion data of the local limit problem at mu_c = (kappa+ - m)/kappa+.
#[derive(Debug, Clone, Serialize)]
pub struct LocalLimitData {
    pub mu_c: f64,
    pub k_c_local: f64,
    /// residuals (|d|, |d_k d|) at (mu_c, k_c_local)
    pub residuals: (f64, f64),
    pub d_kk: f64,
    pub omega_1: f64,
    /// eps-coefficient of Omega_0: -m a-^(k_c)
    pub omega0_eps_coeff: f64,
    /// delta^2-coefficient of Omega_0: -kappa+ (1 + (mu_c/2) d2_k a-^(k_c)),
    /// the direct sigma -> 0 limit of (1/2) d2_k alpha~
    pub omega0_delta2_coeff: f64,
    /// the same limit in the rewritten form -2 kappa+ (1 + mu_c/2) d2_k a-^(k_c),
    /// halved; printed alongside since the two disagree as formulas
    pub omega0_delta2_coeff_rewritten: f64,
}

/// Rescaled dispersion relation; for sigma <= 0 the continuous extension
/// -gamma (kappa+ + kappa) p^2 - (kappa+ - m) a-^(p) is used, defined only
/// at eps = 0.
pub fn tilde_alpha(
    eps: f64,
    p: f64,
    sigma: f64,
    kappa_extra: f64,
    base: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<f64> {
    if sigma <= 0.0 {
        if eps != 0.0 {
            return Err(Error::UnsupportedExtension);
        }
        let gamma = 0.5 * a_plus.second_moment();
        return Ok(-gamma * (base.kappa_plus + kappa_extra) * p * p
            - (base.kappa_plus - base.m) * a_minus.fourier(p)?);
    }
    let s = ScaledParams::new(*base, sigma, kappa_extra)?;
    let kp = s.kappa_plus_tilde(eps);
    Ok(kp * a_plus.fourier(sigma * p)? - (kp - s.m_tilde()) * a_minus.fourier(p)? - kp)
}

/// d/dk of tilde_alpha at eps = 0 (with the sigma <= 0 extension).
pub fn tilde_alpha_dk(
    p: f64,
    sigma: f64,
    kappa_extra: f64,
    base: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<f64> {
    let w = base.kappa_plus - base.m;
    if sigma <= 0.0 {
        let gamma = 0.5 * a_plus.second_moment();
        return Ok(-2.0 * gamma * (base.kappa_plus + kappa_extra) * p - w * a_minus.fourier_d1(p)?);
    }
    let s = ScaledParams::new(*base, sigma, kappa_extra)?;
    Ok(s.kappa_plus_tilde(0.0) * sigma * a_plus.fourier_d1(sigma * p)? - w * a_minus.fourier_d1(p)?)
}

/// d2/dk2 of tilde_alpha at eps = 0 (with the sigma <= 0 extension).
pub fn tilde_alpha_dk2(
    p: f64,
    sigma: f64,
    kappa_extra: f64,
    base: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<f64> {
    let w = base.kappa_plus - base.m;
    if sigma <= 0.0 {
        let gamma = 0.5 * a_plus.second_moment();
        return Ok(-2.0 * gamma * (base.kappa_plus + kappa_extra) - w * a_minus.fourier_d2(p)?);
    }
    Ok((base.kappa_plus + kappa_extra) * a_plus.fourier_d2(sigma * p)?
        - w * a_minus.fourier_d2(p)?)
}

/// omega_1 of the local theory at (mu_c, k_c).
pub fn omega_1(a_minus: &Kernel, mu_c: f64, k_c: f64) -> Result<f64> {
    let a1 = a_minus.fourier(k_c)?;
    let a2 = a_minus.fourier(2.0 * k_c)?;
    let denom = 4.0 * k_c * k_c + mu_c * a2;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateDenominator(
            "4 k_c^2 + mu_c a-^(2 k_c) ~ 0".into(),
        ));
    }
    Ok(-mu_c * a1 * (mu_c * (a1 + a2) / denom + 2.0 * (1.0 + a1)))
}

/// Solves the local tangency d(mu_c, k) = 0, d_k d(mu_c, k) = 0 for k alone
/// (mu_c is fixed by the base rates) and assembles the limit data. Errors
/// with NoTangency if d(mu_c, .) does not touch zero at its maximum.
pub fn local_quantities(base: &ModelParams, a_minus: &Kernel) -> Result<LocalLimitData> {
    let mu_c = (base.kappa_plus - base.m) / base.kappa_plus;
    // locate the positive maximizer of d(mu_c, .) by scan + Newton on d_k
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut p = 1e-3;
    while p < 20.0 {
        let v = d_local(a_minus, mu_c, p)?;
        if v > best.0 {
            best = (v, p);
        }
        p += 1e-3;
    }
    let mut k = best.1;
    for _ in 0..60 {
        let d1 = -2.0 * k - mu_c * a_minus.fourier_d1(k)?;
        let d2 = -2.0 - mu_c * a_minus.fourier_d2(k)?;
        if d2.abs() < 1e-14 {
            break;
        }
        let step = d1 / d2;
        k -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let d_val = d_local(a_minus, mu_c, k)?;
    let d1_val = -2.0 * k - mu_c * a_minus.fourier_d1(k)?;
    if !(k > 0.0) || d_val.abs() > TOL_ROOT || d1_val.abs() > TOL_ROOT {
        return Err(Error::NoTangency {
            h_min: k,
            h_max: k,
            sup: d_val,
        });
    }
    let akk = a_minus.fourier_d2(k)?;
    let d_kk = -2.0 - mu_c * akk;
    if d_kk >= -TOL_SEP {
        return Err(Error::Numerical(format!(
            "d_kk = {d_kk} not negative at the local tangency"
        )));
    }
    // H2 (iv): separation of the other modes, bounded by the decay horizon
    let j_max = (20.0 / k).ceil() as i64;
    for j in 0..=j_max {
        if j == 1 {
            continue;
        }
        let v = d_local(a_minus, mu_c, j as f64 * k)?;
        if v.abs() < TOL_SEP {
            return Err(Error::NonUnique {
                p: j as f64 * k,
                value: v,
            });
        }
    }
    let kp = base.kappa_plus;
    Ok(LocalLimitData {
        mu_c,
        k_c_local: k,
        residuals: (d_val.abs(), d1_val.abs()),
        d_kk,
        omega_1: omega_1(a_minus, mu_c, k)?,
        omega0_eps_coeff: -base.m * a_minus.fourier(k)?,
        omega0_delta2_coeff: -kp * (1.0 + 0.5 * mu_c * akk),
        omega0_delta2_coeff_rewritten: -kp * (1.0 + 0.5 * mu_c) * akk,
    })
}

/// Continuation of the tangency system {alpha~ = 0, d_k alpha~ = 0} in
/// (k, kappa) from (k_c_local, 0) at sigma = 0 up to the requested sigma.
pub fn solve_k_and_kappa(
    sigma: f64,
    base: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    local: &LocalLimitData,
) -> Result<(f64, f64)> {
    if sigma < 0.0 {
        return Err(Error::InvalidParameter("sigma must be >= 0".into()));
    }
    let mut k = local.k_c_local;
    let mut kappa = 0.0;
    if sigma == 0.0 {
        return Ok((k, kappa));
    }
    let n_steps = (sigma / 0.02).ceil().max(1.0) as usize;
    for step in 1..=n_steps {
        let s = sigma * step as f64 / n_steps as f64;
        let mut converged = false;
        let mut residual = f64::INFINITY;
        for _iter in 0..50 {
            let f1 = tilde_alpha(0.0, k, s, kappa, base, a_plus, a_minus)?;
            let f2 = tilde_alpha_dk(k, s, kappa, base, a_plus, a_minus)?;
            residual = f1.abs().max(f2.abs());
            if residual < TOL_ROOT {
                converged = true;
                break;
            }
            // analytic Jacobian in (k, kappa)
            let j11 = f2; // d alpha~/dk
            let j12 = (a_plus.fourier(s * k)? - 1.0) / (s * s);
            let j21 = tilde_alpha_dk2(k, s, kappa, base, a_plus, a_minus)?;
            let j22 = a_plus.fourier_d1(s * k)? / s;
            let det = j11 * j22 - j12 * j21;
            if det.abs() < 1e-14 {
                return Err(Error::Numerical(
                    "singular Jacobian in the (k, kappa) continuation".into(),
                ));
            }
            k -= (f1 * j22 - j12 * f2) / det;
            kappa -= (j11 * f2 - f1 * j21) / det;
        }
        if !converged {
            return Err(Error::NewtonDiverged {
                iters: 50,
                residual,
            });
        }
    }
    Ok((k, kappa))
}

/// omega of (A8) evaluated on the rescaled problem at its tangency point.
pub fn omega_sigma(
    sigma: f64,
    kappa: f64,
    k_c_sigma: f64,
    base: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<f64> {
    let a1 = a_minus.fourier(k_c_sigma)?;
    let a2 = a_minus.fourier(2.0 * k_c_sigma)?;
    let al2 = tilde_alpha(0.0, 2.0 * k_c_sigma, sigma, kappa, base, a_plus, a_minus)?;
    let al0 = tilde_alpha(0.0, 0.0, sigma, kappa, base, a_plus, a_minus)?;
    if al2.abs() < 1e-12 || al0.abs() < 1e-12 {
        return Err(Error::DegenerateDenominator(
            "alpha~(0, 0) or alpha~(0, 2k_c) ~ 0".into(),
        ));
    }
    let km = base.kappa_minus; // kappa-~_0 = kappa-
    Ok(km * km * a1 * ((a1 + a2) / al2 + (2.0 + 2.0 * a1) / al0))
}

/// One row of the sigma -> 0 convergence table.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub sigma: f64,
    pub k_c_sigma: f64,
    pub kappa_sigma: f64,
    /// -m a-^(k_c(sigma)): the finite transversality value the table tracks
    pub d_eps: f64,
    pub d2_k: f64,
    pub omega: f64,
    /// omega(sigma) theta^2 - omega_1; tends to 0 (exactly when kappa+ = 1,
    /// where omega_0 theta^2 = omega_1 holds without the kappa+ factor)
    pub omega_theta2_minus_omega1: f64,
}

pub fn convergence_study(
    base: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    sigma_list: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    let local = local_quantities(base, a_minus)?;
    let theta = base.theta();
    let mut rows = Vec::with_capacity(sigma_list.len());
    for &sigma in sigma_list {
        let (k, kappa) = solve_k_and_kappa(sigma, base, a_plus, a_minus, &local)?;
        let omega = omega_sigma(sigma, kappa, k, base, a_plus, a_minus)?;
        rows.push(ConvergenceRow {
            sigma,
            k_c_sigma: k,
            kappa_sigma: kappa,
            d_eps: -base.m * a_minus.fourier(k)?,
            d2_k: tilde_alpha_dk2(k, sigma, kappa, base, a_plus, a_minus)?,
            omega,
            omega_theta2_minus_omega1: omega * theta * theta - local.omega_1,
        });
    }
    Ok(rows)
}
