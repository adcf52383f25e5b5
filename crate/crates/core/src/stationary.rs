//! Fourier-Galerkin Newton solver for periodic stationary states and the
//! amplitude law of the bifurcating branch.

use crate::critical::CriticalPoint;
use crate::dispersion::{alpha, capital_omega, delta_bound, omega_coefficient, TOL_SEP};
use crate::error::{Error, Result};
use crate::fields::FourierField;
use crate::kernels::Kernel;
use crate::model::{EpsParams, ModelParams};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

pub const TOL_SOLVE: f64 = 1e-12;
pub const MAX_ITER: usize = 50;
/// The amplitude expansion is local; solves beyond this eps are allowed but
/// the asymptotic laws are not asserted there.
pub const EPS_CAP: f64 = 0.05;

/// One solved point on the bifurcating branch.
#[derive(Debug, Clone, Serialize)]
pub struct BranchPoint {
    pub eps: f64,
    pub delta: f64,
    pub field: FourierField,
    /// c_1 of the solved field (sign pinned positive)
    pub amplitude_measured: f64,
    /// 2 sqrt(Omega / omega)
    pub amplitude_predicted: f64,
    pub residual_norm: f64,
    pub newton_iters: usize,
}

/// F(v) = A_{eps,k} v - kappa-_eps v (a-_k * v) on the cosine coefficients;
/// the quadratic term is formed exactly at degree 2N and truncated to N.
pub fn residual(
    field: &FourierField,
    params: &EpsParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<FourierField> {
    let n = field.n();
    let k = field.k;
    let conv = field.convolved(a_minus)?;
    let quad = field.product(&conv).truncated(n);
    let km = params.kappa_minus_eps();
    let mut out = FourierField::zeros(n, k);
    for j in 0..=n {
        out.coeffs[j] =
            alpha(params, a_plus, a_minus, j as f64 * k)? * field.coeffs[j] - km * quad.coeffs[j];
    }
    Ok(out)
}

/// DF(v) h = A h - kappa-_eps [h (a-_k * v) + v (a-_k * h)] on the cosine basis.
pub fn jacobian(
    field: &FourierField,
    params: &EpsParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<DMatrix<f64>> {
    let n = field.n();
    let k = field.k;
    let km = params.kappa_minus_eps();
    let conv_v = field.convolved(a_minus)?;
    let mut mat = DMatrix::zeros(n + 1, n + 1);
    for col in 0..=n {
        let mut e = FourierField::zeros(n, k);
        e.coeffs[col] = 1.0;
        let conv_e = e.convolved(a_minus)?;
        let t = e.product(&conv_v).truncated(n);
        let s = field.product(&conv_e).truncated(n);
        for row in 0..=n {
            let lin = if row == col {
                alpha(params, a_plus, a_minus, row as f64 * k)?
            } else {
                0.0
            };
            mat[(row, col)] = lin - km * (t.coeffs[row] + s.coeffs[row]);
        }
    }
    Ok(mat)
}

/// Leading-order field from the Lyapunov-Schmidt expansion:
/// c_1 = 2|s|, c_2 = 2 g_2 |s|^2, c_0 = g_0 |s|^2 with |s| = sqrt(Omega/omega).
pub fn asymptotic_seed(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    crit: &CriticalPoint,
    eps: f64,
    delta: f64,
    n: usize,
) -> Result<FourierField> {
    let omega_big = capital_omega(params, a_plus, a_minus, crit.k_c, eps, delta)?;
    if omega_big <= 0.0 {
        return Err(Error::OutsideWedge { omega: omega_big });
    }
    let omega = omega_coefficient(params, a_plus, a_minus, crit.k_c)?;
    if omega <= 0.0 {
        return Err(Error::Numerical(format!(
            "omega = {omega} <= 0: supercritical amplitude law not applicable"
        )));
    }
    let s = (omega_big / omega).sqrt();
    let k = crit.k_c + delta;
    let ep = params.at_eps(eps);
    let km = ep.kappa_minus_eps();
    let ahat = a_minus.fourier(k)?;
    let a2 = alpha(&ep, a_plus, a_minus, 2.0 * k)?;
    let a0 = alpha(&ep, a_plus, a_minus, 0.0)?;
    if a2.abs() < 1e-12 || a0.abs() < 1e-12 {
        return Err(Error::DegenerateDenominator(
            "alpha(eps, 0) or alpha(eps, 2k) ~ 0 in the seed coefficients".into(),
        ));
    }
    let g2 = km * ahat / a2;
    let g0 = 2.0 * km * ahat / a0;
    let mut f = FourierField::zeros(n.max(2), k);
    f.coeffs[0] = g0 * s * s;
    f.coeffs[1] = 2.0 * s;
    f.coeffs[2] = 2.0 * g2 * s * s;
    Ok(f)
}

/// Damped Newton iteration to residual < TOL_SOLVE. No constant-solution
/// policing here; callers that require a pattern use `solve_branch_point`.
pub fn solve_field(
    seed: &FourierField,
    params: &EpsParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<(FourierField, f64, usize)> {
    let mut v = seed.clone();
    let n = v.n();
    let mut res = residual(&v, params, a_plus, a_minus)?;
    let mut rnorm = res.l2_norm();
    for iter in 0..MAX_ITER {
        if rnorm < TOL_SOLVE {
            return Ok((v, rnorm, iter));
        }
        let jac = jacobian(&v, params, a_plus, a_minus)?;
        let rhs = DVector::from_column_slice(&res.coeffs);
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("singular Galerkin Jacobian".into()))?;
        // backtracking line search on the residual norm
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..25 {
            let mut trial = v.clone();
            for j in 0..=n {
                trial.coeffs[j] -= lambda * step[j];
            }
            let trial_res = residual(&trial, params, a_plus, a_minus)?;
            let trial_norm = trial_res.l2_norm();
            if trial_norm < rnorm || trial_norm < TOL_SOLVE {
                v = trial;
                res = trial_res;
                rnorm = trial_norm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NewtonDiverged {
                iters: iter,
                residual: rnorm,
            });
        }
    }
    if rnorm < TOL_SOLVE {
        Ok((v, rnorm, MAX_ITER))
    } else {
        Err(Error::NewtonDiverged {
            iters: MAX_ITER,
            residual: rnorm,
        })
    }
}

fn spectral_decay_ok(f: &FourierField) -> bool {
    let m = f.max_abs();
    m == 0.0 || f.coeffs[f.n()].abs() <= 1e-10 * m
}

/// Solves from a seed, enforces the sign convention c_1 > 0, rejects
/// collapse onto the constant solutions, and doubles N (up to 256) until the
/// trailing coefficient is spectrally negligible.
pub fn solve_branch_point(
    seed: &FourierField,
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    crit: &CriticalPoint,
    eps: f64,
    delta: f64,
) -> Result<BranchPoint> {
    let ep = params.at_eps(eps);
    let mut current = seed.clone();
    loop {
        let (mut v, rnorm, iters) = solve_field(&current, &ep, a_plus, a_minus)?;
        if v.coeffs[1] < 0.0 {
            v.flip_phase();
        }
        let theta = params.theta();
        if v.coeffs[1].abs() <= TOL_SEP {
            let which = if (v.coeffs[0] + theta).abs() < 1e-6 {
                "u = 0"
            } else {
                "u = theta"
            };
            return Err(Error::CollapsedToConstant {
                which: which.into(),
            });
        }
        if spectral_decay_ok(&v) || v.n() >= 256 {
            let omega_big = capital_omega(params, a_plus, a_minus, crit.k_c, eps, delta)?;
            let omega = omega_coefficient(params, a_plus, a_minus, crit.k_c)?;
            let predicted = if omega_big > 0.0 && omega > 0.0 {
                2.0 * (omega_big / omega).sqrt()
            } else {
                f64::NAN
            };
            return Ok(BranchPoint {
                eps,
                delta,
                amplitude_measured: v.coeffs[1],
                amplitude_predicted: predicted,
                residual_norm: rnorm,
                newton_iters: iters,
                field: v,
            });
        }
        current = v.truncated(2 * v.n());
    }
}

/// Natural-parameter continuation over an increasing eps grid at fixed delta.
pub fn continue_branch(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    crit: &CriticalPoint,
    eps_grid: &[f64],
    delta: f64,
    n: usize,
) -> Result<Vec<BranchPoint>> {
    let mut out: Vec<BranchPoint> = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let step = (|| -> Result<BranchPoint> {
            if !(eps > 0.0 && eps <= EPS_CAP) {
                return Err(Error::InvalidParameter(format!(
                    "eps = {eps} outside (0, {EPS_CAP}]"
                )));
            }
            if delta.abs() >= delta_bound(params, a_plus, a_minus, crit.k_c, eps)? {
                return Err(Error::OutsideWedge {
                    omega: capital_omega(params, a_plus, a_minus, crit.k_c, eps, delta)?,
                });
            }
            let seed = match out.last() {
                Some(prev) => {
                    let mut s = prev.field.clone();
                    s.k = crit.k_c + delta;
                    s
                }
                None => asymptotic_seed(params, a_plus, a_minus, crit, eps, delta, n)?,
            };
            solve_branch_point(&seed, params, a_plus, a_minus, crit, eps, delta)
        })();
        out.push(step.map_err(|e| Error::AtEps {
            eps,
            source: Box::new(e),
        })?);
    }
    Ok(out)
}
