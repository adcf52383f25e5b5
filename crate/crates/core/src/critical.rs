//! Tangency solver: finds the kernel-family parameter h_c and wave number
//! k_c at which alpha(0, .) touches zero from below.

use crate::dispersion::{
    self, alpha, alpha_dk, alpha_dk2, check_assumptions, AssumptionReport, TOL_ROOT, TOL_SEP,
};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::model::ModelParams;
use serde::Serialize;

/// A one-parameter family h -> (a+, a-(h)). Both worked examples vary
/// only the competition kernel, but nothing here depends on that.
pub struct KernelFamily {
    pub a_plus: Kernel,
    make_a_minus: Box<dyn Fn(f64) -> Result<Kernel> + Send + Sync>,
}

impl KernelFamily {
    pub fn new<F>(a_plus: Kernel, make_a_minus: F) -> Self
    where
        F: Fn(f64) -> Result<Kernel> + Send + Sync + 'static,
    {
        Self {
            a_plus,
            make_a_minus: Box::new(make_a_minus),
        }
    }

    pub fn a_minus(&self, h: f64) -> Result<Kernel> {
        (self.make_a_minus)(h)
    }
}

/// Solved bifurcation point with residuals and the (A1)-(A8) report.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalPoint {
    pub h_c: f64,
    pub k_c: f64,
    pub residual_alpha: f64,
    pub residual_dk: f64,
    pub assumption_report: AssumptionReport,
}

/// Max of alpha(0, p) over a p-grid, and its location.
pub fn scan_sup_alpha(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    p_grid: &[f64],
) -> Result<(f64, f64)> {
    let eps0 = params.at_eps(0.0);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &p in p_grid {
        let v = alpha(&eps0, a_plus, a_minus, p)?;
        if v > best.0 {
            best = (v, p);
        }
    }
    Ok(best)
}

fn default_p_grid(params: &ModelParams, a_plus: &Kernel, a_minus: &Kernel) -> Result<Vec<f64>> {
    let p_max = dispersion::decay_horizon(
        &params.at_eps(0.0),
        a_plus,
        a_minus,
        params.kappa_plus / 2.0,
    )?;
    let n = ((p_max / 0.002).ceil() as usize).clamp(2000, 400_000);
    Ok((0..=n).map(|i| p_max * i as f64 / n as f64).collect())
}

/// Locates (h_c, k_c): brackets the sign change of sup_p alpha(0, p; h) on
/// the h-range, bisects to a seed, then polishes with a 2D Newton on
/// (alpha, d_k alpha). The returned point is certified as the unique global
/// maximum on the scan grid and carries the full assumption report.
pub fn find_tangency(
    params: &ModelParams,
    family: &KernelFamily,
    h_range: (f64, f64),
) -> Result<CriticalPoint> {
    let (h_min, h_max) = h_range;
    if !(h_max > h_min) {
        return Err(Error::InvalidParameter("empty h range".into()));
    }

    // 1. scan h for a bracket of sup_p alpha = 0
    let sup_at = |h: f64| -> Result<(f64, f64)> {
        let a_minus = family.a_minus(h)?;
        let grid = default_p_grid(params, &family.a_plus, &a_minus)?;
        scan_sup_alpha(params, &family.a_plus, &a_minus, &grid)
    };
    let n_scan = 40;
    let mut bracket = None;
    let mut prev = sup_at(h_min)?;
    let mut sup_seen = prev.0;
    for i in 1..=n_scan {
        let h = h_min + (h_max - h_min) * i as f64 / n_scan as f64;
        let cur = sup_at(h)?;
        sup_seen = sup_seen.max(cur.0);
        let h_prev = h_min + (h_max - h_min) * (i - 1) as f64 / n_scan as f64;
        if prev.0 < 0.0 && cur.0 >= 0.0 {
            bracket = Some((h_prev, h));
            break;
        }
        prev = cur;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoTangency {
        h_min,
        h_max,
        sup: sup_seen,
    })?;

    // 2. bisection on the scanned sup to seed Newton
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if sup_at(mid)?.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (mut h, _) = (0.5 * (lo + hi), ());
    let (_, mut k) = sup_at(h)?;

    // 3. Newton on F(h, k) = (alpha(0,k;h), d_k alpha(0,k;h));
    //    d/dh columns by central differences, d/dk analytic
    let eps0 = params.at_eps(0.0);
    let dh = 1e-6;
    let mut converged = false;
    let mut residual = f64::INFINITY;
    for _iter in 0..50 {
        let am = family.a_minus(h)?;
        let f1 = alpha(&eps0, &family.a_plus, &am, k)?;
        let f2 = alpha_dk(&eps0, &family.a_plus, &am, k)?;
        residual = f1.abs().max(f2.abs());
        if residual < TOL_ROOT {
            converged = true;
            break;
        }
        let am_p = family.a_minus(h + dh)?;
        let am_m = family.a_minus(h - dh)?;
        let j11 = (alpha(&eps0, &family.a_plus, &am_p, k)?
            - alpha(&eps0, &family.a_plus, &am_m, k)?)
            / (2.0 * dh);
        let j21 = (alpha_dk(&eps0, &family.a_plus, &am_p, k)?
            - alpha_dk(&eps0, &family.a_plus, &am_m, k)?)
            / (2.0 * dh);
        let j12 = f2;
        let j22 = alpha_dk2(&eps0, &family.a_plus, &am, k)?;
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-14 {
            return Err(Error::Numerical("singular tangency Jacobian".into()));
        }
        h -= (f1 * j22 - j12 * f2) / det;
        k -= (j11 * f2 - f1 * j21) / det;
    }
    if !converged {
        return Err(Error::NewtonDiverged {
            iters: 50,
            residual,
        });
    }

    // 4. certification on the final kernel: global max on the grid and
    //    uniqueness of the touching mode
    let a_minus = family.a_minus(h)?;
    let grid = default_p_grid(params, &family.a_plus, &a_minus)?;
    for &p in &grid {
        let v = alpha(&eps0, &family.a_plus, &a_minus, p)?;
        if v > TOL_SEP {
            return Err(Error::Numerical(format!(
                "alpha(0,{p}) = {v} > 0 at the solved h_c: tangency certification failed"
            )));
        }
        if v > -TOL_SEP && (p - k).abs() > 0.01 * k.max(1.0) && p > 1e-9 {
            return Err(Error::NonUnique { p, value: v });
        }
    }

    let residual_alpha = alpha(&eps0, &family.a_plus, &a_minus, k)?.abs();
    let residual_dk = alpha_dk(&eps0, &family.a_plus, &a_minus, k)?.abs();
    let assumption_report = check_assumptions(params, &family.a_plus, &a_minus, k)?;
    Ok(CriticalPoint {
        h_c: h,
        k_c: k,
        residual_alpha,
        residual_dk,
        assumption_report,
    })
}

/// The two worked kernel families at kappa+ = kappa- = 1.
pub mod examples {
    use super::*;

    /// a+ gaussian(l = 2), a-(h) = gaussian pair(q = 2, shift h).
    pub fn gaussian_family() -> KernelFamily {
        KernelFamily::new(Kernel::gaussian(2.0).unwrap(), |h| {
            Kernel::gaussian_pair(2.0, h)
        })
    }

    /// a+ uniform(l = 1), a-(h) = uniform pair(q = 2, inner offset h - 1);
    /// h is the shifted parameter in which alpha takes the closed form
    /// (1 - gamma cos(h p)) sin(p)/p - 1.
    pub fn uniform_family() -> KernelFamily {
        KernelFamily::new(Kernel::uniform(1.0).unwrap(), |h| {
            Kernel::uniform_pair(2.0, h - 1.0)
        })
    }
}
