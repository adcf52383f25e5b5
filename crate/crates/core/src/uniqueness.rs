//! Computable nonexistence/uniqueness certificates around the constant
//! solutions: kernel dominance, the L^2_p radius via I_p(a) and gamma_p,
//! and the L^infty radius via ||J_theta||_1.
//!
//! All quadrature-based quantities follow upper-bound semantics: I_p and
//! ||J_theta||_1 are reported as certified upper bounds (value + tail), so
//! the derived uniqueness radii are never overstated.

use crate::dispersion::{alpha, decay_horizon, TOL_SEP};
use crate::error::{Error, Result};
use crate::kernels::{DecayClass, Kernel};
use crate::model::ModelParams;
use crate::quad;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DominanceVerdict {
    /// kappa+ a+ >= (kappa+ - m) a- everywhere: only u = 0 and u = theta.
    Pass,
    /// dominance fails; witness point included
    Fail { witness_x: f64 },
    /// the grid/tail comparison cannot certify either way
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub verdict: DominanceVerdict,
    /// min over the grid of kappa+ a+(x) - (kappa+ - m) a-(x)
    pub min_margin: f64,
    /// strict inequality at the origin with (kappa+ - m) a-(0) > 0
    pub strict_at_zero: bool,
    pub conclusion: String,
}

/// Checks kappa+ a+(x) >= (kappa+ - m) a-(x) on a dense grid plus a
/// decay-class tail comparison.
pub fn check_dominance(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> DominanceReport {
    let kp = params.kappa_plus;
    let g = params.gamma_lin();
    let r = a_plus.effective_support().max(a_minus.effective_support());
    let n = 200_001;
    let mut min_margin = f64::INFINITY;
    let mut witness = None;
    for i in 0..n {
        let x = -r + 2.0 * r * i as f64 / (n - 1) as f64;
        let margin = kp * a_plus.evaluate(x) - g * a_minus.evaluate(x);
        if margin < min_margin {
            min_margin = margin;
            if margin < -1e-14 {
                witness.get_or_insert(x);
            }
        }
    }
    let strict_at_zero =
        kp * a_plus.evaluate(0.0) > g * a_minus.evaluate(0.0) && g * a_minus.evaluate(0.0) > 0.0;

    if let Some(witness_x) = witness {
        return DominanceReport {
            verdict: DominanceVerdict::Fail { witness_x },
            min_margin,
            strict_at_zero,
            conclusion: format!("dominance fails at x = {witness_x}"),
        };
    }

    // tail comparison beyond the grid: conclusive when a- has compact
    // support inside the grid, or when a+ decays no faster than a-
    let tail_ok = match (a_plus.decay_class(), a_minus.decay_class()) {
        (_, DecayClass::Compact(r_minus)) => Some(r_minus <= r),
        (DecayClass::Compact(_), DecayClass::GaussianTail { .. }) => Some(false),
        (
            DecayClass::GaussianTail {
                variance: lp,
                shift: hp,
            },
            DecayClass::GaussianTail {
                variance: lm,
                shift: hm,
            },
        ) => {
            if lm < lp {
                Some(true)
            } else if lm == lp && hm <= hp {
                // same decay scale: the grid comparison already covered the
                // constant-ratio regime
                Some(true)
            } else {
                Some(false)
            }
        }
        _ => None,
    };
    match tail_ok {
        Some(true) if strict_at_zero => DominanceReport {
            verdict: DominanceVerdict::Pass,
            min_margin,
            strict_at_zero,
            conclusion: "only constant solutions u = 0 and u = theta exist".into(),
        },
        Some(false) => DominanceReport {
            verdict: DominanceVerdict::Fail { witness_x: r },
            min_margin,
            strict_at_zero,
            conclusion: "dominance fails in the tail beyond the comparison grid".into(),
        },
        _ => DominanceReport {
            verdict: DominanceVerdict::Indeterminate,
            min_margin,
            strict_at_zero,
            conclusion: "grid and tail comparison cannot certify dominance".into(),
        },
    }
}

/// Upper bound on I_p(a) = sqrt(p) sup_x sum_j ||a(x - .)||_{L^2[jp,(j+1)p)}.
///
/// The x-sup runs over a grid on [0, p) (the summand family is p-periodic);
/// |j| is truncated where the kernel support ends and the remainder is
/// bounded by the algebraic tail estimate; the observed grid-to-grid
/// variation is added so the result keeps upper-bound semantics.
pub fn i_p_bound(a: &Kernel, p: f64) -> Result<f64> {
    if p <= 0.0 {
        return Err(Error::InvalidParameter("period p must be > 0".into()));
    }
    let support = a.effective_support();
    let j_max = ((support + p) / p).ceil() as i64 + 1;
    let n_x: i64 = 4096;
    let dz = p / n_x as f64;

    // cumulative integral of a^2 on the grid z_g = g * dz covering all
    // windows [x - (j+1)p, x - jp + dz] with x in [0, p), |j| <= j_max
    let g_min = -(j_max + 1) * n_x;
    let g_max = (j_max + 2) * n_x;
    let cuts = a.breakpoints();
    let mut cumulative = Vec::with_capacity((g_max - g_min + 1) as usize);
    cumulative.push(0.0);
    let mut acc = 0.0;
    for g in g_min..g_max {
        let (lo, hi) = (g as f64 * dz, (g + 1) as f64 * dz);
        if hi > -support && lo < support {
            acc += quad::adaptive_simpson(
                |z| {
                    let d = a.evaluate(z);
                    d * d
                },
                lo,
                hi,
                1e-15,
                &cuts,
            );
        }
        cumulative.push(acc);
    }
    let cum = |g: i64| cumulative[(g - g_min) as usize];

    // For x in [x_i, x_i + dz] the cell window in z = x - y coordinates is
    // contained in [x_i - (j+1)p, x_i - jp + dz], so summing the L2 norms of
    // the enlarged windows is a true upper bound for the sup over x.
    let mut sup = 0.0_f64;
    for i in 0..n_x {
        let mut s = 0.0;
        for j in -j_max..=j_max {
            let lo = i - (j + 1) * n_x;
            let hi = i - j * n_x + 1;
            s += (cum(hi) - cum(lo)).max(0.0).sqrt();
        }
        sup = sup.max(s);
    }

    // remainder over |j| > j_max via the certified algebraic tail
    let t = a.tail_bound();
    let j = j_max as f64;
    let tail_cells = 2.0 * t.c * p.sqrt() / p.powf(1.0 + t.xi)
        * (j.powf(-(1.0 + t.xi)) + j.powf(-t.xi) / t.xi);

    Ok(p.sqrt() * sup + tail_cells)
}

/// gamma_p = -sup_j alpha(0, 2 pi j / p); far modes are excluded by the
/// kernel decay horizon (alpha <= -kappa+ + m/2 < alpha(0,0) there).
pub fn gamma_p(params: &ModelParams, a_plus: &Kernel, a_minus: &Kernel, p: f64) -> Result<f64> {
    if p <= 0.0 {
        return Err(Error::InvalidParameter("period p must be > 0".into()));
    }
    let eps0 = params.at_eps(0.0);
    let p_max = decay_horizon(&eps0, a_plus, a_minus, params.m / 2.0)?;
    let j_max = (p_max * p / (2.0 * std::f64::consts::PI)).ceil() as i64;
    let mut sup = f64::NEG_INFINITY;
    for j in 0..=j_max {
        sup = sup.max(alpha(
            &eps0,
            a_plus,
            a_minus,
            2.0 * std::f64::consts::PI * j as f64 / p,
        )?);
    }
    Ok(-sup)
}

/// L^2_p uniqueness radius gamma_p / (2 kappa- I_p(a-)) around theta.
pub fn l2_uniqueness_radius(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    p: f64,
) -> Result<f64> {
    let g = gamma_p(params, a_plus, a_minus, p)?;
    if g <= TOL_SEP {
        return Err(Error::NotApplicable(format!(
            "gamma_p = {g} is not positive: some mode is neutral or unstable"
        )));
    }
    Ok(g / (2.0 * params.kappa_minus * i_p_bound(a_minus, p)?))
}

/// Certified upper bound of ||J_theta||_1 with J_theta = kappa+ a+ - theta kappa- a-.
pub fn j_theta_l1(params: &ModelParams, a_plus: &Kernel, a_minus: &Kernel) -> f64 {
    let kp = params.kappa_plus;
    let g = params.gamma_lin(); // theta kappa- = kappa+ - m
    // pad the range so compact-support edges sit strictly inside it
    let r = a_plus.effective_support().max(a_minus.effective_support()) + 1e-3;
    let mut cuts = a_plus.breakpoints();
    cuts.extend(a_minus.breakpoints());
    let body = quad::adaptive_simpson(
        |x| (kp * a_plus.evaluate(x) - g * a_minus.evaluate(x)).abs(),
        -r,
        r,
        5e-14,
        &cuts,
    );
    body + kp * a_plus.mass_tail_bound(r) + g * a_minus.mass_tail_bound(r)
}

/// L^infty uniqueness radius (kappa+ - ||J_theta||_1) / (2 kappa-) around theta.
pub fn linf_uniqueness_radius(
    params: &ModelParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<f64> {
    let j1 = j_theta_l1(params, a_plus, a_minus);
    if j1 >= params.kappa_plus {
        return Err(Error::NotApplicable(format!(
            "||J_theta||_1 upper bound {j1} >= kappa+ = {}",
            params.kappa_plus
        )));
    }
    Ok((params.kappa_plus - j1) / (2.0 * params.kappa_minus))
}
