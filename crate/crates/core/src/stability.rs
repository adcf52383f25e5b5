//! Spectrum of the linearization at a computed pattern, in the full
//! trigonometric space and in the phase-fixed subspace Y.

use crate::dispersion::alpha;
use crate::error::{Error, Result};
use crate::fields::{FourierField, TrigSeries};
use crate::kernels::Kernel;
use crate::model::EpsParams;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Which invariant subspace to assemble the linearization on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// {1, cos jx, sin jx : j <= N}
    Full,
    /// Full minus sin x: the phase-fixed space Y
    PhaseFixed,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// (re, im), sorted by real part descending.
    pub eigenvalues: Vec<(f64, f64)>,
    /// Largest real part over the phase-fixed space Y.
    pub leading_in_y: f64,
    /// Full-space eigenvalue nearest zero in the odd parity block.
    pub translation_eigenvalue: f64,
    /// |cos angle| between the translation eigenvector and v'.
    pub translation_alignment: f64,
    /// [min, max] of -kappa+_eps - kappa-_eps (a-_k * v)(x) over a grid.
    pub essential_interval: (f64, f64),
    pub warnings: Vec<String>,
}

fn apply_l(
    h: &TrigSeries,
    v: &TrigSeries,
    conv_v: &TrigSeries,
    params: &EpsParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<TrigSeries> {
    let n = h.n();
    let km = params.kappa_minus_eps();
    let mut out = TrigSeries::zeros(n, h.k);
    for j in 0..=n {
        let a = alpha(params, a_plus, a_minus, j as f64 * h.k)?;
        out.cos[j] = a * h.cos[j];
        out.sin[j] = a * h.sin[j];
    }
    let conv_h = h.convolved(a_minus)?;
    let t1 = h.product(conv_v).truncated(n);
    let t2 = v.product(&conv_h).truncated(n);
    out.axpy(-km, &t1);
    out.axpy(-km, &t2);
    Ok(out)
}

/// Basis for the full space: index 0 is the constant, 1..=N are cos(jx),
/// N+1..=2N are sin(jx); `PhaseFixed` drops sin(x).
fn basis_modes(n: usize, space: Space) -> Vec<(usize, bool)> {
    let mut modes: Vec<(usize, bool)> = Vec::with_capacity(2 * n + 1);
    for j in 0..=n {
        modes.push((j, true));
    }
    let j0 = match space {
        Space::Full => 1,
        Space::PhaseFixed => 2,
    };
    for j in j0..=n {
        modes.push((j, false));
    }
    modes
}

/// Matrix of L h = A h - kappa-_eps [h (a-_k * v) + v (a-_k * h)] on the
/// chosen trigonometric basis.
pub fn assemble_l(
    field: &FourierField,
    params: &EpsParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
    space: Space,
) -> Result<DMatrix<f64>> {
    let n = field.n();
    let v: TrigSeries = field.clone().into();
    let conv_v = v.convolved(a_minus)?;
    let modes = basis_modes(n, space);
    let dim = modes.len();
    let mut mat = DMatrix::zeros(dim, dim);
    for (col, &(j, is_cos)) in modes.iter().enumerate() {
        let mut e = TrigSeries::zeros(n, field.k);
        if is_cos {
            e.cos[j] = 1.0;
        } else {
            e.sin[j] = 1.0;
        }
        let le = apply_l(&e, &v, &conv_v, params, a_plus, a_minus)?;
        for (row, &(i, row_cos)) in modes.iter().enumerate() {
            mat[(row, col)] = if row_cos { le.cos[i] } else { le.sin[i] };
        }
    }
    Ok(mat)
}

/// Sampled essential spectrum {-kappa+_eps - kappa-_eps (a-_k * v)(x)}.
pub fn essential_range(
    field: &FourierField,
    params: &EpsParams,
    a_minus: &Kernel,
    grid_size: usize,
) -> Result<(f64, f64)> {
    let conv = field.convolved(a_minus)?;
    let kp = params.kappa_plus_eps();
    let km = params.kappa_minus_eps();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..grid_size.max(2) {
        let x = 2.0 * std::f64::consts::PI * i as f64 / grid_size.max(2) as f64;
        let val = -kp - km * conv.evaluate(x);
        lo = lo.min(val);
        hi = hi.max(val);
    }
    Ok((lo, hi))
}

fn inverse_iteration(mat: &DMatrix<f64>, shift: f64, seed: &DVector<f64>) -> Option<DVector<f64>> {
    let dim = mat.nrows();
    let shifted = mat - DMatrix::identity(dim, dim) * shift;
    let lu = shifted.lu();
    let mut x = seed.normalize();
    for _ in 0..50 {
        x = lu.solve(&x)?.normalize();
    }
    Some(x)
}

/// Full spectral report at a converged pattern: all eigenvalues, the leading
/// eigenvalue in Y, the translation mode with its alignment to v', and the
/// essential interval.
pub fn spectrum(
    field: &FourierField,
    params: &EpsParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<SpectrumReport> {
    let n = field.n();
    let full = assemble_l(field, params, a_plus, a_minus, Space::Full)?;
    let mut warnings = Vec::new();

    let eig_full = full.clone().complex_eigenvalues();
    let mut eigenvalues: Vec<(f64, f64)> = eig_full.iter().map(|z| (z.re, z.im)).collect();
    eigenvalues.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let max_im = eigenvalues.iter().fold(0.0_f64, |m, e| m.max(e.1.abs()));
    if max_im > 1e-8 {
        warnings.push(format!(
            "non-real eigenvalues detected (max |Im| = {max_im})"
        ));
    }

    let in_y = assemble_l(field, params, a_plus, a_minus, Space::PhaseFixed)?;
    let leading_in_y = in_y
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);

    // translation mode: the eigenvalue nearest zero lives in the odd block;
    // recover its eigenvector by inverse iteration on the full matrix
    let translation_eigenvalue = eig_full
        .iter()
        .map(|z| z.re)
        .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
        .unwrap_or(f64::NAN);
    let modes = basis_modes(n, Space::Full);
    let mut vprime = DVector::zeros(modes.len());
    for (row, &(j, is_cos)) in modes.iter().enumerate() {
        if !is_cos {
            vprime[row] = -(j as f64) * field.coeffs[j];
        }
    }
    let translation_alignment = if vprime.norm() > 0.0 {
        match inverse_iteration(&full, translation_eigenvalue + 1e-10, &vprime) {
            Some(x) => (x.dot(&vprime) / vprime.norm()).abs(),
            None => {
                warnings.push("inverse iteration for the translation mode failed".into());
                f64::NAN
            }
        }
    } else {
        f64::NAN
    };

    let essential_interval = essential_range(field, params, a_minus, 1024)?;

    Ok(SpectrumReport {
        eigenvalues,
        leading_in_y,
        translation_eigenvalue,
        translation_alignment,
        essential_interval,
        warnings,
    })
}

/// Convenience: spectrum evaluation guarded by an eigensolver sanity check.
pub fn spectrum_checked(
    field: &FourierField,
    params: &EpsParams,
    a_plus: &Kernel,
    a_minus: &Kernel,
) -> Result<SpectrumReport> {
    let rep = spectrum(field, params, a_plus, a_minus)?;
    if rep.eigenvalues.iter().any(|e| !e.0.is_finite()) {
        return Err(Error::Numerical("eigensolver returned non-finite values".into()));
    }
    Ok(rep)
}
