//! Small quadrature helpers shared by the kernel and certificate code.

/// Trapezoidal rule on a uniform grid over `[a, b]` with `n + 1` samples.
///
/// For smooth integrands that decay to numerically-zero at both endpoints
/// this is spectrally accurate (Euler-Maclaurin boundary terms vanish).
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 1 && b > a);
    let h = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + i as f64 * h);
    }
    sum * h
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adaptive_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson quadrature over `[a, b]`.
///
/// `breakpoints` lists interior locations where the integrand may be
/// non-smooth (kernel support edges, kinks of |f|); the interval is split
/// there so each panel sees a smooth piece.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    breakpoints: &[f64],
) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        // nudge inside the panel so jump discontinuities at the cut do not
        // bias the endpoint samples
        let eps = 5e-14 * (1.0 + hi - lo);
        let (lo_s, hi_s) = (lo + eps, hi - eps);
        if hi_s <= lo_s {
            continue;
        }
        let m = 0.5 * (lo_s + hi_s);
        let (fa, fm, fb) = (f(lo_s), f(m), f(hi_s));
        let whole = simpson(fa, fm, fb, hi_s - lo_s);
        total += adaptive_rec(&f, lo_s, hi_s, fa, fm, fb, whole, tol, 48);
    }
    total
}
