//! Symmetric probability kernels with exact Fourier transforms.
//!
//! Built-in families carry closed-form transforms and moments; tabulated
//! kernels go through trapezoidal quadrature so they can serve as an
//! independent cross-check of the analytic path.

use crate::error::{Error, Result};
use crate::quad;
use serde::{Deserialize, Serialize};

/// sin(t)/t with a series fallback near zero.
pub fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// d/dt sinc(t).
pub fn sinc_d1(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        -t / 3.0 + t * t2 / 30.0 - t * t2 * t2 / 840.0
    } else {
        (t * t.cos() - t.sin()) / (t * t)
    }
}

/// d2/dt2 sinc(t), via t s'' + 2 s' + t s = 0.
pub fn sinc_d2(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        -1.0 / 3.0 + t2 / 10.0 - t2 * t2 / 168.0
    } else {
        -sinc(t) - 2.0 * sinc_d1(t) / t
    }
}

/// Tail behaviour of a density, used by the dominance certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DecayClass {
    /// density vanishes beyond |x| = r
    Compact(f64),
    /// density ~ exp(-(|x| - shift)^2 / (2 variance)) at infinity
    GaussianTail { variance: f64, shift: f64 },
    /// no closed-form tail description (tabulated data)
    Unknown,
}

/// Certified algebraic tail bound a(x) <= c / (1 + |x|^(1 + xi)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailBound {
    pub c: f64,
    pub xi: f64,
}

#[derive(Debug, Clone)]
enum Shape {
    Gaussian {
        variance: f64,
    },
    GaussianPair {
        variance: f64,
        shift: f64,
    },
    Uniform {
        half_width: f64,
    },
    UniformPair {
        width: f64,
        inner_offset: f64,
    },
    Tabulated {
        /// uniform grid, symmetric about 0
        x0: f64,
        dx: f64,
        values: Vec<f64>,
    },
}

/// A symmetric probability density on the line.
#[derive(Debug, Clone)]
pub struct Kernel {
    shape: Shape,
    tail: TailBound,
}

fn gauss_pdf(x: f64, variance: f64) -> f64 {
    (-x * x / (2.0 * variance)).exp() / (2.0 * std::f64::consts::PI * variance).sqrt()
}

impl Kernel {
    /// Centered Gaussian with the given variance.
    pub fn gaussian(variance: f64) -> Result<Self> {
        if variance <= 0.0 {
            return Err(Error::InvalidParameter("gaussian variance must be > 0".into()));
        }
        let l = variance;
        // sup of (1 + x^2) a(x): critical points x = 0 and x^2 = 2l - 1
        let mut c = 1.0 / (2.0 * std::f64::consts::PI * l).sqrt();
        if 2.0 * l > 1.0 {
            let interior = 2.0 * l * (-(2.0 * l - 1.0) / (2.0 * l)).exp()
                / (2.0 * std::f64::consts::PI * l).sqrt();
            c = c.max(interior);
        }
        Ok(Self {
            shape: Shape::Gaussian { variance },
            tail: TailBound { c, xi: 1.0 },
        })
    }

    /// Symmetric pair of Gaussians centered at +-shift, each with the given variance.
    pub fn gaussian_pair(variance: f64, shift: f64) -> Result<Self> {
        if variance <= 0.0 || shift < 0.0 {
            return Err(Error::InvalidParameter(
                "gaussian pair needs variance > 0 and shift >= 0".into(),
            ));
        }
        let q = variance;
        let c = ((1.0 + 2.0 * shift * shift) + 4.0 * q / std::f64::consts::E)
            / (2.0 * std::f64::consts::PI * q).sqrt();
        Ok(Self {
            shape: Shape::GaussianPair { variance, shift },
            tail: TailBound { c, xi: 1.0 },
        })
    }

    /// Uniform density on [-half_width, half_width].
    pub fn uniform(half_width: f64) -> Result<Self> {
        if half_width <= 0.0 {
            return Err(Error::InvalidParameter("uniform half width must be > 0".into()));
        }
        let l = half_width;
        Ok(Self {
            shape: Shape::Uniform { half_width },
            tail: TailBound {
                c: (1.0 + l * l) / (2.0 * l),
                xi: 1.0,
            },
        })
    }

    /// Uniform density on +-[inner_offset, inner_offset + width].
    pub fn uniform_pair(width: f64, inner_offset: f64) -> Result<Self> {
        if width <= 0.0 || inner_offset < 0.0 {
            return Err(Error::InvalidParameter(
                "uniform pair needs width > 0 and inner offset >= 0".into(),
            ));
        }
        let outer = inner_offset + width;
        Ok(Self {
            shape: Shape::UniformPair { width, inner_offset },
            tail: TailBound {
                c: (1.0 + outer * outer) / (2.0 * width),
                xi: 1.0,
            },
        })
    }

    /// Tabulated kernel on a uniform symmetric grid.
    pub fn tabulated(xs: &[f64], values: &[f64]) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 8 {
            return Err(Error::InvalidParameter(
                "tabulated kernel needs >= 8 matching (x, a(x)) samples".into(),
            ));
        }
        let n = xs.len();
        let dx = xs[1] - xs[0];
        if dx <= 0.0 {
            return Err(Error::InvalidParameter("tabulated grid must be increasing".into()));
        }
        for w in xs.windows(2) {
            if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.max(1.0) {
                return Err(Error::InvalidParameter("tabulated grid must be uniform".into()));
            }
        }
        if (xs[0] + xs[n - 1]).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "tabulated grid must be symmetric about 0".into(),
            ));
        }
        for i in 0..n {
            if !values[i].is_finite() || values[i] < 0.0 {
                return Err(Error::InvalidParameter("tabulated values must be >= 0".into()));
            }
            if (values[i] - values[n - 1 - i]).abs() > 1e-12 * (1.0 + values[i].abs()) {
                return Err(Error::InvalidParameter(
                    format!("tabulated kernel not symmetric at x = {}", xs[i]),
                ));
            }
        }
        let kern = Self {
            shape: Shape::Tabulated {
                x0: xs[0],
                dx,
                values: values.to_vec(),
            },
            tail: TailBound {
                c: xs
                    .iter()
                    .zip(values)
                    .map(|(x, a)| a * (1.0 + x.abs().powi(2)))
                    .fold(0.0_f64, f64::max),
                xi: 1.0,
            },
        };
        let mass = kern.mass();
        if (mass - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "tabulated kernel mass {mass} deviates from 1 by more than 1e-10"
            )));
        }
        Ok(kern)
    }

    /// Load a tabulated kernel from two-column CSV text `x,a(x)` (header optional).
    pub fn tabulated_from_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vals = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let a = parts.next().unwrap_or("").trim();
            let b = parts.next().unwrap_or("").trim();
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(v)) => {
                    xs.push(x);
                    vals.push(v);
                }
                _ if i == 0 => continue, // header row
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "cannot parse kernel CSV line {}: {line}",
                        i + 1
                    )))
                }
            }
        }
        Self::tabulated(&xs, &vals)
    }

    /// Sample any kernel onto a uniform grid, producing a tabulated copy.
    pub fn to_tabulated(&self, extent: f64, n: usize) -> Result<Self> {
        let xs: Vec<f64> = (0..=n)
            .map(|i| -extent + 2.0 * extent * i as f64 / n as f64)
            .collect();
        let vals: Vec<f64> = xs.iter().map(|&x| self.evaluate(x)).collect();
        Self::tabulated(&xs, &vals)
    }

    pub fn tail_bound(&self) -> TailBound {
        self.tail
    }

    /// Density value a(x).
    pub fn evaluate(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { variance } => gauss_pdf(x, *variance),
            Shape::GaussianPair { variance, shift } => {
                0.5 * (gauss_pdf(x - shift, *variance) + gauss_pdf(x + shift, *variance))
            }
            Shape::Uniform { half_width } => {
                if x.abs() <= *half_width {
                    0.5 / half_width
                } else {
                    0.0
                }
            }
            Shape::UniformPair { width, inner_offset } => {
                let ax = x.abs();
                if ax >= *inner_offset && ax <= inner_offset + width {
                    0.5 / width
                } else {
                    0.0
                }
            }
            Shape::Tabulated { x0, dx, values } => {
                let t = (x - x0) / dx;
                if t < 0.0 || t > (values.len() - 1) as f64 {
                    return 0.0;
                }
                let i = (t.floor() as usize).min(values.len() - 2);
                let frac = t - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        }
    }

    fn nyquist_check(&self, p: f64) -> Result<()> {
        if let Shape::Tabulated { dx, .. } = &self.shape {
            let limit = std::f64::consts::PI / dx;
            if p.abs() > limit {
                return Err(Error::Resolution { p, limit });
            }
        }
        Ok(())
    }

    /// Fourier transform at wave number p; real by symmetry, with value 1 at p = 0.
    pub fn fourier(&self, p: f64) -> Result<f64> {
        self.nyquist_check(p)?;
        Ok(match &self.shape {
            Shape::Gaussian { variance } => (-variance * p * p / 2.0).exp(),
            Shape::GaussianPair { variance, shift } => {
                (shift * p).cos() * (-variance * p * p / 2.0).exp()
            }
            Shape::Uniform { half_width } => sinc(half_width * p),
            Shape::UniformPair { width, inner_offset } => {
                let b = inner_offset + width;
                let c = *inner_offset;
                (b * sinc(b * p) - c * sinc(c * p)) / width
            }
            Shape::Tabulated { x0, dx, values } => {
                self.tab_quadrature(*x0, *dx, values, |x| (p * x).cos())
            }
        })
    }

    /// First derivative of the Fourier transform in p.
    pub fn fourier_d1(&self, p: f64) -> Result<f64> {
        self.nyquist_check(p)?;
        Ok(match &self.shape {
            Shape::Gaussian { variance } => -variance * p * (-variance * p * p / 2.0).exp(),
            Shape::GaussianPair { variance, shift } => {
                let (q, h) = (*variance, *shift);
                (-h * (h * p).sin() - q * p * (h * p).cos()) * (-q * p * p / 2.0).exp()
            }
            Shape::Uniform { half_width } => half_width * sinc_d1(half_width * p),
            Shape::UniformPair { width, inner_offset } => {
                let b = inner_offset + width;
                let c = *inner_offset;
                (b * b * sinc_d1(b * p) - c * c * sinc_d1(c * p)) / width
            }
            Shape::Tabulated { x0, dx, values } => {
                self.tab_quadrature(*x0, *dx, values, |x| -x * (p * x).sin())
            }
        })
    }

    /// Second derivative of the Fourier transform in p.
    pub fn fourier_d2(&self, p: f64) -> Result<f64> {
        self.nyquist_check(p)?;
        Ok(match &self.shape {
            Shape::Gaussian { variance } => {
                let l = *variance;
                (l * l * p * p - l) * (-l * p * p / 2.0).exp()
            }
            Shape::GaussianPair { variance, shift } => {
                let (q, h) = (*variance, *shift);
                ((q * q * p * p - h * h - q) * (h * p).cos() + 2.0 * q * p * h * (h * p).sin())
                    * (-q * p * p / 2.0).exp()
            }
            Shape::Uniform { half_width } => {
                half_width * half_width * sinc_d2(half_width * p)
            }
            Shape::UniformPair { width, inner_offset } => {
                let b = inner_offset + width;
                let c = *inner_offset;
                (b * b * b * sinc_d2(b * p) - c * c * c * sinc_d2(c * p)) / width
            }
            Shape::Tabulated { x0, dx, values } => {
                self.tab_quadrature(*x0, *dx, values, |x| -x * x * (p * x).cos())
            }
        })
    }

    fn tab_quadrature<F: Fn(f64) -> f64>(&self, x0: f64, dx: f64, values: &[f64], w: F) -> f64 {
        let n = values.len();
        let mut sum = 0.5 * (values[0] * w(x0) + values[n - 1] * w(x0 + (n - 1) as f64 * dx));
        for i in 1..n - 1 {
            let x = x0 + i as f64 * dx;
            sum += values[i] * w(x);
        }
        sum * dx
    }

    /// Total mass (exactly 1 for built-ins).
    pub fn mass(&self) -> f64 {
        match &self.shape {
            Shape::Tabulated { x0, dx, values } => self.tab_quadrature(*x0, *dx, values, |_| 1.0),
            _ => 1.0,
        }
    }

    /// Second moment, closed form for built-ins.
    pub fn second_moment(&self) -> f64 {
        match &self.shape {
            Shape::Gaussian { variance } => *variance,
            Shape::GaussianPair { variance, shift } => variance + shift * shift,
            Shape::Uniform { half_width } => half_width * half_width / 3.0,
            Shape::UniformPair { width, inner_offset } => {
                let b = inner_offset + width;
                let c = *inner_offset;
                (b.powi(3) - c.powi(3)) / (3.0 * width)
            }
            Shape::Tabulated { x0, dx, values } => {
                self.tab_quadrature(*x0, *dx, values, |x| x * x)
            }
        }
    }

    /// First absolute moment.
    pub fn first_abs_moment(&self) -> f64 {
        match &self.shape {
            Shape::Gaussian { variance } => {
                (2.0 * variance / std::f64::consts::PI).sqrt()
            }
            Shape::Uniform { half_width } => half_width / 2.0,
            Shape::UniformPair { width, inner_offset } => {
                let b = inner_offset + width;
                let c = *inner_offset;
                (b * b - c * c) / (2.0 * width)
            }
            _ => {
                let x_max = self.effective_support();
                quad::adaptive_simpson(
                    |x| x.abs() * self.evaluate(x),
                    -x_max,
                    x_max,
                    1e-13,
                    &self.breakpoints(),
                )
            }
        }
    }

    /// L1 distance between the kernel and its shift by `xt`; vanishes at 0.
    pub fn l1_distance_shift(&self, xt: f64) -> f64 {
        if xt == 0.0 {
            return 0.0;
        }
        let x_max = self.effective_support() + xt.abs();
        let mut cuts = self.breakpoints();
        cuts.extend(self.breakpoints().iter().map(|b| b - xt));
        quad::adaptive_simpson(
            |x| (self.evaluate(x + xt) - self.evaluate(x)).abs(),
            -x_max,
            x_max,
            1e-11,
            &cuts,
        )
    }

    /// Half-width beyond which the density is numerically (or exactly) zero.
    pub fn effective_support(&self) -> f64 {
        match &self.shape {
            Shape::Gaussian { variance } => 25.0 * variance.sqrt(),
            Shape::GaussianPair { variance, shift } => shift + 25.0 * variance.sqrt(),
            Shape::Uniform { half_width } => *half_width,
            Shape::UniformPair { width, inner_offset } => inner_offset + width,
            Shape::Tabulated { x0, .. } => x0.abs(),
        }
    }

    /// Locations where the density is discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Uniform { half_width } => vec![-half_width, *half_width],
            Shape::UniformPair { width, inner_offset } => {
                let b = inner_offset + width;
                vec![-b, -inner_offset, *inner_offset, b]
            }
            _ => Vec::new(),
        }
    }

    /// Upper bound on the mass in {|y| > x}.
    pub fn mass_tail_bound(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        match &self.shape {
            Shape::Gaussian { variance } => {
                // int_x^inf phi <= (l/x) phi(x), doubled for both tails
                2.0 * (variance / x) * gauss_pdf(x, *variance)
            }
            Shape::GaussianPair { variance, shift } => {
                if x <= *shift {
                    1.0
                } else {
                    let g = |d: f64| 2.0 * (variance / d) * gauss_pdf(d, *variance);
                    (g(x - shift) + g(x + shift)).min(1.0)
                }
            }
            Shape::Uniform { .. } | Shape::UniformPair { .. } => {
                if x >= self.effective_support() {
                    0.0
                } else {
                    1.0
                }
            }
            Shape::Tabulated { .. } => {
                let t = self.tail;
                (t.c / (t.xi * x.powf(t.xi))).min(1.0)
            }
        }
    }

    /// Closed-form description of the far tail.
    pub fn decay_class(&self) -> DecayClass {
        match &self.shape {
            Shape::Gaussian { variance } => DecayClass::GaussianTail {
                variance: *variance,
                shift: 0.0,
            },
            Shape::GaussianPair { variance, shift } => DecayClass::GaussianTail {
                variance: *variance,
                shift: *shift,
            },
            Shape::Uniform { .. } | Shape::UniformPair { .. } => {
                DecayClass::Compact(self.effective_support())
            }
            Shape::Tabulated { .. } => DecayClass::Unknown,
        }
    }

    /// Monotone upper bound on |fourier(q)| valid for all |q| >= p.
    pub fn fourier_envelope(&self, p: f64) -> f64 {
        let p = p.abs();
        match &self.shape {
            Shape::Gaussian { variance } | Shape::GaussianPair { variance, .. } => {
                (-variance * p * p / 2.0).exp()
            }
            Shape::Uniform { half_width } => (1.0 / (half_width * p)).min(1.0),
            Shape::UniformPair { width, .. } => (2.0 / (width * p)).min(1.0),
            Shape::Tabulated { .. } => {
                // estimate from a coarse scan; tabulated kernels are a
                // cross-check path, not a certificate path
                let mut m: f64 = 0.0;
                let mut q = p.max(1e-3);
                let limit = match &self.shape {
                    Shape::Tabulated { dx, .. } => std::f64::consts::PI / dx,
                    _ => unreachable!(),
                };
                while q < (p + 50.0).min(limit) {
                    m = m.max(self.fourier(q).map(f64::abs).unwrap_or(1.0));
                    q += 0.05;
                }
                m.min(1.0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn builtins() -> Vec<Kernel> {
        vec![
            Kernel::gaussian(2.0).unwrap(),
            Kernel::gaussian_pair(2.0, 3.5).unwrap(),
            Kernel::uniform(1.0).unwrap(),
            Kernel::uniform_pair(2.0, 0.8).unwrap(),
        ]
    }

    #[test]
    fn fourier_at_zero_is_one() {
        for k in builtins() {
            assert_abs_diff_eq!(k.fourier(0.0).unwrap(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn gaussian_fourier_matches_closed_form() {
        let k = Kernel::gaussian(2.0).unwrap();
        assert_abs_diff_eq!(k.fourier(1.0).unwrap(), (-1.0_f64).exp(), epsilon = 1e-15);
        let kp = Kernel::gaussian_pair(2.0, 1.3).unwrap();
        for p in [0.3, 1.0, 2.7] {
            assert_abs_diff_eq!(
                kp.fourier(p).unwrap(),
                (1.3 * p).cos() * (-p * p).exp(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn uniform_fourier_zero_at_pi() {
        let k = Kernel::uniform(1.0).unwrap();
        assert_abs_diff_eq!(k.fourier(std::f64::consts::PI).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn symmetry_and_bound_random_p() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in builtins() {
            for _ in 0..100 {
                let p: f64 = rng.gen_range(-20.0..20.0);
                let f = k.fourier(p).unwrap();
                assert_eq!(f, k.fourier(-p).unwrap());
                assert!(f.abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let step = 1e-4;
        for k in builtins() {
            for p in [0.0, 0.4, 1.1, 2.9, 5.3] {
                let d1 = k.fourier_d1(p).unwrap();
                let fd1 =
                    (k.fourier(p + step).unwrap() - k.fourier(p - step).unwrap()) / (2.0 * step);
                if d1.abs() > 1e-8 {
                    assert!((d1 - fd1).abs() / d1.abs() < 1e-6, "d1 mismatch at p={p}");
                }
                let d2 = k.fourier_d2(p).unwrap();
                let fd2 = (k.fourier(p + step).unwrap() - 2.0 * k.fourier(p).unwrap()
                    + k.fourier(p - step).unwrap())
                    / (step * step);
                if d2.abs() > 1e-8 {
                    assert!((d2 - fd2).abs() / d2.abs() < 1e-6, "d2 mismatch at p={p}");
                }
            }
        }
    }

    #[test]
    fn d1_vanishes_at_zero_and_d2_is_minus_second_moment() {
        for k in builtins() {
            assert_abs_diff_eq!(k.fourier_d1(0.0).unwrap(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(
                k.fourier_d2(0.0).unwrap(),
                -k.second_moment(),
                epsilon = 1e-10
            );
        }
        let g = Kernel::gaussian(2.0).unwrap();
        assert_abs_diff_eq!(g.fourier_d2(0.0).unwrap(), -2.0, epsilon = 1e-14);
    }

    #[test]
    fn uniform_pair_d1_finite_difference_oracle() {
        // closed form d/dp [2 cos((ht + 1) p) sin(p) / (2p)] at q = 2
        let ht = 0.7;
        let k = Kernel::uniform_pair(2.0, ht).unwrap();
        let f = |p: f64| (2.0 * ((ht + 1.0) * p).cos() * p.sin()) / (2.0 * p);
        let p = 1.0;
        let step = 1e-5;
        let oracle = (f(p + step) - f(p - step)) / (2.0 * step);
        assert!((k.fourier_d1(p).unwrap() - oracle).abs() < 1e-8);
    }

    #[test]
    fn evaluate_and_moments() {
        let u = Kernel::uniform(1.0).unwrap();
        assert_eq!(u.evaluate(0.0), 0.5);
        assert_eq!(u.evaluate(2.0), 0.0);
        assert_abs_diff_eq!(u.second_moment(), 1.0 / 3.0, epsilon = 1e-15);
        let g = Kernel::gaussian(2.0).unwrap();
        assert_eq!(g.second_moment(), 2.0);
        assert_abs_diff_eq!(
            Kernel::gaussian_pair(2.0, 3.0).unwrap().second_moment(),
            11.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn shift_distance_continuous_at_zero() {
        for k in builtins() {
            assert_eq!(k.l1_distance_shift(0.0), 0.0);
            let d1 = k.l1_distance_shift(1e-2);
            let d2 = k.l1_distance_shift(1e-3);
            let d3 = k.l1_distance_shift(1e-4);
            assert!(d1 > d2 && d2 > d3 && d3 < 1e-3);
        }
    }

    #[test]
    fn tabulated_matches_analytic_ft() {
        let g = Kernel::gaussian(2.0).unwrap();
        let t = g.to_tabulated(30.0, 12000).unwrap();
        let mut p = 0.0;
        while p <= 10.0 {
            assert!(
                (t.fourier(p).unwrap() - g.fourier(p).unwrap()).abs() < 1e-8,
                "tabulated FT mismatch at p={p}"
            );
            p += 0.5;
        }
    }

    #[test]
    fn tabulated_nyquist_error() {
        let g = Kernel::gaussian(2.0).unwrap();
        let t = g.to_tabulated(20.0, 200).unwrap();
        assert!(matches!(t.fourier(100.0), Err(Error::Resolution { .. })));
    }

    #[test]
    fn tail_bound_holds_on_grid() {
        for k in builtins() {
            let t = k.tail_bound();
            let x_max = k.effective_support();
            for i in 0..2000 {
                let x = -x_max + 2.0 * x_max * i as f64 / 1999.0;
                assert!(
                    k.evaluate(x) <= t.c / (1.0 + x.abs().powf(1.0 + t.xi)) + 1e-12,
                    "tail bound violated at x={x}"
                );
            }
        }
    }

    #[test]
    fn csv_roundtrip() {
        let g = Kernel::gaussian(1.0).unwrap();
        let mut text = String::from("x,a\n");
        let n = 8000;
        for i in 0..=n {
            let x = -25.0 + 50.0 * i as f64 / n as f64;
            text.push_str(&format!("{x},{}\n", g.evaluate(x)));
        }
        let t = Kernel::tabulated_from_csv(&text).unwrap();
        assert!((t.fourier(1.0).unwrap() - g.fourier(1.0).unwrap()).abs() < 1e-8);
    }
}
