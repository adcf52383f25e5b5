//! Truncated trigonometric representations of 2*pi-periodic fields.
//!
//! `FourierField` is the cosine-only (phase-fixed, even) representation used
//! by the stationary solver; `TrigSeries` carries both parities for the
//! linearization and time stepping. Products are computed exactly on the
//! degree-(N+M) coefficients, so no pseudo-spectral aliasing enters.

use crate::error::Result;
use crate::kernels::Kernel;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Even 2*pi-periodic field v(x) = c_0 + sum_{j>=1} c_j cos(j x), scaled so
/// the physical profile is u(y) = theta + v(k y).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierField {
    /// c_0..c_N
    pub coeffs: Vec<f64>,
    /// physical wave number (period 2*pi/k)
    pub k: f64,
}

impl FourierField {
    pub fn zeros(n: usize, k: f64) -> Self {
        Self {
            coeffs: vec![0.0; n + 1],
            k,
        }
    }

    pub fn constant(c0: f64, n: usize, k: f64) -> Self {
        let mut f = Self::zeros(n, k);
        f.coeffs[0] = c0;
        f
    }

    /// Truncation order N.
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// v(x) at a scaled coordinate x.
    pub fn evaluate(&self, x: f64) -> f64 {
        let mut v = self.coeffs[0];
        for (j, c) in self.coeffs.iter().enumerate().skip(1) {
            v += c * (j as f64 * x).cos();
        }
        v
    }

    /// L^2 norm with the (2*pi)^{-1} normalized inner product:
    /// ||v||^2 = c_0^2 + (1/2) sum c_j^2.
    pub fn l2_norm(&self) -> f64 {
        let mut s = self.coeffs[0] * self.coeffs[0];
        for c in &self.coeffs[1..] {
            s += 0.5 * c * c;
        }
        s.sqrt()
    }

    /// Exact product of two cosine series; result has degree N + M.
    pub fn product(&self, other: &Self) -> Self {
        let (n, m) = (self.n(), other.n());
        let mut out = vec![0.0; n + m + 1];
        for (j, &a) in self.coeffs.iter().enumerate() {
            for (l, &b) in other.coeffs.iter().enumerate() {
                let q = a * b;
                if j == 0 || l == 0 {
                    out[j + l] += q;
                } else {
                    // cos j * cos l = (cos(j+l) + cos|j-l|)/2
                    out[j + l] += 0.5 * q;
                    out[j.abs_diff(l)] += 0.5 * q;
                }
            }
        }
        Self {
            coeffs: out,
            k: self.k,
        }
    }

    pub fn truncated(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, 0.0);
        Self {
            coeffs,
            k: self.k,
        }
    }

    /// Convolution with a kernel at wave number k: multiplies c_j by a^(j k).
    pub fn convolved(&self, kernel: &Kernel) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs.push(c * kernel.fourier(j as f64 * self.k)?);
        }
        Ok(Self {
            coeffs,
            k: self.k,
        })
    }

    /// Half-period translation x -> x + pi: negates odd coefficients.
    /// Used to pin the sign convention c_1 > 0.
    pub fn flip_phase(&mut self) {
        for (j, c) in self.coeffs.iter_mut().enumerate() {
            if j % 2 == 1 {
                *c = -*c;
            }
        }
    }

    /// Largest |c_j|.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// x-derivative as a trig series: c_j cos(j x) -> -j c_j sin(j x).
    pub fn derivative(&self) -> TrigSeries {
        let n = self.n();
        let mut t = TrigSeries::zeros(n, self.k);
        for j in 1..=n {
            t.sin[j] = -(j as f64) * self.coeffs[j];
        }
        t
    }
}

impl From<FourierField> for TrigSeries {
    fn from(f: FourierField) -> Self {
        let n = f.n();
        Self {
            cos: f.coeffs,
            sin: vec![0.0; n + 1],
            k: f.k,
        }
    }
}

/// General real 2*pi-periodic field
/// f(x) = cos[0] + sum_{j>=1} cos[j] cos(j x) + sin[j] sin(j x); sin[0] is 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrigSeries {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    pub k: f64,
}

impl TrigSeries {
    pub fn zeros(n: usize, k: f64) -> Self {
        Self {
            cos: vec![0.0; n + 1],
            sin: vec![0.0; n + 1],
            k,
        }
    }

    pub fn n(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let mut v = self.cos[0];
        for j in 1..=self.n() {
            let jx = j as f64 * x;
            v += self.cos[j] * jx.cos() + self.sin[j] * jx.sin();
        }
        v
    }

    pub fn l2_norm(&self) -> f64 {
        let mut s = self.cos[0] * self.cos[0];
        for j in 1..=self.n() {
            s += 0.5 * (self.cos[j] * self.cos[j] + self.sin[j] * self.sin[j]);
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.cos
            .iter()
            .chain(self.sin.iter())
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    fn exp_coeff(&self, j: i64) -> Complex64 {
        let ja = j.unsigned_abs() as usize;
        if ja > self.n() {
            return Complex64::new(0.0, 0.0);
        }
        if j == 0 {
            Complex64::new(self.cos[0], 0.0)
        } else if j > 0 {
            Complex64::new(self.cos[ja] / 2.0, -self.sin[ja] / 2.0)
        } else {
            Complex64::new(self.cos[ja] / 2.0, self.sin[ja] / 2.0)
        }
    }

    /// Exact product; result has degree N + M.
    pub fn product(&self, other: &Self) -> Self {
        let (n, m) = (self.n() as i64, other.n() as i64);
        let deg = (n + m) as usize;
        let mut out = Self::zeros(deg, self.k);
        for t in 0..=(n + m) {
            let mut g = Complex64::new(0.0, 0.0);
            for j in (t - m).max(-n)..=(t + m).min(n) {
                g += self.exp_coeff(j) * other.exp_coeff(t - j);
            }
            let ti = t as usize;
            if t == 0 {
                out.cos[0] = g.re;
            } else {
                out.cos[ti] = 2.0 * g.re;
                out.sin[ti] = -2.0 * g.im;
            }
        }
        out
    }

    pub fn truncated(&self, n: usize) -> Self {
        let mut cos = self.cos.clone();
        let mut sin = self.sin.clone();
        cos.resize(n + 1, 0.0);
        sin.resize(n + 1, 0.0);
        Self {
            cos,
            sin,
            k: self.k,
        }
    }

    pub fn convolved(&self, kernel: &Kernel) -> Result<Self> {
        let mut out = self.clone();
        for j in 0..=self.n() {
            let f = kernel.fourier(j as f64 * self.k)?;
            out.cos[j] *= f;
            out.sin[j] *= f;
        }
        Ok(out)
    }

    /// Translated field x -> x + x0.
    pub fn shifted(&self, x0: f64) -> Self {
        let mut out = self.clone();
        for j in 1..=self.n() {
            let (s, c) = (j as f64 * x0).sin_cos();
            out.cos[j] = self.cos[j] * c + self.sin[j] * s;
            out.sin[j] = -self.cos[j] * s + self.sin[j] * c;
        }
        out
    }

    pub fn axpy(&mut self, a: f64, other: &Self) {
        for j in 0..=self.n().min(other.n()) {
            self.cos[j] += a * other.cos[j];
            self.sin[j] += a * other.sin[j];
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        for j in 0..=out.n() {
            out.cos[j] *= a;
            out.sin[j] *= a;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// Drops the sine part; valid projection for even fields.
    pub fn even_part(&self) -> FourierField {
        FourierField {
            coeffs: self.cos.clone(),
            k: self.k,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn random_field(rng: &mut impl Rng, n: usize) -> FourierField {
        FourierField {
            coeffs: (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            k: 0.7,
        }
    }

    fn random_trig(rng: &mut impl Rng, n: usize) -> TrigSeries {
        let mut t = TrigSeries::zeros(n, 0.7);
        for j in 0..=n {
            t.cos[j] = rng.gen_range(-1.0..1.0);
            if j > 0 {
                t.sin[j] = rng.gen_range(-1.0..1.0);
            }
        }
        t
    }

    #[test]
    fn cosine_product_matches_pointwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_field(&mut rng, 6);
            let b = random_field(&mut rng, 4);
            let p = a.product(&b);
            assert_eq!(p.n(), 10);
            for i in 0..50 {
                let x = i as f64 * 0.13;
                assert_abs_diff_eq!(
                    p.evaluate(x),
                    a.evaluate(x) * b.evaluate(x),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn trig_product_matches_pointwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let a = random_trig(&mut rng, 5);
            let b = random_trig(&mut rng, 7);
            let p = a.product(&b);
            assert_eq!(p.n(), 12);
            for i in 0..50 {
                let x = i as f64 * 0.17 - 3.0;
                assert_abs_diff_eq!(
                    p.evaluate(x),
                    a.evaluate(x) * b.evaluate(x),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn shift_matches_pointwise_and_preserves_norm() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let t = random_trig(&mut rng, 9);
        let s = t.shifted(0.83);
        for i in 0..40 {
            let x = i as f64 * 0.21;
            assert_abs_diff_eq!(s.evaluate(x), t.evaluate(x + 0.83), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.l2_norm(), t.l2_norm(), epsilon = 1e-13);
    }

    #[test]
    fn l2_norm_matches_quadrature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let f = random_field(&mut rng, 5);
        let n = 4096;
        let mut s = 0.0;
        for i in 0..n {
            let x = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let v = f.evaluate(x);
            s += v * v;
        }
        assert_abs_diff_eq!((s / n as f64).sqrt(), f.l2_norm(), epsilon = 1e-12);
    }

    #[test]
    fn flip_phase_is_half_period_shift() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        let f = random_field(&mut rng, 6);
        let mut g = f.clone();
        g.flip_phase();
        for i in 0..30 {
            let x = i as f64 * 0.3;
            assert_abs_diff_eq!(
                g.evaluate(x),
                f.evaluate(x + std::f64::consts::PI),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let f = random_field(&mut rng, 6);
        let d = f.derivative();
        let step = 1e-6;
        for i in 0..20 {
            let x = i as f64 * 0.4;
            let fd = (f.evaluate(x + step) - f.evaluate(x - step)) / (2.0 * step);
            assert!((d.evaluate(x) - fd).abs() < 1e-6);
        }
    }
}
