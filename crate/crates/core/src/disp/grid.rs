//! Periodic grids carrying an explicit linear part.
//!
//! A [`GridFunction`] samples `f(x) = m·x + p(x)` on `x_k = kL/N`, `k = 0..N`,
//! with `p` periodic of period `L`. Derivatives are `m + p'(x)`, with `p'` from
//! the FFT.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub length: f64,
    pub mean_slope: Complex64,
    pub periodic: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(length: f64, mean_slope: Complex64, periodic: Vec<Complex64>) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::domain("grid_function", "period must be positive and finite"));
        }
        if periodic.len() < 2 {
            return Err(Error::domain("grid_function", "need at least two grid points"));
        }
        Ok(GridFunction { length, mean_slope, periodic })
    }

    /// Samples `slope·x + p(x)` for a periodic `p`.
    pub fn from_fn(n: usize, length: f64, mean_slope: Complex64, p: impl Fn(f64) -> Complex64) -> Result<Self> {
        let h = length / n as f64;
        Self::new(length, mean_slope, (0..n).map(|k| p(k as f64 * h)).collect())
    }

    pub fn constant(n: usize, length: f64, c: Complex64) -> Result<Self> {
        Self::new(length, Complex64::new(0.0, 0.0), vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.periodic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periodic.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.len() as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        k as f64 * self.spacing()
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.x(k)).collect()
    }

    /// Total values `m x_k + p_k`.
    pub fn values(&self) -> Vec<Complex64> {
        (0..self.len()).map(|k| self.mean_slope * self.x(k) + self.periodic[k]).collect()
    }

    /// `∂_x f` on the grid.
    pub fn derivative(&self) -> Vec<Complex64> {
        spectral_derivative(&self.periodic, self.length)
            .into_iter()
            .map(|d| d + self.mean_slope)
            .collect()
    }

    pub fn max_abs_derivative(&self) -> f64 {
        self.derivative().iter().map(|d| d.norm()).fold(0.0, f64::max)
    }

    /// `x ↦ f(−x)`.
    pub fn reflect(&self) -> Self {
        let n = self.len();
        GridFunction {
            length: self.length,
            mean_slope: -self.mean_slope,
            periodic: (0..n).map(|k| self.periodic[(n - k) % n]).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GridFunction {
            length: self.length,
            mean_slope: self.mean_slope * c,
            periodic: self.periodic.iter().map(|p| p * c).collect(),
        }
    }

    /// `exp(c f)` is periodic iff `c m L ∈ 2πi ℤ`.
    pub fn exp_is_periodic(&self, c: f64) -> bool {
        let w = c * self.mean_slope * self.length / (2.0 * PI);
        // w must be i·integer
        w.re.abs() < 1e-9 && (w.im - w.im.round()).abs() < 1e-9
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Pseudo-spectral derivative of periodic samples on `[0, L)`. The Nyquist mode
/// of even-length grids is dropped.
pub fn spectral_derivative(values: &[Complex64], length: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    fwd.process(&mut buf);
    let base = 2.0 * PI / length;
    for (m, c) in buf.iter_mut().enumerate() {
        let wave = if 2 * m < n {
            m as f64
        } else if 2 * m == n {
            0.0
        } else {
            m as f64 - n as f64
        };
        *c *= Complex64::new(0.0, base * wave);
    }
    inv.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|c| c * scale).collect()
}
