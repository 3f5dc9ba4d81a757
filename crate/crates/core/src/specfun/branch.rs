//! Branch conventions used throughout the crate.
//!
//! Every complex logarithm is the principal branch, `Im log z ∈ (−π, π]`.
//! Identities between logarithms of products only hold modulo `2πi`; such
//! comparisons go through [`fold_2pi_i`], which subtracts the nearest integer
//! multiple of `2πi` and reports how many multiples were removed.
//! `tanh⁻¹ w` is `½ log((1 + w)/(1 − w))` with the principal logarithm.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Residual after removing the nearest multiple of `2πi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Folded {
    pub value: Complex64,
    /// Number of `2πi` periods subtracted.
    pub folds: i64,
}

impl Folded {
    pub fn norm(&self) -> f64 {
        self.value.norm()
    }
}

/// Reduces the imaginary part of `z` into `(−π, π]`.
pub fn fold_2pi_i(z: Complex64) -> Folded {
    let folds = (z.im / (2.0 * PI)).round();
    let mut im = z.im - folds * 2.0 * PI;
    let mut folds = folds as i64;
    if im <= -PI {
        im += 2.0 * PI;
        folds -= 1;
    }
    Folded {
        value: Complex64::new(z.re, im),
        folds,
    }
}

/// `e^z − 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    if z.norm() > 0.5 {
        return z.exp() - 1.0;
    }
    let em1 = z.re.exp_m1();
    let half_sin = (0.5 * z.im).sin();
    let re = em1 * z.im.cos() - 2.0 * half_sin * half_sin;
    let im = z.re.exp() * z.im.sin();
    Complex64::new(re, im)
}

/// Principal `log(1 + w)`, accurate for small `|w|`.
pub fn log1p(w: Complex64) -> Complex64 {
    if w.norm() > 0.5 {
        return (1.0 + w).ln();
    }
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    Complex64::new(re, im)
}

/// Principal `tanh⁻¹ w = ½ log((1 + w)/(1 − w))`.
pub fn atanh(w: Complex64) -> Complex64 {
    0.5 * ((1.0 + w) / (1.0 - w)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fold_picks_nearest_period() {
        let f = fold_2pi_i(Complex64::new(0.25, 4.0 * PI + 0.1));
        assert_eq!(f.folds, 2);
        assert_relative_eq!(f.value.im, 0.1, epsilon = 1e-12);
        let f = fold_2pi_i(Complex64::new(0.0, -PI));
        assert_relative_eq!(f.value.im, PI, epsilon = 1e-12);
        assert_eq!(f.folds, -1);
    }

    #[test]
    fn expm1_small_argument() {
        let z = Complex64::new(1e-9, -2e-9);
        let e = expm1(z);
        assert_relative_eq!(e.re, 1e-9 - 0.5 * (4e-18 - 1e-18), max_relative = 1e-12);
        assert_relative_eq!(e.im, -2e-9, max_relative = 1e-9);
        let w = Complex64::new(0.3, 0.2);
        let d = expm1(w) - (w.exp() - 1.0);
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn log1p_matches_log() {
        let w = Complex64::new(0.2, -0.3);
        assert!((log1p(w) - (1.0 + w).ln()).norm() < 1e-15);
        let tiny = Complex64::new(1e-12, 1e-12);
        assert!((log1p(tiny) - tiny).norm() < 1e-23);
    }
}
