//! Complex log-gamma via the Stirling series after an upward shift.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::bernoulli::bernoulli_f64;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SHIFT_TO: f64 = 16.0;
const STIRLING_TERMS: usize = 12;

/// `log Γ(z)` modulo `2πi`; exact principal value on the positive real axis.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1 − z) = π / sin(πz)
        let s = (PI * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z);
    }
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut log_acc = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TO || w.norm() < SHIFT_TO {
        prod *= w;
        if prod.norm() > 1e150 {
            log_acc += prod.ln();
            prod = Complex64::new(1.0, 0.0);
        }
        w += 1.0;
    }
    log_acc += prod.ln();
    stirling(w) - log_acc
}

fn stirling(w: Complex64) -> Complex64 {
    let mut acc = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = w * w;
    let mut wp = w;
    for k in 1..=STIRLING_TERMS {
        let b = bernoulli_f64(2 * k);
        acc += b / ((2 * k) as f64 * (2 * k - 1) as f64) / wp;
        wp *= w2;
    }
    acc
}

/// `1/Γ(s)`, entire; exactly zero at the non-positive integers.
pub fn recip_gamma(s: Complex64) -> Complex64 {
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    (-ln_gamma(s)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_values() {
        assert!(ln_gamma(Complex64::new(1.0, 0.0)).norm() < 4e-15);
        assert!(ln_gamma(Complex64::new(2.0, 0.0)).norm() < 4e-15);
        let half = ln_gamma(Complex64::new(0.5, 0.0));
        assert!((half.re - 0.5 * PI.ln()).abs() < 4e-15);
        let g10 = ln_gamma(Complex64::new(10.0, 0.0)).re;
        assert!((g10 - 362_880f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn recurrence_in_complex_plane() {
        let z = Complex64::new(0.3, 1.7);
        let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
        let d = crate::specfun::branch::fold_2pi_i(d);
        assert!(d.norm() < 1e-13);
    }

    #[test]
    fn reciprocal_zeros() {
        assert_eq!(recip_gamma(Complex64::new(-3.0, 0.0)), Complex64::new(0.0, 0.0));
        let r = recip_gamma(Complex64::new(-2.5, 0.0));
        // Γ(−2.5) = −8√π/15
        assert!((r.re - 1.0 / (-8.0 * PI.sqrt() / 15.0)).abs() < 1e-14);
    }
}
