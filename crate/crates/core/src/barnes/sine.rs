//! Multiple sine functions and the functions `H`, `G` built on them.
//!
//! `sin_r(z | ω) = Γ_r(z | ω)^{−1} · Γ_r(|ω| − z | ω)^{(−1)^r}` with `|ω| = Σ ω_i`,
//! normalized so that `sin_1(z | ω) = 2 sin(πz/ω)` and
//! `sin_r(z + ω_i) = sin_r(z) · sin_{r−1}(z | ω without ω_i)^{−1}`.
//!
//! ```text
//! log H(t | ω1, ω2) = −(πi/2) B_{2,2}(t | ω1, ω2) + log sin_2(t | ω1, ω2)
//! log G(t | ω1, ω2) = (πi/6) B_{3,3}(t + ω1 | ω1, ω1, ω2) + log sin_3(t + ω1 | ω1, ω1, ω2)
//! ```
//!
//! Both need `t` (resp. `t + ω1`) and the reflected point inside `Re > 0`.
//! Outside that strip the values are transported by the exact shifts
//!
//! ```text
//! H(t + ω1) = H(t) · (1 − e^{2πi t/ω2})^{−1}
//! G(t + ω1) = G(t) · H(t + ω1)^{−1}
//! ```

use num_complex::Complex64;
use std::f64::consts::PI;

use super::zeta::{log_multiple_gamma, BarnesConfig, BarnesEvaluation};
use crate::error::{Error, Result};
use crate::specfun::{branch, gen_bernoulli};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest number of difference-equation steps taken to reach the direct strip.
pub const MAX_SHIFT_STEPS: usize = 100_000;

/// `log sin_r(z | ω)` on the principal branch of each `log Γ_r`.
pub fn log_multiple_sine(z: Complex64, omega: &[Complex64], config: BarnesConfig) -> Result<Complex64> {
    let r = omega.len();
    if r == 0 {
        return Err(Error::domain("log_multiple_sine", "rank must be at least 1"));
    }
    let total: Complex64 = omega.iter().sum();
    let direct = log_multiple_gamma(&BarnesEvaluation::with_config(omega, z, config)?)?.value;
    let reflected = log_multiple_gamma(&BarnesEvaluation::with_config(omega, total - z, config)?)?.value;
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(-direct + sign * reflected)
}

fn check_periods(func: &'static str, w1: Complex64, w2: Complex64) -> Result<()> {
    if !(w1.re > 0.0 && w2.re > 0.0) {
        return Err(Error::domain(
            func,
            format!("periods must have positive real part, got {w1} and {w2}"),
        ));
    }
    if !(w1.re.is_finite() && w1.im.is_finite() && w2.re.is_finite() && w2.im.is_finite()) {
        return Err(Error::domain(func, "non-finite period"));
    }
    Ok(())
}

/// Strip `Re t ∈ [δ, Re(ω1 + ω2) − δ]` on which `H` is evaluated directly.
///
/// The margin keeps the tail integrals away from their slowly decaying edge and
/// is small enough that the strip is wider than one step `ω1`.
fn strip(w1: Complex64, w2: Complex64) -> (f64, f64) {
    let margin = (0.45 * w1.re.min(w2.re)).min(0.05);
    (margin, w1.re + w2.re - margin)
}

/// Number of `ω1` steps `n` such that `t − n ω1` lands closest to the middle of
/// the strip; zero when `t` is already inside.
fn steps_to_strip(func: &'static str, t: Complex64, w1: Complex64, w2: Complex64) -> Result<i64> {
    let (lo, hi) = strip(w1, w2);
    if t.re >= lo && t.re <= hi {
        return Ok(0);
    }
    let mid = 0.5 * (lo + hi);
    let n = ((t.re - mid) / w1.re).round();
    if !n.is_finite() || n.abs() > MAX_SHIFT_STEPS as f64 {
        return Err(Error::domain(
            func,
            format!("Re t = {} needs more than {MAX_SHIFT_STEPS} shifts by ω1 = {w1}", t.re),
        ));
    }
    Ok(n as i64)
}

fn log_h_direct(t: Complex64, w1: Complex64, w2: Complex64, config: BarnesConfig) -> Result<Complex64> {
    let omega = [w1, w2];
    let b22 = gen_bernoulli(2, t, &omega)?;
    Ok(-0.5 * PI * I * b22 + log_multiple_sine(t, &omega, config)?)
}

/// `log(1 − e^{2πi t/ω2})`, the factor relating `H(t)` and `H(t + ω1)`.
fn h_step_factor(t: Complex64, w2: Complex64) -> Result<Complex64> {
    let x = (2.0 * PI * I * t / w2).exp();
    if (Complex64::new(1.0, 0.0) - x).norm() == 0.0 {
        return Err(Error::Pole {
            func: "log_h",
            at: format!("t = {t}: 1 − exp(2πi t/ω2) vanishes"),
        });
    }
    Ok(branch::log1p(-x))
}

/// `log H(t | ω1, ω2)` with default precision.
pub fn log_h(t: Complex64, w1: Complex64, w2: Complex64) -> Result<Complex64> {
    log_h_with_config(t, w1, w2, BarnesConfig::default())
}

pub fn log_h_with_config(t: Complex64, w1: Complex64, w2: Complex64, config: BarnesConfig) -> Result<Complex64> {
    check_periods("log_h", w1, w2)?;
    let n = steps_to_strip("log_h", t, w1, w2)?;
    let base = t - w1 * n as f64;
    let mut acc = log_h_direct(base, w1, w2, config)?;
    if n > 0 {
        // H(s + ω1) = H(s) − log(1 − e^{2πi s/ω2}) in logs
        for k in 0..n {
            acc -= h_step_factor(base + w1 * k as f64, w2)?;
        }
    } else {
        for k in 1..=(-n) {
            acc += h_step_factor(base - w1 * k as f64, w2)?;
        }
    }
    Ok(acc)
}

fn log_g_direct(t: Complex64, w1: Complex64, w2: Complex64, config: BarnesConfig) -> Result<Complex64> {
    let omega = [w1, w1, w2];
    let z = t + w1;
    let b33 = gen_bernoulli(3, z, &omega)?;
    Ok(PI * I / 6.0 * b33 + log_multiple_sine(z, &omega, config)?)
}

/// `log G(t | ω1, ω2)` with default precision.
pub fn log_g(t: Complex64, w1: Complex64, w2: Complex64) -> Result<Complex64> {
    log_g_with_config(t, w1, w2, BarnesConfig::default())
}

pub fn log_g_with_config(t: Complex64, w1: Complex64, w2: Complex64, config: BarnesConfig) -> Result<Complex64> {
    check_periods("log_g", w1, w2)?;
    // the direct strip of G (in t) is that of H shifted by −ω1; use the H strip
    // for t + ω1
    let n = steps_to_strip("log_g", t + w1, w1, w2)?;
    let base = t - w1 * n as f64;
    let mut acc = log_g_direct(base, w1, w2, config)?;
    if n > 0 {
        // log G(s + ω1) = log G(s) − log H(s + ω1)
        for k in 1..=n {
            acc -= log_h_with_config(base + w1 * k as f64, w1, w2, config)?;
        }
    } else {
        // log G(s − ω1) = log G(s) + log H(s)
        for k in 0..(-n) {
            acc += log_h_with_config(base - w1 * k as f64, w1, w2, config)?;
        }
    }
    Ok(acc)
}

/// Non-perturbative potential `F_np(λ̌, t) = log G(t | λ̌, 1)`.
pub fn f_np(lambda_check: Complex64, t: Complex64) -> Result<Complex64> {
    if lambda_check.im == 0.0 && lambda_check.re <= 0.0 {
        return Err(Error::domain("f_np", "λ̌ on the non-positive real axis"));
    }
    log_g(t, lambda_check, Complex64::new(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::fold_2pi_i;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_one_sine() {
        let w = c(1.3, 0.2);
        for &z in &[c(0.4, 0.1), c(0.9, -0.3), c(0.2, 0.5)] {
            let ls = log_multiple_sine(z, &[w], BarnesConfig::default()).unwrap();
            let expected = (2.0 * (PI * z / w).sin()).ln();
            assert!(fold_2pi_i(ls - expected).norm() < 1e-11, "{z}");
        }
    }

    #[test]
    fn h_symmetric_in_periods() {
        let t = c(0.4, 0.3);
        let a = log_h(t, c(0.7, 0.0), c(1.0, 0.0)).unwrap();
        let b = log_h(t, c(1.0, 0.0), c(0.7, 0.0)).unwrap();
        assert!(fold_2pi_i(a - b).norm() < 1e-10);
    }

    #[test]
    fn shifted_evaluation_agrees_with_direct() {
        let (w1, w2) = (c(0.3, 0.1), c(1.0, 0.0));
        let t = c(0.5, 0.4);
        let direct = log_h_direct(t, w1, w2, BarnesConfig::default()).unwrap();
        let via_shift = log_h_direct(t + w1, w1, w2, BarnesConfig::default()).unwrap()
            + h_step_factor(t, w2).unwrap();
        assert!(fold_2pi_i(direct - via_shift).norm() < 1e-9);
    }

    #[test]
    fn negative_real_lambda_rejected() {
        assert!(f_np(c(-0.1, 0.0), c(0.3, 0.4)).is_err());
    }
}
