//! Gromov–Witten free energies of the resolved conifold and the checks tying
//! them to `log G`.
//!
//! Non-constant maps: `F̃⁰ = Li₃(q)`, and for `g ≥ 1`
//! `F̃^g = (−1)^{g−1} B_{2g} / (2g (2g−2)!) · Li_{3−2g}(q)`, with `q = e^{2πi t}`.
//! The string coupling is `λ = 2π λ̌`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::f64::consts::PI;

use crate::barnes::log_g;
use crate::error::{Error, Result};
use crate::specfun::{bernoulli_number, fold_2pi_i, polylog, Folded};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Euler characteristic of the resolved conifold.
pub const CONIFOLD_EULER_CHARACTERISTIC: i64 = 2;

/// `q = e^{2πi t}`; requires `Im t > 0`.
pub fn q_of(t: Complex64) -> Result<Complex64> {
    if !(t.im > 0.0) {
        return Err(Error::domain("q", format!("Im t = {} must be positive", t.im)));
    }
    Ok((2.0 * PI * I * t).exp())
}

/// `λ = 2π λ̌`.
pub fn lambda_of(lambda_check: Complex64) -> Complex64 {
    2.0 * PI * lambda_check
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact prefactor `c_g` in `F̃^g = c_g · Li_{3−2g}(q)`; `c_0 = 1`.
pub fn genus_coefficient(g: u32) -> BigRational {
    if g == 0 {
        return BigRational::one();
    }
    let b = bernoulli_number(2 * g as usize);
    let den = BigInt::from(2 * g) * factorial(2 * g as u64 - 2);
    let c = b / BigRational::from_integer(den);
    if g.is_multiple_of(2) {
        -c
    } else {
        c
    }
}

/// `F̃^g(t)`.
pub fn free_energy_genus(g: u32, t: Complex64) -> Result<Complex64> {
    let q = q_of(t)?;
    let order = 3 - 2 * g as i32;
    let c = crate::specfun::bernoulli::rational_to_f64(&genus_coefficient(g));
    Ok(c * polylog(order, q)?)
}

/// Genus-truncated sum `Σ_{g ≤ G} λ^{2g−2} F̃^g(t)`.
pub fn truncated_free_energy(genus_cap: u32, lambda_check: Complex64, t: Complex64) -> Result<Complex64> {
    let lam = lambda_of(lambda_check);
    let mut acc = Complex64::zero();
    for g in 0..=genus_cap {
        acc += lam.powi(2 * g as i32 - 2) * free_energy_genus(g, t)?;
    }
    Ok(acc)
}

/// Constant-map contribution
/// `(−1)^{g−1} χ B_{2g} B_{2g−2} / (4g (2g−2) (2g−2)!)` for `g ≥ 2`.
pub fn constant_map_contribution(g: u32, chi: i64) -> Result<BigRational> {
    if g < 2 {
        return Err(Error::domain(
            "constant_map_contribution",
            format!("genus {g} < 2: the genus 0 and 1 constant maps are t-dependent and not covered"),
        ));
    }
    let g = g as usize;
    let num = bernoulli_number(2 * g) * bernoulli_number(2 * g - 2) * BigRational::from_integer(chi.into());
    let den = BigInt::from(4 * g) * BigInt::from(2 * g - 2) * factorial(2 * g as u64 - 2);
    let v = num / BigRational::from_integer(den);
    Ok(if g.is_multiple_of(2) { -v } else { v })
}

/// Classical part `(2π)³ i x² t / (2 κ² λ̌²)` of the equivariant potential.
pub fn classical_term(lambda_check: Complex64, t: Complex64, x: Complex64, kappa: Complex64) -> Result<Complex64> {
    if kappa == Complex64::zero() {
        return Err(Error::domain("eval_f_ad", "κ must be nonzero"));
    }
    if lambda_check == Complex64::zero() {
        return Err(Error::domain("eval_f_ad", "λ̌ must be nonzero"));
    }
    Ok((2.0 * PI).powi(3) * I * x * x * t / (2.0 * kappa * kappa * lambda_check * lambda_check))
}

/// Equivariant potential with anti-diagonal action:
/// classical term plus `log G(t | λ̌, 1)`.
pub fn eval_f_ad(lambda_check: Complex64, t: Complex64, x: Complex64, kappa: Complex64) -> Result<Complex64> {
    let classical = classical_term(lambda_check, t, x, kappa)?;
    Ok(classical + log_g(t, lambda_check, Complex64::new(1.0, 0.0))?)
}

/// Outcome of the central difference-equation check at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceCheck {
    /// `log G(t + λ̌) − 2 log G(t) + log G(t − λ̌)`.
    pub second_difference: Complex64,
    /// `(i q d/dq)² Li₃(q) = −Li₁(q)`, evaluated through the polylog ladder.
    pub ladder_value: Complex64,
    /// Closed form `log(1 − q)`.
    pub closed_form: Complex64,
    /// `second_difference − closed_form`, folded mod `2πi`.
    pub residual: Folded,
}

/// Second difference of `log G` in `t` with step `λ̌` against `log(1 − q)`.
pub fn check_difference_equation(lambda_check: Complex64, t: Complex64) -> Result<DifferenceCheck> {
    let q = q_of(t)?;
    let one = Complex64::new(1.0, 0.0);
    let second_difference = log_g(t + lambda_check, lambda_check, one)? - 2.0 * log_g(t, lambda_check, one)?
        + log_g(t - lambda_check, lambda_check, one)?;
    // (1/2π ∂_t)² = (i q ∂_q)² = −(q ∂_q)², and (q ∂_q)² Li₃ = Li₁
    let ladder_value = -polylog(1, q)?;
    let closed_form = crate::specfun::branch::log1p(-q);
    Ok(DifferenceCheck {
        second_difference,
        ladder_value,
        closed_form,
        residual: fold_2pi_i(second_difference - closed_form),
    })
}

/// Same residual with `log G` replaced by its genus-`G` truncation; `O(λ^{2G})`.
pub fn surrogate_difference_residual(genus_cap: u32, lambda_check: Complex64, t: Complex64) -> Result<Complex64> {
    let q = q_of(t)?;
    let f = |s: Complex64| truncated_free_energy(genus_cap, lambda_check, s);
    let dd = f(t + lambda_check)? - 2.0 * f(t)? + f(t - lambda_check)?;
    Ok(dd - crate::specfun::branch::log1p(-q))
}

/// Remainders and fitted log–log slope along `λ̌ = ε e^{iθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticScan {
    pub genus_cap: u32,
    pub eps: Vec<f64>,
    /// `|log G − Σ_{g≤G} λ^{2g−2} F̃^g|` per `ε`.
    pub remainders: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares slope of `log y` against `log x`, returned with the intercept.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::InsufficientData("abscissae and ordinates differ in length".into()));
    }
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 positive samples for a slope fit, have {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Scans the genus-`G` remainder of `log G(t | λ̌, 1)` along a ray.
pub fn asymptotic_remainder_scan(t: Complex64, theta: f64, eps: &[f64], genus_cap: u32) -> Result<AsymptoticScan> {
    let q = q_of(t)?;
    if q.norm() > 0.5 {
        return Err(Error::domain(
            "asymptotic_remainder_scan",
            format!("|q| = {} exceeds 0.5; increase Im t", q.norm()),
        ));
    }
    if eps.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 values of ε, have {}",
            eps.len()
        )));
    }
    if eps.windows(2).any(|w| !(w[1] < w[0])) || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::domain("asymptotic_remainder_scan", "ε list must be positive and strictly decreasing"));
    }
    let one = Complex64::new(1.0, 0.0);
    let remainders = eps
        .iter()
        .map(|&e| {
            let lc = Complex64::from_polar(e, theta);
            Ok((log_g(t, lc, one)? - truncated_free_energy(genus_cap, lc, t)?).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let (slope, intercept) = loglog_fit(eps, &remainders)?;
    Ok(AsymptoticScan {
        genus_cap,
        eps: eps.to_vec(),
        remainders,
        slope,
        intercept,
    })
}

/// `n` logarithmically spaced values from `hi` down to `lo`.
pub fn log_spaced(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    (0..n)
        .map(|k| hi * (lo / hi).powf(k as f64 / (n - 1) as f64))
        .collect()
}
