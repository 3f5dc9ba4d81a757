//! The `x`-difference relation for `ϖ_λ` and the identification of the
//! dispersionless initial data with the small phase space.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::grid::GridFunction;
use crate::barnes::log_g;
use crate::error::{Error, Result};
use crate::gw::q_of;
use crate::specfun::{fold_2pi_i, polylog};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XdifReport {
    /// `log(1 − e^{2r_λ})` per grid point.
    pub lhs: Vec<Complex64>,
    /// `(ϖ_λ(x + λ̌) − 2ϖ_λ(x) + ϖ_λ(x − λ̌))/λ̌²` per grid point.
    pub rhs: Vec<Complex64>,
    /// `lhs − rhs` folded mod `2πi`.
    pub residuals: Vec<Complex64>,
    pub max_residual: f64,
}

/// Second difference of `ϖ` with step `λ̌`, divided by `λ̌²`.
pub fn second_difference(varpi: &dyn Fn(Complex64) -> Result<Complex64>, x: Complex64, lambda_check: Complex64) -> Result<Complex64> {
    if lambda_check.norm() == 0.0 {
        return Err(Error::domain("check_xdif", "λ̌ must be nonzero"));
    }
    Ok((varpi(x + lambda_check)? - 2.0 * varpi(x)? + varpi(x - lambda_check)?) / (lambda_check * lambda_check))
}

/// Residual of `log(1 − e^{2r_λ}) = Δ²_{λ̌} ϖ_λ / λ̌²` on the grid of `r_λ`.
pub fn check_xdif(
    varpi: &dyn Fn(Complex64) -> Result<Complex64>,
    r: &GridFunction,
    lambda_check: Complex64,
) -> Result<XdifReport> {
    let rv = r.values();
    let mut lhs = Vec::with_capacity(rv.len());
    let mut rhs = Vec::with_capacity(rv.len());
    let mut residuals = Vec::with_capacity(rv.len());
    for (k, rk) in rv.iter().enumerate() {
        let l = (1.0 - (2.0 * rk).exp()).ln();
        let d = second_difference(varpi, Complex64::new(r.x(k), 0.0), lambda_check)?;
        residuals.push(fold_2pi_i(l - d).value);
        lhs.push(l);
        rhs.push(d);
    }
    let max_residual = residuals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(XdifReport { lhs, rhs, residuals, max_residual })
}

/// `(2π)^{-2} · (2π)³ i x² t / (2κ²)`, the classical part of `ϖ_λ`.
pub fn classical_varpi(t: Complex64, kappa: Complex64, x: Complex64) -> Complex64 {
    2.0 * PI * I * x * x * t / (2.0 * kappa * kappa)
}

/// `ϖ_λ(x) = (2π)^{-2} ((2π)³ i x² t/(2κ²) + λ̌² log G(t | λ̌, 1))` at `z = z̃ = 0`.
pub fn varpi_lambda(lambda_check: Complex64, t: Complex64, x: Complex64, kappa: Complex64) -> Result<Complex64> {
    let lg = log_g(t, lambda_check, Complex64::new(1.0, 0.0))?;
    Ok(classical_varpi(t, kappa, x) + lambda_check * lambda_check * lg / (4.0 * PI * PI))
}

/// `u_λ = −Δ²ϖ_λ/λ̌²` at `x`; equivalently `−log(1 − e^{2r_λ})`.
pub fn u_lambda(varpi: &dyn Fn(Complex64) -> Result<Complex64>, x: Complex64, lambda_check: Complex64) -> Result<Complex64> {
    Ok(-second_difference(varpi, x, lambda_check)?)
}

/// `r = ½ log(1 − e^{−u})`.
pub fn r_from_u(u: Complex64) -> Complex64 {
    0.5 * (1.0 - (-u).exp()).ln()
}

/// Both sides of `(2π)² ϖ|₀ = −u v²/2 + F̃⁰` with `u = −2πit`, `v = 2πix/κ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipalIdentification {
    pub t: Complex64,
    pub x: Complex64,
    pub kappa: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    pub li3: Complex64,
    /// `(2π)³ i x² t / (2κ²)`.
    pub classical: Complex64,
    /// `classical + F̃⁰`, the genus-zero part of `λ̌² log G` normalised as `F̃⁰`.
    pub lhs: Complex64,
    /// `−u v²/2 + F̃⁰`.
    pub rhs: Complex64,
    /// `+u v²/2 + F̃⁰`.
    pub rhs_flipped: Complex64,
    pub difference: Complex64,
    pub difference_flipped: Complex64,
    /// `lim_{λ̌→0} λ̌² log G(t | λ̌, 1)` by Richardson extrapolation in `λ̌²`.
    pub genus_zero_limit: Complex64,
    /// `|limit − F̃⁰/(2π)²|`: the limit carries `λ = 2πλ̌`, not `λ̌`.
    pub limit_vs_li3_over_4pi2: f64,
    /// `|limit − F̃⁰|`.
    pub limit_vs_li3: f64,
}

pub fn check_principal_identification(t: Complex64, x: Complex64, kappa: Complex64) -> Result<PrincipalIdentification> {
    if kappa.norm() == 0.0 {
        return Err(Error::domain("check_principal_identification", "κ must be nonzero"));
    }
    let q = q_of(t)?;
    let li3 = polylog(3, q)?;
    let u = -2.0 * PI * I * t;
    let v = 2.0 * PI * I * x / kappa;
    let classical = (2.0 * PI).powi(3) * I * x * x * t / (2.0 * kappa * kappa);
    let lhs = classical + li3;
    let rhs = -u * v * v / 2.0 + li3;
    let rhs_flipped = u * v * v / 2.0 + li3;

    let ray = Complex64::from_polar(1.0, PI / 4.0);
    let scaled = |eps: f64| -> Result<Complex64> {
        let l = eps * ray;
        Ok(l * l * log_g(t, l, Complex64::new(1.0, 0.0))?)
    };
    // λ̌² log G = c₀ + c₁ λ̌² + O(λ̌⁴)
    let (a, b) = (scaled(0.04)?, scaled(0.02)?);
    let limit = (4.0 * b - a) / 3.0;
    Ok(PrincipalIdentification {
        t,
        x,
        kappa,
        u,
        v,
        li3,
        classical,
        lhs,
        rhs,
        rhs_flipped,
        difference: lhs - rhs,
        difference_flipped: lhs - rhs_flipped,
        genus_zero_limit: limit,
        limit_vs_li3_over_4pi2: (limit - li3 / (4.0 * PI * PI)).norm(),
        limit_vs_li3: (limit - li3).norm(),
    })
}
