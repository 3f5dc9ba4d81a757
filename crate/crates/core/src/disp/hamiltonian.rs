//! Hamiltonian densities of the dispersionless flows, their Poisson structure
//! and the Frobenius data of the conifold.
//!
//! The densities are
//!
//! ```text
//! h = −i tanh⁻¹((1 + ζE)/S),   E = e^{±v},  S = √((1 + ζE)² − 4ζE e^{−u}).
//! ```
//!
//! Partial derivatives in `u` and `v` are taken by centred finite differences
//! with one Richardson step. `h` is only defined modulo `π` (the `tanh⁻¹`
//! branch), so every stencil works with differences folded into `(−π/2, π/2]`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use super::flows::{log_generating_series, DispersionlessFields};
use super::grid::{spectral_derivative, GridFunction};
use super::zseries::Dual;
use crate::error::{Error, Result};
use crate::hirota::Direction;
use crate::specfun::{branch::atanh, polylog};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn e_sign(dir: Direction) -> f64 {
    match dir {
        Direction::Z => 1.0,
        Direction::ZTilde => -1.0,
    }
}

/// `h(ζ; u, v)` for the `z` or `z̃` family.
pub fn hamiltonian_density_point(zeta: Complex64, u: Complex64, v: Complex64, dir: Direction) -> Result<Complex64> {
    if zeta.norm() == 0.0 {
        return Err(Error::domain("hamiltonian_density", "ζ = 0 is a logarithmic singularity"));
    }
    let e = (e_sign(dir) * v).exp();
    let f = (-u).exp();
    let s = ((1.0 + zeta * e).powu(2) - 4.0 * zeta * e * f).sqrt();
    if s.norm() < 1e-12 {
        return Err(Error::domain("hamiltonian_density", "branch point S = 0"));
    }
    let h = -I * atanh((1.0 + zeta * e) / s);
    if !h.is_finite() {
        return Err(Error::domain("hamiltonian_density", "non-finite density"));
    }
    Ok(h)
}

/// `h` on the grid. It is periodic whenever the fields are.
pub fn hamiltonian_density(zeta: Complex64, fields: &DispersionlessFields, dir: Direction) -> Result<GridFunction> {
    let (u, v) = (fields.u.values(), fields.v.values());
    let h = (0..u.len())
        .map(|k| hamiltonian_density_point(zeta, u[k], v[k], dir))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(fields.u.length, Complex64::new(0.0, 0.0), h)
}

/// Removes the nearest multiple of `π` from a real part.
fn fold_pi(z: Complex64) -> Complex64 {
    Complex64::new(z.re - PI * (z.re / PI).round(), z.im)
}

/// A finite-difference value together with its Richardson error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdEstimate {
    pub value: Complex64,
    pub error: f64,
}

fn stencil(g: &dyn Fn(f64) -> Result<Complex64>, h: f64, second: bool) -> Result<Complex64> {
    let (m2, m1, p1, p2) = (g(-2.0 * h)?, g(-h)?, g(h)?, g(2.0 * h)?);
    Ok(if second {
        (-m2 + 16.0 * m1 - 30.0 * g(0.0)? + 16.0 * p1 - p2) / (12.0 * h * h)
    } else {
        (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h)
    })
}

/// Five-point derivative of `g` at 0 with Richardson extrapolation, picking
/// the step whose error estimate is smallest.
fn fd_derivative(g: &dyn Fn(f64) -> Result<Complex64>, second: bool) -> Result<FdEstimate> {
    let mut best: Option<FdEstimate> = None;
    for h in [0.04, 0.02, 0.01, 0.005] {
        let coarse = stencil(g, h, second)?;
        let fine = stencil(g, h / 2.0, second)?;
        let est = FdEstimate { value: fine + (fine - coarse) / 15.0, error: (fine - coarse).norm() / 15.0 };
        if best.is_none_or(|b| est.error < b.error) {
            best = Some(est);
        }
    }
    Ok(best.expect("non-empty step list"))
}

/// `h_u, h_v, h_uu, h_vv` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamiltonianPartials {
    pub hu: FdEstimate,
    pub hv: FdEstimate,
    pub huu: FdEstimate,
    pub hvv: FdEstimate,
}

pub fn hamiltonian_partials(zeta: Complex64, u: Complex64, v: Complex64, dir: Direction) -> Result<HamiltonianPartials> {
    let h0 = hamiltonian_density_point(zeta, u, v, dir)?;
    let along_u = |d: f64| hamiltonian_density_point(zeta, u + d, v, dir).map(|h| fold_pi(h - h0));
    let along_v = |d: f64| hamiltonian_density_point(zeta, u, v + d, dir).map(|h| fold_pi(h - h0));
    Ok(HamiltonianPartials {
        hu: fd_derivative(&along_u, false)?,
        hv: fd_derivative(&along_v, false)?,
        huu: fd_derivative(&along_u, true)?,
        hvv: fd_derivative(&along_v, true)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSample {
    pub u: Complex64,
    pub v: Complex64,
    pub huu: Complex64,
    pub f3_hvv: Complex64,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityConstraintReport {
    /// `max |h_uu − f'''(u) h_vv| / max(|h_uu|, |f''' h_vv|)`.
    pub max_relative_residual: f64,
    /// The same with `f'''` replaced by `−f'''`.
    pub max_relative_residual_flipped: f64,
    /// Largest Richardson error estimate relative to `|h_uu|`.
    pub max_fd_error: f64,
    pub samples: Vec<ConstraintSample>,
}

/// Tests `h_uu = f'''(u) h_vv` at the given `(u, v)` points.
pub fn check_density_constraint(
    zeta: Complex64,
    dir: Direction,
    points: &[(Complex64, Complex64)],
    f3: impl Fn(Complex64) -> Complex64 + Sync,
) -> Result<DensityConstraintReport> {
    if points.is_empty() {
        return Err(Error::InsufficientData("no sample points".into()));
    }
    let rows = points
        .par_iter()
        .map(|&(u, v)| {
            let p = hamiltonian_partials(zeta, u, v, dir)?;
            let rhs = f3(u) * p.hvv.value;
            let scale = p.huu.value.norm().max(rhs.norm()).max(1e-300);
            let flipped = (p.huu.value + rhs).norm() / scale;
            let fd = (p.huu.error + f3(u).norm() * p.hvv.error) / scale;
            Ok((
                ConstraintSample { u, v, huu: p.huu.value, f3_hvv: rhs, relative_residual: (p.huu.value - rhs).norm() / scale },
                flipped,
                fd,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityConstraintReport {
        max_relative_residual: rows.iter().map(|r| r.0.relative_residual).fold(0.0, f64::max),
        max_relative_residual_flipped: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        max_fd_error: rows.iter().map(|r| r.2).fold(0.0, f64::max),
        samples: rows.into_iter().map(|r| r.0).collect(),
    })
}

/// The closed forms `Δv = −i∂_x((1 + ζE)/(2S))`, `Δu = ±i∂_x((1 − ζE)/(2S))`
/// of `Δ = ζ∂_ζ D` at a numeric `ζ`, returned as `(Δu, Δv)` on the grid.
pub fn delta_closed_form(zeta: Complex64, fields: &DispersionlessFields, dir: Direction) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let s = e_sign(dir);
    let (u, ux) = (fields.u.values(), fields.u.derivative());
    let (v, vx) = (fields.v.values(), fields.v.derivative());
    let z = Dual::constant(zeta);
    let one = Dual::constant(Complex64::new(1.0, 0.0));
    let two = Complex64::new(2.0, 0.0);
    let mut du = Vec::with_capacity(u.len());
    let mut dv = Vec::with_capacity(u.len());
    for k in 0..u.len() {
        let e = Dual::new(s * v[k], s * vx[k]).exp();
        let f = Dual::new(-u[k], -ux[k]).exp();
        let ze = z * e;
        let root = ((one + ze) * (one + ze) - (ze * f).scale(Complex64::new(4.0, 0.0))).sqrt();
        if root.value.norm() < 1e-12 {
            return Err(Error::domain("delta_closed_form", "branch point S = 0"));
        }
        let denom = root.scale(two);
        dv.push(-I * ((one + ze) / denom).deriv);
        du.push(s * I * ((one - ze) / denom).deriv);
    }
    Ok((du, dv))
}

/// `Σ_{j ≤ order} ζ^j ∂_{z_j}` applied to `(u, v)` using the stated flows.
pub fn recombined_flow(
    zeta: Complex64,
    fields: &DispersionlessFields,
    dir: Direction,
    order: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let s = e_sign(dir);
    let (u, ux) = (fields.u.values(), fields.u.derivative());
    let (v, vx) = (fields.v.values(), fields.v.derivative());
    (0..u.len())
        .map(|k| {
            let (la, lb) = log_generating_series(u[k], ux[k], v[k], vx[k], dir, order);
            let (mut du, mut dv) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            let mut zj = Complex64::new(1.0, 0.0);
            for j in 1..=order {
                zj *= zeta;
                dv += zj * I * j as f64 * la.0[j].deriv;
                du += zj * s * I * j as f64 * lb.0[j].deriv;
            }
            (du, dv)
        })
        .unzip()
}

/// Constant Poisson structure `{w^μ(x), w^ν(y)} = η^{μν} δ'(x − y)`: the flow of
/// `∫ h dx` is `w^μ_t = η^{μν} ∂_x (∂h/∂w^ν)`. Coordinates are `(w¹, w²) = (v, u)`.
pub fn poisson_flow(
    eta_inv: [[f64; 2]; 2],
    grad_v: &[Complex64],
    grad_u: &[Complex64],
    length: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let dgv = spectral_derivative(grad_v, length);
    let dgu = spectral_derivative(grad_u, length);
    let comb = |row: [f64; 2]| dgv.iter().zip(&dgu).map(|(a, b)| row[0] * a + row[1] * b).collect::<Vec<_>>();
    let v_t = comb(eta_inv[0]);
    let u_t = comb(eta_inv[1]);
    (u_t, v_t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HamiltonianFormReport {
    /// Relative sup-norm gap `Δv` vs `∂_x h_u`.
    pub v_vs_density: f64,
    /// Relative sup-norm gap `Δu` vs `∂_x h_v`.
    pub u_vs_density: f64,
    /// Gap between `Δv` and the recombined stated `v`-flows.
    pub v_vs_flows: f64,
    /// Gap between `Δu` and the recombined stated `u`-flows.
    pub u_vs_flows: f64,
    /// Gap between `Δu` and the recombined `u`-flows with their sign reversed.
    pub u_vs_flows_flipped: f64,
    /// Largest finite-difference error estimate for `h_u`, `h_v`.
    pub max_fd_error: f64,
}

fn rel_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = a.iter().chain(b).map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// Compares the closed `Δ`-forms with the Poisson flow of `∫h` (finite-difference
/// gradients, spectral `∂_x`) and with the stated flows summed to `ζ^order`.
pub fn check_hamiltonian_form(
    zeta: Complex64,
    fields: &DispersionlessFields,
    dir: Direction,
    order: usize,
) -> Result<HamiltonianFormReport> {
    let (du, dv) = delta_closed_form(zeta, fields, dir)?;
    let (u, v) = (fields.u.values(), fields.v.values());
    let partials = (0..u.len())
        .into_par_iter()
        .map(|k| hamiltonian_partials(zeta, u[k], v[k], dir))
        .collect::<Result<Vec<_>>>()?;
    let hu: Vec<_> = partials.iter().map(|p| p.hu.value).collect();
    let hv: Vec<_> = partials.iter().map(|p| p.hv.value).collect();
    let (pu, pv) = poisson_flow(FrobeniusData::new().inverse_metric(), &hv, &hu, fields.u.length);
    let (ru, rv) = recombined_flow(zeta, fields, dir, order);
    let neg: Vec<_> = ru.iter().map(|z| -z).collect();
    let fd_scale = hu.iter().chain(&hv).map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    Ok(HamiltonianFormReport {
        v_vs_density: rel_gap(&dv, &pv),
        u_vs_density: rel_gap(&du, &pu),
        v_vs_flows: rel_gap(&dv, &rv),
        u_vs_flows: rel_gap(&du, &ru),
        u_vs_flows_flipped: rel_gap(&du, &neg),
        max_fd_error: partials.iter().map(|p| p.hu.error.max(p.hv.error)).fold(0.0, f64::max) / fd_scale,
    })
}

/// Frobenius manifold of the conifold in flat coordinates `(w¹, w²) = (v, u)`
/// with potential `Φ = u v²/2 + f(u)`, `f(u) = −Li₃(e^{−u})`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrobeniusData;

impl FrobeniusData {
    pub fn new() -> Self {
        FrobeniusData
    }

    pub fn potential(&self, u: Complex64, v: Complex64) -> Result<Complex64> {
        Ok(u * v * v / 2.0 - polylog(3, (-u).exp())?)
    }

    /// `e^Φ`.
    pub fn topological_tau(&self, u: Complex64, v: Complex64) -> Result<Complex64> {
        Ok(self.potential(u, v)?.exp())
    }

    /// `f'''(u) = 1/(e^u − 1)`.
    pub fn f3(&self, u: Complex64) -> Complex64 {
        1.0 / (u.exp() - 1.0)
    }

    /// `Li₀(e^{−u}) = e^{−u}/(1 − e^{−u})`, which equals [`Self::f3`].
    pub fn li0(&self, u: Complex64) -> Result<Complex64> {
        polylog(0, (-u).exp())
    }

    /// `η_{μν} = ∂_v ∂_μ ∂_ν Φ`.
    pub fn metric(&self) -> [[f64; 2]; 2] {
        [[0.0, 1.0], [1.0, 0.0]]
    }

    pub fn inverse_metric(&self) -> [[f64; 2]; 2] {
        let g = self.metric();
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]]
    }

    /// `η_{μν}` from finite differences of `Φ` at a point: third derivatives
    /// `∂_v∂_v∂_v Φ`, `∂_v∂_v∂_u Φ`, `∂_v∂_u∂_u Φ`.
    pub fn metric_from_potential(&self, u: Complex64, v: Complex64) -> Result<[[Complex64; 2]; 2]> {
        let h = 1e-2;
        let phi = |du: f64, dv: f64| self.potential(u + du, v + dv);
        // ∂_v³ Φ
        let vvv = (phi(0.0, 2.0 * h)? - 2.0 * phi(0.0, h)? + 2.0 * phi(0.0, -h)? - phi(0.0, -2.0 * h)?) / (2.0 * h * h * h);
        // ∂_u ∂_v² Φ
        let d2v = |du: f64| -> Result<Complex64> { Ok((phi(du, h)? - 2.0 * phi(du, 0.0)? + phi(du, -h)?) / (h * h)) };
        let vvu = (d2v(h)? - d2v(-h)?) / (2.0 * h);
        // ∂_v ∂_u² Φ
        let d2u = |dv: f64| -> Result<Complex64> { Ok((phi(h, dv)? - 2.0 * phi(0.0, dv)? + phi(-h, dv)?) / (h * h)) };
        let vuu = (d2u(h)? - d2u(-h)?) / (2.0 * h);
        Ok([[vvv, vvu], [vvu, vuu]])
    }
}
