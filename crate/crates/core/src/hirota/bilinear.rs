//! Miwa shifts and the six bilinear equations of the AL hierarchy.
//!
//! With `S` the shift `z ← z + i[ζ]` and `S̃` the shift `z̃ ← z̃ + i[ζ]`,
//! `[ζ] = (ζ, ζ²/2, ζ³/3, …)`, each residual is left minus right side:
//!
//! ```text
//! (a) τ S(τ) − ρ S(σ) − Λ⁻¹(τ) S(Λτ)        (d) τ S̃(τ) − ρ S̃(σ) − Λ(τ) S̃(Λ⁻¹τ)
//! (b) τ S(σ) − σ S(τ) − ζ Λ⁻¹(τ) S(Λσ)      (e) τ S̃(σ) − σ S̃(τ) − ζ Λ(τ) S̃(Λ⁻¹σ)
//! (c) ρ S(τ) − τ S(ρ) − ζ Λ⁻¹(ρ) S(Λτ)      (f) ρ S̃(τ) − τ S̃(ρ) − ζ Λ(ρ) S̃(Λ⁻¹τ)
//! ```

use num_complex::Complex64;
use rayon::prelude::*;

use super::series::TruncatedSeries;
use super::tau::{Direction, TauTriple};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which of the six bilinear equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HirotaEq {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl HirotaEq {
    pub const ALL: [HirotaEq; 6] = [HirotaEq::A, HirotaEq::B, HirotaEq::C, HirotaEq::D, HirotaEq::E, HirotaEq::F];

    pub fn label(self) -> char {
        match self {
            HirotaEq::A => 'a',
            HirotaEq::B => 'b',
            HirotaEq::C => 'c',
            HirotaEq::D => 'd',
            HirotaEq::E => 'e',
            HirotaEq::F => 'f',
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Some(HirotaEq::A),
            "b" => Some(HirotaEq::B),
            "c" => Some(HirotaEq::C),
            "d" => Some(HirotaEq::D),
            "e" => Some(HirotaEq::E),
            "f" => Some(HirotaEq::F),
            _ => None,
        }
    }

    fn direction(self) -> Direction {
        match self {
            HirotaEq::A | HirotaEq::B | HirotaEq::C => Direction::Z,
            _ => Direction::ZTilde,
        }
    }
}

/// Highest ζ-order at which a residual is meaningful: variables `z_j` with
/// `j > M` are absent, and they would first contribute at `ζ^j`.
pub fn max_reliable_order(t: &TauTriple) -> u32 {
    (t.space.time_variables() as u32).min(t.space.cap(t.space.zeta()) as u32)
}

/// `f(z + scale·[ζ])` in the chosen family, truncated at `ζ^order`.
pub fn miwa_shift(f: &TruncatedSeries, direction: Direction, scale: Complex64, order: u32) -> Result<TruncatedSeries> {
    let space = f.space();
    let m = space.time_variables();
    if m == 0 {
        return Err(Error::domain("miwa_shift", "series space must use the Hirota layout"));
    }
    let zeta_cap = space.cap(space.zeta()) as u32;
    if order > zeta_cap {
        return Err(Error::TruncationOrder {
            requested: order,
            available: zeta_cap,
        });
    }
    let zeta = TruncatedSeries::var(space, space.zeta());
    let mut shifts = Vec::new();
    let mut zp = TruncatedSeries::constant(space, Complex64::new(1.0, 0.0));
    for j in 1..=m.min(order as usize) {
        zp = &zp * &zeta;
        let v = match direction {
            Direction::Z => space.z(j),
            Direction::ZTilde => space.z_tilde(j),
        };
        shifts.push((v, zp.scale(scale / j as f64)));
    }
    let mut weights = vec![0u32; space.nvars()];
    weights[space.zeta()] = 1;
    Ok(f.substitute(&shifts).truncate_weighted(&weights, order))
}

fn residual_at(t: &TauTriple, eq: HirotaEq, n: i64, order: u32) -> Result<TruncatedSeries> {
    let k = t.index(n);
    let sh = |f: &TruncatedSeries| miwa_shift(f, eq.direction(), I, order);
    let zeta = TruncatedSeries::var(t.space, t.space.zeta());
    let (s, r, tau) = (&t.sigma, &t.rho, &t.tau);
    let res = match eq {
        HirotaEq::A => &(&(&tau[k] * &sh(&tau[k])?) - &(&r[k] * &sh(&s[k])?)) - &(&tau[k - 1] * &sh(&tau[k + 1])?),
        HirotaEq::B => {
            &(&(&tau[k] * &sh(&s[k])?) - &(&s[k] * &sh(&tau[k])?)) - &(&zeta * &(&tau[k - 1] * &sh(&s[k + 1])?))
        }
        HirotaEq::C => {
            &(&(&r[k] * &sh(&tau[k])?) - &(&tau[k] * &sh(&r[k])?)) - &(&zeta * &(&r[k - 1] * &sh(&tau[k + 1])?))
        }
        HirotaEq::D => &(&(&tau[k] * &sh(&tau[k])?) - &(&r[k] * &sh(&s[k])?)) - &(&tau[k + 1] * &sh(&tau[k - 1])?),
        HirotaEq::E => {
            &(&(&tau[k] * &sh(&s[k])?) - &(&s[k] * &sh(&tau[k])?)) - &(&zeta * &(&tau[k + 1] * &sh(&s[k - 1])?))
        }
        HirotaEq::F => {
            &(&(&r[k] * &sh(&tau[k])?) - &(&tau[k] * &sh(&r[k])?)) - &(&zeta * &(&r[k + 1] * &sh(&tau[k - 1])?))
        }
    };
    let mut weights = vec![0u32; t.space.nvars()];
    weights[t.space.zeta()] = 1;
    Ok(res.truncate_weighted(&weights, order))
}

/// Residual of one equation on every interior site, expanded to `ζ^order`.
pub fn hirota_residual(t: &TauTriple, eq: HirotaEq, order: u32) -> Result<Vec<(i64, TruncatedSeries)>> {
    if t.w < 1 {
        return Err(Error::Window("Λ^{±1} needs at least one interior site (W ≥ 1)".into()));
    }
    let avail = max_reliable_order(t);
    if order > avail {
        return Err(Error::TruncationOrder {
            requested: order,
            available: avail,
        });
    }
    let sites: Vec<i64> = t.interior_sites().collect();
    sites
        .into_par_iter()
        .map(|n| residual_at(t, eq, n, order).map(|r| (n, r)))
        .collect()
}

/// Grading in which `[ζ]` shifts are homogeneous: `ζ` has weight 1 and
/// `z_j`, `z̃_j` have weight `j`.
pub fn hirota_weights(t: &TauTriple) -> Vec<u32> {
    let m = t.space.time_variables();
    let mut w = vec![1u32];
    w.extend((1..=m as u32).chain(1..=m as u32));
    w
}

/// Largest coefficient of weight at most `max_weight` over the given sites.
pub fn weighted_residual_norm(t: &TauTriple, residual: &[(i64, TruncatedSeries)], sites: impl Fn(i64) -> bool, max_weight: u32) -> f64 {
    let weights = hirota_weights(t);
    residual
        .iter()
        .filter(|(n, _)| sites(*n))
        .map(|(_, r)| r.truncate_weighted(&weights, max_weight).max_abs())
        .fold(0.0, f64::max)
}
