//! Lattice-indexed tau triples `(σ, ρ, τ)` and first-order flow extraction.
//!
//! Sites run over the window `n ∈ [−W, W]`; `Λ` is the site shift
//! `(Λf)(n) = f(n + 1)`. The triple is tied to the AL fields by
//! `a = σ/τ`, `b = ρ/τ` and `Λ(τ) Λ^{−1}(τ) = τ² − σρ`.

use num_complex::Complex64;
use num_traits::Zero;

use super::series::{SeriesSpace, TruncatedSeries};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Numeric triple at a single value of the times.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeTau {
    pub w: usize,
    pub sigma: Vec<Complex64>,
    pub rho: Vec<Complex64>,
    pub tau: Vec<Complex64>,
}

impl LatticeTau {
    pub fn new(w: usize, sigma: Vec<Complex64>, rho: Vec<Complex64>, tau: Vec<Complex64>) -> Result<Self> {
        let len = 2 * w + 1;
        if sigma.len() != len || rho.len() != len || tau.len() != len {
            return Err(Error::Window(format!(
                "window half-width {w} needs {len} sites, got σ {}, ρ {}, τ {}",
                sigma.len(),
                rho.len(),
                tau.len()
            )));
        }
        if let Some(k) = tau.iter().position(|t| t.is_zero()) {
            return Err(Error::domain(
                "tau_triple",
                format!("τ vanishes at site {}", k as i64 - w as i64),
            ));
        }
        Ok(LatticeTau { w, sigma, rho, tau })
    }

    /// Builds the triple of given fields `(a_n, b_n)` from
    /// `τ_{n+1} = τ_n² (1 − a_n b_n)/τ_{n−1}` with `τ_{−W} = τ_{−W+1} = 1`.
    pub fn from_fields(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        if a.len() != b.len() || a.len().is_multiple_of(2) || a.len() < 3 {
            return Err(Error::Window("fields must share an odd length of at least 3".into()));
        }
        let w = a.len() / 2;
        let mut tau = vec![Complex64::new(1.0, 0.0); a.len()];
        for k in 1..a.len() - 1 {
            let g = 1.0 - a[k] * b[k];
            if g.is_zero() {
                return Err(Error::domain("tau_from_fields", format!("1 − ab vanishes at site {}", k as i64 - w as i64)));
            }
            tau[k + 1] = tau[k] * tau[k] * g / tau[k - 1];
        }
        let sigma = a.iter().zip(&tau).map(|(a, t)| a * t).collect();
        let rho = b.iter().zip(&tau).map(|(b, t)| b * t).collect();
        Self::new(w, sigma, rho, tau)
    }

    pub fn index(&self, n: i64) -> usize {
        (n + self.w as i64) as usize
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        -(self.w as i64)..=self.w as i64
    }

    pub fn a(&self) -> Vec<Complex64> {
        self.sigma.iter().zip(&self.tau).map(|(s, t)| s / t).collect()
    }

    pub fn b(&self) -> Vec<Complex64> {
        self.rho.iter().zip(&self.tau).map(|(r, t)| r / t).collect()
    }

    /// `τ_n² − σ_nρ_n − τ_{n−1}τ_{n+1}` at interior site `n`.
    pub fn constraint_defect(&self, n: i64) -> Complex64 {
        let k = self.index(n);
        self.tau[k] * self.tau[k] - self.sigma[k] * self.rho[k] - self.tau[k - 1] * self.tau[k + 1]
    }

    /// Taylor step `f ← f + h ∂f` along one direction; sites without a
    /// derivative keep their value.
    pub fn euler_step(&self, d: &FlowDerivatives, direction: Direction, h: f64) -> Result<Self> {
        let (ds, dr, dt) = d.for_direction(direction);
        let step = |f: &[Complex64], df: &[Option<Complex64>]| -> Vec<Complex64> {
            f.iter().zip(df).map(|(x, dx)| x + dx.map_or(Complex64::zero(), |v| v * h)).collect()
        };
        Self::new(self.w, step(&self.sigma, ds), step(&self.rho, dr), step(&self.tau, dt))
    }
}

/// Time-variable family of a Miwa shift or flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Direction {
    Z,
    ZTilde,
}

/// `∂_{z_1}` and `∂_{z̃_1}` of `σ, ρ, τ` per site; `None` where the window edge
/// leaves the value undetermined.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowDerivatives {
    pub w: usize,
    pub dz_sigma: Vec<Option<Complex64>>,
    pub dz_rho: Vec<Option<Complex64>>,
    pub dz_tau: Vec<Option<Complex64>>,
    pub dzt_sigma: Vec<Option<Complex64>>,
    pub dzt_rho: Vec<Option<Complex64>>,
    pub dzt_tau: Vec<Option<Complex64>>,
}

impl FlowDerivatives {
    fn for_direction(&self, d: Direction) -> (&[Option<Complex64>], &[Option<Complex64>], &[Option<Complex64>]) {
        match d {
            Direction::Z => (&self.dz_sigma, &self.dz_rho, &self.dz_tau),
            Direction::ZTilde => (&self.dzt_sigma, &self.dzt_rho, &self.dzt_tau),
        }
    }

    /// Induced `∂a = (∂σ − a ∂τ)/τ`, `∂b = (∂ρ − b ∂τ)/τ`.
    pub fn field_flow(&self, base: &LatticeTau, direction: Direction) -> (Vec<Option<Complex64>>, Vec<Option<Complex64>>) {
        let (ds, dr, dt) = self.for_direction(direction);
        let mut da = Vec::with_capacity(ds.len());
        let mut db = Vec::with_capacity(ds.len());
        for k in 0..ds.len() {
            let t = base.tau[k];
            let (a, b) = (base.sigma[k] / t, base.rho[k] / t);
            da.push(match (ds[k], dt[k]) {
                (Some(s), Some(d)) => Some((s - a * d) / t),
                _ => None,
            });
            db.push(match (dr[k], dt[k]) {
                (Some(r), Some(d)) => Some((r - b * d) / t),
                _ => None,
            });
        }
        (da, db)
    }

    /// Sites `[−W+2, W−2]` whose neighbours carry complete first-order data.
    pub fn reliable_sites(&self) -> std::ops::RangeInclusive<i64> {
        let w = self.w as i64;
        (2 - w)..=(w - 2)
    }
}

fn nonzero(func: &'static str, x: Complex64, n: i64) -> Result<Complex64> {
    if x.is_zero() || !x.norm().is_finite() {
        Err(Error::domain(func, format!("non-invertible τ product at site {n}")))
    } else {
        Ok(x)
    }
}

/// Solves the order-`ζ¹` coefficients of the bilinear equations for the first
/// time derivatives.
///
/// With `T = ∂τ/τ` (gauge: `T = 0` at the left edge for `z_1`, right edge for `z̃_1`):
///
/// ```text
/// ∂σ_n = σ_n T_n − i τ_{n−1} σ_{n+1}/τ_n        ∂̃σ_n = σ_n T̃_n − i τ_{n+1} σ_{n−1}/τ_n
/// ∂ρ_n = ρ_n T_n + i ρ_{n−1} τ_{n+1}/τ_n        ∂̃ρ_n = ρ_n T̃_n + i ρ_{n+1} τ_{n−1}/τ_n
/// τ_{n−1}τ_{n+1} T_{n+1} = (τ_n² − ρ_nσ_n) T_n + i ρ_n τ_{n−1} σ_{n+1}/τ_n
/// τ_{n+1}τ_{n−1} T̃_{n−1} = (τ_n² − ρ_nσ_n) T̃_n + i ρ_n τ_{n+1} σ_{n−1}/τ_n
/// ```
pub fn extract_lattice_derivatives(base: &LatticeTau) -> Result<FlowDerivatives> {
    let w = base.w as i64;
    if w < 1 {
        return Err(Error::Window("need at least one interior site (W ≥ 1)".into()));
    }
    let len = base.tau.len();
    let (s, r, t) = (&base.sigma, &base.rho, &base.tau);
    let ix = |n: i64| base.index(n);

    let mut tz = vec![None; len];
    tz[ix(1 - w)] = Some(Complex64::zero());
    for n in (1 - w)..w {
        let k = ix(n);
        let den = nonzero("extract_time_derivatives", t[k - 1] * t[k + 1], n)?;
        let tn = tz[k].expect("filled left to right");
        let num = (t[k] * t[k] - r[k] * s[k]) * tn + I * r[k] * t[k - 1] * s[k + 1] / t[k];
        tz[k + 1] = Some(num / den);
    }
    let mut tzt = vec![None; len];
    tzt[ix(w - 1)] = Some(Complex64::zero());
    for n in ((2 - w)..=(w - 1)).rev() {
        let k = ix(n);
        let den = nonzero("extract_time_derivatives", t[k - 1] * t[k + 1], n)?;
        let tn = tzt[k].expect("filled right to left");
        let num = (t[k] * t[k] - r[k] * s[k]) * tn + I * r[k] * t[k + 1] * s[k - 1] / t[k];
        tzt[k - 1] = Some(num / den);
    }

    let mut d = FlowDerivatives {
        w: base.w,
        dz_sigma: vec![None; len],
        dz_rho: vec![None; len],
        dz_tau: vec![None; len],
        dzt_sigma: vec![None; len],
        dzt_rho: vec![None; len],
        dzt_tau: vec![None; len],
    };
    for k in 0..len {
        d.dz_tau[k] = tz[k].map(|x| x * t[k]);
        d.dzt_tau[k] = tzt[k].map(|x| x * t[k]);
    }
    for n in (1 - w)..w {
        let k = ix(n);
        if let Some(tn) = tz[k] {
            d.dz_sigma[k] = Some(s[k] * tn - I * t[k - 1] * s[k + 1] / t[k]);
            d.dz_rho[k] = Some(r[k] * tn + I * r[k - 1] * t[k + 1] / t[k]);
        }
        if let Some(tn) = tzt[k] {
            d.dzt_sigma[k] = Some(s[k] * tn - I * t[k + 1] * s[k - 1] / t[k]);
            d.dzt_rho[k] = Some(r[k] * tn + I * r[k + 1] * t[k - 1] / t[k]);
        }
    }
    Ok(d)
}

/// Triple of per-site series.
#[derive(Debug, Clone, PartialEq)]
pub struct TauTriple {
    pub w: usize,
    pub space: SeriesSpace,
    pub sigma: Vec<TruncatedSeries>,
    pub rho: Vec<TruncatedSeries>,
    pub tau: Vec<TruncatedSeries>,
}

impl TauTriple {
    pub fn new(
        w: usize,
        space: SeriesSpace,
        sigma: Vec<TruncatedSeries>,
        rho: Vec<TruncatedSeries>,
        tau: Vec<TruncatedSeries>,
    ) -> Result<Self> {
        let len = 2 * w + 1;
        if sigma.len() != len || rho.len() != len || tau.len() != len {
            return Err(Error::Window(format!("window half-width {w} needs {len} sites per series")));
        }
        if space.time_variables() == 0 {
            return Err(Error::domain("tau_triple", "series space must use the Hirota layout"));
        }
        if let Some(k) = tau.iter().position(|t| t.constant_term().is_zero()) {
            return Err(Error::domain(
                "tau_triple",
                format!("τ has no invertible constant term at site {}", k as i64 - w as i64),
            ));
        }
        Ok(TauTriple { w, space, sigma, rho, tau })
    }

    /// `σ = ρ = 0`, `τ = 1`.
    pub fn vacuum(space: SeriesSpace, w: usize) -> Result<Self> {
        let zero = TruncatedSeries::zero(space);
        let one = TruncatedSeries::constant(space, Complex64::new(1.0, 0.0));
        Self::new(w, space, vec![zero.clone(); 2 * w + 1], vec![zero; 2 * w + 1], vec![one; 2 * w + 1])
    }

    /// Constant series at every site.
    pub fn from_lattice(space: SeriesSpace, base: &LatticeTau) -> Result<Self> {
        let k = |v: &[Complex64]| v.iter().map(|x| TruncatedSeries::constant(space, *x)).collect();
        Self::new(base.w, space, k(&base.sigma), k(&base.rho), k(&base.tau))
    }

    /// `τ_n = c^{n²/2}`, `σ = Aτ`, `ρ = Bτ` with `c = 1 − AB`.
    pub fn constant_background(space: SeriesSpace, w: usize, a: Complex64, b: Complex64) -> Result<Self> {
        let lc = (1.0 - a * b).ln();
        let tau: Vec<Complex64> = (-(w as i64)..=w as i64).map(|n| (lc * (n * n) as f64 / 2.0).exp()).collect();
        let sigma = tau.iter().map(|t| a * t).collect();
        let rho = tau.iter().map(|t| b * t).collect();
        Self::from_lattice(space, &LatticeTau::new(w, sigma, rho, tau)?)
    }

    /// `f_n + ∂_{z_1}f_n z_1 + ∂_{z̃_1}f_n z̃_1`; undetermined derivatives are set to zero.
    pub fn first_order(space: SeriesSpace, base: &LatticeTau, d: &FlowDerivatives) -> Result<Self> {
        let z1 = TruncatedSeries::var(space, space.z(1));
        let zt1 = TruncatedSeries::var(space, space.z_tilde(1));
        let build = |f: &[Complex64], dz: &[Option<Complex64>], dzt: &[Option<Complex64>]| -> Vec<TruncatedSeries> {
            (0..f.len())
                .map(|k| {
                    let mut s = TruncatedSeries::constant(space, f[k]);
                    if let Some(v) = dz[k] {
                        s = &s + &z1.scale(v);
                    }
                    if let Some(v) = dzt[k] {
                        s = &s + &zt1.scale(v);
                    }
                    s
                })
                .collect()
        };
        Self::new(
            base.w,
            space,
            build(&base.sigma, &d.dz_sigma, &d.dzt_sigma),
            build(&base.rho, &d.dz_rho, &d.dzt_rho),
            build(&base.tau, &d.dz_tau, &d.dzt_tau),
        )
    }

    pub fn index(&self, n: i64) -> usize {
        (n + self.w as i64) as usize
    }

    /// Sites with both neighbours inside the window.
    pub fn interior_sites(&self) -> std::ops::RangeInclusive<i64> {
        let w = self.w as i64;
        (1 - w)..=(w - 1)
    }

    /// Constant terms as a numeric triple.
    pub fn base(&self) -> Result<LatticeTau> {
        let k = |v: &[TruncatedSeries]| v.iter().map(|s| s.constant_term()).collect();
        LatticeTau::new(self.w, k(&self.sigma), k(&self.rho), k(&self.tau))
    }

    /// `τ_n² − σ_nρ_n − Λ(τ)_n Λ^{−1}(τ)_n` as a series.
    pub fn constraint_defect(&self, n: i64) -> TruncatedSeries {
        let k = self.index(n);
        &(&(&self.tau[k] * &self.tau[k]) - &(&self.sigma[k] * &self.rho[k])) - &(&self.tau[k - 1] * &self.tau[k + 1])
    }
}

/// First time derivatives of the triple's constant terms.
pub fn extract_time_derivatives(t: &TauTriple) -> Result<FlowDerivatives> {
    extract_lattice_derivatives(&t.base()?)
}
