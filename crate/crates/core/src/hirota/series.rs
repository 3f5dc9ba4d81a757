//! Sparse truncated multivariate power series with complex coefficients.
//!
//! Variables are numbered `0..nvars` (at most [`MAX_VARS`]). Exponents are
//! packed eight bits per variable into a `u128`, which gives a cheap total order
//! for the `BTreeMap` and therefore a deterministic iteration order.
//! A product keeps a monomial only if every exponent stays within its
//! per-variable cap and the total degree stays within the total cap, so
//! arithmetic is exact in the quotient ring by the ideal of dropped monomials.

use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 16;

/// Degree bookkeeping shared by all series that can be combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeriesSpace {
    nvars: u8,
    /// Number of time variables per family in the Hirota layout (`0` for custom layouts).
    m: u8,
    per_var: [u8; MAX_VARS],
    total: u32,
}

impl SeriesSpace {
    /// General layout with explicit per-variable caps and a total-degree cap.
    pub fn custom(per_var: &[u8], total: u32) -> Result<Self> {
        if per_var.is_empty() || per_var.len() > MAX_VARS {
            return Err(Error::domain(
                "series_space",
                format!("need between 1 and {MAX_VARS} variables, got {}", per_var.len()),
            ));
        }
        if per_var.contains(&u8::MAX) {
            return Err(Error::domain("series_space", "per-variable cap must be below 255"));
        }
        let mut caps = [0u8; MAX_VARS];
        caps[..per_var.len()].copy_from_slice(per_var);
        Ok(SeriesSpace {
            nvars: per_var.len() as u8,
            m: 0,
            per_var: caps,
            total,
        })
    }

    /// Hirota layout `{ζ; z_1..z_M; z̃_1..z̃_M}` with ζ-cap `k`, cap `z_cap` on each
    /// time variable and total cap `total`.
    pub fn hirota(m: usize, k: u8, z_cap: u8, total: u32) -> Result<Self> {
        if m == 0 || 1 + 2 * m > MAX_VARS {
            return Err(Error::domain(
                "series_space",
                format!("number of time variables must be in 1..={}", (MAX_VARS - 1) / 2),
            ));
        }
        let mut caps = vec![k];
        caps.extend(std::iter::repeat_n(z_cap, 2 * m));
        let mut space = Self::custom(&caps, total)?;
        space.m = m as u8;
        Ok(space)
    }

    /// Default Hirota layout: `M = 3`, ζ-cap `K = 5`, total cap 8.
    pub fn hirota_default() -> Self {
        Self::hirota(3, 5, 4, 8).expect("default layout is valid")
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn time_variables(&self) -> usize {
        self.m as usize
    }

    pub fn cap(&self, var: usize) -> u8 {
        self.per_var[var]
    }

    pub fn total_cap(&self) -> u32 {
        self.total
    }

    /// Index of ζ in the Hirota layout.
    pub fn zeta(&self) -> usize {
        0
    }

    /// Index of `z_j`, `1 ≤ j ≤ M`.
    pub fn z(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.m as usize, "z_{j} outside 1..={}", self.m);
        j
    }

    /// Index of `z̃_j`, `1 ≤ j ≤ M`.
    pub fn z_tilde(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.m as usize, "z̃_{j} outside 1..={}", self.m);
        self.m as usize + j
    }

    fn admits(&self, mono: Monomial) -> bool {
        let mut deg = 0u32;
        for v in 0..self.nvars() {
            let e = mono.exponent(v);
            if e > self.per_var[v] {
                return false;
            }
            deg += e as u32;
        }
        deg <= self.total
    }
}

/// Packed exponent vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut bits = 0u128;
        for (v, &e) in exps.iter().enumerate() {
            bits |= (e as u128) << (8 * v);
        }
        Monomial(bits)
    }

    pub fn var(v: usize, e: u8) -> Self {
        Monomial((e as u128) << (8 * v))
    }

    pub fn exponent(self, v: usize) -> u8 {
        ((self.0 >> (8 * v)) & 0xff) as u8
    }

    pub fn degree(self) -> u32 {
        self.0.to_le_bytes().iter().map(|&b| b as u32).sum()
    }

    pub fn exponents(self, nvars: usize) -> Vec<u8> {
        (0..nvars).map(|v| self.exponent(v)).collect()
    }

    /// Product of monomials; `None` if some exponent would overflow eight bits.
    fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        let a = self.0.to_le_bytes();
        let b = other.0.to_le_bytes();
        let mut out = [0u8; 16];
        for i in 0..16 {
            out[i] = a[i].checked_add(b[i])?;
        }
        Some(Monomial(u128::from_le_bytes(out)))
    }

    /// Same monomial with variable `v` removed.
    fn without(self, v: usize) -> Monomial {
        Monomial(self.0 & !(0xffu128 << (8 * v)))
    }
}

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries {
    space: SeriesSpace,
    terms: BTreeMap<Monomial, Complex64>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.space.nvars();
        f.debug_map()
            .entries(self.terms.iter().map(|(m, c)| (m.exponents(n), c)))
            .finish()
    }
}

impl TruncatedSeries {
    pub fn zero(space: SeriesSpace) -> Self {
        TruncatedSeries {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: SeriesSpace, c: Complex64) -> Self {
        let mut s = Self::zero(space);
        s.add_term(Monomial::ONE, c);
        s
    }

    /// The variable `v` itself (zero if its cap is zero).
    pub fn var(space: SeriesSpace, v: usize) -> Self {
        Self::monomial(space, Monomial::var(v, 1), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(space: SeriesSpace, mono: Monomial, c: Complex64) -> Self {
        let mut s = Self::zero(space);
        s.add_term(mono, c);
        s
    }

    pub fn space(&self) -> SeriesSpace {
        self.space
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · mono`, silently dropping monomials outside the caps.
    pub fn add_term(&mut self, mono: Monomial, c: Complex64) {
        if c.is_zero() || !self.space.admits(mono) {
            return;
        }
        let slot = self.terms.entry(mono).or_insert(Complex64::zero());
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn coeff(&self, mono: Monomial) -> Complex64 {
        self.terms.get(&mono).copied().unwrap_or(Complex64::zero())
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeff(Monomial::ONE)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    fn check_space(&self, other: &Self) {
        assert_eq!(self.space, other.space, "series from different spaces combined");
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.space);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(*m, v * c);
        }
        out
    }

    /// Coefficient of `x_v^k` as a series in the remaining variables.
    pub fn coefficient_of(&self, v: usize, k: u8) -> Self {
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            if m.exponent(v) == k {
                out.terms.insert(m.without(v), *c);
            }
        }
        out
    }

    /// Drops every monomial whose weighted degree `Σ w_v e_v` exceeds `max`.
    pub fn truncate_weighted(&self, weights: &[u32], max: u32) -> Self {
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            let w: u32 = weights.iter().enumerate().map(|(v, w)| w * m.exponent(v) as u32).sum();
            if w <= max {
                out.terms.insert(*m, *c);
            }
        }
        out
    }

    /// Largest coefficient magnitude (0 for the zero series).
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Substitutes numeric values for all variables.
    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.space.nvars());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = *c;
                for (v, x) in point.iter().enumerate() {
                    let e = m.exponent(v);
                    if e > 0 {
                        t *= x.powu(e as u32);
                    }
                }
                t
            })
            .sum()
    }

    fn nilpotent_part(&self) -> Self {
        let mut n = self.clone();
        n.terms.remove(&Monomial::ONE);
        n
    }

    /// `Σ_k c_k N^k` for the nilpotent part `N`, where `c_k = coeff(k)`. The sum
    /// terminates because powers of `N` eventually leave the caps.
    fn compose_nilpotent(&self, coeff: impl Fn(usize) -> Complex64) -> Self {
        let n = self.nilpotent_part();
        let mut acc = Self::constant(self.space, coeff(0));
        let mut power = Self::constant(self.space, Complex64::new(1.0, 0.0));
        let mut k = 0;
        loop {
            k += 1;
            power = &power * &n;
            if power.is_empty() {
                break;
            }
            acc = &acc + &power.scale(coeff(k));
        }
        acc
    }

    fn require_unit(&self, func: &'static str) -> Result<Complex64> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::domain(func, "series has vanishing constant term"));
        }
        Ok(c0)
    }

    pub fn recip(&self) -> Result<Self> {
        let c0 = self.require_unit("recip")?;
        let inv = 1.0 / c0;
        Ok(self.compose_nilpotent(|k| inv * (-inv).powu(k as u32)))
    }

    pub fn exp(&self) -> Self {
        let e0 = self.constant_term().exp();
        self.compose_nilpotent(|k| e0 / (1..=k).map(|j| j as f64).product::<f64>())
    }

    /// Principal log of the constant term plus the nilpotent expansion.
    pub fn ln(&self) -> Result<Self> {
        let c0 = self.require_unit("ln")?;
        let inv = 1.0 / c0;
        Ok(self.compose_nilpotent(|k| {
            if k == 0 {
                c0.ln()
            } else {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * inv.powu(k as u32) / k as f64
            }
        }))
    }

    /// Principal square root of the constant term times `√(1 + N/c0)`.
    pub fn sqrt(&self) -> Result<Self> {
        let c0 = self.require_unit("sqrt")?;
        let s0 = c0.sqrt();
        let inv = 1.0 / c0;
        Ok(self.compose_nilpotent(|k| {
            // binom(1/2, k)
            let mut b = 1.0;
            for j in 0..k {
                b *= (0.5 - j as f64) / (j as f64 + 1.0);
            }
            s0 * b * inv.powu(k as u32)
        }))
    }

    /// Substitution `x_v ← x_v + shift_v` for several variables at once.
    pub fn substitute(&self, shifts: &[(usize, TruncatedSeries)]) -> Self {
        // powers (x_v + shift_v)^e, cached per variable
        let mut powers: Vec<Vec<TruncatedSeries>> = Vec::with_capacity(shifts.len());
        for (v, s) in shifts {
            self.check_space(s);
            let base = &Self::var(self.space, *v) + s;
            let mut list = vec![Self::constant(self.space, Complex64::new(1.0, 0.0))];
            for _ in 0..self.space.cap(*v) {
                let next = list.last().expect("non-empty") * &base;
                list.push(next);
            }
            powers.push(list);
        }
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut factor = Self::constant(self.space, *c);
            for ((v, _), list) in shifts.iter().zip(&powers) {
                let e = m.exponent(*v) as usize;
                rest = rest.without(*v);
                if e > 0 {
                    factor = &factor * &list[e];
                }
            }
            let tail = Self::monomial(self.space, rest, Complex64::new(1.0, 0.0));
            out = &out + &(&factor * &tail);
        }
        out
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_space(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_space(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -*c);
        }
        out
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_space(rhs);
        let mut out = TruncatedSeries::zero(self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                if let Some(m) = ma.checked_mul(*mb) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $f(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
