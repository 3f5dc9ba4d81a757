//! Power series in `ζ` whose coefficients are dual numbers `f + f' ε`
//! (`ε² = 0`), so that one pass yields the `ζ`-coefficients of a generating
//! function together with their `x`-derivatives.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `value + deriv·ε`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub value: Complex64,
    pub deriv: Complex64,
}

impl Dual {
    pub fn new(value: Complex64, deriv: Complex64) -> Self {
        Dual { value, deriv }
    }

    pub fn constant(value: Complex64) -> Self {
        Dual { value, deriv: Complex64::new(0.0, 0.0) }
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        Dual::new(e, e * self.deriv)
    }

    pub fn ln(self) -> Self {
        Dual::new(self.value.ln(), self.deriv / self.value)
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        Dual::new(s, self.deriv / (2.0 * s))
    }

    pub fn scale(self, c: Complex64) -> Self {
        Dual::new(self.value * c, self.deriv * c)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.value + o.value, self.deriv + o.deriv)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.value - o.value, self.deriv - o.deriv)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.value * o.value, self.value * o.deriv + self.deriv * o.value)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        let q = self.value / o.value;
        Dual::new(q, (self.deriv - q * o.deriv) / o.value)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.value, -self.deriv)
    }
}

/// Truncated series `Σ_{n ≤ K} c_n ζⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZSeries(pub Vec<Dual>);

impl ZSeries {
    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn zero(order: usize) -> Self {
        ZSeries(vec![Dual::default(); order + 1])
    }

    /// `c_0 + c_1 ζ` (higher coefficients zero).
    pub fn linear(order: usize, c0: Dual, c1: Dual) -> Self {
        let mut s = Self::zero(order);
        s.0[0] = c0;
        if order >= 1 {
            s.0[1] = c1;
        }
        s
    }

    pub fn add(&self, o: &ZSeries) -> ZSeries {
        ZSeries(self.0.iter().zip(&o.0).map(|(a, b)| *a + *b).collect())
    }

    pub fn sub(&self, o: &ZSeries) -> ZSeries {
        ZSeries(self.0.iter().zip(&o.0).map(|(a, b)| *a - *b).collect())
    }

    pub fn scale(&self, c: Complex64) -> ZSeries {
        ZSeries(self.0.iter().map(|a| a.scale(c)).collect())
    }

    pub fn mul(&self, o: &ZSeries) -> ZSeries {
        let k = self.order();
        let mut out = Self::zero(k);
        for i in 0..=k {
            for j in 0..=(k - i) {
                out.0[i + j] = out.0[i + j] + self.0[i] * o.0[j];
            }
        }
        out
    }

    /// `√f` with `s_0 = √f_0` and `2 s_0 s_n = f_n − Σ_{0<k<n} s_k s_{n−k}`.
    pub fn sqrt(&self) -> ZSeries {
        let k = self.order();
        let mut s = Self::zero(k);
        s.0[0] = self.0[0].sqrt();
        let two_s0 = s.0[0].scale(Complex64::new(2.0, 0.0));
        for n in 1..=k {
            let mut acc = self.0[n];
            for m in 1..n {
                acc = acc - s.0[m] * s.0[n - m];
            }
            s.0[n] = acc / two_s0;
        }
        s
    }

    /// `log f` from `n f_0 g_n = n f_n − Σ_{0<k<n} k g_k f_{n−k}`.
    pub fn ln(&self) -> ZSeries {
        let k = self.order();
        let mut g = Self::zero(k);
        g.0[0] = self.0[0].ln();
        for n in 1..=k {
            let mut acc = self.0[n].scale(Complex64::new(n as f64, 0.0));
            for m in 1..n {
                acc = acc - (g.0[m] * self.0[n - m]).scale(Complex64::new(m as f64, 0.0));
            }
            g.0[n] = (acc / self.0[0]).scale(Complex64::new(1.0 / n as f64, 0.0));
        }
        g
    }

    /// Horner evaluation at a numeric `ζ`.
    pub fn eval(&self, zeta: Complex64) -> Dual {
        self.0.iter().rev().fold(Dual::default(), |acc, c| acc * Dual::constant(zeta) + *c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_and_log_of_geometric_data() {
        // f = (1 + aζ)² → √f = 1 + aζ, log f = 2 log(1 + aζ)
        let a = Dual::new(c(0.3, 0.2), c(-1.0, 0.5));
        let one = Dual::constant(c(1.0, 0.0));
        let lin = ZSeries::linear(8, one, a);
        let sq = lin.mul(&lin);
        let r = sq.sqrt();
        for (x, y) in r.0.iter().zip(&lin.0) {
            assert!((x.value - y.value).norm() < 1e-15 && (x.deriv - y.deriv).norm() < 1e-15);
        }
        let l = sq.ln();
        // [ζⁿ] 2 log(1 + aζ) = 2 (−1)^{n+1} aⁿ/n
        for n in 1..=8 {
            let sign = if n % 2 == 1 { 2.0 } else { -2.0 };
            let expect_v = sign * a.value.powu(n as u32) / n as f64;
            let expect_d = sign * a.value.powu(n as u32 - 1) * a.deriv;
            assert!((l.0[n].value - expect_v).norm() < 1e-14);
            assert!((l.0[n].deriv - expect_d).norm() < 1e-14);
        }
    }
}
