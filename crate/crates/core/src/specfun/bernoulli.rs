//! Bernoulli numbers and generalized Bernoulli polynomials.
//!
//! Bernoulli numbers follow the convention `x/(eˣ − 1) = Σ B_k xᵏ/k!`, so
//! `B_1 = −1/2`. The generalized polynomials `B_{r,n}(z | ω)` are defined by
//!
//! ```text
//! xʳ e^{zx} / Π_i (e^{ω_i x} − 1) = Σ_n B_{r,n}(z | ω) xⁿ / n!
//! ```

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact Bernoulli numbers `B_0..=B_max_index`, grown on demand.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn new(max_index: usize) -> Self {
        let mut table = BernoulliTable {
            values: vec![BigRational::one()],
        };
        table.extend_to(max_index);
        table
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Option<&BigRational> {
        self.values.get(k)
    }

    /// Extends the table with `B_k = −(1/(k+1)) Σ_{j<k} C(k+1, j) B_j`.
    fn extend_to(&mut self, max_index: usize) {
        while self.values.len() <= max_index {
            let k = self.values.len();
            if k > 1 && k % 2 == 1 {
                self.values.push(BigRational::zero());
                continue;
            }
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (j, b) in self.values.iter().enumerate() {
                if !b.is_zero() {
                    acc += BigRational::from_integer(binom.clone()) * b;
                }
                // C(k+1, j+1) = C(k+1, j) (k+1-j)/(j+1)
                binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
            }
            self.values
                .push(-acc / BigRational::from_integer(BigInt::from(k + 1)));
        }
    }
}

fn shared_table() -> &'static RwLock<BernoulliTable> {
    static TABLE: OnceLock<RwLock<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(BernoulliTable::new(32)))
}

/// Exact `B_k` from a process-wide memoized table.
pub fn bernoulli_number(k: usize) -> BigRational {
    {
        let table = shared_table().read().expect("bernoulli table poisoned");
        if let Some(b) = table.get(k) {
            return b.clone();
        }
    }
    let mut table = shared_table().write().expect("bernoulli table poisoned");
    table.extend_to(k);
    table.values[k].clone()
}

/// `B_k` rounded to the nearest double.
pub fn bernoulli_f64(k: usize) -> f64 {
    rational_to_f64(&bernoulli_number(k))
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn check_periods(omega: &[Complex64]) -> Result<()> {
    if omega.is_empty() {
        return Err(Error::domain("gen_bernoulli", "need at least one period (r >= 1)"));
    }
    if let Some(i) = omega.iter().position(|w| *w == Complex64::zero()) {
        return Err(Error::domain(
            "gen_bernoulli",
            format!("period omega_{} is zero", i + 1),
        ));
    }
    Ok(())
}

/// Taylor coefficients `B_{r,n}(z | ω)/n!` for `n = 0..=order`.
///
/// Uses `x/(e^{ωx} − 1) = ω⁻¹ Σ_k B_k (ωx)ᵏ/k!` for every factor, so the
/// division is carried by exact Bernoulli data and only products of truncated
/// series are formed in floating point.
pub fn gen_bernoulli_series(z: Complex64, omega: &[Complex64], order: usize) -> Result<Vec<Complex64>> {
    check_periods(omega)?;
    let mut inv_fact = Vec::with_capacity(order + 1);
    let mut f = 1.0f64;
    for k in 0..=order {
        if k > 0 {
            f /= k as f64;
        }
        inv_fact.push(f);
    }
    let mut acc: Vec<Complex64> = Vec::with_capacity(order + 1);
    let mut zp = Complex64::one();
    for k in 0..=order {
        acc.push(zp * inv_fact[k]);
        zp *= z;
    }
    let bern: Vec<f64> = (0..=order).map(bernoulli_f64).collect();
    for w in omega {
        let mut factor = Vec::with_capacity(order + 1);
        let mut wp = Complex64::one() / w;
        for k in 0..=order {
            factor.push(wp * (bern[k] * inv_fact[k]));
            wp *= w;
        }
        acc = truncated_product(&acc, &factor);
    }
    Ok(acc)
}

fn truncated_product(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}

/// `B_{r,n}(z | ω_1..ω_r)` with `r = ω.len()`.
///
/// Every finite `f64` is a dyadic rational, so the inputs are converted exactly
/// to Gaussian rationals and the polynomial is evaluated without rounding; the
/// only rounding is the final conversion. This makes the value independent of
/// the order of the periods, which the float series product is not once
/// cancellation sets in at larger `n`.
pub fn gen_bernoulli(n: usize, z: Complex64, omega: &[Complex64]) -> Result<Complex64> {
    check_periods(omega)?;
    let exact = |w: Complex64| {
        GaussRat::from_c64(w).ok_or_else(|| Error::domain("gen_bernoulli", "arguments must be finite"))
    };
    let z = exact(z)?;
    let omega = omega.iter().map(|w| exact(*w)).collect::<Result<Vec<_>>>()?;
    Ok(bernoulli_poly(n, &z, &omega).to_c64())
}

/// `B_{r,n}(z | ω)` in exact rational arithmetic.
pub fn gen_bernoulli_exact(n: usize, z: &BigRational, omega: &[BigRational]) -> Result<BigRational> {
    if omega.is_empty() {
        return Err(Error::domain("gen_bernoulli", "need at least one period (r >= 1)"));
    }
    if let Some(i) = omega.iter().position(|w| w.is_zero()) {
        return Err(Error::domain(
            "gen_bernoulli",
            format!("period omega_{} is zero", i + 1),
        ));
    }
    Ok(bernoulli_poly(n, z, omega))
}

/// Exact field operations needed by [`bernoulli_poly`].
trait Exact: Clone + Zero + One + std::ops::Sub<Output = Self> + std::ops::Div<Output = Self> {
    fn from_integer(k: BigInt) -> Self;
}

impl Exact for BigRational {
    fn from_integer(k: BigInt) -> Self {
        BigRational::from_integer(k)
    }
}

/// `a + bi` with rational parts.
#[derive(Debug, Clone, PartialEq)]
struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(GaussRat { re: BigRational::from_float(z.re)?, im: BigRational::from_float(z.im)? })
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl std::ops::Add for GaussRat {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussRat { re: self.re + o.re, im: self.im + o.im }
    }
}

impl std::ops::Sub for GaussRat {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussRat { re: self.re - o.re, im: self.im - o.im }
    }
}

impl std::ops::Mul for GaussRat {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl std::ops::Div for GaussRat {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = &o.re * &o.re + &o.im * &o.im;
        GaussRat {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / &d,
        }
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl Exact for GaussRat {
    fn from_integer(k: BigInt) -> Self {
        GaussRat { re: BigRational::from_integer(k), im: BigRational::zero() }
    }
}

/// Truncated-series division of `e^{zx}` by `Π_i (e^{ω_i x} − 1)/x`, times `n!`.
fn bernoulli_poly<T: Exact>(n: usize, z: &T, omega: &[T]) -> T {
    let len = n + 1;
    let mut fact = vec![T::one(); len + 1];
    for k in 1..=len {
        fact[k] = fact[k - 1].clone() * T::from_integer(BigInt::from(k));
    }
    // numerator e^{zx}
    let mut num = Vec::with_capacity(len);
    let mut zp = T::one();
    for f in fact.iter().take(len) {
        num.push(zp.clone() / f.clone());
        zp = zp * z.clone();
    }
    // denominator Π (e^{ωx} − 1)/x = Π Σ_k ω^{k+1} x^k/(k+1)!
    let mut den = vec![T::zero(); len];
    den[0] = T::one();
    for w in omega {
        let mut factor = Vec::with_capacity(len);
        let mut wp = w.clone();
        for f in fact.iter().skip(1).take(len) {
            factor.push(wp.clone() / f.clone());
            wp = wp * w.clone();
        }
        den = (0..len)
            .map(|k| (0..=k).fold(T::zero(), |acc, j| acc + den[j].clone() * factor[k - j].clone()))
            .collect();
    }
    let mut quot: Vec<T> = Vec::with_capacity(len);
    for k in 0..len {
        let mut c = num[k].clone();
        for j in 0..k {
            c = c - quot[j].clone() * den[k - j].clone();
        }
        quot.push(c / den[0].clone());
    }
    quot[n].clone() * fact[n].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_bernoulli_numbers() {
        assert_eq!(bernoulli_number(0), q(1, 1));
        assert_eq!(bernoulli_number(1), q(-1, 2));
        assert_eq!(bernoulli_number(2), q(1, 6));
        assert_eq!(bernoulli_number(4), q(-1, 30));
        assert_eq!(bernoulli_number(6), q(1, 42));
        assert_eq!(bernoulli_number(8), q(-1, 30));
        assert_eq!(bernoulli_number(10), q(5, 66));
        assert_eq!(bernoulli_number(12), q(-691, 2730));
        assert!(bernoulli_number(41).is_zero());
    }

    #[test]
    fn recurrence_holds_exactly() {
        let table = BernoulliTable::new(60);
        for k in 1..=60usize {
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for j in 0..=k {
                acc += BigRational::from_integer(binom.clone()) * &table.values()[j];
                binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
            }
            assert!(acc.is_zero(), "recurrence fails at k = {k}");
        }
    }

    #[test]
    fn zero_period_is_domain_error() {
        let err = gen_bernoulli(2, Complex64::new(0.5, 0.0), &[Complex64::new(1.0, 0.0), Complex64::zero()]);
        assert!(matches!(err, Err(Error::Domain { .. })));
        let err = gen_bernoulli_exact(2, &q(1, 2), &[q(0, 1)]);
        assert!(matches!(err, Err(Error::Domain { .. })));
    }

    #[test]
    fn rank_one_low_orders() {
        let w = q(3, 7);
        let z = q(2, 5);
        // B_{1,0} = 1/ω, B_{1,1} = z/ω − 1/2
        assert_eq!(gen_bernoulli_exact(0, &z, std::slice::from_ref(&w)).unwrap(), q(7, 3));
        assert_eq!(
            gen_bernoulli_exact(1, &z, std::slice::from_ref(&w)).unwrap(),
            &z / &w - q(1, 2)
        );
        let zc = Complex64::new(0.3, -0.2);
        let wc = Complex64::new(0.7, 0.1);
        let b0 = gen_bernoulli(0, zc, &[wc]).unwrap();
        let b1 = gen_bernoulli(1, zc, &[wc]).unwrap();
        assert!((b0 - 1.0 / wc).norm() < 1e-15);
        assert!((b1 - (zc / wc - 0.5)).norm() < 1e-15);
    }

    #[test]
    fn leading_coefficient_is_inverse_period_product() {
        let om = [q(1, 2), q(3, 1), q(-2, 5)];
        let b = gen_bernoulli_exact(0, &q(7, 3), &om).unwrap();
        assert_eq!(b, q(1, 1) / (q(1, 2) * q(3, 1) * q(-2, 5)));
    }

    #[test]
    fn float_path_agrees_with_exact_path() {
        let om = [q(1, 2), q(3, 4), q(5, 3)];
        let z = q(-7, 4);
        let omc: Vec<Complex64> = om.iter().map(|w| Complex64::new(rational_to_f64(w), 0.0)).collect();
        let zc = Complex64::new(-1.75, 0.0);
        for n in 0..8 {
            let e = rational_to_f64(&gen_bernoulli_exact(n, &z, &om).unwrap());
            let f = gen_bernoulli(n, zc, &omc).unwrap();
            assert!((f.re - e).abs() <= 1e-12 * e.abs().max(1.0), "n={n}: {f} vs {e}");
        }
    }

    #[test]
    fn reflection_symmetry_in_z() {
        // B_{r,n}(Σω − z) = (−1)ⁿ B_{r,n}(z)
        let om = [q(1, 3), q(1, 3), q(1, 1)];
        let sum: BigRational = om.iter().cloned().sum();
        let z = q(2, 9);
        for n in 0..7 {
            let lhs = gen_bernoulli_exact(n, &(&sum - &z), &om).unwrap();
            let rhs = gen_bernoulli_exact(n, &z, &om).unwrap();
            let sign = if n % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            assert_eq!(lhs, sign * rhs);
        }
    }
}
