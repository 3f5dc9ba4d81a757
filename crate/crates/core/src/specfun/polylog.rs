//! Polylogarithms `Li_s(z) = Σ_{n≥1} zⁿ/nˢ` of integer order.
//!
//! * `s ≤ 0`: rational closed form `P_{|s|}(z)/(1 − z)^{|s|+1}`, obtained from
//!   `Li_0 = z/(1 − z)` by repeated application of `z d/dz`. Valid for all `z ≠ 1`.
//! * `s = 1`: `−log(1 − z)`, principal branch, cut along `[1, ∞)`.
//! * `s ≥ 2`: the defining series for `|z| < 1`, truncated once the tail bound
//!   `|z|^{N+1}/((N+1)ˢ (1 − |z|))` drops below the tolerance.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::branch;
use crate::error::{Error, Result};

/// Default absolute tolerance for the series branch, relative to `|Li_s(z)|`.
pub const SERIES_RTOL: f64 = 1e-17;

/// Integer coefficients of `P_n` with `Li_{−n}(z) = P_n(z)/(1 − z)^{n+1}`.
///
/// `P_0 = z` and `P_{n+1} = z(1 − z) P_n' + (n + 1) z P_n`.
pub fn negative_order_numerator(n: u32) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(1)];
    for m in 0..n {
        let deg = p.len() - 1;
        let mut next = vec![BigInt::zero(); deg + 2];
        for (k, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // z(1 − z) k c z^{k−1} = k c z^k − k c z^{k+1}
            let kc = c * BigInt::from(k);
            next[k] += &kc;
            next[k + 1] -= &kc;
            // (m + 1) z c z^k
            next[k + 1] += c * BigInt::from(m + 1);
        }
        while next.len() > 1 && next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        p = next;
    }
    p
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * z + c)
}

/// `Li_s(z)` with the default tolerance.
pub fn polylog(s: i32, z: Complex64) -> Result<Complex64> {
    polylog_with_tol(s, z, SERIES_RTOL)
}

/// `Li_s(z)`; `rtol` only affects the series branch `s ≥ 2`.
pub fn polylog_with_tol(s: i32, z: Complex64, rtol: f64) -> Result<Complex64> {
    if s <= 1 && z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            func: "polylog",
            at: format!("z = 1 (order {s}); closed forms are singular there"),
        });
    }
    match s {
        1 => Ok(-branch::log1p(-z)),
        0 => Ok(z / (1.0 - z)),
        s if s < 0 => {
            let n = (-s) as u32;
            let coeffs: Vec<f64> = negative_order_numerator(n)
                .iter()
                .map(|c| c.to_f64().unwrap_or(f64::NAN))
                .collect();
            let num = horner(&coeffs, z);
            Ok(num / (1.0 - z).powi(n as i32 + 1))
        }
        _ => polylog_series(s, z, rtol),
    }
}

fn polylog_series(s: i32, z: Complex64, rtol: f64) -> Result<Complex64> {
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::domain(
            "polylog",
            format!(
                "|z| = {r} >= 1 for order {s}; only the disc |z| < 1 is supported (principal branch continuation not implemented)"
            ),
        ));
    }
    if z == Complex64::zero() {
        return Ok(Complex64::zero());
    }
    let mut sum = Complex64::zero();
    let mut comp = Complex64::zero();
    let mut zn = Complex64::new(1.0, 0.0);
    let mut rn = 1.0;
    let mut n: u64 = 0;
    loop {
        n += 1;
        zn *= z;
        rn *= r;
        let term = zn / (n as f64).powi(s);
        // Neumaier summation
        let t = sum + term;
        comp += if sum.norm() >= term.norm() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        let tail = rn * r / ((n + 1) as f64).powi(s) / (1.0 - r);
        if tail <= rtol * (sum + comp).norm() || tail < f64::MIN_POSITIVE {
            break;
        }
        if n > 50_000_000 {
            return Err(Error::NoConvergence {
                func: "polylog",
                reason: format!("series did not converge at |z| = {r}"),
            });
        }
    }
    Ok(sum + comp)
}
