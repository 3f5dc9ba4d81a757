//! Command-line literals: complex numbers as `a+bi`, reals with an optional
//! factor of `π` and a divisor (`2π/64`, `pi/3`, `0.25`).

use num_complex::Complex64;
use std::f64::consts::PI;

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`; exponents such as `1e-3` are allowed.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let bad = || format!("cannot parse complex number '{s}' (expected a+bi)");
    if let Some(body) = t.strip_suffix(['i', 'j']) {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (real(&body[..k]).map_err(|_| bad())?, &body[k..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => real(x).map_err(|_| bad())?,
        };
        return Ok(Complex64::new(re, im));
    }
    Ok(Complex64::new(real(&t).map_err(|_| bad())?, 0.0))
}

/// A real number, optionally `c·π` and optionally divided by another such term.
pub fn real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t, None),
    };
    let v = term(num)?;
    match den {
        None => Ok(v),
        Some(d) => {
            let d = term(d)?;
            if d == 0.0 {
                Err(format!("division by zero in '{s}'"))
            } else {
                Ok(v / d)
            }
        }
    }
}

fn term(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (coeff, has_pi) = if let Some(c) = t.strip_suffix('π') {
        (c, true)
    } else if let Some(c) = t.strip_suffix("pi") {
        (c, true)
    } else {
        (t, false)
    };
    let coeff = coeff.trim_end_matches('*');
    let c = match coeff {
        "" if has_pi => 1.0,
        "-" if has_pi => -1.0,
        "+" if has_pi => 1.0,
        x => x.parse::<f64>().map_err(|_| format!("cannot parse number '{s}'"))?,
    };
    if !c.is_finite() {
        return Err(format!("non-finite number '{s}'"));
    }
    Ok(if has_pi { c * PI } else { c })
}

/// `key=value` pairs separated by commas, e.g. `A=0.3,B=0.2,k=2π/64`.
pub fn key_values(s: &str) -> Result<Vec<(String, String)>, String> {
    s.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| format!("expected key=value, found '{kv}'"))
        })
        .collect()
}
