//! Periodic Ablowitz–Ladik lattice
//!
//! ```text
//! ȧ_n = −i (a_{n+1} + a_{n−1}) (1 − a_n b_n)
//! ḃ_n = +i (b_{n+1} + b_{n−1}) (1 − a_n b_n)
//! ```
//!
//! integrated with classical RK4. The dot is the combined flow `∂_{z_1} + ∂_{z̃_1}`;
//! the two halves are available separately as [`al_rhs_z`] and [`al_rhs_ztilde`].

use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Smallest admissible `|1 − a_n b_n|` before the state counts as singular.
pub const GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub time: f64,
}

impl LatticeState {
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::domain("lattice_state", "a and b must have the same nonzero length"));
        }
        let s = LatticeState { a, b, time: 0.0 };
        s.check_guard(0)?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    fn check_guard(&self, step: usize) -> Result<()> {
        for (n, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            let g = 1.0 - a * b;
            if !(g.norm() > GUARD) || !g.re.is_finite() || !g.im.is_finite() {
                return Err(Error::Singular {
                    step,
                    site: n,
                    time: self.time,
                    reason: format!("|1 − a b| = {:e}", g.norm()),
                });
            }
        }
        Ok(())
    }

    /// Gauge transform `a → c a`, `b → b / c`.
    pub fn gauge(&self, c: Complex64) -> Self {
        LatticeState {
            a: self.a.iter().map(|a| a * c).collect(),
            b: self.b.iter().map(|b| b / c).collect(),
            time: self.time,
        }
    }
}

fn neighbours(v: &[Complex64], n: usize) -> (Complex64, Complex64) {
    let len = v.len();
    (v[(n + 1) % len], v[(n + len - 1) % len])
}

/// Right side of the combined flow.
pub fn al_rhs(s: &LatticeState) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    s.check_guard(0)?;
    Ok(rhs_unchecked(s))
}

fn rhs_unchecked(s: &LatticeState) -> (Vec<Complex64>, Vec<Complex64>) {
    let len = s.len();
    let mut da = Vec::with_capacity(len);
    let mut db = Vec::with_capacity(len);
    for n in 0..len {
        let g = 1.0 - s.a[n] * s.b[n];
        let (ap, am) = neighbours(&s.a, n);
        let (bp, bm) = neighbours(&s.b, n);
        da.push(-I * (ap + am) * g);
        db.push(I * (bp + bm) * g);
    }
    (da, db)
}

/// `∂_{z_1}`: `i ȧ = Λ(a)(1 − ab)`, `i ḃ = −Λ^{−1}(b)(1 − ab)`.
pub fn al_rhs_z(s: &LatticeState) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    s.check_guard(0)?;
    let len = s.len();
    let (mut da, mut db) = (Vec::with_capacity(len), Vec::with_capacity(len));
    for n in 0..len {
        let g = 1.0 - s.a[n] * s.b[n];
        da.push(-I * neighbours(&s.a, n).0 * g);
        db.push(I * neighbours(&s.b, n).1 * g);
    }
    Ok((da, db))
}

/// `∂_{z̃_1}`: `i ȧ = Λ^{−1}(a)(1 − ab)`, `i ḃ = −Λ(b)(1 − ab)`.
pub fn al_rhs_ztilde(s: &LatticeState) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    s.check_guard(0)?;
    let len = s.len();
    let (mut da, mut db) = (Vec::with_capacity(len), Vec::with_capacity(len));
    for n in 0..len {
        let g = 1.0 - s.a[n] * s.b[n];
        da.push(-I * neighbours(&s.a, n).1 * g);
        db.push(I * neighbours(&s.b, n).0 * g);
    }
    Ok((da, db))
}

/// `C_0 = Σ_n log(1 − a_n b_n)`.
pub fn conserved_quantities(s: &LatticeState) -> Result<Complex64> {
    s.check_guard(0)?;
    Ok(s.a.iter().zip(&s.b).map(|(a, b)| crate::specfun::branch::log1p(-a * b)).sum())
}

fn axpy(base: &[Complex64], k: &[Complex64], h: f64) -> Vec<Complex64> {
    base.iter().zip(k).map(|(x, d)| x + d * h).collect()
}

/// One classical RK4 step of size `dt` (negative steps integrate backwards).
pub fn rk4_step(s: &LatticeState, dt: f64) -> LatticeState {
    let (k1a, k1b) = rhs_unchecked(s);
    let s2 = LatticeState { a: axpy(&s.a, &k1a, 0.5 * dt), b: axpy(&s.b, &k1b, 0.5 * dt), time: s.time + 0.5 * dt };
    let (k2a, k2b) = rhs_unchecked(&s2);
    let s3 = LatticeState { a: axpy(&s.a, &k2a, 0.5 * dt), b: axpy(&s.b, &k2b, 0.5 * dt), time: s.time + 0.5 * dt };
    let (k3a, k3b) = rhs_unchecked(&s3);
    let s4 = LatticeState { a: axpy(&s.a, &k3a, dt), b: axpy(&s.b, &k3b, dt), time: s.time + dt };
    let (k4a, k4b) = rhs_unchecked(&s4);
    let comb = |x: &[Complex64], k1: &[Complex64], k2: &[Complex64], k3: &[Complex64], k4: &[Complex64]| {
        (0..x.len())
            .map(|n| x[n] + (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]) * (dt / 6.0))
            .collect()
    };
    LatticeState {
        a: comb(&s.a, &k1a, &k2a, &k3a, &k4a),
        b: comb(&s.b, &k1b, &k2b, &k3b, &k4b),
        time: s.time + dt,
    }
}

/// Integration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrateOptions {
    pub dt: f64,
    pub steps: usize,
    /// Keep every `sample_every`-th state (the final state is always kept).
    pub sample_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(usize, LatticeState)>,
    /// `(step, time, C_0)` at each sample.
    pub conserved: Vec<(usize, f64, Complex64)>,
    pub final_state: LatticeState,
}

impl Trajectory {
    /// Largest `|C_0(t) − C_0(0)|` over the samples.
    pub fn conserved_drift(&self) -> f64 {
        let c0 = self.conserved.first().map(|c| c.2).unwrap_or_default();
        self.conserved.iter().map(|c| (c.2 - c0).norm()).fold(0.0, f64::max)
    }
}

/// Fixed-step RK4; aborts with [`Error::Singular`] if the guard is violated.
pub fn integrate(state: &LatticeState, opts: IntegrateOptions) -> Result<Trajectory> {
    if !(opts.dt.is_finite() && opts.dt != 0.0) {
        return Err(Error::domain("integrate", "time step must be finite and nonzero"));
    }
    state.check_guard(0)?;
    let every = opts.sample_every.max(1);
    let mut s = state.clone();
    let mut samples = vec![(0, s.clone())];
    let mut conserved = vec![(0, s.time, conserved_quantities(&s)?)];
    for step in 1..=opts.steps {
        s = rk4_step(&s, opts.dt);
        s.check_guard(step)?;
        if step % every == 0 || step == opts.steps {
            conserved.push((step, s.time, conserved_quantities(&s)?));
            samples.push((step, s.clone()));
        }
    }
    Ok(Trajectory { samples, conserved, final_state: s })
}

/// Plane wave `a_n = A e^{i(kn − wt)}`, `b_n = B e^{−i(kn − wt)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneWaveParams {
    pub amp_a: Complex64,
    pub amp_b: Complex64,
    pub k: f64,
}

impl PlaneWaveParams {
    /// `k = 2π m / N` is required for periodicity on `N` sites.
    pub fn commensurate(amp_a: Complex64, amp_b: Complex64, mode: i64, n: usize) -> Self {
        PlaneWaveParams { amp_a, amp_b, k: 2.0 * std::f64::consts::PI * mode as f64 / n as f64 }
    }

    /// `w = 2 cos(k) (1 − AB)`.
    pub fn frequency(&self) -> Complex64 {
        2.0 * self.k.cos() * (1.0 - self.amp_a * self.amp_b)
    }

    pub fn is_commensurate(&self, n: usize) -> bool {
        let m = self.k * n as f64 / (2.0 * std::f64::consts::PI);
        (m - m.round()).abs() < 1e-9
    }

    pub fn state(&self, n: usize, t: f64) -> LatticeState {
        let w = self.frequency();
        let a = (0..n).map(|s| self.amp_a * (I * (self.k * s as f64 - w * t)).exp()).collect();
        let b = (0..n).map(|s| self.amp_b * (-I * (self.k * s as f64 - w * t)).exp()).collect();
        LatticeState { a, b, time: t }
    }

    /// Largest site error of `s` against the exact wave at `s.time`.
    pub fn max_error(&self, s: &LatticeState) -> f64 {
        let exact = self.state(s.len(), s.time);
        s.a.iter()
            .zip(&exact.a)
            .chain(s.b.iter().zip(&exact.b))
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize)]
struct Sidecar<'a, P: Serialize> {
    schema: u32,
    sites: usize,
    options: IntegrateOptions,
    params: &'a P,
    conserved: Vec<ConservedRow>,
    final_time: f64,
}

#[derive(Serialize)]
struct ConservedRow {
    step: usize,
    time: f64,
    re_c0: f64,
    im_c0: f64,
}

/// CSV `step,time,site,re_a,im_a,re_b,im_b` for every sample.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "time", "site", "re_a", "im_a", "re_b", "im_b"])?;
    for (step, s) in &traj.samples {
        for n in 0..s.len() {
            w.write_record(&[
                step.to_string(),
                format!("{:.17e}", s.time),
                n.to_string(),
                format!("{:.17e}", s.a[n].re),
                format!("{:.17e}", s.a[n].im),
                format!("{:.17e}", s.b[n].re),
                format!("{:.17e}", s.b[n].im),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `<stem>.csv` and the JSON sidecar `<stem>.json`.
pub fn export_trajectory<P: Serialize>(traj: &Trajectory, opts: IntegrateOptions, params: &P, stem: &Path) -> Result<()> {
    let csv_path = stem.with_extension("csv");
    write_trajectory_csv(traj, std::fs::File::create(&csv_path)?)?;
    let sidecar = Sidecar {
        schema: 1,
        sites: traj.final_state.len(),
        options: opts,
        params,
        conserved: traj
            .conserved
            .iter()
            .map(|(step, time, c)| ConservedRow { step: *step, time: *time, re_c0: c.re, im_c0: c.im })
            .collect(),
        final_time: traj.final_state.time,
    };
    let json = serde_json::to_string_pretty(&sidecar)?;
    std::fs::write(stem.with_extension("json"), json)?;
    Ok(())
}
