//! Dispersionless Ablowitz–Ladik flows on a periodic grid.
//!
//! With `E = e^{±v}` (upper sign for `z`, lower for `z̃`), `F = e^{−u}` and
//! `S = √((1 + ζE)² − 4ζEF)`, the flows are generated by
//!
//! ```text
//! D v = i ∂_x log P_a,   P_a = (1 − ζE + S)/2
//! D u = ± i ∂_x log P_b, P_b = (1 + ζE + S)/2
//! ```
//!
//! where `D = Σ_j ζ^j/j ∂_{z_j}`. [`flow_rhs`] implements these verbatim. The
//! `u`-flows that follow from the lattice carry the opposite sign; see
//! [`UFlowSign`].

use num_complex::Complex64;
use serde::Serialize;
use std::path::Path;

use super::grid::GridFunction;
use super::zseries::{Dual, ZSeries};
use crate::error::{Error, Result};
use crate::hirota::Direction;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Below this `|1 − e^{−u}|` the fields are treated as singular.
pub const FIELD_GUARD: f64 = 1e-12;

/// Fields `u`, `v` and optionally `ϖ_x = ∂_x ϖ`, carried along so that
/// `u = −∂_x ϖ_x` can be monitored.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionlessFields {
    pub u: GridFunction,
    pub v: GridFunction,
    pub varpi_x: Option<GridFunction>,
}

impl DispersionlessFields {
    pub fn new(u: GridFunction, v: GridFunction) -> Result<Self> {
        if u.len() != v.len() || u.length != v.length {
            return Err(Error::domain("dispersionless_fields", "u and v must share the grid"));
        }
        if !u.exp_is_periodic(1.0) || !v.exp_is_periodic(1.0) {
            return Err(Error::domain(
                "dispersionless_fields",
                "mean slopes must satisfy slope·L ∈ 2πiℤ so that e^{±v}, e^{−u} are periodic",
            ));
        }
        let f = DispersionlessFields { u, v, varpi_x: None };
        f.check_regular()?;
        Ok(f)
    }

    pub fn with_varpi_x(mut self, varpi_x: GridFunction) -> Result<Self> {
        if varpi_x.len() != self.u.len() || varpi_x.length != self.u.length {
            return Err(Error::domain("dispersionless_fields", "ϖ_x must share the grid"));
        }
        self.varpi_x = Some(varpi_x);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn check_regular(&self) -> Result<()> {
        for (k, u) in self.u.values().iter().enumerate() {
            let f = (-u).exp();
            if !f.is_finite() || (1.0 - f).norm() < FIELD_GUARD || f.norm() < 1e-300 {
                return Err(Error::domain(
                    "dispersionless_fields",
                    format!("e^(-u) at grid point {k} is singular (u = {u})"),
                ));
            }
        }
        Ok(())
    }

    /// `r = ½ log(1 − e^{−u})`, principal branch.
    pub fn r_values(&self) -> Vec<Complex64> {
        self.u.values().iter().map(|u| 0.5 * (1.0 - (-u).exp()).ln()).collect()
    }

    /// `x ↦ (u(−x), −v(−x))`; intertwines the `z` and `z̃` flows.
    pub fn mirror(&self) -> Self {
        DispersionlessFields {
            u: self.u.reflect(),
            v: self.v.reflect().scale(Complex64::new(-1.0, 0.0)),
            // ϖ_x(x) ↦ −ϖ_x(−x) keeps u = −∂_x ϖ_x
            varpi_x: self.varpi_x.as_ref().map(|w| w.reflect().scale(Complex64::new(-1.0, 0.0))),
        }
    }
}

fn sign(dir: Direction) -> f64 {
    match dir {
        Direction::Z => 1.0,
        Direction::ZTilde => -1.0,
    }
}

/// The generating series `log P_a`, `log P_b` through `ζ^order` at one point,
/// each coefficient carrying its `x`-derivative.
pub fn log_generating_series(
    u: Complex64,
    ux: Complex64,
    v: Complex64,
    vx: Complex64,
    dir: Direction,
    order: usize,
) -> (ZSeries, ZSeries) {
    let s = sign(dir);
    let e = Dual::new(s * v, s * vx).exp();
    let f = Dual::new(-u, -ux).exp();
    let one = Dual::constant(Complex64::new(1.0, 0.0));
    let zero = Dual::default();
    let ze = ZSeries::linear(order, zero, e);
    let one_plus = ZSeries::linear(order, one, e);
    let four_ef = ZSeries::linear(order, zero, (e * f).scale(Complex64::new(4.0, 0.0)));
    let root = one_plus.mul(&one_plus).sub(&four_ef).sqrt();
    let half = Complex64::new(0.5, 0.0);
    let p_a = ZSeries::linear(order, one, zero).sub(&ze).add(&root).scale(half);
    let p_b = one_plus.add(&root).scale(half);
    (p_a.ln(), p_b.ln())
}

/// `(∂_{z_j} u, ∂_{z_j} v)` (or `z̃_j`) as stated: `∂_{z_j} v = j i ∂_x[ζ^j] log P_a`,
/// `∂_{z_j} u = ± j i ∂_x[ζ^j] log P_b`.
pub fn flow_rhs(fields: &DispersionlessFields, j: usize, dir: Direction) -> Result<(GridFunction, GridFunction)> {
    if j == 0 {
        return Err(Error::domain("flow_rhs", "flow index j must be at least 1"));
    }
    fields.check_regular()?;
    let (u, ux) = (fields.u.values(), fields.u.derivative());
    let (v, vx) = (fields.v.values(), fields.v.derivative());
    let jf = j as f64;
    let s = sign(dir);
    let mut du = Vec::with_capacity(u.len());
    let mut dv = Vec::with_capacity(u.len());
    for k in 0..u.len() {
        let (la, lb) = log_generating_series(u[k], ux[k], v[k], vx[k], dir, j);
        dv.push(I * jf * la.0[j].deriv);
        du.push(s * I * jf * lb.0[j].deriv);
    }
    let zero = Complex64::new(0.0, 0.0);
    Ok((GridFunction::new(fields.u.length, zero, du)?, GridFunction::new(fields.u.length, zero, dv)?))
}

/// `∂_{z_j} ϖ_x = ± j i [ζ^j] log P_b` (no `x`-derivative).
pub fn varpi_x_rhs(fields: &DispersionlessFields, j: usize, dir: Direction) -> Result<GridFunction> {
    let (u, ux) = (fields.u.values(), fields.u.derivative());
    let (v, vx) = (fields.v.values(), fields.v.derivative());
    let s = sign(dir);
    let out = (0..u.len())
        .map(|k| {
            let (_, lb) = log_generating_series(u[k], ux[k], v[k], vx[k], dir, j);
            s * I * j as f64 * lb.0[j].value
        })
        .collect();
    GridFunction::new(fields.u.length, Complex64::new(0.0, 0.0), out)
}

/// Sign of the `u`-equation used when evolving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UFlowSign {
    /// `∂_{z_j} u` exactly as returned by [`flow_rhs`].
    AsStated,
    /// `−∂_{z_j} u`: the sign obtained from the continuum limit of the lattice
    /// and from the Hamiltonian form. Only this choice keeps `u = −∂_x ϖ_x`
    /// with `ϖ_x` evolved by [`varpi_x_rhs`].
    LatticeConsistent,
}

impl UFlowSign {
    fn factor(self) -> f64 {
        match self {
            UFlowSign::AsStated => 1.0,
            UFlowSign::LatticeConsistent => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EvolveOptions {
    pub j: usize,
    pub direction: Direction,
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: usize,
    pub u_sign: UFlowSign,
    /// Abort once `max|∂_x u|` exceeds this multiple of its initial value.
    pub catastrophe_factor: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            j: 1,
            direction: Direction::Z,
            t_end: 1.0,
            dt: 1e-3,
            sample_every: 0,
            u_sign: UFlowSign::AsStated,
            catastrophe_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FieldSample {
    pub time: f64,
    pub fields: DispersionlessFields,
}

#[derive(Debug, Clone)]
pub struct DispersionlessRun {
    pub samples: Vec<FieldSample>,
    pub final_fields: DispersionlessFields,
    pub final_time: f64,
    pub steps: usize,
}

fn axpy(base: &DispersionlessFields, h: f64, d: &[Vec<Complex64>]) -> DispersionlessFields {
    let shift = |g: &GridFunction, dg: &[Complex64]| GridFunction {
        length: g.length,
        mean_slope: g.mean_slope,
        periodic: g.periodic.iter().zip(dg).map(|(a, b)| a + h * b).collect(),
    };
    DispersionlessFields {
        u: shift(&base.u, &d[0]),
        v: shift(&base.v, &d[1]),
        varpi_x: base.varpi_x.as_ref().map(|w| shift(w, &d[2])),
    }
}

fn rhs(f: &DispersionlessFields, opts: &EvolveOptions) -> Result<Vec<Vec<Complex64>>> {
    let (du, dv) = flow_rhs(f, opts.j, opts.direction)?;
    let c = opts.u_sign.factor();
    let mut out = vec![du.periodic.iter().map(|x| c * x).collect(), dv.periodic];
    if f.varpi_x.is_some() {
        out.push(varpi_x_rhs(f, opts.j, opts.direction)?.periodic);
    }
    Ok(out)
}

/// RK4 in time for the `j`-th flow. Mean slopes are invariant (every right
/// side is an `x`-derivative of a periodic function) and are kept exactly.
pub fn evolve_dispersionless(init: &DispersionlessFields, opts: EvolveOptions) -> Result<DispersionlessRun> {
    if !(opts.dt.is_finite() && opts.dt != 0.0 && opts.t_end.is_finite()) {
        return Err(Error::domain("evolve_dispersionless", "dt must be finite and non-zero"));
    }
    if opts.t_end / opts.dt < 0.0 {
        return Err(Error::domain("evolve_dispersionless", "dt must point towards t_end"));
    }
    init.check_regular()?;
    let steps = (opts.t_end / opts.dt).round() as usize;
    let dt = if steps == 0 { 0.0 } else { opts.t_end / steps as f64 };
    let initial_grad = init.u.max_abs_derivative().max(1e-8);
    let mut f = init.clone();
    let mut samples = vec![FieldSample { time: 0.0, fields: f.clone() }];
    for step in 1..=steps {
        let k1 = rhs(&f, &opts)?;
        let k2 = rhs(&axpy(&f, dt / 2.0, &k1), &opts)?;
        let k3 = rhs(&axpy(&f, dt / 2.0, &k2), &opts)?;
        let k4 = rhs(&axpy(&f, dt, &k3), &opts)?;
        let comb: Vec<Vec<Complex64>> = (0..k1.len())
            .map(|c| (0..k1[c].len()).map(|i| (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]) / 6.0).collect())
            .collect();
        f = axpy(&f, dt, &comb);
        let time = step as f64 * dt;
        f.check_regular().map_err(|e| Error::Singular {
            step,
            site: 0,
            time,
            reason: e.to_string(),
        })?;
        let grad = f.u.max_abs_derivative();
        if !grad.is_finite() || grad > opts.catastrophe_factor * initial_grad {
            return Err(Error::Catastrophe { time, initial: initial_grad, current: grad });
        }
        if opts.sample_every > 0 && step % opts.sample_every == 0 {
            samples.push(FieldSample { time, fields: f.clone() });
        }
    }
    Ok(DispersionlessRun { samples, final_time: steps as f64 * dt, final_fields: f, steps })
}

/// Writes one `x,re_u,im_u,re_v,im_v` CSV per sample (`{stem}_{index}.csv`) and
/// a `{stem}.json` sidecar describing the run.
pub fn export_fields(run: &DispersionlessRun, opts: &EvolveOptions, stem: &Path) -> Result<()> {
    let io = |e: &dyn std::fmt::Display| Error::Io(e.to_string());
    let base = stem.file_name().and_then(|s| s.to_str()).ok_or_else(|| Error::Io("bad output stem".into()))?;
    let mut files = Vec::new();
    for (idx, s) in run.samples.iter().enumerate() {
        let name = format!("{base}_{idx}.csv");
        let path = stem.with_file_name(&name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| io(&e))?;
        w.write_record(["x", "re_u", "im_u", "re_v", "im_v"]).map_err(|e| io(&e))?;
        let (u, v) = (s.fields.u.values(), s.fields.v.values());
        for k in 0..u.len() {
            w.write_record(&[
                format!("{:.17e}", s.fields.u.x(k)),
                format!("{:.17e}", u[k].re),
                format!("{:.17e}", u[k].im),
                format!("{:.17e}", v[k].re),
                format!("{:.17e}", v[k].im),
            ])
            .map_err(|e| io(&e))?;
        }
        w.flush().map_err(|e| io(&e))?;
        files.push(serde_json::json!({ "time": s.time, "file": name }));
    }
    let f = &run.final_fields;
    let meta = serde_json::json!({
        "grid_points": f.len(),
        "period": f.u.length,
        "slope_u": [f.u.mean_slope.re, f.u.mean_slope.im],
        "slope_v": [f.v.mean_slope.re, f.v.mean_slope.im],
        "options": opts,
        "steps": run.steps,
        "final_time": run.final_time,
        "samples": files,
    });
    std::fs::write(stem.with_extension("json"), serde_json::to_string_pretty(&meta).map_err(|e| io(&e))?)
        .map_err(|e| io(&e))
}
