use conifold_flows::barnes::{barnes_zeta, log_g_with_config, log_h_with_config, log_multiple_gamma, log_multiple_sine};
use conifold_flows::barnes::{BarnesConfig, BarnesEvaluation};
use conifold_flows::disp::*;
use conifold_flows::gw::*;
use conifold_flows::hirota::{
    extract_time_derivatives, hirota_residual, max_reliable_order, weighted_residual_norm, Direction, HirotaEq, LatticeTau,
    SeriesSpace, TauTriple,
};
use conifold_flows::lattice::{al_rhs, export_trajectory, integrate, IntegrateOptions, LatticeState, PlaneWaveParams};
use conifold_flows::specfun::{bernoulli_number, gen_bernoulli, polylog};
use conifold_flows::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::f64::consts::PI;

use crate::report::Report;
use crate::{parse, AlRun, BarnesEval, BarnesFunction, DispCheck, DispCheckKind, DispRun, GwCheckDiff, GwEval, GwScan};
use crate::{DirectionArg, HirotaCheck, SpecfunEval, USignArg};

type Outcome = Result<Report, String>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn err(e: Error) -> String {
    e.to_string()
}

fn cx(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn cx_list(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|z| cx(*z)).collect())
}

fn sup(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn specfun_eval(a: &SpecfunEval) -> Outcome {
    let s = &a.select;
    if let Some(k) = s.bernoulli {
        let mut r = Report::new("specfun eval", json!({ "bernoulli": k }));
        r.result("value", bernoulli_number(k).to_string());
        return Ok(r);
    }
    let z = a.z.ok_or("--z is required")?;
    if let Some(n) = s.gen_bernoulli {
        let omega = a.omega.clone().ok_or("--omega is required for --gen-bernoulli")?;
        let mut r = Report::new("specfun eval", json!({ "gen_bernoulli": n, "z": cx(z), "omega": cx_list(&omega) }));
        r.result("value", cx(gen_bernoulli(n, z, &omega).map_err(err)?));
        return Ok(r);
    }
    let order = s.polylog.ok_or("one of --bernoulli, --gen-bernoulli, --polylog is required")?;
    let mut r = Report::new("specfun eval", json!({ "polylog": order, "z": cx(z) }));
    r.result("value", cx(polylog(order, z).map_err(err)?));
    Ok(r)
}

pub fn barnes_eval(a: &BarnesEval) -> Outcome {
    let mut cfg = BarnesConfig::default();
    if let Some(m) = a.head_order {
        cfg.head_order = m;
    }
    let params = json!({
        "function": format!("{:?}", a.function),
        "z": cx(a.z),
        "omega": cx_list(&a.omega),
        "s": a.s.map(cx),
        "head_order": cfg.head_order,
    });
    let mut r = Report::new("barnes eval", params);
    let pair = || -> Result<(Complex64, Complex64), String> {
        match a.omega.as_slice() {
            [w1, w2] => Ok((*w1, *w2)),
            _ => Err("H and G take exactly two periods".into()),
        }
    };
    let value = match a.function {
        BarnesFunction::Zeta => {
            let s = a.s.ok_or("--s is required for zeta")?;
            barnes_zeta(s, &BarnesEvaluation::with_config(&a.omega, a.z, cfg).map_err(err)?).map_err(err)?
        }
        BarnesFunction::LogGamma => {
            let lg = log_multiple_gamma(&BarnesEvaluation::with_config(&a.omega, a.z, cfg).map_err(err)?).map_err(err)?;
            r.result("zeta_at_zero", cx(lg.zeta_at_zero));
            lg.value
        }
        BarnesFunction::LogSine => log_multiple_sine(a.z, &a.omega, cfg).map_err(err)?,
        BarnesFunction::LogH => {
            let (w1, w2) = pair()?;
            log_h_with_config(a.z, w1, w2, cfg).map_err(err)?
        }
        BarnesFunction::LogG => {
            let (w1, w2) = pair()?;
            log_g_with_config(a.z, w1, w2, cfg).map_err(err)?
        }
    };
    r.result("value", cx(value));
    Ok(r)
}

pub fn gw_eval(a: &GwEval) -> Outcome {
    let params = json!({ "t": cx(a.t), "lambda": cx(a.lambda), "x": cx(a.x), "kappa": cx(a.kappa), "genus_cap": a.genus_cap });
    let mut r = Report::new("gw eval", params);
    let f = eval_f_ad(a.lambda, a.t, a.x, a.kappa).map_err(err)?;
    let classical = classical_term(a.lambda, a.t, a.x, a.kappa).map_err(err)?;
    r.result("f_ad", cx(f));
    r.result("classical", cx(classical));
    r.result("log_g", cx(f - classical));
    r.result("q", cx(q_of(a.t).map_err(err)?));
    let genus: Vec<Value> = (0..=a.genus_cap)
        .map(|g| {
            let v = free_energy_genus(g, a.t)?;
            Ok(json!({ "g": g, "coefficient": genus_coefficient(g).to_string(), "value": cx(v) }))
        })
        .collect::<Result<_, Error>>()
        .map_err(err)?;
    r.result("free_energies", genus);
    r.result("truncated_sum", cx(truncated_free_energy(a.genus_cap, a.lambda, a.t).map_err(err)?));
    Ok(r)
}

pub fn gw_check_diff(a: &GwCheckDiff) -> Outcome {
    let mut r = Report::new("gw check-diff", json!({ "t": cx(a.t), "lambda": cx(a.lambda) }));
    let chk = check_difference_equation(a.lambda, a.t).map_err(err)?;
    r.result("second_difference", cx(chk.second_difference));
    r.result("closed_form", cx(chk.closed_form));
    r.result("ladder_value", cx(chk.ladder_value));
    r.result("folds", chk.residual.folds);
    r.result("residual", cx(chk.residual.value));
    r.residual("abs_residual", chk.residual.value.norm(), a.tol);
    Ok(r)
}

pub fn gw_scan(a: &GwScan) -> Outcome {
    let params = json!({
        "t": cx(a.t), "theta": a.theta, "eps_max": a.eps_max, "eps_min": a.eps_min,
        "points": a.points, "genus": a.genus,
    });
    let mut r = Report::new("gw scan-asymptotics", params);
    let eps = log_spaced(a.eps_max, a.eps_min, a.points);
    let scan = asymptotic_remainder_scan(a.t, a.theta, &eps, a.genus).map_err(err)?;
    r.result("eps", &scan.eps);
    r.result("remainders", &scan.remainders);
    r.result("intercept", scan.intercept);
    r.within("slope", scan.slope, 2.0 * a.genus as f64, a.tol);
    Ok(r)
}

pub fn hirota_check(a: &HirotaCheck) -> Outcome {
    let params = json!({ "window": a.window, "seed": a.seed, "amplitude": a.amplitude });
    let mut r = Report::new("hirota check", params);
    if a.window < 3 {
        return Err("--window must be at least 3".into());
    }
    let sp = SeriesSpace::hirota_default();
    let vac = TauTriple::vacuum(sp, a.window).map_err(err)?;
    let top = max_reliable_order(&vac);
    let mut vac_max = 0.0f64;
    for eq in HirotaEq::ALL {
        for (_, s) in hirota_residual(&vac, eq, top).map_err(err)? {
            vac_max = vac_max.max(s.max_abs());
        }
    }
    r.residual("vacuum", vac_max, 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let len = 2 * a.window + 1;
    let amp = a.amplitude;
    let mut draw = || -> Vec<Complex64> { (0..len).map(|_| Complex64::new(rng.random_range(-amp..amp), rng.random_range(-amp..amp))).collect() };
    let (fa, fb) = (draw(), draw());
    let base = LatticeTau::from_fields(&fa, &fb).map_err(err)?;
    let d = extract_time_derivatives(&TauTriple::from_lattice(sp, &base).map_err(err)?).map_err(err)?;
    let triple = TauTriple::first_order(sp, &base, &d).map_err(err)?;
    let reliable = d.reliable_sites();
    let mut per_eq = serde_json::Map::new();
    let mut worst = 0.0f64;
    for eq in HirotaEq::ALL {
        let res = hirota_residual(&triple, eq, 1).map_err(err)?;
        let norm = weighted_residual_norm(&triple, &res, |n| reliable.contains(&n), 1);
        per_eq.insert(eq.label().to_string(), json!(norm));
        worst = worst.max(norm);
    }
    r.result("first_order_residuals", Value::Object(per_eq));
    r.result("reliable_sites", [*reliable.start(), *reliable.end()]);
    r.residual("first_order", worst, a.tol);

    let (da, db) = d.field_flow(&base, Direction::Z);
    let (dat, dbt) = d.field_flow(&base, Direction::ZTilde);
    let (ra, rb) = al_rhs(&LatticeState::new(fa, fb).map_err(err)?).map_err(err)?;
    let mut flow = 0.0f64;
    for n in reliable {
        let k = base.index(n);
        let (Some(x), Some(y), Some(p), Some(q)) = (da[k], dat[k], db[k], dbt[k]) else { continue };
        flow = flow.max((x + y - ra[k]).norm()).max((p + q - rb[k]).norm());
    }
    r.residual("combined_flow_vs_al", flow, a.tol);
    Ok(r)
}

fn plane_wave(spec: &str, n: usize) -> Result<PlaneWaveParams, String> {
    let (mut amp_a, mut amp_b, mut k) = (None, None, None);
    for (key, v) in parse::key_values(spec)? {
        match key.as_str() {
            "A" | "a" => amp_a = Some(parse::complex(&v)?),
            "B" | "b" => amp_b = Some(parse::complex(&v)?),
            "k" => k = Some(parse::real(&v)?),
            other => return Err(format!("unknown plane-wave key '{other}'")),
        }
    }
    let p = PlaneWaveParams {
        amp_a: amp_a.ok_or("plane wave needs A")?,
        amp_b: amp_b.ok_or("plane wave needs B")?,
        k: k.ok_or("plane wave needs k")?,
    };
    if !p.is_commensurate(n) {
        return Err(format!("k = {} is not a multiple of 2π/{n}", p.k));
    }
    Ok(p)
}

pub fn al_run(a: &AlRun) -> Outcome {
    let p = plane_wave(&a.planewave, a.sites)?;
    let params = json!({
        "N": a.sites, "dt": a.dt, "steps": a.steps, "sample_every": a.sample_every,
        "planewave": { "A": cx(p.amp_a), "B": cx(p.amp_b), "k": p.k },
    });
    let mut r = Report::new("al run", params);
    let opts = IntegrateOptions { dt: a.dt, steps: a.steps, sample_every: a.sample_every };
    let traj = integrate(&p.state(a.sites, 0.0), opts).map_err(err)?;
    let errors: Vec<Value> = traj.samples.iter().map(|(step, s)| json!({ "step": step, "time": s.time, "error": p.max_error(s) })).collect();
    let worst = traj.samples.iter().map(|(_, s)| p.max_error(s)).fold(0.0, f64::max);
    r.result("frequency", cx(p.frequency()));
    r.result("final_time", traj.final_state.time);
    r.result("sample_errors", errors);
    r.result("c0_initial", cx(traj.conserved[0].2));
    r.residual("max_error_vs_analytic", worst, a.tol);
    r.residual("c0_drift", traj.conserved_drift(), a.drift_tol);
    if let Some(stem) = &a.csv {
        export_trajectory(&traj, opts, &p, stem).map_err(err)?;
        r.result("csv", stem.with_extension("csv").display().to_string());
    }
    Ok(r)
}

fn direction(d: DirectionArg) -> Direction {
    match d {
        DirectionArg::Z => Direction::Z,
        DirectionArg::ZTilde => Direction::ZTilde,
    }
}

pub fn disp_run(a: &DispRun) -> Outcome {
    let params = json!({
        "n": a.n, "length": a.length, "j": a.j, "direction": format!("{:?}", a.direction),
        "t_end": a.t_end, "dt": a.dt, "u0": cx(a.u0), "v0": cx(a.v0), "amplitude": a.amplitude,
        "u_sign": format!("{:?}", a.u_sign), "sample_every": a.sample_every,
    });
    let mut r = Report::new("disp run", params);
    let k = 2.0 * PI / a.length;
    let (u0, v0, amp) = (a.u0, a.v0, a.amplitude);
    let zero = Complex64::new(0.0, 0.0);
    let u = GridFunction::from_fn(a.n, a.length, zero, |x| u0 + amp * (k * x).cos()).map_err(err)?;
    let v = GridFunction::from_fn(a.n, a.length, zero, |x| v0 + amp * ((2.0 * k * x).sin() + 0.5 * (k * x).cos())).map_err(err)?;
    let init = DispersionlessFields::new(u, v).map_err(err)?;
    let opts = EvolveOptions {
        j: a.j,
        direction: direction(a.direction),
        t_end: a.t_end,
        dt: a.dt,
        sample_every: a.sample_every,
        u_sign: match a.u_sign {
            USignArg::AsStated => UFlowSign::AsStated,
            USignArg::LatticeConsistent => UFlowSign::LatticeConsistent,
        },
        ..Default::default()
    };
    r.result("initial_max_abs_ux", init.u.max_abs_derivative());
    match evolve_dispersionless(&init, opts) {
        Ok(run) => {
            r.result("final_time", run.final_time);
            r.result("steps", run.steps);
            r.result("final_max_abs_ux", run.final_fields.u.max_abs_derivative());
            r.result("max_change_u", run.final_fields.u.max_abs_diff(&init.u));
            r.result("max_change_v", run.final_fields.v.max_abs_diff(&init.v));
            r.result("samples", run.samples.len());
            r.result("catastrophe", false);
            if let Some(stem) = &a.csv {
                export_fields(&run, &opts, stem).map_err(err)?;
                r.result("json", stem.with_extension("json").display().to_string());
            }
        }
        Err(Error::Catastrophe { time, initial, current }) => {
            r.result("catastrophe", json!({ "time": time, "initial_max_abs_ux": initial, "max_abs_ux": current }));
            r.pass = false;
        }
        Err(e) => return Err(err(e)),
    }
    Ok(r)
}

fn smooth_fields(n: usize) -> Result<DispersionlessFields, String> {
    let l = 2.0 * PI;
    let u = GridFunction::from_fn(n, l, Complex64::new(0.0, 0.0), |x| Complex64::new(1.0 + 0.2 * x.cos(), 0.1 * x.sin())).map_err(err)?;
    let v = GridFunction::from_fn(n, l, Complex64::new(0.0, 1.0), |x| Complex64::new(0.1 * (2.0 * x).sin(), 0.05 * x.cos())).map_err(err)?;
    DispersionlessFields::new(u, v).map_err(err)
}

pub fn disp_check(a: &DispCheck) -> Outcome {
    let params = json!({
        "kind": format!("{:?}", a.kind), "zeta": cx(a.zeta), "points": a.points, "seed": a.seed,
        "t": cx(a.t), "x": cx(a.x), "kappa": cx(a.kappa),
    });
    let mut r = Report::new("disp check", params);
    let wants = |k: DispCheckKind| a.kind == k || a.kind == DispCheckKind::All;
    let fields = smooth_fields(64)?;
    let l = 2.0 * PI;

    if wants(DispCheckKind::Flows) {
        let (u, v) = (fields.u.values(), fields.v.values());
        for (dir, sign, name) in [(Direction::Z, 1.0, "z"), (Direction::ZTilde, -1.0, "z_tilde")] {
            let (du, dv) = flow_rhs(&fields, 1, dir).map_err(err)?;
            let ev: Vec<Complex64> = u.iter().zip(&v).map(|(u, v)| (sign * v - u).exp()).collect();
            let eu: Vec<Complex64> = u.iter().zip(&v).map(|(u, v)| (sign * v).exp() * (1.0 - (-u).exp())).collect();
            let ev: Vec<Complex64> = spectral_derivative(&ev, l).iter().map(|z| -I * z).collect();
            let eu: Vec<Complex64> = spectral_derivative(&eu, l).iter().map(|z| sign * I * z).collect();
            r.residual(&format!("first_flow_v_{name}"), sup(&dv.periodic, &ev), a.flow_tol);
            r.residual(&format!("first_flow_u_{name}"), sup(&du.periodic, &eu), a.flow_tol);
        }
    }
    if wants(DispCheckKind::Density) {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let pts: Vec<(Complex64, Complex64)> = (0..a.points)
            .map(|_| {
                let u = Complex64::new(rng.random_range(0.5..2.0), rng.random_range(-0.5..0.5));
                (u, Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)))
            })
            .collect();
        let fr = FrobeniusData::new();
        for (dir, name) in [(Direction::Z, "z"), (Direction::ZTilde, "z_tilde")] {
            let rep = check_density_constraint(a.zeta, dir, &pts, |u| fr.f3(u)).map_err(err)?;
            r.result(&format!("density_{name}_reversed_sign"), rep.max_relative_residual_flipped);
            r.result(&format!("density_{name}_fd_error"), rep.max_fd_error);
            r.residual(&format!("density_{name}"), rep.max_relative_residual, a.tol);
        }
    }
    if wants(DispCheckKind::Hamiltonian) {
        for (dir, name) in [(Direction::Z, "z"), (Direction::ZTilde, "z_tilde")] {
            let rep = check_hamiltonian_form(Complex64::new(0.1, 0.04), &fields, dir, 30).map_err(err)?;
            r.result(&format!("hamiltonian_{name}"), &rep);
            r.residual(&format!("hamiltonian_v_{name}"), rep.v_vs_density, a.tol);
            r.residual(&format!("hamiltonian_u_{name}"), rep.u_vs_density, a.tol);
        }
    }
    if wants(DispCheckKind::Identification) {
        let at_x = check_principal_identification(a.t, a.x, a.kappa).map_err(err)?;
        let at_0 = check_principal_identification(a.t, Complex64::new(0.0, 0.0), a.kappa).map_err(err)?;
        r.result("identification", json!({
            "li3": cx(at_x.li3),
            "classical": cx(at_x.classical),
            "lhs": cx(at_x.lhs),
            "rhs": cx(at_x.rhs),
            "rhs_flipped": cx(at_x.rhs_flipped),
            "difference": cx(at_x.difference),
            "difference_flipped": cx(at_x.difference_flipped),
            "genus_zero_limit": cx(at_x.genus_zero_limit),
            "limit_vs_li3_over_4pi2": at_x.limit_vs_li3_over_4pi2,
            "limit_vs_li3": at_x.limit_vs_li3,
        }));
        r.residual("identification_at_x0", at_0.difference.norm(), 0.0);
    }
    Ok(r)
}
