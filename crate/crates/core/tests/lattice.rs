use conifold_flows::lattice::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn wave() -> PlaneWaveParams {
    PlaneWaveParams::commensurate(c(0.3, 0.0), c(0.2, 0.0), 1, 64)
}

fn run(p: &PlaneWaveParams, dt: f64, t_end: f64) -> LatticeState {
    let steps = (t_end / dt).round() as usize;
    let opts = IntegrateOptions { dt, steps, sample_every: steps };
    integrate(&p.state(64, 0.0), opts).unwrap().final_state
}

#[test]
fn plane_wave_right_side_is_exact() {
    let p = PlaneWaveParams::commensurate(c(0.3, 0.1), c(0.2, -0.2), 5, 32);
    let s = p.state(32, 0.7);
    let (da, db) = al_rhs(&s).unwrap();
    let w = p.frequency();
    for n in 0..32 {
        assert!((da[n] + c(0.0, 1.0) * w * s.a[n]).norm() < 1e-14);
        assert!((db[n] - c(0.0, 1.0) * w * s.b[n]).norm() < 1e-14);
    }
}

#[test]
fn plane_wave_trajectory_and_conservation() {
    let p = wave();
    let opts = IntegrateOptions { dt: 1e-3, steps: 10_000, sample_every: 500 };
    let traj = integrate(&p.state(64, 0.0), opts).unwrap();
    for (_, s) in &traj.samples {
        assert!(p.max_error(s) <= 1e-6, "error {} at t = {}", p.max_error(s), s.time);
    }
    assert!(traj.conserved_drift() <= 1e-9);
    let expected = 64.0 * (1.0 - p.amp_a * p.amp_b).ln();
    assert!((traj.conserved[0].2 - expected).norm() < 1e-12);
}

#[test]
fn rk4_order_under_halving() {
    let p = wave();
    let errs: Vec<f64> = [0.05, 0.025, 0.0125].iter().map(|&dt| p.max_error(&run(&p, dt, 10.0))).collect();
    for k in 0..2 {
        let order = (errs[k] / errs[k + 1]).log2();
        assert!((order - 4.0).abs() <= 0.2, "order {order} from {errs:?}");
    }
}

#[test]
fn forward_then_backward_returns() {
    let p = wave();
    let start = p.state(64, 0.0);
    let fwd = integrate(&start, IntegrateOptions { dt: 0.01, steps: 200, sample_every: 200 }).unwrap().final_state;
    let back = integrate(&fwd, IntegrateOptions { dt: -0.01, steps: 200, sample_every: 200 }).unwrap().final_state;
    let err = start.a.iter().zip(&back.a).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(err < 1e-9, "{err:e}");
}

#[test]
fn random_state_conserves_c0() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 32;
    let mut draw = || c(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2));
    let a = (0..n).map(|_| draw()).collect();
    let b = (0..n).map(|_| draw()).collect();
    let s = LatticeState::new(a, b).unwrap();
    let traj = integrate(&s, IntegrateOptions { dt: 1e-3, steps: 10_000, sample_every: 1000 }).unwrap();
    assert!(traj.conserved_drift() <= 1e-9, "{:e}", traj.conserved_drift());
}

#[test]
fn time_translation_advances_phase() {
    let p = wave();
    let dt = 0.5;
    let s = run(&p, 1e-3, dt);
    let phase = (c(0.0, -1.0) * p.frequency() * dt).exp();
    let s0 = p.state(64, 0.0);
    for n in 0..64 {
        assert!((s.a[n] - s0.a[n] * phase).norm() < 1e-9);
    }
}

#[test]
fn gauge_maps_solutions_to_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 16;
    let mut draw = || c(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
    let a = (0..n).map(|_| draw()).collect();
    let b = (0..n).map(|_| draw()).collect();
    let s = LatticeState::new(a, b).unwrap();
    let g = c(1.7, -0.6);
    let opts = IntegrateOptions { dt: 1e-2, steps: 300, sample_every: 300 };
    let evolved_then_gauged = integrate(&s, opts).unwrap().final_state.gauge(g);
    let gauged_then_evolved = integrate(&s.gauge(g), opts).unwrap().final_state;
    for k in 0..n {
        assert!((evolved_then_gauged.a[k] - gauged_then_evolved.a[k]).norm() < 1e-10);
        assert!((evolved_then_gauged.b[k] - gauged_then_evolved.b[k]).norm() < 1e-10);
    }
}

#[test]
fn singular_run_aborts() {
    // a uniform state keeps a·b fixed, so a state just off the singular set integrates fine
    let s = LatticeState::new(vec![c(0.999_999, 0.0); 4], vec![c(1.0, 0.0); 4]).unwrap();
    assert!(integrate(&s, IntegrateOptions { dt: 1e-3, steps: 10, sample_every: 1 }).is_ok());
    let bad = LatticeState { a: vec![c(1.0, 0.0); 4], b: vec![c(1.0, 0.0); 4], time: 0.0 };
    assert!(matches!(
        integrate(&bad, IntegrateOptions { dt: 1e-3, steps: 1, sample_every: 1 }),
        Err(conifold_flows::Error::Singular { .. })
    ));
}

#[test]
fn csv_and_sidecar_export() {
    let p = PlaneWaveParams::commensurate(c(0.3, 0.0), c(0.2, 0.0), 1, 8);
    let opts = IntegrateOptions { dt: 1e-2, steps: 10, sample_every: 5 };
    let traj = integrate(&p.state(8, 0.0), opts).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("run");
    export_trajectory(&traj, opts, &p, &stem).unwrap();
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "step,time,site,re_a,im_a,re_b,im_b");
    assert_eq!(lines.count(), 3 * 8);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    assert_eq!(json["sites"], 8);
    assert_eq!(json["conserved"].as_array().unwrap().len(), 3);
}
