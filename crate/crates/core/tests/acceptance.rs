//! End-to-end acceptance criteria. Each criterion prints one `PASS`/`FAIL`
//! line followed by its measured quantities; the binary exits non-zero if any
//! criterion fails.

use conifold_flows::barnes::{barnes_zeta, log_g, log_h, log_multiple_gamma, BarnesEvaluation};
use conifold_flows::disp::*;
use conifold_flows::gw::*;
use conifold_flows::hirota::*;
use conifold_flows::lattice::*;
use conifold_flows::specfun::{fold_2pi_i, ln_gamma};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One measured quantity against its threshold.
struct Check {
    label: String,
    value: f64,
    pass: bool,
    bound: String,
}

impl Check {
    fn at_most(label: impl Into<String>, value: f64, tol: f64) -> Self {
        Check { label: label.into(), value, pass: value <= tol, bound: format!("≤ {tol:e}") }
    }

    fn within(label: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Check {
            label: label.into(),
            value,
            pass: (value - target).abs() <= tol,
            bound: format!("∈ {target} ± {tol}"),
        }
    }

    fn holds(label: impl Into<String>, ok: bool) -> Self {
        Check { label: label.into(), value: if ok { 1.0 } else { 0.0 }, pass: ok, bound: "exact".into() }
    }

    /// Reported for context; does not affect the verdict.
    fn info(label: impl Into<String>, value: f64) -> Self {
        Check { label: label.into(), value, pass: true, bound: "diagnostic".into() }
    }
}

fn sup(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// 50 points with Im t ∈ (0.2, 1), Re λ̌ > 0 and |λ̌| ∈ [0.05, 0.3].
fn difference_grid() -> Vec<(Complex64, Complex64)> {
    let n = 50;
    (0..n)
        .map(|k| {
            let a = (k as f64 + 0.5) / n as f64;
            let b = ((k * 7) % n) as f64 / n as f64;
            let d = ((k * 13) % n) as f64 / n as f64;
            let e = ((k * 11) % n) as f64 / n as f64;
            (c(-0.4 + 0.9 * b, 0.22 + 0.76 * a), Complex64::from_polar(0.05 + 0.25 * d, -1.2 + 2.4 * e))
        })
        .collect()
}

fn criterion_1() -> Vec<Check> {
    let worst = difference_grid()
        .into_iter()
        .map(|(t, lc)| check_difference_equation(lc, t).unwrap().residual.value.norm())
        .fold(0.0, f64::max);
    vec![Check::at_most("max |Δ²log G − log(1−q)| over 50 points", worst, 1e-8)]
}

fn criterion_2() -> Vec<Check> {
    let one = c(1.0, 0.0);
    let (mut h_worst, mut g_worst) = (0.0f64, 0.0f64);
    for (t, lc) in difference_grid() {
        let x2 = (2.0 * PI * I * t).exp();
        let h = log_h(t + lc, lc, one).unwrap() - log_h(t, lc, one).unwrap() + (1.0 - x2).ln();
        h_worst = h_worst.max(fold_2pi_i(h).norm());
        let g = log_g(t + lc, lc, one).unwrap() - log_g(t, lc, one).unwrap() + log_h(t + lc, lc, one).unwrap();
        g_worst = g_worst.max(fold_2pi_i(g).norm());
    }
    vec![
        Check::at_most("max H difference residual", h_worst, 1e-8),
        Check::at_most("max G first-difference residual", g_worst, 1e-8),
    ]
}

fn criterion_3() -> Vec<Check> {
    let t = c(0.15, 0.12);
    let eps = log_spaced(0.1, 0.01, 10);
    let mut out = vec![
        Check::at_most("|q|", q_of(t).unwrap().norm(), 0.5),
        Check::holds("F̃¹ = Li₁/12, F̃² = Li₋₁/240", {
            genus_coefficient(1) == BigRational::new(1.into(), 12.into())
                && genus_coefficient(2) == BigRational::new(1.into(), 240.into())
        }),
    ];
    for g in [2u32, 3] {
        let scan = asymptotic_remainder_scan(t, PI / 4.0, &eps, g).unwrap();
        out.push(Check::within(format!("slope G = {g}"), scan.slope, 2.0 * g as f64, 0.2));
    }
    out
}

fn criterion_4() -> Vec<Check> {
    let one = [c(1.0, 0.0)];
    let ev = BarnesEvaluation::new(&one, c(2.0, 0.0)).unwrap();
    let v = barnes_zeta(c(3.0, 0.0), &ev).unwrap();
    // Σ_{n≥0} (2+n)^{−3}: partial sum plus Euler–Maclaurin tail
    let m = 2000usize;
    let partial: f64 = (0..m).map(|n| (2.0 + n as f64).powi(-3)).sum();
    let a = 2.0 + m as f64;
    let direct = partial + 1.0 / (2.0 * a * a) + 0.5 * a.powi(-3) + 0.25 * a.powi(-4);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut shift = 0.0f64;
    for _ in 0..20 {
        let r = rng.random_range(2..=3usize);
        let omega: Vec<Complex64> = (0..r).map(|_| c(rng.random_range(0.4..1.5), rng.random_range(-0.4..0.4))).collect();
        let z = c(rng.random_range(0.2..1.5), rng.random_range(-0.5..0.5));
        let s = c(rng.random_range(-1.5..2.5), rng.random_range(-1.0..1.0));
        let zeta = |z: Complex64, w: &[Complex64]| barnes_zeta(s, &BarnesEvaluation::new(w, z).unwrap()).unwrap();
        let rhs = -zeta(z, &omega[..r - 1]);
        let lhs = zeta(z + omega[r - 1], &omega) - zeta(z, &omega);
        shift = shift.max((lhs - rhs).norm() / rhs.norm().max(1.0));
    }

    let mut lerch = 0.0f64;
    for x in [0.3, 1.7, 2.5] {
        let z = c(x, 0.0);
        let lg = log_multiple_gamma(&BarnesEvaluation::new(&one, z).unwrap()).unwrap().value;
        let gamma = ln_gamma(z).exp() / (2.0 * PI).sqrt();
        lerch = lerch.max((lg.exp() - gamma).norm() / gamma.norm());
    }
    vec![
        Check::at_most("|ζ₁(3, 2 | 1) − Σ(2+n)⁻³|", (v - direct).norm(), 1e-10),
        Check::at_most("max shift-identity residual (20 draws)", shift, 1e-9),
        Check::at_most("max relative |Γ₁(z|1) − Γ(z)/√2π|", lerch, 1e-9),
    ]
}

fn criterion_5() -> Vec<Check> {
    let n = 64;
    let p = PlaneWaveParams::commensurate(c(0.3, 0.0), c(0.2, 0.0), 1, n);
    let opts = IntegrateOptions { dt: 1e-3, steps: 10_000, sample_every: 100 };
    let traj = integrate(&p.state(n, 0.0), opts).unwrap();
    let worst = traj.samples.iter().map(|(_, s)| p.max_error(s)).fold(0.0, f64::max);
    let errs: Vec<f64> = [0.05, 0.025, 0.0125]
        .iter()
        .map(|&dt| {
            let steps = (10.0 / dt) as usize;
            let o = IntegrateOptions { dt, steps, sample_every: steps };
            p.max_error(&integrate(&p.state(n, 0.0), o).unwrap().final_state)
        })
        .collect();
    vec![
        Check::at_most("max plane-wave error on [0, 10]", worst, 1e-6),
        Check::at_most("C₀ drift", traj.conserved_drift(), 1e-9),
        Check::within("RK4 order (0.05 → 0.025)", (errs[0] / errs[1]).log2(), 4.0, 0.2),
        Check::within("RK4 order (0.025 → 0.0125)", (errs[1] / errs[2]).log2(), 4.0, 0.2),
    ]
}

fn criterion_6() -> Vec<Check> {
    let sp = SeriesSpace::hirota_default();
    let vac = TauTriple::vacuum(sp, 4).unwrap();
    let top = max_reliable_order(&vac);
    let vacuum_zero = HirotaEq::ALL
        .iter()
        .all(|eq| hirota_residual(&vac, *eq, top).unwrap().iter().all(|(_, r)| r.max_abs() == 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut draw = |len: usize| -> Vec<Complex64> {
        (0..len).map(|_| c(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4))).collect()
    };
    let w = 7;
    let mut worst_res = 0.0f64;
    let mut worst_flow = 0.0f64;
    for _ in 0..3 {
        let (a, b) = (draw(2 * w + 1), draw(2 * w + 1));
        let base = LatticeTau::from_fields(&a, &b).unwrap();
        let seed = TauTriple::from_lattice(sp, &base).unwrap();
        let d = extract_time_derivatives(&seed).unwrap();
        let t = TauTriple::first_order(sp, &base, &d).unwrap();
        let reliable = d.reliable_sites();
        for eq in HirotaEq::ALL {
            let res = hirota_residual(&t, eq, 1).unwrap();
            worst_res = worst_res.max(weighted_residual_norm(&t, &res, |n| reliable.contains(&n), 1));
        }
        // combined ∂_{z₁} + ∂_{z̃₁} against the lattice right side
        let (da, db) = d.field_flow(&base, Direction::Z);
        let (dat, dbt) = d.field_flow(&base, Direction::ZTilde);
        let (ra, rb) = al_rhs(&LatticeState::new(a.clone(), b.clone()).unwrap()).unwrap();
        for n in reliable {
            let k = base.index(n);
            worst_flow = worst_flow.max((da[k].unwrap() + dat[k].unwrap() - ra[k]).norm());
            worst_flow = worst_flow.max((db[k].unwrap() + dbt[k].unwrap() - rb[k]).norm());
        }
    }
    vec![
        Check::holds(format!("vacuum residuals identically zero (order {top})"), vacuum_zero),
        Check::at_most("max residual at ζ-orders 0–1", worst_res, 1e-12),
        Check::at_most("combined flow vs AL right side", worst_flow, 1e-12),
    ]
}

/// `∂_x [ζ^j] log P_{a,b}` through the multivariate series engine, with a
/// nilpotent second variable carrying the x-derivative.
fn series_oracle(u: Complex64, ux: Complex64, v: Complex64, vx: Complex64, sign: f64, j: u8) -> (Complex64, Complex64) {
    let sp = SeriesSpace::custom(&[4, 1], 5).unwrap();
    let k = |z: Complex64| TruncatedSeries::constant(sp, z);
    let eps = TruncatedSeries::var(sp, 1);
    let zeta = TruncatedSeries::var(sp, 0);
    let e = (&k(sign * v) + &eps.scale(c(sign, 0.0) * vx)).exp();
    let f = (&k(-u) + &eps.scale(-ux)).exp();
    let one = k(c(1.0, 0.0));
    let ze = &zeta * &e;
    let opz = &one + &ze;
    let s = (&(&opz * &opz) - &(&ze * &f).scale(c(4.0, 0.0))).sqrt().unwrap();
    let pa = (&(&one - &ze) + &s).scale(c(0.5, 0.0));
    let pb = (&opz + &s).scale(c(0.5, 0.0));
    let mono = Monomial::from_exponents(&[j, 1]);
    (pa.ln().unwrap().coeff(mono), pb.ln().unwrap().coeff(mono))
}

fn test_fields(n: usize) -> DispersionlessFields {
    let u = GridFunction::from_fn(n, 2.0 * PI, c(0.0, 0.0), |x| c(1.0 + 0.2 * x.cos(), 0.1 * x.sin())).unwrap();
    let v = GridFunction::from_fn(n, 2.0 * PI, c(0.0, 1.0), |x| c(0.1 * (2.0 * x).sin(), 0.05 * x.cos())).unwrap();
    DispersionlessFields::new(u, v).unwrap()
}

fn criterion_7() -> Vec<Check> {
    let n = 64;
    let f = test_fields(n);
    let (u, ux, v, vx) = (f.u.values(), f.u.derivative(), f.v.values(), f.v.derivative());
    let mut coeff = 0.0f64;
    for dir in [Direction::Z, Direction::ZTilde] {
        let sign = if dir == Direction::Z { 1.0 } else { -1.0 };
        for j in 1..=4usize {
            let (du, dv) = flow_rhs(&f, j, dir).unwrap();
            for k in 0..n {
                let (a, b) = series_oracle(u[k], ux[k], v[k], vx[k], sign, j as u8);
                coeff = coeff.max((dv.periodic[k] - I * j as f64 * a).norm());
                coeff = coeff.max((du.periodic[k] - sign * I * j as f64 * b).norm());
            }
        }
    }
    let (du, dv) = flow_rhs(&f, 1, Direction::Z).unwrap();
    let ev: Vec<Complex64> = u.iter().zip(&v).map(|(u, v)| (v - u).exp()).collect();
    let eu: Vec<Complex64> = u.iter().zip(&v).map(|(u, v)| v.exp() * (1.0 - (-u).exp())).collect();
    let ev: Vec<Complex64> = spectral_derivative(&ev, 2.0 * PI).iter().map(|z| -I * z).collect();
    let eu: Vec<Complex64> = spectral_derivative(&eu, 2.0 * PI).iter().map(|z| I * z).collect();
    vec![
        Check::at_most("max |ζ-coefficient − series oracle|, j ≤ 4", coeff, 1e-12),
        Check::at_most("∂_{z₁}v vs −i∂ₓe^{v−u}", sup(&dv.periodic, &ev), 1e-12),
        Check::at_most("∂_{z₁}u vs i∂ₓ(e^v(1−e^{−u}))", sup(&du.periodic, &eu), 1e-12),
    ]
}

fn criterion_8() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let points: Vec<(Complex64, Complex64)> = (0..20)
        .map(|_| {
            let u = c(rng.random_range(0.5..2.0), rng.random_range(-0.5..0.5));
            (u, c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)))
        })
        .collect();
    let fr = FrobeniusData::new();
    let zeta = c(0.2, 0.06);
    let mut out = Vec::new();
    for (dir, name) in [(Direction::Z, "h"), (Direction::ZTilde, "h̃")] {
        let r = check_density_constraint(zeta, dir, &points, |u| fr.f3(u)).unwrap();
        out.push(Check::at_most(format!("density constraint ({name}), f''' = 1/(e^u−1), relative"), r.max_relative_residual, 1e-6));
        out.push(Check::info(format!("  same with f''' → −1/(e^u−1) ({name})"), r.max_relative_residual_flipped));
        out.push(Check::info(format!("  finite-difference error estimate ({name})"), r.max_fd_error));
    }
    let f = test_fields(64);
    for (dir, name) in [(Direction::Z, "z"), (Direction::ZTilde, "z̃")] {
        let r = check_hamiltonian_form(c(0.1, 0.04), &f, dir, 30).unwrap();
        out.push(Check::at_most(format!("Δ-form v vs ∂ₓ∂h/∂u ({name})"), r.v_vs_density, 1e-6));
        out.push(Check::at_most(format!("Δ-form u vs ∂ₓ∂h/∂v ({name})"), r.u_vs_density, 1e-6));
    }
    out
}

fn criterion_9() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut quad = 0.0f64;
    for _ in 0..10 {
        let a = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let b = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let lam = c(rng.random_range(0.01..1.0), rng.random_range(-1.0..1.0));
        let x = c(rng.random_range(-3.0..3.0), 0.0);
        let varpi = |y: Complex64| -> conifold_flows::Result<Complex64> { Ok(a * y * y + b * y + 0.7) };
        let d = second_difference(&varpi, x, lam).unwrap();
        quad = quad.max((d - 2.0 * a).norm() / (1.0 + a.norm() / lam.norm_sqr()));
    }
    let t = c(0.3, 0.4);
    let one = c(1.0, 0.0);
    let lam = c(0.1, 0.1);
    let classical = |x: Complex64| -> conifold_flows::Result<Complex64> { Ok(classical_varpi(t, one, x)) };
    let ul = [0.0, 0.35, 1.2]
        .iter()
        .map(|&x| (u_lambda(&classical, c(x, 0.0), lam).unwrap() + 2.0 * PI * I * t).norm())
        .fold(0.0, f64::max);
    let r0 = check_principal_identification(t, c(0.0, 0.0), one).unwrap();
    let r = check_principal_identification(t, c(0.7, 0.0), one).unwrap();
    vec![
        Check::at_most("second difference on quadratics (relative)", quad, 1e-12),
        Check::at_most("|u_λ + 2πit| from classical ϖ_λ, κ = 1", ul, 1e-12),
        Check::holds("x = 0: both sides equal Li₃(q)", r0.difference == c(0.0, 0.0) && r0.lhs == r0.li3 && r0.rhs == r0.li3),
        Check::info("  x = 0.7: |difference| with −uv²/2", r.difference.norm()),
        Check::info("  x = 0.7: |difference| with +uv²/2", r.difference_flipped.norm()),
        Check::info("  |lim λ̌² log G − Li₃/(2π)²|", r.limit_vs_li3_over_4pi2),
        Check::info("  |lim λ̌² log G − Li₃|", r.limit_vs_li3),
    ]
}

fn criterion_10() -> Vec<Check> {
    let v = constant_map_contribution(2, 2).unwrap();
    vec![Check::holds(format!("constant_map_contribution(2, 2) = {v}"), v == BigRational::new(1.into(), 2880.into()))]
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Vec<Check>); 10] = [
        ("central difference equation", criterion_1),
        ("H and G first differences", criterion_2),
        ("asymptotic expansion", criterion_3),
        ("Barnes layer", criterion_4),
        ("AL lattice", criterion_5),
        ("Hirota engine", criterion_6),
        ("dispersionless flows", criterion_7),
        ("Hamiltonian/Frobenius layer", criterion_8),
        ("x-difference chain and identification", criterion_9),
        ("constant-map value", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(checks) => {
                let pass = checks.iter().all(|c| c.pass);
                failed += usize::from(!pass);
                println!("criterion {:>2} {}: {name} ({secs:.1}s)", k + 1, if pass { "PASS" } else { "FAIL" });
                for ch in &checks {
                    let mark = if ch.bound == "diagnostic" { "" } else if ch.pass { " ok" } else { " FAILED" };
                    println!("    {}: {:.3e} ({}){mark}", ch.label, ch.value, ch.bound);
                }
            }
            Err(_) => {
                failed += 1;
                println!("criterion {:>2} FAIL: {name} (error during evaluation)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
