//! Acceptance criteria, one pass/fail line each.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use boflow::line::{evaluate_uhp, reconstruct_line_with, LineEvaluator, LineField, LineGrid, LineSolveOptions, ReconstructOptions};
use boflow::solver::{conserved_quantities, LineBoxConfig, LineBoxReference, PseudoSpectralSolver, SolverConfig};
use boflow::spectral::TorusField;
use boflow::torus::{evolve_coefficients, propagator};
use boflow::validation::{
    check_isospectrality, check_lax_evolution, check_line_identities, check_torus_commutators, convergence_study,
    formula_vs_solver, random_band_limited, IsospectralityParams, LaxCheckParams, LineIdentity, StudyDescriptor,
};
use num_complex::Complex64;

type Outcome = Result<String, String>;

fn cos(n: usize) -> TorusField {
    TorusField::zero(n).add_trig(1, 1.0, 0.0)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn formula_vs_solver_cos() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for t in [0.1, 0.5, 1.0] {
        let (_, _, d) = formula_vs_solver(&cos(128), t, 2e-4, 128).map_err(|e| e.to_string())?;
        worst = worst.max(d);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst <= 1e-6 && secs <= 60.0, format!("max relative L2 {worst:.2e} <= 1e-6 in {secs:.1}s"))
}

fn linear_phase_law() -> Outcome {
    let a = 1e-3;
    let mut worst: f64 = 0.0;
    for k in 1..=3usize {
        let u0 = TorusField::zero(32).add_trig(k, 2.0 * a, 0.0);
        let p = propagator(&u0, 1.0, 32).map_err(|e| e.to_string())?;
        let c = evolve_coefficients(&p, 16).map_err(|e| e.to_string())?.coeffs[k];
        worst = worst.max((c - a * Complex64::from_polar(1.0, (k * k) as f64)).norm());
    }
    ensure(worst <= 10.0 * a * a, format!("max remainder {worst:.2e} <= 10a^2 = {:.0e}", 10.0 * a * a))
}

fn commutators() -> Outcome {
    let data = [cos(64), TorusField::zero(64).add_trig(1, 1.0, 0.0).add_trig(2, 0.5, 0.0), random_band_limited(64, 4, 1)];
    let mut worst: f64 = 0.0;
    for u in &data {
        for r in check_torus_commutators(u, 64).map_err(|e| e.to_string())? {
            worst = worst.max(r.residual);
        }
    }
    ensure(worst <= 1e-12, format!("max residual {worst:.2e} <= 1e-12 at N = 64"))
}

fn lax_and_isospectrality() -> Outcome {
    let u0 = cos(128);
    let lax = check_lax_evolution(&u0, &LaxCheckParams::default()).map_err(|e| e.to_string())?;
    let rows = convergence_study(&StudyDescriptor::LaxDt {
        u0: u0.clone(),
        base: LaxCheckParams::default(),
        dts: vec![4e-3, 2e-3, 1e-3],
    })
    .map_err(|e| e.to_string())?;
    let orders: Vec<f64> = rows[1..].iter().map(|r| r.observed_order.unwrap()).collect();
    let iso = check_isospectrality(&u0, &IsospectralityParams::default()).map_err(|e| e.to_string())?;
    let ok = lax.residual <= 1e-4 && orders.iter().all(|p| (1.7..=2.3).contains(p)) && iso.residual <= 1e-6;
    ensure(
        ok,
        format!("lax {:.2e} <= 1e-4, orders {orders:.2?}, eigenvalue drift {:.2e} <= 1e-6", lax.residual, iso.residual),
    )
}

/// `(1/2πi)∫ u(x)/(x − z) dx` by Simpson after `x = tan θ`.
fn cauchy_integral(u: &dyn Fn(f64) -> f64, z: Complex64) -> Complex64 {
    let n = 40_000;
    let h = PI / n as f64;
    let f = |theta: f64| {
        if theta.abs() >= PI / 2.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = theta.tan();
        u(x) / (theta.cos() * theta.cos()) / (x - z)
    };
    let mut acc = f(-PI / 2.0) + f(PI / 2.0);
    for j in 1..n {
        acc += if j % 2 == 1 { 4.0 } else { 2.0 } * f(-PI / 2.0 + j as f64 * h);
    }
    acc * (h / 3.0) / Complex64::new(0.0, 2.0 * PI)
}

fn line_time_zero() -> Outcome {
    let grid = LineGrid::default();
    let lorentzian = |x: f64| 2.0 / (1.0 + x * x);
    let gaussian = |x: f64| (-x * x / 2.0).exp();
    let data: [(LineField, &dyn Fn(f64) -> f64); 2] =
        [(LineField::lorentzian(1.0).unwrap(), &lorentzian), (LineField::gaussian(1.0, 1.0).unwrap(), &gaussian)];
    let mut worst: f64 = 0.0;
    for (u0, u) in data {
        for z in [Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.5), Complex64::new(-2.0, 2.0)] {
            let got = evaluate_uhp(&u0, 0.0, z, &grid).map_err(|e| e.to_string())?;
            worst = worst.max((got - cauchy_integral(u, z)).norm());
        }
    }
    let at_i = evaluate_uhp(&LineField::lorentzian(1.0).unwrap(), 0.0, Complex64::i(), &grid).map_err(|e| e.to_string())?;
    let d = (at_i - 0.5).norm();
    ensure(worst <= 1e-6 && d <= 1e-6, format!("max quadrature gap {worst:.2e}, |Pi u(i) - 1/2| = {d:.2e}"))
}

fn line_against_box() -> Outcome {
    let start = Instant::now();
    let u0 = LineField::lorentzian(1.0).unwrap();
    let t = 0.5;
    let xs: Vec<f64> = (0..121).map(|j| -15.0 + 0.25 * j as f64).collect();
    let evaluator = LineEvaluator::new(&u0, t, LineSolveOptions::default()).map_err(|e| e.to_string())?;
    let got = reconstruct_line_with(&evaluator, &xs, &ReconstructOptions { eps: 1e-3, eps_richardson: true })
        .map_err(|e| e.to_string())?;
    let reference = LineBoxReference::run(&u0, t, &LineBoxConfig::default()).map_err(|e| e.to_string())?;
    let want = reference.values(&xs);
    let num: f64 = got.iter().zip(&want).map(|(a, b)| (a - b) * (a - b)).sum();
    let den: f64 = want.iter().map(|b| b * b).sum();
    let d = (num / den).sqrt();
    let secs = start.elapsed().as_secs_f64();
    ensure(d <= 1e-3 && secs <= 180.0, format!("relative L2 {d:.2e} <= 1e-3 in {secs:.1}s"))
}

fn line_identities() -> Outcome {
    let u0 = LineField::lorentzian(1.0).unwrap();
    let reports = check_line_identities(&u0, &LineGrid::default(), 0.5).map_err(|e| e.to_string())?;
    let all_pass = reports.iter().all(|r| r.passed);
    let mut orders = Vec::new();
    for identity in [LineIdentity::GD, LineIdentity::Toeplitz, LineIdentity::Lax, LineIdentity::Dissipative] {
        let rows = convergence_study(&StudyDescriptor::LineStep {
            u0: u0.clone(),
            identity,
            t: 0.5,
            cutoff: 40.0,
            steps: vec![0.04, 0.02, 0.01],
        })
        .map_err(|e| e.to_string())?;
        orders.extend(rows[1..].iter().map(|r| r.observed_order.unwrap()));
    }
    let in_range = orders.iter().all(|p| (1.7..=2.3).contains(p));
    ensure(all_pass && in_range, format!("checks pass: {all_pass}, orders {orders:.2?}"))
}

fn conservation() -> Outcome {
    let n = 128;
    let u0 = cos(n);
    let mut solver = PseudoSpectralSolver::new(SolverConfig::new(n, 2e-4)).map_err(|e| e.to_string())?;
    let u0 = solver.initial(&u0);
    let traj = solver.evolve(&u0, 1.0, 500).map_err(|e| e.to_string())?;
    let q0 = conserved_quantities(&u0);
    let (mut mean, mut l2, mut energy): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for u in &traj.snapshots {
        let q = conserved_quantities(u);
        mean = mean.max((q.mean - q0.mean).abs());
        l2 = l2.max((q.l2sq - q0.l2sq).abs() / q0.l2sq);
        energy = energy.max((q.energy - q0.energy).abs() / q0.energy.abs());
    }
    let shifted = TorusField::constant(n, 0.75).add_trig(1, 1.0, 0.0);
    let mut formula_mean: f64 = 0.0;
    for t in [0.1, 0.5, 1.0] {
        let c = evolve_coefficients(&propagator(&shifted, t, n).map_err(|e| e.to_string())?, n / 2).map_err(|e| e.to_string())?.coeffs[0];
        formula_mean = formula_mean.max((c - 0.75).norm());
    }
    let ok = mean <= 1e-12 && l2 <= 1e-9 && energy <= 1e-8 && formula_mean <= 1e-10;
    ensure(ok, format!("drifts mean {mean:.1e}, L2 {l2:.1e}, energy {energy:.1e}; formula mean {formula_mean:.1e}"))
}

fn cli_contract() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<i32, String> {
        let o = Command::new(env!("CARGO_BIN_EXE_boflow")).args(args).env_remove("BOX_THREADS").output().map_err(|e| e.to_string())?;
        o.status.code().ok_or_else(|| "killed by signal".to_string())
    };
    let dir = |name: &str| tmp.path().join(name).to_string_lossy().into_owned();
    let a = run(&["validate", "--out", &dir("a")])?;
    let b = run(&["validate", "--out", &dir("b")])?;
    let ra = fs::read(tmp.path().join("a/report.json")).map_err(|e| e.to_string())?;
    let rb = fs::read(tmp.path().join("b/report.json")).map_err(|e| e.to_string())?;
    let small = run(&["validate", "--only", "commutators", "--n", "16", "--out", &dir("c")])?;
    let cfg = tmp.path().join("strict.json");
    fs::write(&cfg, r#"{"schema_version": 1, "suite": {"lax": {"t": 0.2, "dt": 1e-3, "max_mode": 64, "solver_dt": 1e-4, "tolerance": 1e-12}}}"#)
        .map_err(|e| e.to_string())?;
    let failed = run(&["validate", "--config", cfg.to_str().unwrap(), "--only", "lax", "--out", &dir("d")])?;
    let ok = a == 0 && b == 0 && ra == rb && small == 2 && failed == 1;
    ensure(
        ok,
        format!("exit codes {a}/{b} (0), {small} (2 below margin), {failed} (1 on failed check); reports identical: {}", ra == rb),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("explicit formula vs solver, cos", formula_vs_solver_cos),
        ("linear phase law", linear_phase_law),
        ("exact commutators", commutators),
        ("Lax evolution and isospectrality", lax_and_isospectrality),
        ("line identity at t = 0", line_time_zero),
        ("line formula vs large box", line_against_box),
        ("line identities and orders", line_identities),
        ("conservation", conservation),
        ("determinism and exit codes", cli_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
