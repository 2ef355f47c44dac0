use boflow::presets::Preset;
use boflow::solver::{conserved_quantities, evolve, PseudoSpectralSolver, SolverConfig};
use boflow::spectral::TorusField;
use boflow::torus::{evaluate_disc, evolve_coefficients, propagator, reconstruct_torus};
use boflow::validation::{random_band_limited, relative_l2};
use num_complex::Complex64;
use proptest::prelude::*;

fn cos(n: usize) -> TorusField {
    TorusField::zero(n).add_trig(1, 1.0, 0.0)
}

fn explicit_field(u0: &TorusField, t: f64, n: usize) -> TorusField {
    evolve_coefficients(&propagator(u0, t, n).unwrap(), n).unwrap().to_field().unwrap()
}

fn solver_field(u0: &TorusField, t: f64, dt: f64, n: usize) -> TorusField {
    evolve(u0, t, dt, n, usize::MAX).unwrap().last().clone()
}

#[test]
fn linear_phase_law_remainder_is_at_least_quadratic() {
    // û(t,k) = a e^{ik²t} + O(a²) for u₀ = 2a cos kx.
    for k in 1..=3usize {
        let remainder = |a: f64| {
            let u0 = TorusField::zero(32).add_trig(k, 2.0 * a, 0.0);
            let c = evolve_coefficients(&propagator(&u0, 1.0, 32).unwrap(), 16).unwrap().coeffs[k];
            (c - a * Complex64::from_polar(1.0, (k * k) as f64)).norm()
        };
        let (r1, r2) = (remainder(1e-3), remainder(5e-4));
        assert!(r1 <= 10.0 * 1e-6, "k = {k}: remainder {r1:.3e}");
        // Quadratic interactions of a single mode land in modes 0 and 2k, so
        // the remainder at mode k is in fact cubic: the ratio is 8, not 4.
        let ratio = r1 / r2;
        assert!((3.5..=8.5).contains(&ratio), "k = {k}: halving a shrank the remainder by {ratio:.3}");
    }
}

#[test]
fn mean_is_conserved_by_the_formula() {
    let u0 = TorusField::constant(64, 0.75).add_trig(1, 1.0, 0.3).add_trig(3, -0.2, 0.1);
    for t in [0.1, 0.5, 1.0, 2.0] {
        let e = evolve_coefficients(&propagator(&u0, t, 64).unwrap(), 32).unwrap();
        assert!((e.coeffs[0] - Complex64::new(0.75, 0.0)).norm() <= 1e-10, "t = {t}");
    }
}

#[test]
fn l2_norm_is_conserved_by_the_formula() {
    let u0 = cos(128);
    let initial = u0.l2_squared();
    for t in [0.25, 0.5, 1.0] {
        let e = evolve_coefficients(&propagator(&u0, t, 128).unwrap(), 128).unwrap();
        let l2 = e.coeffs[0].norm_sqr() + 2.0 * e.coeffs[1..].iter().map(|c| c.norm_sqr()).sum::<f64>();
        assert!((l2 - initial).abs() <= 1e-6, "t = {t}: {l2} vs {initial}");
    }
}

#[test]
fn disc_resolvent_matches_power_series() {
    let u0 = TorusField::constant(48, 0.2).add_trig(1, 1.0, 0.0).add_trig(2, 0.0, 0.5);
    let p = propagator(&u0, 0.4, 48).unwrap();
    let k = 40;
    let coeffs = evolve_coefficients(&p, k).unwrap().coeffs;
    let norm = p.initial_projection().norm();
    for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.45)] {
        let series: Complex64 = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        let bound = 2.0 * 0.5f64.powi(k as i32 + 1) * norm;
        let got = evaluate_disc(&p, z).unwrap();
        assert!((got - series).norm() <= bound, "z = {z}: {:.3e} > {bound:.3e}", (got - series).norm());
    }
}

#[test]
fn reconstruction_is_the_synthesis_of_the_coefficients() {
    let u0 = cos(64);
    let p = propagator(&u0, 0.3, 64).unwrap();
    let samples = reconstruct_torus(&p, 32, 64).unwrap();
    let field = evolve_coefficients(&p, 32).unwrap().to_field().unwrap();
    for (a, b) in samples.iter().zip(field.samples(64)) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn formula_matches_solver_for_cos() {
    let u0 = cos(128);
    let d = relative_l2(&explicit_field(&u0, 0.5, 128), &solver_field(&u0, 0.5, 2e-4, 128));
    assert!(d <= 1e-6, "relative L² {d:.3e}");
}

#[test]
fn time_composition_against_solver() {
    let u0 = cos(128);
    let (t1, t2) = (0.3, 0.4);
    let mid = explicit_field(&u0, t1, 128);
    let restarted = solver_field(&mid, t2, 2e-4, 128);
    let direct = explicit_field(&u0, t1 + t2, 128);
    let d = relative_l2(&restarted, &direct);
    assert!(d <= 1e-6, "relative L² {d:.3e}");
}

#[test]
fn solver_time_reversal() {
    let u0 = cos(128);
    let forward = solver_field(&u0, 0.5, 2e-4, 128);
    let back = solver_field(&forward, -0.5, 2e-4, 128);
    let d = relative_l2(&back, &u0);
    assert!(d <= 1e-8, "relative L² {d:.3e}");
}

#[test]
fn rk4_temporal_order() {
    let u0 = cos(64);
    let t = 0.5;
    let reference = solver_field(&u0, t, 0.01 / 8.0, 64);
    let err = |dt: f64| relative_l2(&solver_field(&u0, t, dt, 64), &reference);
    let (e1, e2) = (err(0.01), err(0.005));
    let order = (e1 / e2).log2();
    assert!((3.7..=4.3).contains(&order), "errors {e1:.3e}, {e2:.3e}: order {order:.3}");
}

#[test]
fn conservation_drifts_across_presets() {
    let n = 128;
    let data = [
        ("cos", Preset::parse("cos").unwrap().torus_field(n).unwrap()),
        ("twomode", Preset::parse("twomode").unwrap().torus_field(n).unwrap()),
        ("constant", Preset::parse("constant:c=1.5").unwrap().torus_field(n).unwrap()),
        ("gaussian", Preset::parse("gaussian:a=1,w=1").unwrap().torus_field(n).unwrap()),
        ("lorentzian", Preset::parse("lorentzian:c=1").unwrap().torus_field(n).unwrap()),
        ("random", random_band_limited(n, 4, 11)),
    ];
    for (name, u0) in data {
        let mut solver = PseudoSpectralSolver::new(SolverConfig::new(n, 2e-4)).unwrap();
        let u0 = solver.initial(&u0);
        let traj = solver.evolve(&u0, 1.0, 500).unwrap();
        let q0 = conserved_quantities(&u0);
        for u in &traj.snapshots {
            let q = conserved_quantities(u);
            assert!((q.mean - q0.mean).abs() <= 1e-12, "{name}: mean drift");
            assert!((q.l2sq - q0.l2sq).abs() <= 1e-9 * q0.l2sq, "{name}: L² drift");
            let scale = q0.energy.abs().max(f64::MIN_POSITIVE);
            assert!((q.energy - q0.energy).abs() <= 1e-8 * scale, "{name}: energy drift {} vs {}", q.energy, q0.energy);
        }
    }
}

#[test]
fn formula_vs_solver_gap_shrinks_with_n() {
    let t = 0.5;
    let gaps: Vec<f64> = [16, 32, 64, 128]
        .iter()
        .map(|&n| {
            let u0 = cos(n);
            relative_l2(&explicit_field(&u0, t, n), &solver_field(&u0, t, 2e-4, n))
        })
        .collect();
    for w in gaps.windows(2) {
        // Non-increasing up to the solver floor.
        assert!(w[1] <= w[0].max(1e-11), "{gaps:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn propagator_is_a_partial_isometry(seed in 0u64..1000, t in -1.0..1.0f64) {
        let u0 = random_band_limited(24, 3, seed);
        let p = propagator(&u0, t, 24).unwrap();
        let v: Vec<Complex64> = (0..25).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let mv = p.apply(&v);
        let norm = |x: &[Complex64]| x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        // ‖Mv‖ = ‖S*v‖ = ‖v without its first entry‖.
        prop_assert!((norm(&mv) - norm(&v[1..])).abs() <= 1e-10);
    }

    #[test]
    fn zero_time_reproduces_random_data(seed in 0u64..1000) {
        let u0 = random_band_limited(32, 4, seed);
        let e = evolve_coefficients(&propagator(&u0, 0.0, 32).unwrap(), 16).unwrap();
        for k in 0..=16 {
            prop_assert!((e.coeffs[k] - u0.coeff(k as i64)).norm() <= 1e-10);
        }
    }
}
