//! Pseudo-spectral reference solver for `∂_t u = ∂_x(|D|u − u²)` on the torus.
//!
//! Integrating-factor RK4: the linear part `i k|k|` is integrated exactly and
//! the quadratic term is formed on a grid of `2(N+1)` points with modes above
//! `⌊2N/3⌋` removed, which makes the product alias-free.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::line::field::LineField;
use crate::spectral::TorusField;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Magnitude beyond which a mode is treated as blown up.
const BLOW_UP_LEVEL: f64 = 1e100;

/// Nonlinear stability margin: `|dt|·k_cut·2‖u‖_∞ ≤ c_cfl`.
pub const DEFAULT_CFL: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_mode: usize,
    pub dt: f64,
    pub c_cfl: f64,
    /// Apply the 2/3 rule; off only for comparison runs.
    pub dealias: bool,
}

impl SolverConfig {
    pub fn new(max_mode: usize, dt: f64) -> Self {
        Self {
            max_mode,
            dt,
            c_cfl: DEFAULT_CFL,
            dealias: true,
        }
    }

    pub fn dealias_cut(&self) -> usize {
        if self.dealias {
            2 * self.max_mode / 3
        } else {
            self.max_mode
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub field: TorusField,
    pub dt: f64,
    pub max_mode: usize,
    pub dealias_cut: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<TorusField>,
    /// The step actually used, `T / ⌈T/dt⌉`.
    pub dt: f64,
}

impl Trajectory {
    pub fn last(&self) -> &TorusField {
        self.snapshots.last().expect("trajectory has at least one snapshot")
    }
}

/// Fixed-size transforms and integrating factors for one `(N, dt)`.
pub struct PseudoSpectralSolver {
    config: SolverConfig,
    grid: usize,
    cut: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

fn mode_of(index: usize, n: usize) -> i64 {
    if index <= n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}

impl PseudoSpectralSolver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        if config.max_mode < 1 {
            return Err(Error::Configuration("solver needs at least one mode".into()));
        }
        if !(config.dt.is_finite() && config.dt != 0.0) {
            return Err(Error::Configuration(format!("time step must be finite and nonzero, got {}", config.dt)));
        }
        if !(config.c_cfl > 0.0) {
            return Err(Error::Configuration(format!("c_cfl must be positive, got {}", config.c_cfl)));
        }
        let grid = 2 * (config.max_mode + 1);
        let mut planner = FftPlanner::new();
        Ok(Self {
            config,
            grid,
            cut: config.dealias_cut(),
            forward: planner.plan_fft_forward(grid),
            inverse: planner.plan_fft_inverse(grid),
            scratch: Vec::new(),
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn dealias_cut(&self) -> usize {
        self.cut
    }

    fn to_grid(&self, u: &TorusField) -> Vec<Complex64> {
        let n = self.config.max_mode as i64;
        let mut v = vec![ZERO; self.grid];
        for k in -n..=n {
            if k.unsigned_abs() as usize <= self.cut {
                v[k.rem_euclid(self.grid as i64) as usize] = u.coeff(k);
            }
        }
        v
    }

    fn from_grid(&self, v: &[Complex64]) -> TorusField {
        let n = self.config.max_mode;
        let coeffs = (-(n as i64)..=n as i64)
            .map(|k| v[k.rem_euclid(self.grid as i64) as usize])
            .collect();
        TorusField::from_coeffs_symmetrized(n, coeffs)
    }

    /// `dt · (−ik)·P_cut (u²)^` for coefficients `v` in FFT order.
    fn nonlinear(&mut self, v: &[Complex64], dt: f64) -> Vec<Complex64> {
        let n = self.grid;
        self.scratch.clear();
        self.scratch.extend_from_slice(v);
        self.inverse.process(&mut self.scratch);
        for x in self.scratch.iter_mut() {
            *x = Complex64::new(x.re * x.re, 0.0);
        }
        self.forward.process(&mut self.scratch);
        let scale = 1.0 / n as f64;
        (0..n)
            .map(|i| {
                let k = mode_of(i, n);
                if k.unsigned_abs() as usize > self.cut || 2 * i == n {
                    ZERO
                } else {
                    -I * (k as f64) * self.scratch[i] * (scale * dt)
                }
            })
            .collect()
    }

    fn factors(&self, dt: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.grid;
        let e: Vec<Complex64> = (0..n)
            .map(|i| {
                let k = mode_of(i, n) as f64;
                Complex64::from_polar(1.0, k * k.abs() * dt)
            })
            .collect();
        let e2 = (0..n)
            .map(|i| {
                let k = mode_of(i, n) as f64;
                Complex64::from_polar(1.0, 0.5 * k * k.abs() * dt)
            })
            .collect();
        (e, e2)
    }

    fn check_cfl(&self, u: &TorusField, dt: f64) -> Result<()> {
        let sup = u.samples(self.grid).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let number = dt.abs() * self.cut as f64 * 2.0 * sup;
        if number > self.config.c_cfl {
            return Err(Error::Configuration(format!(
                "time step {dt:.3e} violates the stability margin: |dt|·k_cut·2‖u‖∞ = {number:.3e} > {}",
                self.config.c_cfl
            )));
        }
        Ok(())
    }

    fn rk4(&mut self, v: &mut Vec<Complex64>, dt: f64, e: &[Complex64], e2: &[Complex64]) {
        let n = self.grid;
        let a = self.nonlinear(v, dt);
        let arg: Vec<Complex64> = (0..n).map(|i| e2[i] * (v[i] + 0.5 * a[i])).collect();
        let b = self.nonlinear(&arg, dt);
        let arg: Vec<Complex64> = (0..n).map(|i| e2[i] * v[i] + 0.5 * b[i]).collect();
        let c = self.nonlinear(&arg, dt);
        let arg: Vec<Complex64> = (0..n).map(|i| e[i] * v[i] + e2[i] * c[i]).collect();
        let d = self.nonlinear(&arg, dt);
        for i in 0..n {
            v[i] = e[i] * v[i] + (e[i] * a[i] + 2.0 * e2[i] * (b[i] + c[i]) + d[i]) / 6.0;
        }
        // Conjugate symmetry and the cut are restored exactly after each step.
        for i in 1..n / 2 {
            let avg = 0.5 * (v[i] + v[n - i].conj());
            v[i] = avg;
            v[n - i] = avg.conj();
        }
        v[0] = Complex64::new(v[0].re, 0.0);
        v[n / 2] = ZERO;
        for i in 0..n {
            if mode_of(i, n).unsigned_abs() as usize > self.cut {
                v[i] = ZERO;
            }
        }
    }

    fn blown_up(v: &[Complex64]) -> bool {
        v.iter().any(|x| !x.re.is_finite() || !x.im.is_finite() || x.norm() > BLOW_UP_LEVEL)
    }

    /// One step of size `config.dt`.
    pub fn step(&mut self, state: &SolverState) -> Result<SolverState> {
        let dt = self.config.dt;
        self.check_cfl(&state.field, dt)?;
        let (e, e2) = self.factors(dt);
        let mut v = self.to_grid(&state.field.with_max_mode(self.config.max_mode));
        self.rk4(&mut v, dt, &e, &e2);
        let t = state.t + dt;
        if Self::blown_up(&v) {
            return Err(Error::BlowUp { t });
        }
        Ok(SolverState {
            t,
            field: self.from_grid(&v),
            dt,
            max_mode: self.config.max_mode,
            dealias_cut: self.cut,
        })
    }

    /// Integrates from 0 to `t_end` (either sign) with `⌈|t_end|/|dt|⌉` equal
    /// steps, keeping every `snapshot_every`-th state and the final one.
    pub fn evolve(&mut self, u0: &TorusField, t_end: f64, snapshot_every: usize) -> Result<Trajectory> {
        if !t_end.is_finite() {
            return Err(Error::Configuration(format!("final time must be finite, got {t_end}")));
        }
        let u0 = self.initial(u0);
        let steps = (t_end.abs() / self.config.dt.abs()).ceil() as usize;
        if steps == 0 {
            return Ok(Trajectory {
                times: vec![0.0],
                snapshots: vec![u0],
                dt: 0.0,
            });
        }
        let dt = t_end / steps as f64;
        self.check_cfl(&u0, dt)?;
        let (e, e2) = self.factors(dt);
        let every = snapshot_every.max(1);
        let mut v = self.to_grid(&u0);
        let mut times = vec![0.0];
        let mut snapshots = vec![u0];
        for s in 1..=steps {
            self.rk4(&mut v, dt, &e, &e2);
            if Self::blown_up(&v) {
                return Err(Error::BlowUp { t: s as f64 * dt });
            }
            if s % every == 0 || s == steps {
                times.push(if s == steps { t_end } else { s as f64 * dt });
                snapshots.push(self.from_grid(&v));
            }
        }
        Ok(Trajectory { times, snapshots, dt })
    }

    /// Truncates to the solver's modes and applies the cut.
    pub fn initial(&self, u0: &TorusField) -> TorusField {
        let v = self.to_grid(&u0.with_max_mode(self.config.max_mode));
        self.from_grid(&v)
    }

    /// The dealiased pseudo-spectral product `P_cut(uv)`, exposed for tests.
    pub fn product(&self, u: &TorusField, w: &TorusField) -> TorusField {
        let n = self.grid;
        let mut a = self.to_grid(&u.with_max_mode(self.config.max_mode));
        let mut b = self.to_grid(&w.with_max_mode(self.config.max_mode));
        self.inverse.process(&mut a);
        self.inverse.process(&mut b);
        let mut p: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| Complex64::new(x.re * y.re, 0.0)).collect();
        self.forward.process(&mut p);
        let scale = 1.0 / n as f64;
        for (i, x) in p.iter_mut().enumerate() {
            if mode_of(i, n).unsigned_abs() as usize > self.cut || 2 * i == n {
                *x = ZERO;
            } else {
                *x *= scale;
            }
        }
        self.from_grid(&p)
    }
}

/// Convenience wrapper around [`PseudoSpectralSolver::evolve`].
pub fn evolve(u0: &TorusField, t_end: f64, dt: f64, max_mode: usize, snapshot_every: usize) -> Result<Trajectory> {
    PseudoSpectralSolver::new(SolverConfig::new(max_mode, dt))?.evolve(u0, t_end, snapshot_every)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedQuantities {
    pub mean: f64,
    pub l2sq: f64,
    pub energy: f64,
}

/// Mean, `Σ|c_k|²` and `½Σ|k||c_k|² − ⅓⟨u³⟩` under the normalized measure.
pub fn conserved_quantities(u: &TorusField) -> ConservedQuantities {
    let n = u.max_mode();
    let mut kinetic = 0.0;
    for k in -(n as i64)..=n as i64 {
        kinetic += 0.5 * k.unsigned_abs() as f64 * u.coeff(k).norm_sqr();
    }
    // 3N + 1 points integrate the cubic exactly.
    let samples = u.samples(3 * n + 1);
    let cubic = samples.iter().map(|x| x * x * x).sum::<f64>() / samples.len() as f64;
    ConservedQuantities {
        mean: u.mean(),
        l2sq: u.l2_squared(),
        energy: kinetic - cubic / 3.0,
    }
}

/// The line problem realized on the periodic box `[−X, X]`.
///
/// With `s = X/π`, `v(τ, y) = s·u(s²τ, sy)` solves the same equation on
/// `[−π, π]`. The periodization of `u₀` has coefficients `û₀(k/s)/2π`
/// by Poisson summation, so no sampling of the datum is needed.
pub struct LineBoxReference {
    scale: f64,
    t: f64,
    field: TorusField,
    dt: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineBoxConfig {
    pub half_width: f64,
    pub max_mode: usize,
    /// Step in the box time `τ = t/s²`; `None` picks the largest stable step
    /// at half the stability margin.
    pub dt: Option<f64>,
}

impl Default for LineBoxConfig {
    fn default() -> Self {
        Self {
            half_width: 120.0,
            max_mode: 2047,
            dt: None,
        }
    }
}

impl LineBoxReference {
    pub fn run(u0: &LineField, t: f64, config: &LineBoxConfig) -> Result<Self> {
        if !(config.half_width > 0.0) {
            return Err(Error::Configuration(format!(
                "box half-width must be positive, got {}",
                config.half_width
            )));
        }
        let s = config.half_width / PI;
        let n = config.max_mode;
        let positive: Vec<Complex64> = (0..=n).map(|k| u0.transform(k as f64 / s) / (2.0 * PI)).collect();
        let v0 = TorusField::from_positive_modes(&positive)?;
        let tau = t / (s * s);
        let cut = (2 * n / 3) as f64;
        let sup = v0.samples(2 * (n + 1)).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let dt = match config.dt {
            Some(dt) => dt,
            None if sup > 0.0 => 0.5 * DEFAULT_CFL / (cut * 2.0 * sup),
            None => 1.0,
        };
        let traj = if tau == 0.0 {
            Trajectory {
                times: vec![0.0],
                snapshots: vec![v0],
                dt: 0.0,
            }
        } else {
            evolve(&v0, tau, dt, n, usize::MAX)?
        };
        Ok(Self {
            scale: s,
            t,
            field: traj.last().clone(),
            dt: traj.dt,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The box step actually used.
    pub fn box_dt(&self) -> f64 {
        self.dt
    }

    /// `u(t, x) = v(τ, x/s)/s` by direct summation of the Fourier series.
    pub fn value(&self, x: f64) -> f64 {
        let y = x / self.scale;
        let n = self.field.max_mode() as i64;
        let mut acc = self.field.coeff(0).re;
        for k in 1..=n {
            acc += 2.0 * (self.field.coeff(k) * Complex64::from_polar(1.0, k as f64 * y)).re;
        }
        acc / self.scale
    }

    pub fn values(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.value(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos(n: usize, a: f64) -> TorusField {
        TorusField::zero(n).add_trig(1, a, 0.0)
    }

    #[test]
    fn zero_and_constant_are_stationary() {
        for u in [TorusField::zero(16), TorusField::constant(16, 1.5)] {
            let tr = evolve(&u, 0.3, 1e-3, 16, 100).unwrap();
            let end = tr.last();
            for k in -16..=16 {
                assert!((end.coeff(k) - u.coeff(k)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_time_returns_datum() {
        let u = cos(8, 1.0);
        let tr = evolve(&u, 0.0, 1e-3, 8, 1).unwrap();
        assert_eq!(tr.snapshots.len(), 1);
        assert_eq!(tr.snapshots[0], u);
    }

    #[test]
    fn small_amplitude_phase_law() {
        let a = 1e-3;
        let u = cos(16, 2.0 * a);
        let tr = evolve(&u, 1.0, 1e-3, 16, usize::MAX).unwrap();
        let ratio = tr.last().coeff(1) / u.coeff(1);
        assert!((ratio - Complex64::from_polar(1.0, 1.0)).norm() < 10.0 * a);
    }

    #[test]
    fn step_count_rounds_up() {
        let tr = evolve(&cos(8, 1.0), 0.25, 0.1, 8, 1).unwrap();
        assert_eq!(tr.times.len(), 4);
        assert!((tr.dt - 0.25 / 3.0).abs() < 1e-15);
        assert_eq!(*tr.times.last().unwrap(), 0.25);
    }

    #[test]
    fn cfl_violation_rejected() {
        let err = evolve(&cos(64, 1.0), 1.0, 0.1, 64, 1).unwrap_err();
        assert!(matches!(err, Error::Configuration(_)));
    }

    #[test]
    fn modes_above_cut_stay_zero() {
        let u = cos(12, 1.0).add_trig(3, 0.3, 0.2);
        let tr = evolve(&u, 0.2, 1e-3, 12, 10).unwrap();
        for snap in &tr.snapshots {
            for k in 9..=12 {
                assert_eq!(snap.coeff(k), ZERO);
            }
            assert!(snap.symmetry_defect() == 0.0);
        }
    }

    #[test]
    fn conserved_quantities_examples() {
        let q = conserved_quantities(&cos(4, 2.0));
        assert!(q.mean.abs() < 1e-15);
        assert!((q.l2sq - 2.0).abs() < 1e-14);
        let c = 1.3;
        let q = conserved_quantities(&TorusField::constant(4, c));
        assert!((q.mean - c).abs() < 1e-15);
        assert!((q.l2sq - c * c).abs() < 1e-14);
        assert!((q.energy + c * c * c / 3.0).abs() < 1e-14);
    }

    #[test]
    fn dealiased_product_is_exact_for_band_limited_input() {
        // Inputs with |k| ≤ N/3 have a product with |k| ≤ 2N/3 that the cut keeps.
        let n = 30;
        let u = TorusField::zero(n).add_trig(1, 0.7, -0.2).add_trig(10, 0.3, 0.4);
        let w = TorusField::constant(n, 0.5).add_trig(4, -0.1, 0.9).add_trig(9, 0.2, 0.0);
        let solver = PseudoSpectralSolver::new(SolverConfig::new(n, 1e-3)).unwrap();
        let p = solver.product(&u, &w);
        for k in -(n as i64)..=n as i64 {
            let mut exact = ZERO;
            for j in -(n as i64)..=n as i64 {
                if (k - j).abs() <= n as i64 {
                    exact += u.coeff(j) * w.coeff(k - j);
                }
            }
            assert!((p.coeff(k) - exact).norm() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn dealiasing_changes_one_step_only_at_second_order_in_dt() {
        // For |k| ≤ N/3 the first stage product is exact; later stages see
        // modes above N/3, so the cut acts at O(dt²) within a step.
        let n = 48;
        let u = TorusField::zero(n).add_trig(1, 0.5, 0.1).add_trig(16, 0.2, -0.3);
        let gap = |dt: f64| {
            let [a, b] = [true, false].map(|dealias| {
                let mut cfg = SolverConfig::new(n, dt);
                cfg.dealias = dealias;
                let mut solver = PseudoSpectralSolver::new(cfg).unwrap();
                let state = SolverState {
                    t: 0.0,
                    field: u.clone(),
                    dt,
                    max_mode: n,
                    dealias_cut: solver.dealias_cut(),
                };
                solver.step(&state).unwrap().field
            });
            (-(n as i64)..=n as i64).fold(0.0f64, |m, k| m.max((a.coeff(k) - b.coeff(k)).norm()))
        };
        let (g1, g2) = (gap(1e-3), gap(5e-4));
        assert!(g1 / g2 >= 3.5, "{g1:.3e} → {g2:.3e}");
    }
}
