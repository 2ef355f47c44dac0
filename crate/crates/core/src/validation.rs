//! Executable checks of the operator identities behind the explicit formulas.
//!
//! Torus identities hold exactly on finite sections away from the truncation
//! edge, so they are checked at rounding level. Line identities are checked
//! asymptotically: residuals are `O(h²)` and tolerances are `C·h²`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::line::field::{LineField, LineGrid};
use crate::line::operators::{GOperator, LineB, LineLax, LineToeplitz};
use crate::solver::{PseudoSpectralSolver, SolverConfig};
use crate::spectral::{project_hardy, EigenSystem, TorusField};
use crate::torus::{b_matrix, derivative_matrix, evolve_coefficients, lax_matrix, propagator, shift_adjoint, toeplitz_matrix};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance for identities that hold exactly on finite sections.
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Exact on the margin, up to rounding.
    Exact,
    /// Discretization error vanishing under refinement.
    Asymptotic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub group: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub regime: Regime,
    pub parameters: BTreeMap<String, f64>,
}

impl CheckReport {
    fn new(name: &str, group: &str, residual: f64, tolerance: f64, regime: Regime, parameters: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_string(),
            group: group.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            regime,
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

// ---------------------------------------------------------------- torus

fn commutator_margin(u: &TorusField, n: usize) -> Result<usize> {
    let m = u.band_limit().max(1);
    if n < 8 * m {
        return Err(Error::Configuration(format!(
            "finite-section checks for band limit {m} need N ≥ {}, got N = {n}",
            8 * m
        )));
    }
    Ok(m)
}

/// `(D + I)²S* − S*D²` evaluated in integer arithmetic, plus the remaining
/// terms of `(L + I)²S* − S*L²` with `L = D − T`.
fn shift_lax_rhs(t: &CMatrix, d: &CMatrix, s: &CMatrix) -> CMatrix {
    let n = d.rows();
    let one = CMatrix::identity(n);
    let dp = d.add(&one);
    let poly = dp.matmul(&dp).matmul(s).sub(&s.matmul(&d.matmul(d)));
    let cross_left = dp.matmul(t).add(&t.matmul(&dp)).sub(&t.matmul(t)).matmul(s);
    let cross_right = s.matmul(&d.matmul(t).add(&t.matmul(d)).sub(&t.matmul(t)));
    poly.sub(&cross_left).add(&cross_right).scale(I)
}

/// Leibniz rule, Toeplitz–shift commutator and `[S*, B_u]` on margin columns.
pub fn check_torus_commutators(u: &TorusField, n: usize) -> Result<Vec<CheckReport>> {
    let m = commutator_margin(u, n)?;
    let params = [("n", n as f64), ("margin", m as f64)];
    let cols = || 2 * m..=n - 2 * m;

    let s = shift_adjoint(n).into_matrix();
    let d = derivative_matrix(n).into_matrix();
    let leibniz = s.matmul(&d).max_abs_diff(&d.matmul(&s).add(&s));

    // [S*, T_b] = ⟨·|1⟩ S*Πb: only column 0 of the right side is nonzero.
    let t = toeplitz_matrix(u, n).into_matrix();
    let lhs = s.matmul(&t).sub(&t.matmul(&s));
    let p = project_hardy(&u.with_max_mode(n))?;
    let sp = s.matvec(&p.coeffs()[..n + 1]);
    let rhs = CMatrix::from_fn(n + 1, n + 1, |j, k| if k == 0 { sp[j] } else { Complex64::new(0.0, 0.0) });
    let shift_comm = lhs.max_abs_diff_on_columns(&rhs, std::iter::once(0).chain(cols()));

    let b = b_matrix(u, n)?.into_matrix();
    let lhs = s.matmul(&b).sub(&b.matmul(&s));
    let rhs = shift_lax_rhs(&t, &d, &s);
    let shift_lax = lhs.max_abs_diff_on_columns(&rhs, cols());

    Ok(vec![
        CheckReport::new("leibniz", "commutators", leibniz, EXACT_TOLERANCE, Regime::Exact, &params),
        CheckReport::new("toeplitz_shift", "commutators", shift_comm, EXACT_TOLERANCE, Regime::Exact, &params),
        CheckReport::new("shift_lax_commutator", "commutators", shift_lax, EXACT_TOLERANCE, Regime::Exact, &params),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaxCheckParams {
    pub t: f64,
    /// Finite-difference step.
    pub dt: f64,
    pub max_mode: usize,
    /// Reference solver step.
    pub solver_dt: f64,
    pub tolerance: f64,
}

impl Default for LaxCheckParams {
    fn default() -> Self {
        Self {
            t: 0.2,
            dt: 1e-3,
            max_mode: 128,
            solver_dt: 1e-4,
            tolerance: 1e-4,
        }
    }
}

fn advance(solver: &mut PseudoSpectralSolver, u: &TorusField, span: f64) -> Result<TorusField> {
    Ok(solver.evolve(u, span, usize::MAX)?.last().clone())
}

/// Residual of the central-difference Lax equation on the block of modes `≤ N/2`.
pub fn lax_evolution_residual(u0: &TorusField, p: &LaxCheckParams) -> Result<f64> {
    if !(p.dt > 0.0 && p.t >= p.dt) {
        return Err(Error::Configuration(format!(
            "Lax check needs 0 < dt ≤ t, got dt = {}, t = {}",
            p.dt, p.t
        )));
    }
    let n = p.max_mode;
    let mut solver = PseudoSpectralSolver::new(SolverConfig::new(n, p.solver_dt))?;
    let u0 = solver.initial(u0);
    let before = advance(&mut solver, &u0, p.t - p.dt)?;
    let now = advance(&mut solver, &before, p.dt)?;
    let after = advance(&mut solver, &now, p.dt)?;

    let lm = lax_matrix(&before, n)?.into_matrix();
    let lp = lax_matrix(&after, n)?.into_matrix();
    let l = lax_matrix(&now, n)?.into_matrix();
    let b = b_matrix(&now, n)?.into_matrix();
    let derivative = lp.sub(&lm).scale(Complex64::new(0.5 / p.dt, 0.0));
    let comm = b.commutator(&l);
    let block = n / 2;
    let mut worst = 0.0f64;
    for j in 0..=block {
        for k in 0..=block {
            worst = worst.max((derivative[(j, k)] - comm[(j, k)]).norm());
        }
    }
    Ok(worst)
}

pub fn check_lax_evolution(u0: &TorusField, p: &LaxCheckParams) -> Result<CheckReport> {
    let r = lax_evolution_residual(u0, p)?;
    Ok(CheckReport::new(
        "lax_evolution",
        "lax",
        r,
        p.tolerance,
        Regime::Asymptotic,
        &[("n", p.max_mode as f64), ("t", p.t), ("dt", p.dt), ("margin", (p.max_mode / 2) as f64)],
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsospectralityParams {
    pub times: Vec<f64>,
    pub max_mode: usize,
    pub n_eigs: usize,
    pub solver_dt: f64,
    pub tolerance: f64,
}

impl Default for IsospectralityParams {
    fn default() -> Self {
        Self {
            times: vec![0.25, 0.5, 0.75, 1.0],
            max_mode: 256,
            n_eigs: 10,
            solver_dt: 2e-4,
            tolerance: 1e-6,
        }
    }
}

fn lowest_eigenvalues(u: &TorusField, n: usize, count: usize) -> Result<Vec<f64>> {
    let eig = EigenSystem::new(&lax_matrix(u, n)?)?;
    Ok(eig.eigenvalues().iter().take(count).copied().collect())
}

pub fn check_isospectrality(u0: &TorusField, p: &IsospectralityParams) -> Result<CheckReport> {
    let n = p.max_mode;
    if p.n_eigs == 0 || p.n_eigs > n + 1 {
        return Err(Error::Configuration(format!("n_eigs must lie in 1..={}, got {}", n + 1, p.n_eigs)));
    }
    let mut solver = PseudoSpectralSolver::new(SolverConfig::new(n, p.solver_dt))?;
    let mut current = solver.initial(u0);
    let reference = lowest_eigenvalues(&current, n, p.n_eigs)?;
    let mut clock = 0.0;
    let mut worst = 0.0f64;
    let mut sorted = p.times.clone();
    sorted.sort_by(f64::total_cmp);
    for &t in &sorted {
        if t > clock {
            current = advance(&mut solver, &current, t - clock)?;
            clock = t;
        }
        let now = lowest_eigenvalues(&current, n, p.n_eigs)?;
        for (a, b) in now.iter().zip(&reference) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(CheckReport::new(
        "isospectrality",
        "isospectrality",
        worst,
        p.tolerance,
        Regime::Asymptotic,
        &[
            ("n", n as f64),
            ("n_eigs", p.n_eigs as f64),
            ("t_max", sorted.last().copied().unwrap_or(0.0)),
            ("dt", p.solver_dt),
        ],
    ))
}

// ---------------------------------------------------------------- line

/// Calibrated constants `C` in the tolerances `C·h²` of the line checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineTolerances {
    pub g_d: f64,
    pub toeplitz: f64,
    pub lax: f64,
    pub dissipative: f64,
}

impl Default for LineTolerances {
    fn default() -> Self {
        Self {
            g_d: 2.0,
            toeplitz: 2.0,
            lax: 50.0,
            dissipative: 0.05,
        }
    }
}

/// Residuals of the four line identities at one grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineResiduals {
    pub g_d: f64,
    pub toeplitz: f64,
    pub lax: f64,
    pub dissipative: f64,
}

fn on_grid(grid: &LineGrid, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    grid.nodes().into_iter().map(f).collect()
}

/// `e^{−(ξ−10)²}`: spectrum well inside `(0, Ξ)`.
fn bump(xi: f64) -> Complex64 {
    Complex64::new((-(xi - 10.0) * (xi - 10.0)).exp(), 0.0)
}

/// A vector with `f̂(0) ≠ 0`, so boundary terms are exercised.
fn boundary_probe(xi: f64) -> Complex64 {
    Complex64::new(1.0, 0.5 * xi) * (-(xi - 1.0) * (xi - 1.0)).exp()
}

fn interior_max(v: &[Complex64]) -> f64 {
    v[1..v.len() - 1].iter().fold(0.0f64, |m, x| m.max(x.norm()))
}

fn check_tails(grid: &LineGrid, vectors: &[&[Complex64]]) -> Result<()> {
    for v in vectors {
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.norm()));
        let tail = v[v.len() - 1].norm().max(v[v.len() - 2].norm());
        if tail > 1e-10 * peak {
            return Err(Error::Configuration(format!(
                "test vector not resolved at cutoff {}: tail {tail:.2e}",
                grid.cutoff()
            )));
        }
    }
    Ok(())
}

fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn line_identity_residuals(u0: &LineField, grid: &LineGrid, t: f64) -> Result<LineResiduals> {
    grid.require_resolving()?;
    let g = GOperator::new(*grid);
    let nodes = grid.nodes();
    let f = on_grid(grid, bump);
    let q = on_grid(grid, boundary_probe);
    check_tails(grid, &[&f, &q])?;

    // [G, D] f = i f.
    let xf: Vec<Complex64> = f.iter().zip(&nodes).map(|(v, x)| v * x).collect();
    let gf = g.apply(&f);
    let xgf: Vec<Complex64> = gf.iter().zip(&nodes).map(|(v, x)| v * x).collect();
    let r = sub(&sub(&g.apply(&xf), &xgf), &f.iter().map(|v| I * v).collect::<Vec<_>>());
    let g_d = interior_max(&r);

    // [G, T_b] f = (i/2π) f̂(0) Πb, on both test vectors.
    let t_b = LineToeplitz::of_field(u0, *grid);
    let mut toeplitz = 0.0f64;
    for v in [&f, &q] {
        let lhs = sub(&g.apply(&t_b.apply(v)), &t_b.apply(&g.apply(v)));
        let rhs: Vec<Complex64> = nodes.iter().map(|&x| I / (2.0 * PI) * v[0] * u0.transform(x)).collect();
        toeplitz = toeplitz.max(interior_max(&sub(&lhs, &rhs)));
    }

    // [G, B] f = −2L f + i[L², G] f.
    let l = LineLax::new(u0, *grid);
    let b = LineB::new(u0, *grid);
    let gbf = g.apply(&b.apply(&f));
    let bgf = b.apply(&gf);
    let lf = l.apply(&f);
    let llgf = l.apply(&l.apply(&gf));
    let gllf = g.apply(&l.apply(&lf));
    let r: Vec<Complex64> = (0..f.len())
        .map(|j| gbf[j] - bgf[j] + 2.0 * lf[j] - I * (llgf[j] - gllf[j]))
        .collect();
    let lax = interior_max(&r);

    // Re⟨A_t f|f⟩ = −|f̂(0)|²/4π for A_t = −i(G − 2tD) = e^{−itξ²} d/dξ e^{itξ²},
    // with the closure ĝ(Ξ) = 0 and trapezoid weights.
    let gauge: Vec<Complex64> = nodes.iter().map(|&x| Complex64::from_polar(1.0, t * x * x)).collect();
    let mut gq: Vec<Complex64> = q.iter().zip(&gauge).map(|(v, p)| v * p).collect();
    let last = gq.len() - 1;
    gq[last] = Complex64::new(0.0, 0.0);
    let dg = g.apply(&gq);
    let weights = grid.weights();
    let mut pairing = Complex64::new(0.0, 0.0);
    for j in 0..last {
        // −i·G = d/dξ on the gauged vector; ⟨·|·⟩ is gauge invariant.
        pairing += -I * dg[j] * gq[j].conj() * weights[j];
    }
    let value = pairing.re / (2.0 * PI);
    let dissipative = (value + q[0].norm_sqr() / (4.0 * PI)).abs();

    Ok(LineResiduals {
        g_d,
        toeplitz,
        lax,
        dissipative,
    })
}

pub fn check_line_identities_with(
    u0: &LineField,
    grid: &LineGrid,
    t: f64,
    tol: &LineTolerances,
) -> Result<Vec<CheckReport>> {
    let r = line_identity_residuals(u0, grid, t)?;
    let h2 = grid.step() * grid.step();
    let params = |c: f64| vec![("h", grid.step()), ("cutoff", grid.cutoff()), ("t", t), ("c", c)];
    Ok(vec![
        CheckReport::new("line_g_d", "line", r.g_d, tol.g_d * h2, Regime::Asymptotic, &params(tol.g_d)),
        CheckReport::new(
            "line_toeplitz_commutator",
            "line",
            r.toeplitz,
            tol.toeplitz * h2,
            Regime::Asymptotic,
            &params(tol.toeplitz),
        ),
        CheckReport::new("line_lax_commutator", "line", r.lax, tol.lax * h2, Regime::Asymptotic, &params(tol.lax)),
        CheckReport::new(
            "line_dissipative",
            "line",
            r.dissipative,
            tol.dissipative * h2,
            Regime::Asymptotic,
            &params(tol.dissipative),
        ),
    ])
}

pub fn check_line_identities(u0: &LineField, grid: &LineGrid, t: f64) -> Result<Vec<CheckReport>> {
    check_line_identities_with(u0, grid, t, &LineTolerances::default())
}

// ---------------------------------------------------------------- studies

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineIdentity {
    GD,
    Toeplitz,
    Lax,
    Dissipative,
}

impl LineIdentity {
    fn pick(self, r: &LineResiduals) -> f64 {
        match self {
            LineIdentity::GD => r.g_d,
            LineIdentity::Toeplitz => r.toeplitz,
            LineIdentity::Lax => r.lax,
            LineIdentity::Dissipative => r.dissipative,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "study", rename_all = "snake_case")]
pub enum StudyDescriptor {
    /// Refine the finite-difference step of the Lax check.
    LaxDt { u0: TorusField, base: LaxCheckParams, dts: Vec<f64> },
    /// Refine the frequency step of one line identity.
    LineStep {
        u0: LineField,
        identity: LineIdentity,
        t: f64,
        cutoff: f64,
        steps: Vec<f64>,
    },
    /// Relative L² gap between the explicit formula and the solver as `N` grows.
    FormulaVsSolver { u0: TorusField, t: f64, dt: f64, modes: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub level: usize,
    pub parameter: f64,
    pub residual: f64,
    /// `log₂(res_{i−1}/res_i)`, scaled by the refinement ratio when it is not 2.
    pub observed_order: Option<f64>,
}

fn with_orders(levels: Vec<(f64, f64)>) -> Vec<StudyRow> {
    let mut rows = Vec::with_capacity(levels.len());
    for (i, &(p, r)) in levels.iter().enumerate() {
        let observed_order = (i > 0).then(|| {
            let (p0, r0) = levels[i - 1];
            (r0 / r).ln() / (p0 / p).ln()
        });
        rows.push(StudyRow {
            level: i,
            parameter: p,
            residual: r,
            observed_order,
        });
    }
    rows
}

/// Relative `ℓ²` distance of two coefficient sets over the modes of `b`.
pub fn relative_l2(a: &TorusField, b: &TorusField) -> f64 {
    let n = a.max_mode().max(b.max_mode()) as i64;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in -n..=n {
        num += (a.coeff(k) - b.coeff(k)).norm_sqr();
        den += b.coeff(k).norm_sqr();
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}

/// Explicit-formula field and solver field at `t`, both with `N` modes.
pub fn formula_vs_solver(u0: &TorusField, t: f64, dt: f64, n: usize) -> Result<(TorusField, TorusField, f64)> {
    let explicit = evolve_coefficients(&propagator(&u0.with_max_mode(n), t, n)?, n)?.to_field()?;
    let mut solver = PseudoSpectralSolver::new(SolverConfig::new(n, dt))?;
    let spectral = solver.evolve(u0, t, usize::MAX)?.last().clone();
    let diff = relative_l2(&explicit, &spectral);
    Ok((explicit, spectral, diff))
}

pub fn convergence_study(spec: &StudyDescriptor) -> Result<Vec<StudyRow>> {
    let levels: Vec<(f64, f64)> = match spec {
        StudyDescriptor::LaxDt { u0, base, dts } => dts
            .par_iter()
            .map(|&dt| Ok((dt, lax_evolution_residual(u0, &LaxCheckParams { dt, ..*base })?)))
            .collect::<Result<_>>()?,
        StudyDescriptor::LineStep {
            u0,
            identity,
            t,
            cutoff,
            steps,
        } => steps
            .par_iter()
            .map(|&h| {
                let grid = LineGrid::new(*cutoff, h)?;
                Ok((h, identity.pick(&line_identity_residuals(u0, &grid, *t)?)))
            })
            .collect::<Result<_>>()?,
        StudyDescriptor::FormulaVsSolver { u0, t, dt, modes } => modes
            .par_iter()
            .map(|&n| Ok((n as f64, formula_vs_solver(u0, *t, *dt, n)?.2)))
            .collect::<Result<_>>()?,
    };
    Ok(with_orders(levels))
}

// ---------------------------------------------------------------- suite

/// Real field with random modes `1..=m` of size at most 1 and a random mean.
pub fn random_band_limited(max_mode: usize, m: usize, seed: u64) -> TorusField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = TorusField::constant(max_mode, rng.gen_range(-1.0..1.0));
    for k in 1..=m.min(max_mode) {
        u = u.add_trig(k, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    u
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub torus_max_mode: usize,
    pub random_band_limit: usize,
    pub seed: u64,
    pub lax: LaxCheckParams,
    pub isospectrality: IsospectralityParams,
    pub line_cutoff: f64,
    pub line_step: f64,
    pub line_t: f64,
    pub line_tolerances: LineTolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            torus_max_mode: 64,
            random_band_limit: 4,
            seed: 20_240_917,
            lax: LaxCheckParams::default(),
            isospectrality: IsospectralityParams::default(),
            line_cutoff: 40.0,
            line_step: 0.02,
            line_t: 0.5,
            line_tolerances: LineTolerances::default(),
        }
    }
}

pub const SUITE_GROUPS: [&str; 4] = ["commutators", "lax", "isospectrality", "line"];

fn suite_group(config: &SuiteConfig, group: &str) -> Result<Vec<CheckReport>> {
    let n = config.torus_max_mode;
    let cos = TorusField::zero(n).add_trig(1, 1.0, 0.0);
    match group {
        "commutators" => {
            let data = [
                ("two_cos", TorusField::zero(n).add_trig(1, 2.0, 0.0)),
                ("twomode", TorusField::zero(n).add_trig(1, 1.0, 0.0).add_trig(2, 0.0, 0.5)),
                ("random", random_band_limited(n, config.random_band_limit, config.seed)),
            ];
            let mut out = Vec::new();
            for (label, u) in data {
                for mut r in check_torus_commutators(&u, n)? {
                    r.name = format!("{}:{label}", r.name);
                    out.push(r);
                }
            }
            Ok(out)
        }
        "lax" => Ok(vec![check_lax_evolution(&cos, &config.lax)?]),
        "isospectrality" => Ok(vec![check_isospectrality(&cos, &config.isospectrality)?]),
        "line" => {
            let grid = LineGrid::new(config.line_cutoff, config.line_step)?;
            let u = LineField::lorentzian(1.0)?;
            check_line_identities_with(&u, &grid, config.line_t, &config.line_tolerances)
        }
        other => Err(Error::Configuration(format!(
            "unknown check group {other:?}; expected one of {}",
            SUITE_GROUPS.join(", ")
        ))),
    }
}

/// Runs the default checks, all groups or only `only`. Report order is fixed.
pub fn default_suite(config: &SuiteConfig, only: Option<&str>) -> Result<Vec<CheckReport>> {
    let groups: Vec<&str> = match only {
        Some(g) => {
            if !SUITE_GROUPS.contains(&g) {
                return Err(Error::Configuration(format!(
                    "unknown check group {g:?}; expected one of {}",
                    SUITE_GROUPS.join(", ")
                )));
            }
            vec![g]
        }
        None => SUITE_GROUPS.to_vec(),
    };
    let results: Vec<Result<Vec<CheckReport>>> = groups.par_iter().map(|g| suite_group(config, g)).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Fixed-width table for terminals.
pub fn format_table(reports: &[CheckReport]) -> String {
    let mut s = format!("{:<36} {:>12} {:>12}  {}\n", "check", "residual", "tolerance", "status");
    for r in reports {
        s.push_str(&format!(
            "{:<36} {:>12.3e} {:>12.3e}  {}\n",
            r.name,
            r.residual,
            r.tolerance,
            if r.passed { "pass" } else { "FAIL" }
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_commutators_vanish() {
        for r in check_torus_commutators(&TorusField::zero(16), 16).unwrap() {
            assert_eq!(r.residual, 0.0, "{}", r.name);
        }
    }

    #[test]
    fn two_cos_commutators() {
        let u = TorusField::zero(64).add_trig(1, 2.0, 0.0);
        for r in check_torus_commutators(&u, 64).unwrap() {
            assert!(r.residual <= 1e-13, "{}: {}", r.name, r.residual);
        }
    }

    #[test]
    fn insufficient_margin_names_required_n() {
        let u = random_band_limited(16, 4, 1);
        match check_torus_commutators(&u, 16) {
            Err(Error::Configuration(msg)) => assert!(msg.contains("N ≥ 32"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lax_residual_vanishes_for_stationary_data() {
        let p = LaxCheckParams {
            max_mode: 16,
            ..LaxCheckParams::default()
        };
        assert_eq!(lax_evolution_residual(&TorusField::zero(16), &p).unwrap(), 0.0);
        let r = lax_evolution_residual(&TorusField::constant(16, 0.7), &p).unwrap();
        assert!(r < 1e-12, "{r}");
    }

    #[test]
    fn isospectrality_of_constant() {
        let c = 0.4;
        let p = IsospectralityParams {
            max_mode: 12,
            times: vec![0.5],
            ..IsospectralityParams::default()
        };
        let r = check_isospectrality(&TorusField::constant(12, c), &p).unwrap();
        assert!(r.residual < 1e-13);
        let eig = lowest_eigenvalues(&TorusField::constant(12, c), 12, 3).unwrap();
        for (j, e) in eig.iter().enumerate() {
            assert!((e - (j as f64 - c)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_line_datum_lax_commutator_part_vanishes() {
        let grid = LineGrid::new(20.0, 0.05).unwrap();
        let b = LineB::new(&LineField::zero(), grid);
        let g = GOperator::new(grid);
        let f = on_grid(&grid, bump);
        let r = sub(&g.apply(&b.apply(&f)), &b.apply(&g.apply(&f)));
        assert!(r.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn orders_from_levels() {
        let rows = with_orders(vec![(0.1, 4e-2), (0.05, 1e-2)]);
        assert!(rows[0].observed_order.is_none());
        assert!((rows[1].observed_order.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_group_rejected() {
        assert!(matches!(
            default_suite(&SuiteConfig::default(), Some("nope")),
            Err(Error::Configuration(_))
        ));
    }
}
