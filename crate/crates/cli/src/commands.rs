use boflow::io;
use boflow::line::{
    cauchy_riemann_residual, reconstruct_line_with, uhp_grid_scan, IplusStencil, LineEvaluator, LineField, LineGrid,
    LineSolveOptions, ReconstructOptions, ScanRow,
};
use boflow::presets::Preset;
use boflow::solver::{LineBoxReference, PseudoSpectralSolver, SolverConfig};
use boflow::spectral::TorusField;
use boflow::torus::{evaluate_disc, evolve_coefficients, propagator};
use boflow::validation::{default_suite, format_table, formula_vs_solver, relative_l2, CheckReport};
use boflow::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::OutputDir;

/// Result of a command that ran to completion.
pub enum Outcome {
    Ok,
    ChecksFailed(usize),
}

fn torus_datum(cfg: &RunConfig, n: usize) -> Result<TorusField> {
    match (&cfg.preset, &cfg.datum_file) {
        (_, Some(path)) => Ok(io::read_torus_datum(path)?.with_max_mode(n)),
        (Some(p), None) => Preset::parse(p)?.torus_field(n),
        (None, None) => Preset::Cos { a: 1.0 }.torus_field(n),
    }
}

fn line_datum(cfg: &RunConfig) -> Result<LineField> {
    match (&cfg.preset, &cfg.datum_file) {
        (_, Some(path)) => io::read_line_samples(path),
        (Some(p), None) => Preset::parse(p)?.line_field(),
        (None, None) => LineField::lorentzian(1.0),
    }
}

fn grid_x(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect()
}

fn positive_modes(u: &TorusField, k: usize) -> Vec<Complex64> {
    (0..=k as i64).map(|j| u.coeff(j)).collect()
}

fn points_rows(zs: &[Complex64], values: Vec<Result<Complex64>>) -> Vec<ScanRow> {
    zs.iter()
        .zip(values)
        .map(|(&z, r)| match r {
            Ok(v) => ScanRow {
                z,
                value: Some(v),
                error: None,
            },
            Err(e) => ScanRow {
                z,
                value: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

#[derive(Serialize)]
struct DiffRow {
    t: f64,
    n: usize,
    dt: f64,
    relative_l2: f64,
}

fn write_diff_rows(out: &mut OutputDir, stem: &str, rows: &[DiffRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(out.file(&format!("{stem}.csv")))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    io::write_json(&out.file(&format!("{stem}.json")), rows)
}

pub fn solve_torus(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome> {
    let n = cfg.n;
    let k = cfg.k();
    let u0 = torus_datum(cfg, n)?;
    let xs = grid_x(cfg.samples);
    io::write_torus_json(&out.file("datum.json"), &u0)?;
    let mut diffs = Vec::new();
    for &t in &cfg.times {
        let explicit = if cfg.method.explicit() {
            let p = propagator(&u0, t, n)?;
            let evolved = evolve_coefficients(&p, k)?;
            for w in &evolved.warnings {
                out.warn(w.clone());
            }
            io::write_evolved_json(&out.file(&format!("explicit_t{t}.json")), &evolved)?;
            io::write_coefficients_csv(&out.file(&format!("explicit_t{t}_coeffs.csv")), &evolved.coeffs)?;
            let field = evolved.to_field()?;
            io::write_samples_csv(&out.file(&format!("explicit_t{t}_samples.csv")), &xs, &field.samples(cfg.samples))?;
            if !cfg.disc_points.is_empty() {
                let zs: Vec<Complex64> = cfg.disc_points.iter().map(|&[a, b]| Complex64::new(a, b)).collect();
                let values = zs.iter().map(|&z| evaluate_disc(&p, z)).collect();
                io::write_scan_csv(&out.file(&format!("explicit_t{t}_disc.csv")), &points_rows(&zs, values))?;
            }
            Some(field)
        } else {
            None
        };
        let spectral = if cfg.method.spectral() {
            let mut solver = PseudoSpectralSolver::new(SolverConfig::new(n, cfg.dt))?;
            let every = cfg.snapshot_every.unwrap_or(usize::MAX);
            let traj = solver.evolve(&u0, t, every)?;
            let field = traj.last().clone();
            io::write_field_json(&out.file(&format!("spectral_t{t}.json")), t, &field.with_max_mode(k))?;
            io::write_coefficients_csv(&out.file(&format!("spectral_t{t}_coeffs.csv")), &positive_modes(&field, k))?;
            io::write_samples_csv(&out.file(&format!("spectral_t{t}_samples.csv")), &xs, &field.samples(cfg.samples))?;
            if cfg.snapshot_every.is_some() {
                let names = io::write_trajectory(
                    out.root(),
                    &format!("spectral_t{t}_traj"),
                    &traj.times,
                    &traj.snapshots,
                    cfg.samples,
                )?;
                out.record(names);
            }
            Some(field)
        } else {
            None
        };
        if let (Some(e), Some(s)) = (&explicit, &spectral) {
            diffs.push(DiffRow {
                t,
                n,
                dt: cfg.dt,
                relative_l2: relative_l2(e, s),
            });
        }
    }
    if !diffs.is_empty() {
        for r in &diffs {
            println!("t = {:<8} relative L2 diff = {:.3e}", r.t, r.relative_l2);
        }
        write_diff_rows(out, "diff", &diffs)?;
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct LineSummaryRow {
    t: f64,
    cauchy_riemann: Option<f64>,
    box_relative_l2: Option<f64>,
}

fn l2_relative(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}

pub fn solve_line(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome> {
    let l = &cfg.line;
    let u0 = line_datum(cfg)?;
    let grid = LineGrid::new(l.cutoff, l.step)?;
    io::write_spectrum_csv(&out.file("datum_spectrum.csv"), &u0.hardy_spectrum(&grid))?;
    let opts = LineSolveOptions {
        grid,
        levels: l.levels,
        stencil: IplusStencil::Node,
    };
    let xs = linspace(l.x_min, l.x_max, l.x_count);
    let mut summary = Vec::new();
    for &t in &cfg.times {
        let evaluator = LineEvaluator::new(&u0, t, opts)?;
        let mut row = LineSummaryRow {
            t,
            cauchy_riemann: None,
            box_relative_l2: None,
        };
        let mut explicit = None;
        if l.reconstruct {
            let values = reconstruct_line_with(
                &evaluator,
                &xs,
                &ReconstructOptions {
                    eps: l.eps,
                    eps_richardson: l.eps_richardson,
                },
            )?;
            io::write_samples_csv(&out.file(&format!("line_t{t}_samples.csv")), &xs, &values)?;
            explicit = Some(values);
        }
        if !l.points.is_empty() {
            let zs: Vec<Complex64> = l.points.iter().map(|&[a, b]| Complex64::new(a, b)).collect();
            let values = evaluator
                .evaluate_many(&zs)
                .into_iter()
                .map(|r| r.map(|e| e.value))
                .collect();
            io::write_scan_csv(&out.file(&format!("line_t{t}_points.csv")), &points_rows(&zs, values))?;
        }
        if let Some(rect) = &l.scan {
            let rows = uhp_grid_scan(&evaluator, rect)?;
            for r in &rows {
                if let Some(e) = &r.error {
                    out.warn(format!("t = {t}: scan node {} failed: {e}", r.z));
                }
            }
            row.cauchy_riemann = cauchy_riemann_residual(&rows, rect);
            io::write_scan_csv(&out.file(&format!("line_t{t}_scan.csv")), &rows)?;
        }
        if let Some(box_cfg) = &l.reference {
            let reference = LineBoxReference::run(&u0, t, box_cfg)?;
            let values = reference.values(&xs);
            io::write_samples_csv(&out.file(&format!("box_t{t}_samples.csv")), &xs, &values)?;
            if let Some(e) = &explicit {
                let d = l2_relative(e, &values);
                println!("t = {t:<8} relative L2 diff to box reference = {d:.3e}");
                row.box_relative_l2 = Some(d);
            }
        }
        summary.push(row);
    }
    io::write_json(&out.file("summary.json"), &summary)?;
    Ok(Outcome::Ok)
}

pub fn validate(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome> {
    let reports: Vec<CheckReport> = default_suite(&cfg.suite, cfg.only.as_deref())?;
    print!("{}", format_table(&reports));
    io::write_json(&out.file("report.json"), &reports)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    Ok(if failed == 0 {
        Outcome::Ok
    } else {
        Outcome::ChecksFailed(failed)
    })
}

pub fn compare(cfg: &RunConfig, out: &mut OutputDir) -> Result<Outcome> {
    let mut rows = Vec::new();
    for &t in &cfg.times {
        for n in cfg.compare_modes() {
            let u0 = torus_datum(cfg, n)?;
            for dt in cfg.compare_dts() {
                let (_, _, d) = formula_vs_solver(&u0, t, dt, n)?;
                rows.push(DiffRow {
                    t,
                    n,
                    dt,
                    relative_l2: d,
                });
            }
        }
    }
    println!("{:>10} {:>6} {:>10} {:>14}", "t", "N", "dt", "relative L2");
    for r in &rows {
        println!("{:>10} {:>6} {:>10.3e} {:>14.3e}", r.t, r.n, r.dt, r.relative_l2);
    }
    write_diff_rows(out, "compare", &rows)?;
    Ok(Outcome::Ok)
}

/// Written to the output directory when a numerical kernel fails.
#[derive(Serialize)]
pub struct FailureReport {
    pub error: String,
}

impl FailureReport {
    pub fn new(e: &Error) -> Self {
        Self { error: e.to_string() }
    }
}
