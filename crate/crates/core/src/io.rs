//! File formats.
//!
//! | content                      | format                                   |
//! |------------------------------|------------------------------------------|
//! | torus datum                  | JSON `{"max_mode", "coeffs": [[re, im]]}`, `k = −N..=N` |
//! | samples (torus or line)      | CSV `x,u`                                |
//! | evolved coefficients         | JSON `{"t", "coeffs", "mean"}`, CSV `k,re,im`, `k = 0..=K` |
//! | half-line spectrum           | CSV `xi,re,im`                           |
//! | dense matrix                 | CSV `row,col,re,im`                      |
//! | upper half-plane scan        | CSV `re_z,im_z,re_val,im_val`            |
//! | trajectory index             | JSON `{"times", "files"}`                |
//!
//! Numbers are written in shortest round-trip form, so equal inputs give
//! byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::line::explicit::ScanRow;
use crate::line::field::LineField;
use crate::spectral::{field_from_samples, HalfLineSpectrum, TorusField};
use crate::torus::EvolvedCoefficients;

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

#[derive(Serialize, Deserialize)]
struct CoefficientFile {
    max_mode: usize,
    coeffs: Vec<[f64; 2]>,
}

pub fn read_torus_json(path: &Path) -> Result<TorusField> {
    let text = fs::read_to_string(path)?;
    let file: CoefficientFile =
        serde_json::from_str(&text).map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
    let coeffs = file.coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    TorusField::from_coeffs(file.max_mode, coeffs).map_err(|e| match e {
        Error::InvalidField(m) => Error::Ingestion(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_torus_json(path: &Path, u: &TorusField) -> Result<()> {
    let file = CoefficientFile {
        max_mode: u.max_mode(),
        coeffs: pairs(u.coeffs()),
    };
    write_json(path, &file)
}

/// Reads a two-column `x,u` CSV with a header row.
pub fn read_samples_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::Ingestion(format!("{} row {}: expected 2 columns", path.display(), i + 1)));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Ingestion(format!("{} row {}: {s:?} is not a number", path.display(), i + 1)))
        };
        xs.push(parse(&record[0])?);
        us.push(parse(&record[1])?);
    }
    Ok((xs, us))
}

/// Uniform samples on `[0, 2π)`; the abscissae must be `2πj/n`.
pub fn read_torus_samples(path: &Path) -> Result<TorusField> {
    let (xs, us) = read_samples_csv(path)?;
    let n = xs.len();
    for (j, x) in xs.iter().enumerate() {
        let expected = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        if (x - expected).abs() > 1e-9 {
            return Err(Error::Ingestion(format!(
                "{}: sample {j} at x = {x}, expected the uniform node {expected}",
                path.display()
            )));
        }
    }
    field_from_samples(&us)
}

pub fn read_line_samples(path: &Path) -> Result<LineField> {
    let (xs, us) = read_samples_csv(path)?;
    LineField::from_samples(&xs, &us)
}

/// Torus datum from `.json` coefficients or `.csv` samples.
pub fn read_torus_datum(path: &Path) -> Result<TorusField> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => read_torus_json(path),
        Some("csv") => read_torus_samples(path),
        _ => Err(Error::Ingestion(format!(
            "{}: expected a .json coefficient file or a .csv sample file",
            path.display()
        ))),
    }
}

#[derive(Serialize)]
struct EvolvedFile<'a> {
    t: f64,
    coeffs: Vec<[f64; 2]>,
    mean: f64,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    warnings: &'a [String],
}

pub fn write_evolved_json(path: &Path, e: &EvolvedCoefficients) -> Result<()> {
    write_json(
        path,
        &EvolvedFile {
            t: e.t,
            coeffs: pairs(&e.coeffs),
            mean: e.mean,
            warnings: &e.warnings,
        },
    )
}

/// Nonnegative modes of a field in the evolved-coefficient layout.
pub fn write_field_json(path: &Path, t: f64, u: &TorusField) -> Result<()> {
    let coeffs: Vec<Complex64> = (0..=u.max_mode() as i64).map(|k| u.coeff(k)).collect();
    write_json(
        path,
        &EvolvedFile {
            t,
            coeffs: pairs(&coeffs),
            mean: u.mean(),
            warnings: &[],
        },
    )
}

pub fn write_coefficients_csv(path: &Path, coeffs: &[Complex64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "re", "im"])?;
    for (k, c) in coeffs.iter().enumerate() {
        w.write_record([k.to_string(), c.re.to_string(), c.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_samples_csv(path: &Path, xs: &[f64], us: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "u"])?;
    for (x, u) in xs.iter().zip(us) {
        w.write_record([x.to_string(), u.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_spectrum_csv(path: &Path, s: &HalfLineSpectrum) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["xi", "re", "im"])?;
    for (xi, v) in s.nodes().zip(s.values()) {
        w.write_record([xi.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_matrix_csv(path: &Path, a: &CMatrix) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["row", "col", "re", "im"])?;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let v = a[(i, j)];
            w.write_record([i.to_string(), j.to_string(), v.re.to_string(), v.im.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Failed nodes are written with `NaN` values.
pub fn write_scan_csv(path: &Path, rows: &[ScanRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["re_z", "im_z", "re_val", "im_val"])?;
    for r in rows {
        let v = r.value.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        w.write_record([r.z.re.to_string(), r.z.im.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
pub struct TrajectoryIndex {
    pub times: Vec<f64>,
    pub files: Vec<String>,
}

/// One `x,u` CSV per snapshot plus `{prefix}_index.json`; returns the written file names.
pub fn write_trajectory(
    dir: &Path,
    prefix: &str,
    times: &[f64],
    snapshots: &[TorusField],
    samples: usize,
) -> Result<Vec<String>> {
    let xs: Vec<f64> = (0..samples)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / samples as f64)
        .collect();
    let mut files = Vec::with_capacity(snapshots.len());
    for (i, u) in snapshots.iter().enumerate() {
        let name = format!("{prefix}_{i:05}.csv");
        write_samples_csv(&dir.join(&name), &xs, &u.samples(samples))?;
        files.push(name);
    }
    let index = format!("{prefix}_index.json");
    write_json(
        &dir.join(&index),
        &TrajectoryIndex {
            times: times.to_vec(),
            files: files.clone(),
        },
    )?;
    files.push(index);
    Ok(files)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}
