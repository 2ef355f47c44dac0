use std::path::{Path, PathBuf};

use boflow::line::ScanRect;
use boflow::solver::LineBoxConfig;
use boflow::validation::SuiteConfig;
use boflow::{Error, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Explicit,
    Spectral,
    Both,
}

impl Method {
    pub fn explicit(self) -> bool {
        matches!(self, Method::Explicit | Method::Both)
    }

    pub fn spectral(self) -> bool {
        matches!(self, Method::Spectral | Method::Both)
    }
}

/// Line-specific keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LineRunConfig {
    pub cutoff: f64,
    pub step: f64,
    pub levels: usize,
    pub eps: f64,
    /// Combine heights `ε` and `2ε` to cancel the leading smoothing bias.
    pub eps_richardson: bool,
    pub reconstruct: bool,
    pub x_min: f64,
    pub x_max: f64,
    pub x_count: usize,
    /// Extra evaluation points `[re, im]` with `im > 0`.
    pub points: Vec<[f64; 2]>,
    pub scan: Option<ScanRect>,
    /// Large-box reference run for comparison.
    pub reference: Option<LineBoxConfig>,
}

impl Default for LineRunConfig {
    fn default() -> Self {
        Self {
            cutoff: boflow::line::field::DEFAULT_CUTOFF,
            step: boflow::line::field::DEFAULT_STEP,
            levels: 3,
            eps: boflow::line::explicit::DEFAULT_EPS,
            eps_richardson: true,
            reconstruct: true,
            x_min: -15.0,
            x_max: 15.0,
            x_count: 121,
            points: Vec::new(),
            scan: None,
            reference: None,
        }
    }
}

/// One run. Every CLI flag overrides one of these keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    /// Preset name such as `cos` or `lorentzian:c=1`.
    pub preset: Option<String>,
    /// Torus datum as `.json` coefficients or `.csv` samples, or line samples as `.csv`.
    pub datum_file: Option<PathBuf>,
    pub n: usize,
    pub times: Vec<f64>,
    /// Number of evolved coefficients `K`; defaults to `N/2`.
    pub k: Option<usize>,
    pub dt: f64,
    pub method: Method,
    pub samples: usize,
    /// Disc points `[re, im]` with `|z| < 1` for the explicit formula.
    pub disc_points: Vec<[f64; 2]>,
    /// Write a solver trajectory with one snapshot every this many steps.
    pub snapshot_every: Option<usize>,
    /// Resolutions for `compare`; defaults to `[n]`.
    pub modes: Vec<usize>,
    /// Steps for `compare`; defaults to `[dt]`.
    pub dts: Vec<f64>,
    pub line: LineRunConfig,
    pub suite: SuiteConfig,
    pub only: Option<String>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            preset: None,
            datum_file: None,
            n: 128,
            times: vec![0.5],
            k: None,
            dt: 2e-4,
            method: Method::Explicit,
            samples: 256,
            disc_points: Vec::new(),
            snapshot_every: None,
            modes: Vec::new(),
            dts: Vec::new(),
            line: LineRunConfig::default(),
            suite: SuiteConfig::default(),
            only: None,
            out: PathBuf::from("out"),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Configuration(format!("{name} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Configuration(format!("cannot read config {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Configuration(format!("config {}: {e}", path.display())))?;
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => {
                return Err(Error::Configuration(format!(
                    "config {}: schema_version {v} is not supported (expected {SCHEMA_VERSION})",
                    path.display()
                )))
            }
            None => {
                return Err(Error::Configuration(format!(
                    "config {}: missing schema_version",
                    path.display()
                )))
            }
        }
        serde_json::from_value(value).map_err(|e| Error::Configuration(format!("config {}: {e}", path.display())))
    }

    pub fn k(&self) -> usize {
        self.k.unwrap_or(self.n / 2)
    }

    pub fn compare_modes(&self) -> Vec<usize> {
        if self.modes.is_empty() {
            vec![self.n]
        } else {
            self.modes.clone()
        }
    }

    pub fn compare_dts(&self) -> Vec<f64> {
        if self.dts.is_empty() {
            vec![self.dt]
        } else {
            self.dts.clone()
        }
    }

    /// Checks that do not need the numerics.
    pub fn validate(&self) -> Result<()> {
        if self.preset.is_some() && self.datum_file.is_some() {
            return Err(Error::Configuration("give either a preset or a datum file, not both".into()));
        }
        if self.n == 0 {
            return Err(Error::Configuration("n must be positive".into()));
        }
        if self.k() > self.n {
            return Err(Error::Configuration(format!("k = {} exceeds n = {}", self.k(), self.n)));
        }
        if self.times.is_empty() {
            return Err(Error::Configuration("the time list is empty".into()));
        }
        if let Some(t) = self.times.iter().find(|t| !t.is_finite()) {
            return Err(Error::Configuration(format!("time {t} is not finite")));
        }
        positive("dt", self.dt)?;
        for &dt in &self.dts {
            positive("dts entry", dt)?;
        }
        if self.modes.contains(&0) {
            return Err(Error::Configuration("modes entries must be positive".into()));
        }
        if self.samples == 0 {
            return Err(Error::Configuration("samples must be positive".into()));
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::Configuration("snapshot_every must be positive".into()));
        }
        for &[re, im] in &self.disc_points {
            if !(re.hypot(im) < 1.0) {
                return Err(Error::Domain(format!("disc point {re}{im:+}i is not inside the unit disc")));
            }
        }
        let l = &self.line;
        positive("line.cutoff", l.cutoff)?;
        positive("line.step", l.step)?;
        positive("line.eps", l.eps)?;
        if l.reconstruct && (l.x_count == 0 || !(l.x_min <= l.x_max)) {
            return Err(Error::Configuration(
                "line reconstruction needs x_count > 0 and x_min ≤ x_max".into(),
            ));
        }
        for &[re, im] in &l.points {
            if !(im > 0.0) {
                return Err(Error::Domain(format!("line point {re}{im:+}i is not in the upper half-plane")));
            }
        }
        Ok(())
    }
}
