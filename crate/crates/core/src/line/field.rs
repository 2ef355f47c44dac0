//! Real decaying data on the line and the half-line frequency grid.
//!
//! Fourier convention on the line: `û(ξ) = ∫ u(x) e^{−ixξ} dx`, with
//! `⟨f|g⟩ = ∫ f ḡ dx = (1/2π)∫ f̂ ĝ̄ dξ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::HalfLineSpectrum;

/// Default half-line cutoff `Ξ`.
pub const DEFAULT_CUTOFF: f64 = 40.0;
/// Default frequency step `h`.
pub const DEFAULT_STEP: f64 = 0.02;
/// Relative size of `Πû₀(Ξ)` tolerated by the resolvent.
pub const SPECTRUM_TAIL_TOLERANCE: f64 = 1e-10;
/// Relative size of sampled data at the ends of its window.
pub const SAMPLE_DECAY_TOLERANCE: f64 = 1e-4;

/// Nodes `ξ_j = j·h`, `j = 0..=M`, with `Ξ = M·h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineGrid {
    cutoff: f64,
    step: f64,
    last: usize,
}

impl LineGrid {
    pub fn new(cutoff: f64, step: f64) -> Result<Self> {
        if !(cutoff > 0.0 && step > 0.0 && cutoff.is_finite()) {
            return Err(Error::Configuration(format!(
                "grid needs positive cutoff and step, got Ξ = {cutoff}, h = {step}"
            )));
        }
        let m = (cutoff / step).round();
        if (m * step - cutoff).abs() > 1e-9 * cutoff {
            return Err(Error::Configuration(format!(
                "cutoff {cutoff} is not a multiple of the step {step}"
            )));
        }
        let last = m as usize;
        if last < 2 {
            return Err(Error::Configuration(format!(
                "grid needs at least 2 intervals, got {last}"
            )));
        }
        Ok(Self { cutoff, step, last })
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// `M`, the index of the last node.
    pub fn last_index(&self) -> usize {
        self.last
    }

    pub fn node_count(&self) -> usize {
        self.last + 1
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.step
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.last).map(|j| self.node(j)).collect()
    }

    /// Trapezoid weights: `h/2` at both ends, `h` inside.
    pub fn weights(&self) -> Vec<f64> {
        (0..=self.last)
            .map(|j| if j == 0 || j == self.last { 0.5 * self.step } else { self.step })
            .collect()
    }

    /// The same cutoff with the step multiplied by `factor`.
    pub fn coarsened(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.last.is_multiple_of(factor) {
            return Err(Error::Configuration(format!(
                "cannot coarsen {} intervals by {factor}",
                self.last
            )));
        }
        Self::new(self.cutoff, self.step * factor as f64)
    }

    /// The same cutoff with the step divided by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.cutoff, self.step / factor as f64)
    }

    /// Differentiation and resolvent stencils need `M ≥ 8`.
    pub fn require_resolving(&self) -> Result<()> {
        if self.last < 8 {
            return Err(Error::Configuration(format!(
                "differentiation needs at least 8 intervals, got {}",
                self.last
            )));
        }
        Ok(())
    }
}

impl Default for LineGrid {
    fn default() -> Self {
        Self::new(DEFAULT_CUTOFF, DEFAULT_STEP).expect("default grid is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LineProfile {
    Zero,
    /// `2c/(1 + c²x²)`.
    Lorentzian { c: f64 },
    /// `a·exp(−x²/(2w²))`.
    Gaussian { amplitude: f64, width: f64 },
    /// Uniform samples `u(x0 + j·dx)`.
    Sampled { x0: f64, dx: f64, values: Vec<f64> },
}

/// Real datum on the line with access to its two-sided Fourier transform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineField {
    profile: LineProfile,
}

impl LineField {
    pub fn zero() -> Self {
        Self {
            profile: LineProfile::Zero,
        }
    }

    pub fn lorentzian(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Configuration(format!("lorentzian needs c > 0, got {c}")));
        }
        Ok(Self {
            profile: LineProfile::Lorentzian { c },
        })
    }

    pub fn gaussian(amplitude: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && amplitude.is_finite()) {
            return Err(Error::Configuration(format!(
                "gaussian needs finite amplitude and width > 0, got a = {amplitude}, w = {width}"
            )));
        }
        Ok(Self {
            profile: LineProfile::Gaussian { amplitude, width },
        })
    }

    /// Uniformly spaced samples; the ends must be small relative to the peak.
    pub fn from_samples(xs: &[f64], values: &[f64]) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 8 {
            return Err(Error::Ingestion(format!(
                "need at least 8 matching (x, u) samples, got {} and {}",
                xs.len(),
                values.len()
            )));
        }
        if let Some(i) = xs.iter().chain(values).position(|v| !v.is_finite()) {
            return Err(Error::Ingestion(format!("non-finite entry at position {i}")));
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if dx <= 0.0 {
            return Err(Error::Ingestion("sample abscissae must increase".into()));
        }
        for (j, &x) in xs.iter().enumerate() {
            if (x - (xs[0] + j as f64 * dx)).abs() > 1e-8 * dx.max(1.0) {
                return Err(Error::Ingestion(format!("non-uniform grid at sample {j}")));
            }
        }
        let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let ends = values[0].abs().max(values[values.len() - 1].abs());
        if peak > 0.0 && ends > SAMPLE_DECAY_TOLERANCE * peak {
            return Err(Error::Ingestion(format!(
                "data does not decay: end values {ends:.3e} against peak {peak:.3e}"
            )));
        }
        Ok(Self {
            profile: LineProfile::Sampled {
                x0: xs[0],
                dx,
                values: values.to_vec(),
            },
        })
    }

    pub fn profile(&self) -> &LineProfile {
        &self.profile
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.profile, LineProfile::Zero)
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.profile {
            LineProfile::Zero => 0.0,
            LineProfile::Lorentzian { c } => 2.0 * c / (1.0 + c * c * x * x),
            LineProfile::Gaussian { amplitude, width } => amplitude * (-x * x / (2.0 * width * width)).exp(),
            LineProfile::Sampled { x0, dx, values } => {
                // Linear interpolation; zero outside the window.
                let s = (x - x0) / dx;
                if s < 0.0 || s > (values.len() - 1) as f64 {
                    return 0.0;
                }
                let j = (s.floor() as usize).min(values.len() - 2);
                let frac = s - j as f64;
                values[j] * (1.0 - frac) + values[j + 1] * frac
            }
        }
    }

    /// `û(ζ) = ∫ u(x) e^{−ixζ} dx`.
    pub fn transform(&self, zeta: f64) -> Complex64 {
        match &self.profile {
            LineProfile::Zero => Complex64::new(0.0, 0.0),
            LineProfile::Lorentzian { c } => Complex64::new(2.0 * PI * (-zeta.abs() / c).exp(), 0.0),
            LineProfile::Gaussian { amplitude, width } => Complex64::new(
                amplitude * width * (2.0 * PI).sqrt() * (-0.5 * width * width * zeta * zeta).exp(),
                0.0,
            ),
            LineProfile::Sampled { x0, dx, values } => {
                let last = values.len() - 1;
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &v) in values.iter().enumerate() {
                    let w = if j == 0 || j == last { 0.5 } else { 1.0 };
                    let x = x0 + j as f64 * dx;
                    acc += Complex64::from_polar(w * v, -x * zeta);
                }
                acc * *dx
            }
        }
    }

    /// `(Πu)^` on the grid nodes.
    pub fn hardy_spectrum(&self, grid: &LineGrid) -> HalfLineSpectrum {
        HalfLineSpectrum::from_fn(grid.step(), grid.node_count(), |xi| self.transform(xi))
    }

    /// `û(m·h)` for `m = −M..=M`.
    pub fn two_sided_transform(&self, grid: &LineGrid) -> Vec<Complex64> {
        let m = grid.last_index() as i64;
        (-m..=m).map(|k| self.transform(k as f64 * grid.step())).collect()
    }
}
