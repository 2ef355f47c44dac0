//! Named initial data: `zero`, `constant:c=…`, `cos[:a=…]`, `twomode[:a=…,b=…]`,
//! `lorentzian[:c=…]` and `gaussian[:a=…,w=…]`.
//!
//! The Lorentzian `2c/(1 + c²x²)` is the traveling wave of
//! `∂_t u = ∂_x(|D|u − u²)` and moves in the `+x` direction with speed `c`.
//! The direction was fixed by the reference solver on a large periodic box.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::line::field::LineField;
use crate::spectral::TorusField;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Preset {
    Zero,
    Constant { c: f64 },
    /// `a·cos x`.
    Cos { a: f64 },
    /// `a·cos x + b·sin 2x`.
    Twomode { a: f64, b: f64 },
    /// `2c/(1 + c²x²)`.
    Lorentzian { c: f64 },
    /// `a·exp(−x²/(2w²))`.
    Gaussian { a: f64, w: f64 },
}

fn parse_params(name: &str, body: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    if body.is_empty() {
        return Ok(out);
    }
    for part in body.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Configuration(format!("preset {name}: expected key=value, got {part:?}")))?;
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(Error::Configuration(format!(
                "preset {name}: unknown parameter {key:?} (allowed: {})",
                allowed.join(", ")
            )));
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Configuration(format!("preset {name}: {key}={value:?} is not a number")))?;
        if !v.is_finite() {
            return Err(Error::Configuration(format!("preset {name}: {key} must be finite")));
        }
        out.insert(key.to_string(), v);
    }
    Ok(out)
}

impl Preset {
    /// Parses `name` or `name:key=value,…`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, body) = spec.split_once(':').unwrap_or((spec, ""));
        let get = |p: &BTreeMap<String, f64>, k: &str, d: f64| p.get(k).copied().unwrap_or(d);
        let preset = match name.trim() {
            "zero" => {
                parse_params(name, body, &[])?;
                Preset::Zero
            }
            "constant" => {
                let p = parse_params(name, body, &["c"])?;
                Preset::Constant {
                    c: p.get("c")
                        .copied()
                        .ok_or_else(|| Error::Configuration("preset constant needs c=…".into()))?,
                }
            }
            "cos" => {
                let p = parse_params(name, body, &["a"])?;
                Preset::Cos { a: get(&p, "a", 1.0) }
            }
            "twomode" => {
                let p = parse_params(name, body, &["a", "b"])?;
                Preset::Twomode {
                    a: get(&p, "a", 1.0),
                    b: get(&p, "b", 0.5),
                }
            }
            "lorentzian" => {
                let p = parse_params(name, body, &["c"])?;
                Preset::Lorentzian { c: get(&p, "c", 1.0) }
            }
            "gaussian" => {
                let p = parse_params(name, body, &["a", "w"])?;
                Preset::Gaussian {
                    a: get(&p, "a", 1.0),
                    w: get(&p, "w", 1.0),
                }
            }
            other => {
                return Err(Error::Configuration(format!(
                    "unknown preset {other:?}; expected zero, constant, cos, twomode, lorentzian or gaussian"
                )))
            }
        };
        preset.validate()?;
        Ok(preset)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Preset::Lorentzian { c } if !(c > 0.0) => {
                Err(Error::Configuration(format!("preset lorentzian needs c > 0, got {c}")))
            }
            Preset::Gaussian { w, .. } if !(w > 0.0) => {
                Err(Error::Configuration(format!("preset gaussian needs w > 0, got {w}")))
            }
            _ => Ok(()),
        }
    }

    /// The datum on the torus with `N` modes. Decaying line data are
    /// periodized exactly: `c_k = û(k)/2π`.
    pub fn torus_field(&self, max_mode: usize) -> Result<TorusField> {
        Ok(match *self {
            Preset::Zero => TorusField::zero(max_mode),
            Preset::Constant { c } => TorusField::constant(max_mode, c),
            Preset::Cos { a } => TorusField::zero(max_mode).add_trig(1, a, 0.0),
            Preset::Twomode { a, b } => {
                if max_mode < 2 {
                    return Err(Error::Configuration("preset twomode needs N ≥ 2".into()));
                }
                TorusField::zero(max_mode).add_trig(1, a, 0.0).add_trig(2, 0.0, b)
            }
            Preset::Lorentzian { .. } | Preset::Gaussian { .. } => {
                let line = self.line_field()?;
                let positive: Vec<Complex64> = (0..=max_mode).map(|k| line.transform(k as f64) / (2.0 * PI)).collect();
                TorusField::from_positive_modes(&positive)?
            }
        })
    }

    pub fn line_field(&self) -> Result<LineField> {
        match *self {
            Preset::Zero => Ok(LineField::zero()),
            Preset::Lorentzian { c } => LineField::lorentzian(c),
            Preset::Gaussian { a, w } => LineField::gaussian(a, w),
            _ => Err(Error::Configuration(format!(
                "preset {self:?} does not decay and has no line version"
            ))),
        }
    }
}
