//! Scenario files: TOML with one table per concern.
//!
//! ```toml
//! name = "weak-subohmic"
//! estimand = "cutoff-frequency"
//!
//! [probe]
//! omega_0 = 1.0
//! scheme = "two-qubit-traced"      # or "single-qubit"
//! initial_state = "factorized"     # or "correlated"
//!
//! [density]
//! coupling = 0.01
//! ohmicity = 0.5
//! cutoff = 1.0
//!
//! [bath]
//! temperature = 0.0
//!
//! [sweep]                          # optional
//! variable = "cutoff-frequency"
//! min = 0.5
//! max = 3.0
//! points = 6
//! spacing = "linear"               # or "log"
//!
//! [time]
//! t_max = 1e5                      # optimization window
//! grid_size = 4000
//! t_min = 0.01                     # sampled-time output
//! samples = 100
//! spacing = "linear"
//!
//! [quadrature]
//! rel_tol = 1e-8
//!
//! [output]
//! dir = "out"                      # optional
//! stem = "weak-subohmic"
//! ```
//!
//! All frequencies, temperatures and times are in units of the qubit
//! splitting.

use std::path::{Path, PathBuf};

use qprobe::{BathState, Estimand, InitialState, Model, ProbeConfig, QuadSettings, Scheme, SpectralDensity};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Linear,
    Log,
}

impl Spacing {
    /// `n` points from `lo` to `hi`, both included.
    pub fn points(self, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        match self {
            Spacing::Linear => (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
                .collect(),
            Spacing::Log => {
                let mut v = qprobe::fisher::log_grid(lo, hi, n);
                v[0] = lo;
                v
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub omega_0: f64,
    pub scheme: Scheme,
    pub initial_state: InitialState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySection {
    pub coupling: f64,
    pub ohmicity: f64,
    pub cutoff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: Estimand,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        self.spacing.points(self.min, self.max, self.points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSettings {
    pub t_max: f64,
    pub grid_size: usize,
    pub t_min: f64,
    pub samples: usize,
    pub spacing: Spacing,
}

impl TimeSettings {
    /// Output times, from `t_min` to `t_max`.
    pub fn samples(&self) -> Vec<f64> {
        self.spacing.points(self.t_min, self.t_max, self.samples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    pub stem: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub estimand: Estimand,
    pub probe: ProbeSection,
    pub density: DensitySection,
    pub bath: BathSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    pub time: TimeSettings,
    pub quadrature: QuadratureSection,
    pub output: OutputSection,
}

impl Scenario {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let s: Scenario = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Scenario::from_toml(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario fields are always representable")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |key, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(key, format!("must be a positive number, got {v}")))
            }
        };
        positive("probe.omega_0", self.probe.omega_0)?;
        positive("density.ohmicity", self.density.ohmicity)?;
        positive("density.cutoff", self.density.cutoff)?;
        if !(self.density.coupling.is_finite() && self.density.coupling >= 0.0) {
            return Err(invalid("density.coupling", "must be >= 0"));
        }
        if !(self.bath.temperature.is_finite() && self.bath.temperature >= 0.0) {
            return Err(invalid("bath.temperature", "must be >= 0"));
        }
        positive("time.t_max", self.time.t_max)?;
        positive("time.t_min", self.time.t_min)?;
        positive("quadrature.rel_tol", self.quadrature.rel_tol)?;
        if self.time.t_min >= self.time.t_max {
            return Err(invalid("time.t_min", "must be below time.t_max"));
        }
        if self.time.grid_size < 64 {
            return Err(invalid("time.grid_size", format!("must be >= 64, got {}", self.time.grid_size)));
        }
        if self.time.samples < 2 {
            return Err(invalid("time.samples", "must be >= 2"));
        }
        if let Some(sw) = &self.sweep {
            positive("sweep.min", sw.min)?;
            positive("sweep.max", sw.max)?;
            if sw.max <= sw.min {
                return Err(invalid("sweep.max", "must exceed sweep.min"));
            }
            if sw.points < 2 {
                return Err(invalid("sweep.points", "must be >= 2"));
            }
        }
        if self.output.stem.is_empty() || self.output.stem.contains(['/', '\\']) {
            return Err(invalid("output.stem", "must be a plain non-empty file stem"));
        }
        self.model().map(|_| ())
    }

    pub fn density(&self) -> Result<SpectralDensity, ConfigError> {
        let d = &self.density;
        SpectralDensity::new(d.coupling, d.ohmicity, d.cutoff).map_err(|e| invalid("density", e.to_string()))
    }

    pub fn bath(&self) -> Result<BathState, ConfigError> {
        BathState::new(self.bath.temperature).map_err(|e| invalid("bath.temperature", e.to_string()))
    }

    pub fn quad(&self) -> QuadSettings {
        QuadSettings::with_rel_tol(self.quadrature.rel_tol)
    }

    /// Model for the configured probe variant.
    pub fn model(&self) -> Result<Model, ConfigError> {
        let p = &self.probe;
        let probe = ProbeConfig::new(p.omega_0, p.scheme, p.initial_state)
            .map_err(|e| invalid("probe.omega_0", e.to_string()))?;
        Ok(Model::new(probe, self.density()?, self.bath()?, self.quad()))
    }

    /// Models for all four probe variants, two-qubit first.
    pub fn variant_models(&self) -> Result<Vec<Model>, ConfigError> {
        let base = self.model()?;
        Ok(ProbeConfig::variants(self.probe.omega_0)
            .map_err(|e| invalid("probe.omega_0", e.to_string()))?
            .into_iter()
            .map(|p| base.with_probe(p))
            .collect())
    }

    /// Copy with one physical parameter moved.
    pub fn with_parameter(&self, x: Estimand, value: f64) -> Scenario {
        let mut s = self.clone();
        match x {
            Estimand::CutoffFrequency => s.density.cutoff = value,
            Estimand::CouplingStrength => s.density.coupling = value,
            Estimand::Temperature => s.bath.temperature = value,
        }
        s
    }

    pub fn parameter(&self, x: Estimand) -> f64 {
        match x {
            Estimand::CutoffFrequency => self.density.cutoff,
            Estimand::CouplingStrength => self.density.coupling,
            Estimand::Temperature => self.bath.temperature,
        }
    }
}
