//! Run configuration: a flat TOML key set, then `LOOPVIR_CACHE_DIR`, then
//! command-line flags, later sources winning.

use std::path::{Path, PathBuf};

use loopvir::rational::{parse_rational, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CACHE_DIR_ENV: &str = "LOOPVIR_CACHE_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("{key}: {msg}")]
    Invalid { key: &'static str, msg: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Largest `|n|` in commutator and degree sweeps.
    pub max_mode: u32,
    /// Largest total degree of test monomials.
    pub max_degree: u32,
    /// Levels `0..=max_level` in Gram and duality checks.
    pub max_level: u32,
    /// Coefficient index up to which operators are compared.
    pub max_index: u32,
    /// Level for `gram`, `kac` and `singular`.
    pub level: u32,
    /// Extra series order for residue constructions.
    pub extra_order: i64,
    /// `p/q` strings.
    pub kappa: String,
    pub lambda: Option<String>,
    pub tolerance: f64,
    pub q: f64,
    pub x0: f64,
    pub r: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Number of seeded driving functions in the variance check.
    pub runs: u64,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_mode: 4,
            max_degree: 6,
            max_level: 5,
            max_index: 8,
            level: 2,
            extra_order: 0,
            kappa: "3".into(),
            lambda: None,
            tolerance: 1e-4,
            q: 0.3,
            x0: 0.3,
            r: 0.2,
            t_end: 1.0,
            dt: 1e-4,
            runs: 10_000,
            seed: 0,
            cache_dir: None,
            format: OutputFormat::Json,
            output: None,
            timing: false,
        }
    }
}

fn invalid(key: &'static str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        msg: msg.into(),
    }
}

impl RunConfig {
    /// Parses and validates a config file body.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Applies `LOOPVIR_CACHE_DIR` when set and non-empty.
    pub fn apply_env(&mut self) {
        if let Some(v) = std::env::var_os(CACHE_DIR_ENV) {
            if !v.is_empty() {
                self.cache_dir = Some(PathBuf::from(v));
            }
        }
    }

    pub fn kappa_exact(&self) -> Result<Rational, ConfigError> {
        let k = parse_rational(&self.kappa).map_err(|e| invalid("kappa", e.to_string()))?;
        if k <= Rational::from_integer(0.into()) {
            return Err(invalid("kappa", "must be positive"));
        }
        Ok(k)
    }

    pub fn lambda_exact(&self) -> Result<Option<Rational>, ConfigError> {
        self.lambda
            .as_deref()
            .map(|s| parse_rational(s).map_err(|e| invalid("lambda", e.to_string())))
            .transpose()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.kappa_exact()?;
        self.lambda_exact()?;
        let positive = |key, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(key, format!("{v} is not a positive number")))
            }
        };
        positive("tolerance", self.tolerance)?;
        positive("dt", self.dt)?;
        positive("r", self.r)?;
        if !(self.q > 0.0 && self.q <= loopvir::spectral::Q_MAX) {
            return Err(invalid("q", format!("{} outside (0, 0.99]", self.q)));
        }
        if !self.x0.is_finite() {
            return Err(invalid("x0", "not finite"));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(invalid("t_end", format!("{}", self.t_end)));
        }
        if self.max_index == 0 {
            return Err(invalid("max_index", "must be at least 1"));
        }
        // keep sweeps within what exact arithmetic finishes in reasonable time
        if self.max_mode > 16 || self.max_degree > 12 || self.max_level > 8 || self.level > 8 {
            return Err(invalid(
                "caps",
                "max_mode <= 16, max_degree <= 12, levels <= 8",
            ));
        }
        if self.max_index > 64 || self.extra_order.abs() > 64 {
            return Err(invalid("caps", "max_index <= 64, |extra_order| <= 64"));
        }
        Ok(())
    }
}
