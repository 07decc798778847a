use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming a JSON file with default [`JobConfig`] values.
pub const CONFIG_ENV: &str = "HOOKPOLY_CONFIG";

/// Global numeric policy shared by the library entry points and the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub precision_bits: u32,
    pub default_tol: f64,
    pub enumeration_cap: u32,
    pub series_trunc: u32,
    pub w0: f64,
    pub eps: f64,
    pub output_dir: PathBuf,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            precision_bits: 128,
            default_tol: 1e-25,
            enumeration_cap: crate::partitions::DEFAULT_ENUMERATION_CAP,
            series_trunc: 1500,
            w0: 0.05,
            eps: 0.5,
            output_dir: PathBuf::from("."),
        }
    }
}

impl JobConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::Argument(format!(
                "precision_bits must be at least 64, got {}",
                self.precision_bits
            )));
        }
        for (name, v) in [
            ("default_tol", self.default_tol),
            ("w0", self.w0),
            ("eps", self.eps),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Argument(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: JobConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads `explicit` if given, else the file named by [`CONFIG_ENV`], else defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::from_file(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}
