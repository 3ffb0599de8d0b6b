//! Plain `key = value` configuration files for material presets.

use std::path::Path;

use crate::error::CliError;
use crate::units::{MaterialParams, PhysicalConstants};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub mass_ratio: Option<f64>,
    pub g_factor: Option<f64>,
    pub rho_o: Option<f64>,
    pub constants: Option<PhysicalConstants>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = FileConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| CliError::Usage(format!("config line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = || {
                value
                    .parse::<f64>()
                    .map_err(|_| bad(format!("'{value}' is not a number")))
            };
            match key {
                "mass_ratio" => cfg.mass_ratio = Some(number()?),
                "g_factor" => cfg.g_factor = Some(number()?),
                "rho_o" => cfg.rho_o = Some(number()?),
                "constants" => cfg.constants = Some(value.parse()?),
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn is_empty(&self) -> bool {
        self.mass_ratio.is_none() && self.g_factor.is_none() && self.rho_o.is_none() && self.constants.is_none()
    }

    /// Fills unset fields from `base`.
    pub fn material_over(&self, base: MaterialParams) -> Result<MaterialParams, CliError> {
        MaterialParams::new(
            self.mass_ratio.unwrap_or(base.mass_ratio),
            self.g_factor.unwrap_or(base.g_factor),
            self.rho_o.unwrap_or(base.rho_o),
        )
    }

    /// `other` wins where both are set.
    pub fn overridden_by(&self, other: &FileConfig) -> FileConfig {
        FileConfig {
            mass_ratio: other.mass_ratio.or(self.mass_ratio),
            g_factor: other.g_factor.or(self.g_factor),
            rho_o: other.rho_o.or(self.rho_o),
            constants: other.constants.or(self.constants),
        }
    }
}
