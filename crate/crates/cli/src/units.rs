//! Conversion between dimensionless and physical units.
//!
//! Energies are measured in ħ²/(2 M_eff ρₒ²), spin-orbit strength in
//! ħ²/(2 M_eff ρₒ) and field in 2ħ/(q_e ρₒ²).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// SI values of ħ, M_e and q_e.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub electron_mass: f64,
    pub charge: f64,
}

impl PhysicalConstants {
    /// Four-to-five digit values; these reproduce the reference GaAs
    /// correspondences.
    pub const ROUNDED: Self = PhysicalConstants {
        hbar: 1.0546e-34,
        electron_mass: 9.1095e-31,
        charge: 1.602e-19,
    };

    /// CODATA 2018.
    pub const CODATA: Self = PhysicalConstants {
        hbar: 1.054_571_817e-34,
        electron_mass: 9.109_383_701_5e-31,
        charge: 1.602_176_634e-19,
    };
}

impl FromStr for PhysicalConstants {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rounded" => Ok(Self::ROUNDED),
            "codata" => Ok(Self::CODATA),
            other => Err(CliError::Usage(format!(
                "unknown constants set '{other}' (expected rounded or codata)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// M_eff / M_e
    pub mass_ratio: f64,
    pub g_factor: f64,
    /// Outer radius in nm.
    pub rho_o: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::GAAS
    }
}

impl MaterialParams {
    pub const GAAS: Self = MaterialParams {
        mass_ratio: 0.067,
        g_factor: -0.44,
        rho_o: 30.0,
    };

    pub fn new(mass_ratio: f64, g_factor: f64, rho_o: f64) -> Result<Self, CliError> {
        let m = MaterialParams {
            mass_ratio,
            g_factor,
            rho_o,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.mass_ratio > 0.0 && self.mass_ratio.is_finite()) {
            return Err(CliError::Usage(format!(
                "mass_ratio must be positive, got {}",
                self.mass_ratio
            )));
        }
        if !(self.rho_o > 0.0 && self.rho_o.is_finite()) {
            return Err(CliError::Usage(format!("rho_o must be positive, got {}", self.rho_o)));
        }
        if !self.g_factor.is_finite() {
            return Err(CliError::Usage(format!(
                "g_factor must be finite, got {}",
                self.g_factor
            )));
        }
        Ok(())
    }

    /// s = g M_eff / (4 M_e)
    pub fn zeeman_scale(&self) -> f64 {
        self.g_factor * self.mass_ratio / 4.0
    }

    fn effective_mass(&self, c: &PhysicalConstants) -> f64 {
        self.mass_ratio * c.electron_mass
    }

    /// One energy unit in meV.
    pub fn energy_unit(&self, c: &PhysicalConstants) -> f64 {
        let rho = self.rho_o * 1e-9;
        c.hbar * c.hbar / (2.0 * self.effective_mass(c) * rho * rho) / (c.charge * 1e-3)
    }

    /// One spin-orbit unit in meV·nm.
    pub fn soi_unit(&self, c: &PhysicalConstants) -> f64 {
        let rho = self.rho_o * 1e-9;
        c.hbar * c.hbar / (2.0 * self.effective_mass(c) * rho) / (c.charge * 1e-3) * 1e9
    }

    /// One field unit in tesla.
    pub fn field_unit(&self, c: &PhysicalConstants) -> f64 {
        let rho = self.rho_o * 1e-9;
        2.0 * c.hbar / (c.charge * rho * rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Energy,
    SoiStrength,
    Field,
    Depth,
}

impl Quantity {
    pub fn unit(self) -> &'static str {
        match self {
            Quantity::Energy | Quantity::Depth => "meV",
            Quantity::SoiStrength => "meV*nm",
            Quantity::Field => "T",
        }
    }

    fn scale(self, mat: &MaterialParams, c: &PhysicalConstants) -> f64 {
        match self {
            Quantity::Energy | Quantity::Depth => mat.energy_unit(c),
            Quantity::SoiStrength => mat.soi_unit(c),
            Quantity::Field => mat.field_unit(c),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Energy => "energy",
            Quantity::SoiStrength => "soi_strength",
            Quantity::Field => "field",
            Quantity::Depth => "depth",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToPhysical,
    ToDimensionless,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ToPhysical => "to_physical",
            Direction::ToDimensionless => "to_dimensionless",
        })
    }
}

pub fn convert(
    value: f64,
    direction: Direction,
    quantity: Quantity,
    mat: &MaterialParams,
    c: &PhysicalConstants,
) -> f64 {
    let scale = quantity.scale(mat, c);
    match direction {
        Direction::ToPhysical => value * scale,
        Direction::ToDimensionless => value / scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(x: f64, y: f64) -> f64 {
        ((x - y) / y).abs()
    }

    #[test]
    fn gaas_correspondences() {
        let (m, c) = (MaterialParams::GAAS, PhysicalConstants::ROUNDED);
        assert!(rel(m.energy_unit(&c), 0.631933) < 1e-5);
        assert!(rel(m.soi_unit(&c), 18.9579) < 1e-5);
        assert!(rel(400.0 * m.energy_unit(&c), 252.772) < 1e-5);
        assert!(rel(m.zeeman_scale(), -0.00737) < 1e-12);
    }

    #[test]
    fn codata_differs_in_fourth_digit() {
        let m = MaterialParams::GAAS;
        let r = rel(
            m.energy_unit(&PhysicalConstants::CODATA),
            m.energy_unit(&PhysicalConstants::ROUNDED),
        );
        assert!(r > 1e-4 && r < 2e-4, "{r}");
    }

    #[test]
    fn round_trip() {
        let m = MaterialParams::new(0.023, -14.9, 55.0).unwrap();
        for q in [
            Quantity::Energy,
            Quantity::SoiStrength,
            Quantity::Field,
            Quantity::Depth,
        ] {
            for x in [1e-3, 0.7, 412.5] {
                let c = PhysicalConstants::CODATA;
                let back = convert(
                    convert(x, Direction::ToPhysical, q, &m, &c),
                    Direction::ToDimensionless,
                    q,
                    &m,
                    &c,
                );
                assert!(rel(back, x) <= 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_material() {
        assert!(MaterialParams::new(0.0, 1.0, 30.0).is_err());
        assert!(MaterialParams::new(0.1, 1.0, -1.0).is_err());
        assert!("planck".parse::<PhysicalConstants>().is_err());
    }
}
