//! First-order degenerate perturbation theory for the Zeeman term 4sbσz.
//!
//! The two spinor branches of a level share the radial factor u, so σz only
//! couples them off-diagonally, with matrix element 4sb·δ where
//! δ = ∫ J₀(2ar) u² r dr / ∫ u² r dr.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::Tolerance;
use crate::radial::RadialSolution;
use crate::specfun::bessel_j0;
use crate::spectrum::EnergyLevel;

/// Quadrature target for δ: tight enough that δ is insensitive to the
/// normalization of u at the 10⁻¹² level.
const DELTA_TOL: Tolerance = Tolerance {
    abs: 0.0,
    rel: 1e-13,
    max_intervals: 4000,
};

/// Dimensionless Zeeman scale `s = g M_eff / (4 M_e)` and field `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeemanParams {
    pub s: f64,
    pub b: f64,
}

impl ZeemanParams {
    /// Default sanity bound on |s|.
    pub const S_BOUND: f64 = 1.0;

    pub fn new(s: f64, b: f64) -> Result<Self> {
        Self::with_bound(s, b, Self::S_BOUND)
    }

    pub fn with_bound(s: f64, b: f64, s_bound: f64) -> Result<Self> {
        if !(s.is_finite() && s.abs() < s_bound) {
            return Err(Error::Domain(format!(
                "Zeeman scale |s| must be below {s_bound}, got {s}"
            )));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("field b must be positive, got {b}")));
        }
        Ok(ZeemanParams { s, b })
    }
}

/// Zero-order eigenvector: (Ψ₀⁺ ± Ψ₀⁻)/√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenvectorCombination {
    Symmetric,
    Antisymmetric,
}

/// A level split by the Zeeman term: e± = e₀ ± e′.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitLevel {
    /// The level with `delta` and `e_prime` filled in.
    pub base: EnergyLevel,
    pub e_plus: f64,
    pub e_minus: f64,
}

impl SplitLevel {
    /// The state with energy `e_plus` is the symmetric combination.
    pub const PLUS_STATE: EigenvectorCombination = EigenvectorCombination::Symmetric;
    pub const MINUS_STATE: EigenvectorCombination = EigenvectorCombination::Antisymmetric;

    pub fn e0(&self) -> f64 {
        self.base.e0
    }

    pub fn e_prime(&self) -> f64 {
        self.base.e_prime.expect("filled by zeeman_correction")
    }
}

/// δ = ∫ J₀(2ar) u² r dr / ∫ u² r dr, both integrals on shared panels.
pub fn overlap_delta(sol: &RadialSolution, a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(1.0);
    }
    let [den, num] = sol.integrate_weighted(|r| bessel_j0(2.0 * a * r), DELTA_TOL)?;
    Ok(num / den)
}

/// e′ = 4sbδ and the split pair. The diagonal σz elements vanish because the
/// two branches are orthogonal spin states; only the off-diagonal δ enters.
pub fn zeeman_correction(level: &EnergyLevel, zp: ZeemanParams, a: f64) -> Result<SplitLevel> {
    let delta = overlap_delta(&level.solution, a)?;
    let e_prime = 4.0 * zp.s * zp.b * delta;
    let mut base = level.clone();
    base.delta = Some(delta);
    base.e_prime = Some(e_prime);
    Ok(SplitLevel {
        e_plus: level.e0 + e_prime,
        e_minus: level.e0 - e_prime,
        base,
    })
}
