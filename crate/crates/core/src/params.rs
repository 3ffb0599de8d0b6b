//! The dimensionless problem tuple and the confining potential.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensionless parameters: angular momentum `m`, well depth `v`,
/// spin-orbit strength `a`, magnetic field `b` and inner radius `r_i`
/// (in units of the outer radius).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingParams {
    pub m: i32,
    pub v: f64,
    pub a: f64,
    pub b: f64,
    pub r_i: f64,
}

impl RingParams {
    pub fn new(m: i32, v: f64, a: f64, b: f64, r_i: f64) -> Result<Self> {
        let p = RingParams { m, v, a, b, r_i };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::Domain(what));
        if !(self.v > 0.0 && self.v.is_finite()) {
            return bad(format!("well depth v must be positive, got {}", self.v));
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return bad(format!("spin-orbit strength a must be >= 0, got {}", self.a));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return bad(format!("field b must be positive, got {}", self.b));
        }
        if !(self.r_i >= 0.0 && self.r_i < 1.0) {
            return bad(format!("inner radius r_i must lie in [0, 1), got {}", self.r_i));
        }
        Ok(())
    }

    pub fn with_m(self, m: i32) -> Self {
        RingParams { m, ..self }
    }

    pub fn with_a(self, a: f64) -> Self {
        RingParams { a, ..self }
    }

    /// Order of the hypergeometric functions, |m| + 1.
    pub fn beta(&self) -> u32 {
        self.m.unsigned_abs() + 1
    }

    /// Inner radius below which the ring is treated as a dot.
    pub const DOT_RADIUS: f64 = 1e-8;

    pub fn is_dot(&self) -> bool {
        self.r_i < Self::DOT_RADIUS
    }

    pub fn potential(&self) -> PotentialProfile {
        PotentialProfile {
            v: self.v,
            r_i: self.r_i,
        }
    }
}

/// The step potential: `v` on (0, r_i), 0 on (r_i, 1), `v` on (1, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialProfile {
    pub v: f64,
    pub r_i: f64,
}

impl PotentialProfile {
    pub fn value(&self, r: f64) -> f64 {
        if r < self.r_i || r > 1.0 {
            self.v
        } else {
            0.0
        }
    }

    /// Region boundaries, `[r_i, 1]` (or `[1]` for a dot).
    pub fn breakpoints(&self) -> Vec<f64> {
        if self.r_i > 0.0 {
            vec![self.r_i, 1.0]
        } else {
            vec![1.0]
        }
    }

    /// `∫ v_c r dr / ∫ r dr` over `[lo, hi]`.
    pub fn cell_average(&self, lo: f64, hi: f64) -> f64 {
        let w = |x: f64, y: f64| (y * y - x * x).max(0.0);
        let total = w(lo, hi);
        if total == 0.0 {
            return self.value(lo);
        }
        let inner = w(lo, hi.min(self.r_i));
        let outer = w(lo.max(1.0), hi);
        self.v * (inner + outer) / total
    }
}

/// Effective radial potential `v_c + m²/r² + 2bm + b²r²` (energies are
/// compared against it after adding a²).
pub fn effective_potential(p: &RingParams, r: f64) -> f64 {
    let m = p.m as f64;
    p.potential().value(r) + m * m / (r * r) + 2.0 * p.b * m + p.b * p.b * r * r
}

/// Infimum of the effective potential over r > 0, minus a²: no bound state
/// lies below this energy.
pub fn energy_floor(p: &RingParams) -> f64 {
    let m = p.m as f64;
    let b = p.b;
    let g = |r: f64| m * m / (r * r) + b * b * r * r;
    // unconstrained minimiser of m²/r² + b²r²
    let r_star = (m.abs() / b).sqrt();
    let inf_on = |lo: f64, hi: f64| -> f64 {
        if m == 0.0 && lo == 0.0 {
            return 0.0;
        }
        let r = r_star.clamp(lo, hi);
        if r == 0.0 {
            f64::INFINITY
        } else {
            g(r)
        }
    };
    let mut best = inf_on(p.r_i, 1.0);
    if p.r_i > 0.0 {
        best = best.min(p.v + inf_on(0.0, p.r_i));
    }
    let outer = if r_star > 1.0 { g(r_star) } else { g(1.0) };
    best = best.min(p.v + outer);
    best + 2.0 * b * m - p.a * p.a
}
