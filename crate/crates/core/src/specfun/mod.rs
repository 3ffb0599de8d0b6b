//! Confluent hypergeometric functions M(γ, β, x), U(γ, β, x) for integer
//! β ≥ 1 and real x ≥ 0, their x-derivatives, and the Bessel function J₀.
//!
//! Every function has a log-scaled form returning a [`LogValue`]; the plain
//! forms convert and report [`Error::Overflow`] when the value leaves the
//! `f64` range.
//!
//! Evaluation regimes:
//!
//! * M: Maclaurin series whenever it is free of cancellation (γ ≥ 0, or the
//!   estimated cancellation is small); otherwise the series is used close to
//!   the origin and the solution is carried to x by Taylor continuation of
//!   Kummer's equation, which is stable in the direction of increasing x.
//! * U: large-x asymptotic series when it converges; the integral
//!   representation for γ ≥ 1/2; the integer-β logarithmic series near the
//!   origin; otherwise Taylor continuation, inward from the asymptotic region
//!   when x lies past the outer turning point and outward from the
//!   logarithmic series when it lies inside the oscillatory zone.

mod bessel;
mod continuation;
pub mod gamma;
mod kummer;
mod tricomi;

pub use bessel::bessel_j0;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real number stored as `sign * exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    sign: f64,
    ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue { sign: 1.0, ln_abs: 0.0 };

    pub fn new(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                sign: v.signum(),
                ln_abs: v.abs().ln(),
            }
        }
    }

    /// `mantissa * exp(ln_scale)`.
    pub fn from_scaled(mantissa: f64, ln_scale: f64) -> Self {
        if mantissa == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                sign: mantissa.signum(),
                ln_abs: mantissa.abs().ln() + ln_scale,
            }
        }
    }

    pub fn sign(self) -> f64 {
        self.sign
    }

    pub fn ln_abs(self) -> f64 {
        self.ln_abs
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0.0
    }

    /// Plain value; may be ±∞ or 0 outside the `f64` range.
    pub fn to_f64(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn try_to_f64(self, function: &'static str) -> Result<f64> {
        let v = self.to_f64();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow {
                function,
                ln_abs: self.ln_abs,
            })
        }
    }

    /// `self / exp(ln_ref)` as a plain number.
    pub fn mantissa(self, ln_ref: f64) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * (self.ln_abs - ln_ref).exp()
        }
    }

    pub fn neg(self) -> Self {
        LogValue {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }

    pub fn mul(self, other: LogValue) -> Self {
        LogValue::new(self.sign * other.sign, self.ln_abs + other.ln_abs)
    }

    pub fn div(self, other: LogValue) -> Self {
        LogValue::new(self.sign * other.sign, self.ln_abs - other.ln_abs)
    }

    pub fn scale(self, factor: f64) -> Self {
        self.mul(LogValue::from_f64(factor))
    }

    pub fn add(self, other: LogValue) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let r = self.ln_abs.max(other.ln_abs);
        LogValue::from_scaled(self.mantissa(r) + other.mantissa(r), r)
    }
}

/// Parameters (γ, β, x) of M(γ, β, x) and U(γ, β, x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChfParams {
    gamma: f64,
    beta: u32,
    x: f64,
}

impl ChfParams {
    /// β must be an exact positive integer and x a finite non-negative number.
    pub fn new(gamma: f64, beta: f64, x: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
        }
        if !(beta >= 1.0 && beta == beta.trunc() && beta <= u32::MAX as f64) {
            return Err(Error::Domain(format!("beta must be a positive integer, got {beta}")));
        }
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!("x must be finite and >= 0, got {x}")));
        }
        Ok(ChfParams {
            gamma,
            beta: beta as u32,
            x,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// (γ + 1, β + 1, x), the parameters of both derivative identities.
    fn raised(&self) -> Self {
        ChfParams {
            gamma: self.gamma + 1.0,
            beta: self.beta + 1,
            x: self.x,
        }
    }
}

/// ln-scaled M(γ, β, x).
pub fn ln_kummer_m(p: ChfParams) -> Result<LogValue> {
    kummer::eval(p.gamma, p.beta, p.x)
}

/// Kummer's function M(γ, β, x).
pub fn kummer_m(p: ChfParams) -> Result<f64> {
    ln_kummer_m(p)?.try_to_f64("kummer_m")
}

/// ln-scaled dM/dx = (γ/β) M(γ+1, β+1, x).
pub fn ln_kummer_m_dx(p: ChfParams) -> Result<LogValue> {
    if p.gamma == 0.0 {
        return Ok(LogValue::ZERO);
    }
    Ok(ln_kummer_m(p.raised())?.scale(p.gamma / p.beta as f64))
}

pub fn kummer_m_dx(p: ChfParams) -> Result<f64> {
    ln_kummer_m_dx(p)?.try_to_f64("kummer_m_dx")
}

/// ln-scaled Tricomi function U(γ, β, x); x must be positive.
pub fn ln_tricomi_u(p: ChfParams) -> Result<LogValue> {
    if p.x == 0.0 {
        return Err(Error::Singularity {
            gamma: p.gamma,
            beta: p.beta,
        });
    }
    tricomi::eval(p.gamma, p.beta, p.x)
}

/// Tricomi's function U(γ, β, x).
pub fn tricomi_u(p: ChfParams) -> Result<f64> {
    ln_tricomi_u(p)?.try_to_f64("tricomi_u")
}

/// ln-scaled dU/dx = -γ U(γ+1, β+1, x).
pub fn ln_tricomi_u_dx(p: ChfParams) -> Result<LogValue> {
    if p.x == 0.0 {
        return Err(Error::Singularity {
            gamma: p.gamma,
            beta: p.beta,
        });
    }
    if p.gamma == 0.0 {
        return Ok(LogValue::ZERO);
    }
    Ok(ln_tricomi_u(p.raised())?.scale(-p.gamma))
}

pub fn tricomi_u_dx(p: ChfParams) -> Result<f64> {
    ln_tricomi_u_dx(p)?.try_to_f64("tricomi_u_dx")
}

/// Wronskian M U' - M' U = -Γ(β) x^{-β} eˣ / Γ(γ), in log form.
pub fn ln_wronskian_mu(p: ChfParams) -> LogValue {
    let (rs, rl) = gamma::recip_gamma(p.gamma);
    if rs == 0.0 {
        return LogValue::ZERO;
    }
    let b = p.beta as f64;
    LogValue::new(-rs, gamma::ln_gamma_abs(b) - b * p.x.ln() + p.x + rl)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: f64, b: f64, x: f64) -> ChfParams {
        ChfParams::new(g, b, x).unwrap()
    }

    #[test]
    fn params_reject_bad_beta() {
        assert!(ChfParams::new(0.5, 1.5, 1.0).is_err());
        assert!(ChfParams::new(0.5, 0.0, 1.0).is_err());
        assert!(ChfParams::new(0.5, 2.0, -1.0).is_err());
        assert!(ChfParams::new(f64::NAN, 2.0, 1.0).is_err());
    }

    #[test]
    fn m_at_origin_is_one() {
        for &(g, b) in &[(0.5, 1.0), (-37.2, 4.0), (120.0, 11.0)] {
            assert_eq!(kummer_m(p(g, b, 0.0)).unwrap(), 1.0);
        }
    }

    #[test]
    fn m_closed_form() {
        // M(1, 2, x) = (e^x - 1)/x
        let v = kummer_m(p(1.0, 2.0, 1.0)).unwrap();
        assert!((v - 1.718_281_828_459_045).abs() < 1e-15);
    }

    #[test]
    fn u_singular_at_origin() {
        assert!(matches!(tricomi_u(p(0.5, 1.0, 0.0)), Err(Error::Singularity { .. })));
    }

    #[test]
    fn u_degenerate_polynomial() {
        for &x in &[1e-3, 0.7, 15.0, 900.0] {
            assert_eq!(tricomi_u(p(0.0, 3.0, x)).unwrap(), 1.0);
            assert_eq!(tricomi_u_dx(p(0.0, 3.0, x)).unwrap(), 0.0);
        }
    }

    #[test]
    fn u_exponential_integral() {
        // U(1, 1, 1) = e E1(1)
        let v = tricomi_u(p(1.0, 1.0, 1.0)).unwrap();
        assert!((v - 0.596_347_362_323_194_1).abs() < 1e-14, "{v}");
    }

    #[test]
    fn m_derivative_at_origin() {
        let v = kummer_m_dx(p(-3.7, 2.0, 0.0)).unwrap();
        assert!((v - (-3.7 / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn log_value_arithmetic() {
        let a = LogValue::from_f64(-3.0);
        let b = LogValue::from_f64(5.0);
        assert!((a.add(b).to_f64() - 2.0).abs() < 1e-15);
        assert!((a.mul(b).to_f64() + 15.0).abs() < 1e-13);
        assert!((a.div(b).to_f64() + 0.6).abs() < 1e-15);
        assert!(a.add(a.neg()).is_zero());
        let huge = LogValue::new(1.0, 1000.0);
        assert!(huge.try_to_f64("t").is_err());
    }
}
