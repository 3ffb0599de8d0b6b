//! Kummer's function M(γ, β, x).

use super::continuation::{continue_to, State};
use super::gamma::is_nonpositive_integer;
use super::LogValue;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;
/// Cancellation ratio Σ|t| / |Σt| accepted from the series.
const MAX_CANCELLATION: f64 = 1e3;
const RESCALE: f64 = 1e250;

pub(crate) struct SeriesSum {
    pub value: LogValue,
    /// ln Σ|t_k|, used to estimate rounding error.
    pub ln_abs_sum: f64,
}

impl SeriesSum {
    pub fn cancellation(&self) -> f64 {
        if self.value.is_zero() {
            f64::INFINITY
        } else {
            (self.ln_abs_sum - self.value.ln_abs()).exp()
        }
    }
}

/// Maclaurin series Σ (γ)_k / (β)_k x^k / k!.
pub(crate) fn series(gamma: f64, beta: f64, x: f64) -> Option<SeriesSum> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut abs_sum = 1.0f64;
    let mut ln_scale = 0.0f64;
    let terminating = is_nonpositive_integer(gamma);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (gamma + kf) * x / ((beta + kf) * (kf + 1.0));
        term *= ratio;
        if term == 0.0 && terminating {
            return Some(SeriesSum {
                value: LogValue::from_scaled(sum, ln_scale),
                ln_abs_sum: abs_sum.ln() + ln_scale,
            });
        }
        sum += term;
        abs_sum += term.abs();
        if abs_sum > RESCALE {
            term /= RESCALE;
            sum /= RESCALE;
            abs_sum /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        // Every later ratio is bounded by `bound`, so the tail is geometric.
        let kn = kf + 1.0;
        let bound = ((gamma.abs() + kn) * x / ((beta + kn) * (kn + 1.0))).max(x / (beta + kn));
        if bound < 1.0 {
            let tail = term.abs() * bound / (1.0 - bound);
            if tail <= 1e-17 * abs_sum {
                return Some(SeriesSum {
                    value: LogValue::from_scaled(sum, ln_scale),
                    ln_abs_sum: abs_sum.ln() + ln_scale,
                });
            }
        }
        if !sum.is_finite() {
            return None;
        }
    }
    None
}

pub(crate) fn eval(gamma: f64, beta: u32, x: f64) -> Result<LogValue> {
    if x == 0.0 || gamma == 0.0 {
        return Ok(LogValue::ONE);
    }
    let b = beta as f64;
    let fail = |reason: &str| Error::eval("kummer_m", gamma, beta, x, reason);
    if let Some(s) = series(gamma, b, x) {
        if gamma >= 0.0 || s.cancellation() <= MAX_CANCELLATION {
            return Ok(s.value);
        }
    }
    // Start close to the origin, where the series is cancellation-free, and
    // integrate outward (the dominant direction for M).
    let mut xs = x.min(1.0 / gamma.abs());
    let start = loop {
        let v = series(gamma, b, xs);
        let d = series(gamma + 1.0, b + 1.0, xs);
        if let (Some(v), Some(d)) = (v, d) {
            if v.cancellation() <= MAX_CANCELLATION && d.cancellation() <= MAX_CANCELLATION {
                break State::from_log(xs, v.value, d.value.scale(gamma / b));
            }
        }
        xs *= 0.25;
        if xs < 1e-300 {
            return Err(fail("no accurate starting point for continuation"));
        }
    };
    Ok(continue_to(gamma, beta, start, x)?.value())
}
