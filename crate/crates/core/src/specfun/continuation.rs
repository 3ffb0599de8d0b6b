//! Taylor-series continuation of solutions of Kummer's equation
//! x y'' + (β - x) y' - γ y = 0 along the positive real axis.

use super::LogValue;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 600;
const MAX_STEPS: usize = 2_000_000;

/// A solution (y, y') at `x`, both scaled by `exp(ln_scale)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct State {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
    pub ln_scale: f64,
}

impl State {
    pub fn from_log(x: f64, y: LogValue, dy: LogValue) -> Self {
        let r = y.ln_abs().max(dy.ln_abs());
        State {
            x,
            y: y.mantissa(r),
            dy: dy.mantissa(r),
            ln_scale: r,
        }
    }

    pub fn value(&self) -> LogValue {
        LogValue::from_scaled(self.y, self.ln_scale)
    }

    fn renormalize(&mut self) {
        let m = self.y.abs().max(self.dy.abs());
        if m > 0.0 && m.is_finite() {
            self.y /= m;
            self.dy /= m;
            self.ln_scale += m.ln();
        }
    }
}

/// Largest step from `x0` keeping every local exponential rate below 2/h.
fn max_step(gamma: f64, beta: f64, x0: f64) -> f64 {
    // Local rates solve x λ² + (β - x) λ - γ = 0.
    let p = (x0 - beta) / x0;
    let q = gamma / x0;
    let disc = p * p + 4.0 * q;
    let rate = if disc >= 0.0 {
        0.5 * (p.abs() + disc.sqrt())
    } else {
        (q.abs()).sqrt()
    };
    let h = 2.0 / (rate + 1.0);
    h.min(0.5 * x0)
}

/// One Taylor step of length `h` (either sign) from `s`.
fn step(gamma: f64, beta: f64, s: &State, h: f64) -> Option<State> {
    let x0 = s.x;
    // d_k = c_k h^k with c_k the Taylor coefficients of y at x0.
    let mut dm1 = s.y;
    let mut d0 = s.dy * h;
    let mut y = dm1 + d0;
    let mut yp = d0;
    let mut prev_small = false;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let next =
            (-(kf + 1.0) * (kf + beta - x0) * d0 * h + (kf + gamma) * dm1 * h * h) / (x0 * (kf + 2.0) * (kf + 1.0));
        y += next;
        yp += (kf + 2.0) * next;
        let small = (next.abs() * (kf + 2.0)) <= 1e-17 * (y.abs() + yp.abs());
        if small && prev_small && k >= 2 {
            let mut out = State {
                x: x0 + h,
                y,
                dy: yp / h,
                ln_scale: s.ln_scale,
            };
            out.renormalize();
            return Some(out);
        }
        prev_small = small;
        dm1 = d0;
        d0 = next;
        if !next.is_finite() {
            return None;
        }
    }
    None
}

/// Carry `start` to `target` (x = 0 excluded).
pub(crate) fn continue_to(gamma: f64, beta: u32, start: State, target: f64) -> Result<State> {
    let b = beta as f64;
    let mut s = start;
    s.renormalize();
    let fail = |reason: &str| Error::eval("continuation", gamma, beta, target, reason);
    for _ in 0..MAX_STEPS {
        let remaining = target - s.x;
        if remaining == 0.0 {
            return Ok(s);
        }
        let hmax = max_step(gamma, b, s.x);
        let h = if remaining.abs() <= hmax * 1.000_001 {
            remaining
        } else {
            hmax.copysign(remaining)
        };
        s = step(gamma, b, &s, h).ok_or_else(|| fail("Taylor step did not converge"))?;
        if remaining.abs() <= hmax * 1.000_001 {
            s.x = target;
            return Ok(s);
        }
    }
    Err(fail("too many continuation steps"))
}
