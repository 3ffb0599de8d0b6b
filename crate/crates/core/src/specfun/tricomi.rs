//! Tricomi's function U(γ, β, x) for integer β ≥ 1 and x > 0.

use super::continuation::{continue_to, State};
use super::gamma::{digamma, is_nonpositive_integer, ln_factorial, ln_gamma_abs, recip_gamma};
use super::{kummer, LogValue};
use crate::error::{Error, Result};

/// Cancellation ratio accepted from the logarithmic series.
const MAX_CANCELLATION: f64 = 1e3;
/// Smallest γ handled by the integral representation.
const INTEGRAL_MIN_GAMMA: f64 = 0.5;

pub(crate) fn eval(gamma: f64, beta: u32, x: f64) -> Result<LogValue> {
    if gamma == 0.0 {
        return Ok(LogValue::ONE);
    }
    let b = beta as f64;
    if is_nonpositive_integer(gamma) {
        return laguerre_case(gamma, beta, x);
    }
    if let Some((v, _)) = asymptotic(gamma, b, x) {
        return Ok(v);
    }
    if gamma >= INTEGRAL_MIN_GAMMA {
        return integral(gamma, b, x)
            .ok_or_else(|| Error::eval("tricomi_u", gamma, beta, x, "integral did not converge"));
    }
    if let Some(s) = log_series(gamma, beta, x) {
        if s.cancellation() <= MAX_CANCELLATION {
            return Ok(s.value);
        }
    }
    if let Some(v) = outward(gamma, beta, x)? {
        return Ok(v);
    }
    inward(gamma, beta, x)
}

fn turning_points(gamma: f64, beta: f64) -> (f64, f64) {
    // Whittaker form: Q = -1/4 + κ/x + (1/4 - μ²)/x²
    let kappa = 0.5 * beta - gamma;
    let mu = 0.5 * (beta - 1.0);
    let root = (4.0 * kappa * kappa + 1.0 - 4.0 * mu * mu).max(0.0).sqrt();
    (2.0 * kappa - root, 2.0 * kappa + root)
}

/// U(-n, β, x) = (-1)^n (β)_n M(-n, β, x).
fn laguerre_case(gamma: f64, beta: u32, x: f64) -> Result<LogValue> {
    let n = -gamma;
    let b = beta as f64;
    let m = kummer::eval(gamma, beta, x)?;
    let ln_poch = ln_gamma_abs(b + n) - ln_gamma_abs(b);
    let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(m.mul(LogValue::new(sign, ln_poch)))
}

/// Large-x expansion x^{-γ} Σ (γ)_k (γ-β+1)_k / k! (-x)^{-k}; returns
/// (U, U') when the series converges to double precision.
fn asymptotic(gamma: f64, beta: f64, x: f64) -> Option<(LogValue, LogValue)> {
    let a2 = gamma - beta + 1.0;
    let mut t = 1.0f64;
    let mut sum = 1.0f64;
    let mut dsum = -gamma;
    for k in 0..2000 {
        let kf = k as f64;
        let next = t * (gamma + kf) * (a2 + kf) / ((kf + 1.0) * -x);
        if next == 0.0 {
            break;
        }
        if next.abs() >= t.abs() && k > 0 {
            return None;
        }
        t = next;
        sum += t;
        dsum += t * -(gamma + kf + 1.0);
        if t.abs() <= 1e-17 * sum.abs() && (t * (gamma + kf + 1.0)).abs() <= 1e-17 * dsum.abs() {
            break;
        }
        if k == 1999 {
            return None;
        }
    }
    let ln_pref = -gamma * x.ln();
    Some((
        LogValue::from_scaled(sum, ln_pref),
        LogValue::from_scaled(dsum / x, ln_pref),
    ))
}

/// Integral representation for γ > 0:
/// U = 1/Γ(γ) ∫₀^∞ e^{-xt} t^{γ-1} (1+t)^{β-γ-1} dt, evaluated by the
/// trapezoid rule in s = ln t (spectrally accurate for this integrand).
fn integral(gamma: f64, beta: f64, x: f64) -> Option<LogValue> {
    let c = beta - gamma - 1.0;
    let phi = |s: f64| gamma * s + c * s.exp().ln_1p() - x * s.exp();
    let dphi = |s: f64| {
        let e = s.exp();
        gamma + c * e / (1.0 + e) - x * e
    };
    // φ' is decreasing in the region that matters; bracket and bisect.
    let mut lo = (gamma / (2.0 * (x + c.abs()))).ln();
    let mut hi = ((gamma + c.abs() + 1.0) / x).ln() + 1.0;
    while dphi(lo) < 0.0 {
        lo -= 2.0;
    }
    while dphi(hi) > 0.0 {
        hi += 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dphi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * (1.0 + mid.abs()) {
            break;
        }
    }
    let s0 = 0.5 * (lo + hi);
    let p0 = phi(s0);
    // φ'' = c e/(1+e)^2 - x e
    let e0 = s0.exp();
    let curv = (c * e0 / ((1.0 + e0) * (1.0 + e0)) - x * e0).abs();
    let width = 1.0 / curv.sqrt().max(1e-3);
    let h = (width / 8.0).min(0.25);
    let mut total = 1.0f64;
    for dir in [1.0, -1.0] {
        let mut k = 1;
        loop {
            let d = phi(s0 + dir * k as f64 * h) - p0;
            if d.is_nan() {
                return None;
            }
            if d < -45.0 {
                break;
            }
            total += d.exp();
            k += 1;
            if k > 200_000 {
                return None;
            }
        }
    }
    let (rs, rl) = recip_gamma(gamma);
    Some(LogValue::new(rs, rl + p0 + (h * total).ln()))
}

/// Integer-β logarithmic series (n = β - 1):
/// U = (-1)^{n+1}/(n! Γ(γ-n)) Σ_k (γ)_k/((n+1)_k k!) x^k
///         [ln x + ψ(γ+k) - ψ(1+k) - ψ(n+k+1)]
///   + 1/Γ(γ) Σ_{k=1}^{n} (k-1)! (1-γ+k)_{n-k} / (n-k)! x^{-k}.
pub(crate) fn log_series(gamma: f64, beta: u32, x: f64) -> Option<kummer::SeriesSum> {
    let n = beta - 1;
    let nf = n as f64;
    let lnx = x.ln();

    // Logarithmic part, in units of 1/Γ(γ-n).
    let mut a = 1.0f64;
    let mut psi1 = digamma(1.0);
    let mut psin = digamma(nf + 1.0);
    let mut sum = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut converged = false;
    for k in 0..100_000usize {
        let kf = k as f64;
        let bracket = lnx + digamma(gamma + kf) - psi1 - psin;
        let t = a * bracket;
        sum += t;
        abs_sum += t.abs();
        if !sum.is_finite() {
            return None;
        }
        // bound on every later term ratio, as in the Maclaurin series of M
        let bound = ((gamma.abs() + kf) * x / ((nf + 1.0 + kf) * (kf + 1.0))).max(x / (nf + 1.0 + kf));
        if bound < 0.5 && t.abs() <= 1e-17 * abs_sum && a.abs() <= 1e-17 * abs_sum {
            converged = true;
            break;
        }
        a *= (gamma + kf) * x / ((nf + 1.0 + kf) * (kf + 1.0));
        psi1 += 1.0 / (kf + 1.0);
        psin += 1.0 / (nf + kf + 1.0);
        if a == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let (rs, rl) = recip_gamma(gamma - nf);
    let sign_n = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let pref = rl - ln_factorial(n);
    let log_part = LogValue::from_scaled(sum, pref).mul(LogValue::new(rs * sign_n, 0.0));
    let log_abs = if rs == 0.0 {
        f64::NEG_INFINITY
    } else {
        abs_sum.ln() + pref
    };

    // Finite part, each term in log form.
    let (gs, gl) = recip_gamma(gamma);
    let mut fin = LogValue::ZERO;
    let mut fin_abs = LogValue::ZERO;
    if gs != 0.0 {
        for k in 1..=n {
            let mut sgn = gs;
            let mut ln_t = gl + ln_factorial(k - 1) - ln_factorial(n - k) - k as f64 * lnx;
            for j in 0..(n - k) {
                let f = 1.0 - gamma + k as f64 + j as f64;
                if f == 0.0 {
                    sgn = 0.0;
                    break;
                }
                sgn *= f.signum();
                ln_t += f.abs().ln();
            }
            let term = LogValue::new(sgn, ln_t);
            fin = fin.add(term);
            fin_abs = fin_abs.add(LogValue::new(sgn.abs(), ln_t));
        }
    }

    let value = log_part.add(fin);
    let ln_abs_sum = if fin_abs.is_zero() {
        log_abs
    } else if log_abs == f64::NEG_INFINITY {
        fin_abs.ln_abs()
    } else {
        let m = log_abs.max(fin_abs.ln_abs());
        m + ((log_abs - m).exp() + (fin_abs.ln_abs() - m).exp()).ln()
    };
    Some(kummer::SeriesSum { value, ln_abs_sum })
}

/// Start from the logarithmic series near the origin and integrate outward.
/// Outward integration loses accuracy like (x_inner / x_start)^(β-1) inside
/// the inner forbidden zone, so `None` is returned when the start point
/// lies too deep inside it, or when x is past the outer turning point
/// (where U is recessive in the outward direction).
fn outward(gamma: f64, beta: u32, x: f64) -> Result<Option<LogValue>> {
    let b = beta as f64;
    if x > turning_points(gamma, b).1 {
        return Ok(None);
    }
    let (inner, _) = turning_points(gamma + 1.0, b + 1.0);
    let floor = if beta > 1 {
        inner * 10f64.powf(-1.0 / (b - 1.0))
    } else {
        0.0
    };
    let mut xs = 0.5 * x;
    while xs > floor && xs > 1e-300 {
        let v = log_series(gamma, beta, xs);
        let d = log_series(gamma + 1.0, beta + 1, xs);
        if let (Some(v), Some(d)) = (v, d) {
            if v.cancellation() <= MAX_CANCELLATION && d.cancellation() <= MAX_CANCELLATION {
                let start = State::from_log(xs, v.value, d.value.scale(-gamma));
                return Ok(Some(continue_to(gamma, beta, start, x)?.value()));
            }
        }
        xs *= 0.5;
    }
    Ok(None)
}

/// Hard case (γ < 1/2, x not reachable by either series): obtain (U, U')
/// at a point X past the outer turning point, then integrate Kummer's
/// equation inward to x. Inward is the stable direction for U through the
/// oscillatory zone and the inner forbidden zone alike.
fn inward(gamma: f64, beta: u32, x: f64) -> Result<LogValue> {
    let b = beta as f64;
    let (_, outer) = turning_points(gamma, b);
    let big = x.max(1.25 * outer + 1.0);
    let (v, d) = match asymptotic(gamma, b, big) {
        Some(pair) => pair,
        None => (
            downward(gamma, beta, big)?,
            downward(gamma + 1.0, beta + 1, big)?.scale(-gamma),
        ),
    };
    if big == x {
        return Ok(v);
    }
    let start = State::from_log(big, v, d);
    Ok(continue_to(gamma, beta, start, x)?.value())
}

/// Recurrence in the first parameter,
/// U(a-1) = (2a + x - β) U(a) - a (a - β + 1) U(a+1),
/// run downward from a seed pair with a ≥ 1/2 taken from the integral
/// representation. Past the outer turning point U is the minimal solution
/// as a → ∞, so this direction is stable there.
fn downward(gamma: f64, beta: u32, x: f64) -> Result<LogValue> {
    let b = beta as f64;
    let steps = (INTEGRAL_MIN_GAMMA - gamma).ceil().max(0.0);
    let a0 = gamma + steps;
    let fail = || Error::eval("tricomi_u", gamma, beta, x, "integral did not converge");
    let lo = integral(a0, b, x).ok_or_else(fail)?;
    let hi = integral(a0 + 1.0, b, x).ok_or_else(fail)?;
    let mut ln_scale = lo.ln_abs().max(hi.ln_abs());
    let mut cur = lo.mantissa(ln_scale);
    let mut above = hi.mantissa(ln_scale);
    for j in 0..steps as usize {
        let a = a0 - j as f64;
        let below = (2.0 * a + x - b) * cur - a * (a - b + 1.0) * above;
        above = cur;
        cur = below;
        let m = cur.abs().max(above.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            cur /= m;
            above /= m;
            ln_scale += m.ln();
        }
    }
    Ok(LogValue::from_scaled(cur, ln_scale))
}
