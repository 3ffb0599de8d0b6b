//! Gamma-function helpers on the real line: ln|Γ|, sign Γ, ψ, and
//! exactly reduced trigonometric functions of πx.

use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Shift threshold for the Stirling series.
const STIRLING_MIN: f64 = 15.0;

// B_2k / (2k (2k - 1)) for k = 1..8
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_2k / (2k) for k = 1..7
const DIGAMMA_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// sin(πx) with the argument reduced exactly before multiplying by π.
pub fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64).rem_euclid(2) == 0 {
        s
    } else {
        -s
    }
}

/// cos(πx) with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let c = (PI * r).cos();
    if (n as i64).rem_euclid(2) == 0 {
        c
    } else {
        -c
    }
}

/// True when `x` is 0, -1, -2, ...
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn ln_gamma_positive(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x == x.trunc() && x <= 30.0 {
        let mut f = 1.0f64;
        for k in 2..x as u32 {
            f *= k as f64;
        }
        return f.ln();
    }
    if x < STIRLING_MIN {
        let shift = (STIRLING_MIN - x).ceil();
        let mut prod = 1.0;
        let mut z = x;
        for _ in 0..shift as usize {
            prod *= z;
            z += 1.0;
        }
        return ln_gamma_stirling(z) - prod.ln();
    }
    ln_gamma_stirling(x)
}

fn ln_gamma_stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in STIRLING_COEFFS {
        corr += c * p;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + corr
}

/// ln|Γ(x)|. Returns +∞ at the poles.
pub fn ln_gamma_abs(x: f64) -> f64 {
    if x > 0.0 {
        return ln_gamma_positive(x);
    }
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    // Γ(x) Γ(1 - x) = π / sin(πx)
    (PI / sin_pi(x).abs()).ln() - ln_gamma_positive(1.0 - x)
}

/// Sign of Γ(x); 0 at the poles (where 1/Γ vanishes).
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if is_nonpositive_integer(x) {
        0.0
    } else if (x.floor() as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// 1/Γ(x) as (sign, ln|·|); sign 0 at the poles.
pub fn recip_gamma(x: f64) -> (f64, f64) {
    let s = gamma_sign(x);
    if s == 0.0 {
        (0.0, f64::NEG_INFINITY)
    } else {
        (s, -ln_gamma_abs(x))
    }
}

/// Digamma ψ(x). Infinite at the poles.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        if is_nonpositive_integer(x) {
            return f64::INFINITY;
        }
        let r = x - x.round();
        return digamma(1.0 - x) - PI / (PI * r).tan();
    }
    let mut acc = 0.0;
    let mut z = x;
    while z < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut p = inv2;
    let mut series = 0.0;
    for c in DIGAMMA_COEFFS {
        series += c * p;
        p *= inv2;
    }
    acc + z.ln() - 0.5 / z - series
}

/// ln n! for small non-negative integers.
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma_abs(n as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma_abs(1.0)).abs() < 1e-15);
        assert!((ln_gamma_abs(2.0)).abs() < 1e-15);
        assert!((ln_gamma_abs(0.5) - 0.5 * PI.ln()).abs() < 1e-15);
        // ln 10! = ln 3628800
        assert!((ln_gamma_abs(11.0) - 3_628_800f64.ln()).abs() < 1e-13);
        // Γ(-0.5) = -2 sqrt(pi)
        assert!((ln_gamma_abs(-0.5) - (2.0 * PI.sqrt()).ln()).abs() < 1e-14);
        assert_eq!(gamma_sign(-0.5), -1.0);
        assert_eq!(gamma_sign(-1.5), 1.0);
        assert_eq!(gamma_sign(-3.0), 0.0);
    }

    #[test]
    fn digamma_known_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(1.0) + euler).abs() < 1e-15);
        assert!((digamma(0.5) + euler + 2.0 * 2f64.ln()).abs() < 1e-14);
        // ψ(-0.5) = ψ(0.5) + 2
        assert!((digamma(-0.5) - (digamma(0.5) + 2.0)).abs() < 1e-13);
        assert!((digamma(100.0) - 4.600_161_852_738_087).abs() < 1e-14);
    }

    #[test]
    fn reduced_trig() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert!((sin_pi(2.5) - 1.0).abs() < 1e-16);
        assert!((cos_pi(1e6 + 0.25) - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
