use std::f64::consts::PI;

/// Bessel function of the first kind, order zero, for real x.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-4 {
        return 1.0 - 0.25 * x * x;
    }
    if x < 25.0 {
        miller(x)
    } else {
        hankel(x)
    }
}

/// Backward recurrence normalised by 1 = J0 + 2 Σ J_2k.
fn miller(x: f64) -> f64 {
    let start = {
        let n = (x + 12.0 * x.powf(1.0 / 3.0) + 30.0) as usize;
        n + (n % 2)
    };
    let mut next = 0.0f64;
    let mut cur = 1e-300f64;
    let mut norm = 0.0f64;
    let mut j0 = 0.0;
    for k in (0..start).rev() {
        // J_{k} = (2(k+1)/x) J_{k+1} - J_{k+2}
        let prev = 2.0 * (k as f64 + 1.0) / x * cur - next;
        next = cur;
        cur = prev;
        if k == 0 {
            j0 = cur;
            norm += cur;
        } else if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            next /= 1e250;
            cur /= 1e250;
            norm /= 1e250;
        }
    }
    j0 / norm
}

/// Hankel asymptotic expansion, accurate to double precision for x ≥ 25.
fn hankel(x: f64) -> f64 {
    // u_k = a_k / x^k with a_k = a_{k-1} (-(2k-1)²) / (8k);
    // P collects (-1)^j u_2j and Q collects (-1)^j u_{2j+1}.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut u = 1.0f64;
    for k in 1..80usize {
        let odd = (2 * k - 1) as f64;
        let next = u * (-odd * odd) / (8.0 * k as f64 * x);
        if next.abs() > u.abs() {
            break;
        }
        u = next;
        let j = k / 2;
        let signed = if j % 2 == 0 { u } else { -u };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if u.abs() < 1e-18 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    // cos(x - π/4) = (cos x + sin x)/√2, sin(x - π/4) = (sin x - cos x)/√2
    let cosw = (c + s) * std::f64::consts::FRAC_1_SQRT_2;
    let sinw = (s - c) * std::f64::consts::FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cosw - q * sinw)
}
