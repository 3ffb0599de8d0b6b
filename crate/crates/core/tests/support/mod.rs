//! Arbitrary-precision fixed-point series used as independent references.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Fixed-point number v · 2^-bits.
#[derive(Clone, Debug)]
pub struct Fixed {
    v: BigInt,
    bits: u32,
}

fn decode(x: f64) -> (BigInt, i32) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(mant);
    (if x < 0.0 { -m } else { m }, e)
}

impl Fixed {
    pub fn from_f64(x: f64, bits: u32) -> Fixed {
        let (m, e) = decode(x);
        let shift = bits as i32 + e;
        let v = if shift >= 0 {
            m << shift as usize
        } else {
            m >> (-shift) as usize
        };
        Fixed { v, bits }
    }

    pub fn one(bits: u32) -> Fixed {
        Fixed {
            v: BigInt::from(1) << bits as usize,
            bits,
        }
    }

    /// Multiply by an exactly represented f64.
    pub fn mul_f64(&self, x: f64) -> Fixed {
        let (m, e) = decode(x);
        let p = &self.v * m;
        let v = if e >= 0 { p << e as usize } else { p >> (-e) as usize };
        Fixed { v, bits: self.bits }
    }

    /// Multiply by (x + k) formed exactly.
    pub fn mul_f64_plus(&self, x: f64, k: u64) -> Fixed {
        let (m, e) = decode(x);
        let (num, shift) = if e >= 0 {
            ((m << e as usize) + BigInt::from(k), 0usize)
        } else {
            (m + (BigInt::from(k) << (-e) as usize), (-e) as usize)
        };
        Fixed {
            v: (&self.v * num) >> shift,
            bits: self.bits,
        }
    }

    pub fn div_u64(&self, d: u64) -> Fixed {
        Fixed {
            v: &self.v / BigInt::from(d),
            bits: self.bits,
        }
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed {
            v: &self.v + &o.v,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed {
            v: (&self.v * &o.v) >> self.bits as usize,
            bits: self.bits,
        }
    }

    pub fn is_negligible(&self) -> bool {
        self.v.abs() < BigInt::from(16)
    }

    /// (sign, ln|value|)
    pub fn ln(&self) -> (f64, f64) {
        if self.v.is_zero() {
            return (0.0, f64::NEG_INFINITY);
        }
        let sign = if self.v.is_negative() { -1.0 } else { 1.0 };
        let a = self.v.abs();
        let len = a.bits() as i64;
        let drop = (len - 60).max(0);
        let top = (&a >> drop as usize).to_f64().unwrap();
        (
            sign,
            top.ln() + (drop - self.bits as i64) as f64 * std::f64::consts::LN_2,
        )
    }

    pub fn to_f64(&self) -> f64 {
        let (s, l) = self.ln();
        s * l.exp()
    }
}

/// Working precision for a series whose terms grow to about e^x.
pub fn bits_for(x: f64) -> u32 {
    256 + (3.0 * x.abs() / std::f64::consts::LN_2) as u32
}

/// Σ (γ)_k / (β)_k · x^k / k! with x of either sign.
pub fn kummer_series(gamma: f64, beta: u32, x: f64, bits: u32) -> Fixed {
    let mut term = Fixed::one(bits);
    let mut sum = term.clone();
    let mut k = 0u64;
    loop {
        term = term
            .mul_f64_plus(gamma, k)
            .mul_f64(x)
            .div_u64((beta as u64 + k) * (k + 1));
        sum = sum.add(&term);
        k += 1;
        if term.is_negligible() && (gamma + k as f64 > 0.0 || gamma.fract() == 0.0) && k as f64 > x.abs() {
            return sum;
        }
        if k > 200_000 {
            panic!("series did not terminate");
        }
    }
}

/// e^x for x >= 0.
pub fn exp_series(x: f64, bits: u32) -> Fixed {
    let mut term = Fixed::one(bits);
    let mut sum = term.clone();
    let mut k = 1u64;
    loop {
        term = term.mul_f64(x).div_u64(k);
        sum = sum.add(&term);
        if term.is_negligible() && k as f64 > x {
            return sum;
        }
        k += 1;
    }
}

/// J₀(x) = Σ (-x²/4)^k / (k!)².
pub fn bessel_j0_series(x: f64, bits: u32) -> Fixed {
    let q = -x * x / 4.0;
    let mut term = Fixed::one(bits);
    let mut sum = term.clone();
    let mut k = 1u64;
    loop {
        term = term.mul_f64(q).div_u64(k * k);
        sum = sum.add(&term);
        if term.is_negligible() && k as f64 > x {
            return sum;
        }
        k += 1;
    }
}
