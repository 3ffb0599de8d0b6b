//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature for vector-valued
//! integrands. All components share one panel structure, so ratios of the
//! components inherit correlated errors.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for the abscissae XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

/// Convergence target: stop once the summed error estimate is below
/// `max(abs, rel * max_k |I_k|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub intervals: usize,
}

struct Interval<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Interval<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Interval<N> {}
impl<const N: usize> PartialOrd for Interval<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Interval<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Interval<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [[0.0; N]; 21];
    fv[10] = f(center)?;
    for j in 0..10 {
        let dx = half * XGK[j];
        fv[j] = f(center - dx)?;
        fv[20 - j] = f(center + dx)?;
    }
    let mut value = [0.0; N];
    let mut error = 0.0f64;
    for c in 0..N {
        let mut kronrod = WGK[10] * fv[10][c];
        let mut gauss = 0.0;
        let mut abs = WGK[10] * fv[10][c].abs();
        for j in 0..10 {
            let pair = fv[j][c] + fv[20 - j][c];
            kronrod += WGK[j] * pair;
            abs += WGK[j] * (fv[j][c].abs() + fv[20 - j][c].abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * pair;
            }
        }
        let mean = 0.5 * kronrod;
        let mut asc = WGK[10] * (fv[10][c] - mean).abs();
        for j in 0..10 {
            asc += WGK[j] * ((fv[j][c] - mean).abs() + (fv[20 - j][c] - mean).abs());
        }
        let (kronrod, abs, asc) = (kronrod * half, abs * half.abs(), asc * half.abs());
        let mut err = (kronrod - gauss * half).abs();
        if asc != 0.0 && err != 0.0 {
            err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
        }
        if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * abs);
        }
        value[c] = kronrod;
        error = error.max(err);
    }
    Ok(Interval { a, b, value, error })
}

/// Integrate over `[breaks[0], breaks[last]]`, starting from one panel per
/// consecutive pair of breakpoints. Zero-width panels are skipped.
pub fn integrate_panels<const N: usize, F>(mut f: F, breaks: &[f64], tol: Tolerance) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(gk21(&mut f, w[0], w[1])?);
        }
    }
    let lo = breaks.first().copied().unwrap_or(0.0);
    let hi = breaks.last().copied().unwrap_or(0.0);
    loop {
        let mut total = [0.0; N];
        let mut error = 0.0;
        for iv in heap.iter() {
            for c in 0..N {
                total[c] += iv.value[c];
            }
            error += iv.error;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if error <= tol.abs.max(tol.rel * scale) || heap.is_empty() {
            return Ok(Estimate {
                value: total,
                error,
                intervals: heap.len(),
            });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Integration {
                a: lo,
                b: hi,
                error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::Integration {
                a: worst.a,
                b: worst.b,
                error,
                intervals: heap.len(),
            });
        }
        heap.push(gk21(&mut f, worst.a, mid)?);
        heap.push(gk21(&mut f, mid, worst.b)?);
    }
}

/// Scalar convenience wrapper around [`integrate_panels`].
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<1>>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_panels(|x| Ok([f(x)?]), &[a, b], tol)
}
