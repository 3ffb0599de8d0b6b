//! Piecewise radial wavefunction
//!
//! u(r) = x^{|m|/2} e^{-x/2} w(r),   x = b r²,
//!
//! with w = c1 M(γo) on (0, r_i), c21 M(γi) + c22 U(γi) on (r_i, 1) and
//! c3 U(γo) on (1, ∞). All basis values and coefficients are carried in log
//! form because M grows like eˣ while U can be astronomically small.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{effective_potential, RingParams};
use crate::quadrature::{integrate_panels, Tolerance};
use crate::specfun::{
    ln_kummer_m, ln_kummer_m_dx, ln_tricomi_u, ln_tricomi_u_dx, ln_wronskian_mu, ChfParams, LogValue,
};

/// Largest 1-norm condition number accepted for the coefficient system.
pub const MAX_CONDITION: f64 = 1e12;
const RUIZ_SWEEPS: usize = 60;

/// Truncate the outer tail once u²r drops this far below its peak.
const TAIL_DROP: f64 = 1e-16;

/// Hypergeometric parameters (γo, γi) for the outer/inner potential levels.
pub fn gammas(p: &RingParams, e0: f64) -> (f64, f64) {
    let m = p.m as f64;
    let base = 0.5 * (m + m.abs() + 1.0);
    let gamma_i = base - (e0 + p.a * p.a) / (4.0 * p.b);
    let gamma_o = base - (e0 + p.a * p.a - p.v) / (4.0 * p.b);
    (gamma_o, gamma_i)
}

/// A basis function value and its r-derivative.
pub(crate) type Pair = (LogValue, LogValue);

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    M,
    U,
}

fn basis_pair(kind: Kind, gamma: f64, beta: u32, b: f64, r: f64) -> Result<Pair> {
    let x = b * r * r;
    let p = ChfParams::new(gamma, beta as f64, x)?;
    let (w, dx) = match kind {
        Kind::M => (ln_kummer_m(p)?, ln_kummer_m_dx(p)?),
        Kind::U => (ln_tricomi_u(p)?, ln_tricomi_u_dx(p)?),
    };
    Ok((w, dx.scale(2.0 * b * r)))
}

/// f g' - f' g
pub(crate) fn wronskian(f: Pair, g: Pair) -> LogValue {
    f.0.mul(g.1).add(f.1.mul(g.0).neg())
}

fn lin(c1: LogValue, f: Pair, c2: LogValue, g: Pair) -> Pair {
    (c1.mul(f.0).add(c2.mul(g.0)), c1.mul(f.1).add(c2.mul(g.1)))
}

/// The four basis functions and their r-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisValues {
    pub w1: f64,
    pub w1_prime: f64,
    pub w21: f64,
    pub w21_prime: f64,
    pub w22: f64,
    pub w22_prime: f64,
    pub w3: f64,
    pub w3_prime: f64,
}

/// Evaluates w1 = M(γo), w21 = M(γi), w22 = U(γi), w3 = U(γo) at `point`.
pub fn basis_values(params: &RingParams, e0: f64, point: f64) -> Result<BasisValues> {
    if !(point > 0.0) {
        return Err(Error::Domain(format!("basis point must be positive, got {point}")));
    }
    let (go, gi) = gammas(params, e0);
    let (beta, b) = (params.beta(), params.b);
    let f = |pair: Pair, name: &'static str| -> Result<(f64, f64)> {
        Ok((pair.0.try_to_f64(name)?, pair.1.try_to_f64(name)?))
    };
    let (w1, w1_prime) = f(basis_pair(Kind::M, go, beta, b, point)?, "w1")?;
    let (w21, w21_prime) = f(basis_pair(Kind::M, gi, beta, b, point)?, "w21")?;
    let (w22, w22_prime) = f(basis_pair(Kind::U, gi, beta, b, point)?, "w22")?;
    let (w3, w3_prime) = f(basis_pair(Kind::U, go, beta, b, point)?, "w3")?;
    Ok(BasisValues {
        w1,
        w1_prime,
        w21,
        w21_prime,
        w22,
        w22_prime,
        w3,
        w3_prime,
    })
}

/// Region-1 solution carried across r_i, expressed in the region-2 basis,
/// together with the region-3 solution, both at r = 1.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Matching {
    /// Coefficients of M(γi) and U(γi) in region 2 (region-1 coefficient 1).
    pub c21: LogValue,
    pub c22: LogValue,
    /// Region-2 solution at r = 1.
    pub inner: Pair,
    /// U(γo) at r = 1.
    pub outer: Pair,
    /// Basis at r_i (absent for a dot): w1, w21, w22.
    pub at_ri: Option<[Pair; 3]>,
    /// w21, w22 at r = 1.
    pub at_one: [Pair; 2],
}

pub(crate) fn matching(p: &RingParams, e0: f64) -> Result<Matching> {
    let (go, gi) = gammas(p, e0);
    let (beta, b) = (p.beta(), p.b);
    let w21_1 = basis_pair(Kind::M, gi, beta, b, 1.0)?;
    let w22_1 = basis_pair(Kind::U, gi, beta, b, 1.0)?;
    let outer = basis_pair(Kind::U, go, beta, b, 1.0)?;
    if p.is_dot() {
        return Ok(Matching {
            c21: LogValue::ONE,
            c22: LogValue::ZERO,
            inner: w21_1,
            outer,
            at_ri: None,
            at_one: [w21_1, w22_1],
        });
    }
    let ri = p.r_i;
    let w1 = basis_pair(Kind::M, go, beta, b, ri)?;
    let w21 = basis_pair(Kind::M, gi, beta, b, ri)?;
    let w22 = basis_pair(Kind::U, gi, beta, b, ri)?;
    // Analytic Wronskian of the region-2 pair; it vanishes only where U(γi)
    // degenerates into a multiple of M(γi).
    let x = b * ri * ri;
    let w_x = ln_wronskian_mu(ChfParams::new(gi, beta as f64, x)?);
    let w_r = w_x.scale(2.0 * b * ri);
    let c21 = wronskian(w1, w22).div(w_r);
    let c22 = wronskian(w21, w1).div(w_r);
    let inner = lin(c21, w21_1, c22, w22_1);
    Ok(Matching {
        c21,
        c22,
        inner,
        outer,
        at_ri: Some([w1, w21, w22]),
        at_one: [w21_1, w22_1],
    })
}

fn norm2(pair: Pair) -> f64 {
    let l = pair.0.ln_abs().max(pair.1.ln_abs());
    let (a, b) = (pair.0.mantissa(l), pair.1.mantissa(l));
    l + 0.5 * (a * a + b * b).ln()
}

/// Sine of the angle between (φ, φ') and (w3, w3') at r = 1.
pub(crate) fn scaled_mismatch(m: &Matching) -> f64 {
    let w = wronskian(m.inner, m.outer);
    if w.is_zero() {
        return 0.0;
    }
    w.sign() * (w.ln_abs() - norm2(m.inner) - norm2(m.outer)).exp()
}

/// Which eigenvalue of σ = (σx - σy)/√2 labels the spinor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// One of the two degenerate spinor states sharing a radial factor. The
/// spinor and the spin-orbit phase factor are carried symbolically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorAnsatz {
    pub branch: Branch,
    pub m: i32,
    pub radial: RadialSolution,
}

impl SpinorAnsatz {
    pub fn pair(radial: RadialSolution) -> [SpinorAnsatz; 2] {
        let m = radial.params.m;
        [
            SpinorAnsatz {
                branch: Branch::Plus,
                m,
                radial: radial.clone(),
            },
            SpinorAnsatz {
                branch: Branch::Minus,
                m,
                radial,
            },
        ]
    }
}

/// Fully determined, normalized radial solution at one energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    params: RingParams,
    e0: f64,
    gamma_o: f64,
    gamma_i: f64,
    beta: u32,
    c1: LogValue,
    c21: LogValue,
    c22: LogValue,
    c3: LogValue,
    ln_norm: f64,
    tail: f64,
}

type LnMatrix = [[f64; 3]; 3];

fn scale_rows(ln: &mut LnMatrix, weight: f64) {
    for row in ln.iter_mut() {
        let mx = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        row.iter_mut().for_each(|v| *v -= weight * mx);
    }
}

fn scale_cols(ln: &mut LnMatrix, weight: f64) {
    for j in 0..3 {
        let mx = (0..3).map(|i| ln[i][j]).fold(f64::NEG_INFINITY, f64::max);
        (0..3).for_each(|i| ln[i][j] -= weight * mx);
    }
}

/// 1-norm condition number of the matrix with entries sign · exp(ln).
fn scaled_condition(ln: &LnMatrix, sg: &[[f64; 3]; 3]) -> f64 {
    let a: Vec<Vec<f64>> = (0..3)
        .map(|i| (0..3).map(|j| sg[i][j] * ln[i][j].exp()).collect())
        .collect();
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det == 0.0 || !det.is_finite() {
        return f64::INFINITY;
    }
    let cof = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let m = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]];
        if (i + j).is_multiple_of(2) {
            m
        } else {
            -m
        }
    };
    let norm1 = |m: &dyn Fn(usize, usize) -> f64| {
        (0..3)
            .map(|j| (0..3).map(|i| m(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let n_a = norm1(&|i, j| a[i][j]);
    // inverse = adjugate / det, adjugate[i][j] = cof(j, i)
    let n_inv = norm1(&|i, j| cof(j, i) / det);
    n_a * n_inv
}

/// Equilibrated 1-norm condition number of the 3×3 coefficient system
/// (unknowns c21, c22, c3; rows: value and slope at r_i, value at 1).
///
/// Any diagonal scaling bounds the optimally scaled condition number from
/// above, so the smallest of three heuristics is reported: row-then-column,
/// column-then-row and Ruiz. No single one is reliable here; at small r_i
/// the r = 1 row can set the column scale and make the r_i rows look
/// parallel under row-first scaling.
fn condition_number(at_ri: [Pair; 3], at_one: [Pair; 2], outer: Pair) -> f64 {
    let [_, w21, w22] = at_ri;
    let rows = [
        [w21.0, w22.0, LogValue::ZERO],
        [w21.1, w22.1, LogValue::ZERO],
        [at_one[0].0, at_one[1].0, outer.0.neg()],
    ];
    let mut ln = [[f64::NEG_INFINITY; 3]; 3];
    let mut sg = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            ln[i][j] = rows[i][j].ln_abs();
            sg[i][j] = rows[i][j].sign();
        }
    }
    let mut row_first = ln;
    scale_rows(&mut row_first, 1.0);
    scale_cols(&mut row_first, 1.0);
    let mut col_first = ln;
    scale_cols(&mut col_first, 1.0);
    scale_rows(&mut col_first, 1.0);
    let mut ruiz = ln;
    for _ in 0..RUIZ_SWEEPS {
        scale_rows(&mut ruiz, 0.5);
        scale_cols(&mut ruiz, 0.5);
    }
    [row_first, col_first, ruiz]
        .iter()
        .map(|m| scaled_condition(m, &sg))
        .fold(f64::INFINITY, f64::min)
}

/// Solves the matching conditions at `e0` (c1 = 1, then normalizes so that
/// 2π ∫ u² r dr = 1).
pub fn solve_coefficients(params: &RingParams, e0: f64) -> Result<RadialSolution> {
    params.validate()?;
    let (gamma_o, gamma_i) = gammas(params, e0);
    let m = matching(params, e0)?;
    if let Some(at_ri) = m.at_ri {
        let cond = condition_number(at_ri, m.at_one, m.outer);
        if !(cond <= MAX_CONDITION) {
            return Err(Error::DegenerateMatching { e0, condition: cond });
        }
    }
    // Project the region-2 solution onto U(γo) at r = 1.
    let (lp, lw) = (
        m.inner.0.ln_abs().max(m.inner.1.ln_abs()),
        m.outer.0.ln_abs().max(m.outer.1.ln_abs()),
    );
    let (pv, pd) = (m.inner.0.mantissa(lp), m.inner.1.mantissa(lp));
    let (wv, wd) = (m.outer.0.mantissa(lw), m.outer.1.mantissa(lw));
    let denom = wv * wv + wd * wd;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::DegenerateMatching {
            e0,
            condition: f64::INFINITY,
        });
    }
    let c3 = LogValue::from_scaled((pv * wv + pd * wd) / denom, lp - lw);
    let c1 = if params.is_dot() { LogValue::ZERO } else { LogValue::ONE };
    let mut sol = RadialSolution {
        params: *params,
        e0,
        gamma_o,
        gamma_i,
        beta: params.beta(),
        c1,
        c21: m.c21,
        c22: m.c22,
        c3,
        ln_norm: 0.0,
        tail: 1.0,
    };
    sol.normalize()?;
    Ok(sol)
}

impl RadialSolution {
    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn gamma_o(&self) -> f64 {
        self.gamma_o
    }

    pub fn gamma_i(&self) -> f64 {
        self.gamma_i
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    /// Normalized coefficients (c1, c21, c22, c3) in log form.
    pub fn coefficients(&self) -> [LogValue; 4] {
        [self.c1, self.c21, self.c22, self.c3]
    }

    /// 2π ∫ u² r dr of the solution with c1 = 1, before rescaling, as a log.
    pub fn ln_norm(&self) -> f64 {
        self.ln_norm
    }

    pub fn norm(&self) -> f64 {
        self.ln_norm.exp()
    }

    /// Radius beyond which u² r is below 10⁻¹⁶ of its peak.
    pub fn tail_radius(&self) -> f64 {
        self.tail
    }

    /// Copy with every coefficient multiplied by `factor` (> 0); the
    /// normalization bookkeeping is left unchanged.
    pub fn rescaled(&self, factor: f64) -> RadialSolution {
        let f = LogValue::from_f64(factor);
        RadialSolution {
            c1: self.c1.mul(f),
            c21: self.c21.mul(f),
            c22: self.c22.mul(f),
            c3: self.c3.mul(f),
            ..self.clone()
        }
    }

    /// w(r) and dw/dr in log form.
    fn w_pair(&self, r: f64) -> Result<Pair> {
        let (b, beta) = (self.params.b, self.beta);
        if r < self.params.r_i && !self.params.is_dot() {
            let (w, d) = basis_pair(Kind::M, self.gamma_o, beta, b, r)?;
            Ok((w.mul(self.c1), d.mul(self.c1)))
        } else if r <= 1.0 {
            let f = basis_pair(Kind::M, self.gamma_i, beta, b, r)?;
            if self.c22.is_zero() {
                return Ok((f.0.mul(self.c21), f.1.mul(self.c21)));
            }
            let g = basis_pair(Kind::U, self.gamma_i, beta, b, r)?;
            Ok(lin(self.c21, f, self.c22, g))
        } else {
            let (w, d) = basis_pair(Kind::U, self.gamma_o, beta, b, r)?;
            Ok((w.mul(self.c3), d.mul(self.c3)))
        }
    }

    /// u(r) and u'(r) in log form.
    fn u_pair(&self, r: f64) -> Result<Pair> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        let b = self.params.b;
        let am = self.params.m.unsigned_abs() as f64;
        let x = b * r * r;
        let pref = LogValue::new(1.0, 0.5 * am * x.ln() - 0.5 * x);
        let (w, dw) = self.w_pair(r)?;
        let du = w.scale(am / r - b * r).add(dw);
        Ok((w.mul(pref), du.mul(pref)))
    }

    /// u and u' at r = 0 from u ≈ w(0)·(√b r)^|m|.
    fn at_origin(&self) -> Result<(f64, f64)> {
        let w0 = self.w_pair(0.0)?.0.try_to_f64("eval_u")?;
        Ok(match self.params.m.unsigned_abs() {
            0 => (w0, 0.0),
            1 => (0.0, self.params.b.sqrt() * w0),
            _ => (0.0, 0.0),
        })
    }

    /// u(r) for r >= 0.
    pub fn eval_u(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Ok(self.at_origin()?.0);
        }
        self.u_pair(r)?.0.try_to_f64("eval_u")
    }

    pub fn eval_u_prime(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Ok(self.at_origin()?.1);
        }
        self.u_pair(r)?.1.try_to_f64("eval_u_prime")
    }

    fn ln_density(&self, r: f64) -> Result<f64> {
        Ok(2.0 * self.u_pair(r)?.0.ln_abs() + r.ln())
    }

    /// Locates the tail radius and rescales the coefficients to unit norm.
    fn normalize(&mut self) -> Result<()> {
        let p = self.params;
        // Outer classical turning point at this energy, if any.
        let reach = {
            let target = self.e0 + p.a * p.a;
            let mut r = 1.0f64;
            while effective_potential(&p, r) < target && r < 1e4 {
                r *= 1.1;
            }
            r
        };
        let mut peak = f64::NEG_INFINITY;
        let samples = 128;
        for k in 1..=samples {
            let r = reach * k as f64 / samples as f64;
            peak = peak.max(self.ln_density(r)?);
        }
        let drop = TAIL_DROP.ln();
        let mut r = reach;
        let mut prev = self.ln_density(r)?;
        loop {
            let next_r = r * 1.05 + 0.01;
            let cur = self.ln_density(next_r)?;
            peak = peak.max(cur);
            r = next_r;
            if cur < peak + drop && cur < prev {
                break;
            }
            prev = cur;
            if r > 1e5 {
                return Err(Error::Domain(format!(
                    "state at e0 = {} is not confined (no decay up to r = {r})",
                    self.e0
                )));
            }
        }
        self.tail = r;
        let ln_ref = 0.5 * peak;
        let breaks = self.breaks();
        let tol = Tolerance {
            abs: 1e-12,
            rel: 1e-12,
            max_intervals: 4000,
        };
        let est = integrate_panels(
            |r| {
                let u = self.u_pair(r)?.0.mantissa(ln_ref);
                Ok([u * u * r])
            },
            &breaks,
            tol,
        )?;
        let ln_norm = (2.0 * PI * est.value[0]).ln() + 2.0 * ln_ref;
        let scale = LogValue::new(1.0, -0.5 * ln_norm);
        self.c1 = self.c1.mul(scale);
        self.c21 = self.c21.mul(scale);
        self.c22 = self.c22.mul(scale);
        self.c3 = self.c3.mul(scale);
        self.ln_norm = ln_norm;
        Ok(())
    }

    /// Quadrature panels: [0, r_i], [r_i, 1], [1, tail].
    pub fn breaks(&self) -> Vec<f64> {
        let mut v = vec![0.0];
        if !self.params.is_dot() {
            v.push(self.params.r_i);
        }
        v.push(1.0);
        v.push(self.tail);
        v
    }

    /// ∫ u² r dr over (0, ∞), truncated at the tail radius.
    pub fn radial_norm_integral(&self) -> Result<f64> {
        let est = integrate_panels(
            |r| {
                let u = self.eval_u(r)?;
                Ok([u * u * r])
            },
            &self.breaks(),
            Tolerance::default(),
        )?;
        Ok(est.value[0])
    }

    /// (∫ u² r dr, ∫ weight(r) u² r dr) on shared panels.
    pub fn integrate_weighted<F>(&self, weight: F, tol: Tolerance) -> Result<[f64; 2]>
    where
        F: Fn(f64) -> f64,
    {
        let est = integrate_panels(
            |r| {
                let u = self.eval_u(r)?;
                let d = u * u * r;
                Ok([d, d * weight(r)])
            },
            &self.breaks(),
            tol,
        )?;
        Ok(est.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_difference() {
        let p = RingParams::new(1, 400.0, 1.0, 2.0, 0.5).unwrap();
        let (go, gi) = gammas(&p, 30.0);
        assert!((go - gi - 400.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn condition_of_identity_like_system() {
        let one = (LogValue::ONE, LogValue::ZERO);
        let slope = (LogValue::ZERO, LogValue::ONE);
        let c = condition_number([one, one, slope], [(LogValue::ZERO, LogValue::ZERO); 2], one);
        assert!((c - 1.0).abs() < 1e-12);
    }
}
