//! Brute-force references: a finite-difference discretization of the radial
//! equation and composite trapezoid quadrature.
//!
//! The radial operator -(1/r)(r u')' + [v_c + m²/r² + 2bm + b²r²] u is
//! discretized in finite-volume form on cell centres, which never touch the
//! origin. The mesh is uniform on each of [0, r_i], [r_i, 1] and [1, r_max],
//! so both potential steps sit on cell faces. With the cell weights
//! w_j = ∫ r dr the generalized problem A u = λ W u is symmetrized to a
//! tridiagonal W^{-1/2} A W^{-1/2}; its eigenvalues minus a² are the
//! energies.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{effective_potential, RingParams};
use crate::radial::RadialSolution;

/// Amplitude of ũ at r_max, relative to its peak, above which the grid is
/// considered truncated.
pub const TRUNCATION_AMPLITUDE: f64 = 1e-6;
/// Richardson error estimate defining the oracle's reliability window.
pub const RELIABLE_ERROR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDGrid {
    r_max: f64,
    n_points: usize,
    spacing: f64,
}

impl FDGrid {
    pub const MIN_POINTS: usize = 500;
    pub const MIN_RADIUS: f64 = 2.0;

    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(Error::Domain(format!(
                "finite-difference grid needs at least {} points, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        if !(r_max >= Self::MIN_RADIUS && r_max.is_finite()) {
            return Err(Error::Domain(format!(
                "finite-difference radius must be >= {}, got {r_max}",
                Self::MIN_RADIUS
            )));
        }
        Ok(FDGrid {
            r_max,
            n_points,
            spacing: r_max / n_points as f64,
        })
    }

    /// Grid whose radius extends past the classically forbidden tail of
    /// every state below `ceiling`: the WKB decay exponent ∫ √(V - E) dr
    /// beyond the outer turning point reaches 20.
    pub fn for_params(params: &RingParams, n_points: usize, ceiling: f64) -> Result<Self> {
        let target = ceiling + params.a * params.a;
        let mut r = 1.0f64;
        while effective_potential(params, r) < target {
            r += 0.01;
            if r > 1e4 {
                return Err(Error::Domain(format!("no outer turning point below e0 = {ceiling}")));
            }
        }
        let mut decay = 0.0;
        let h = 1e-3;
        while decay < 20.0 && r < 1e4 {
            let k = (effective_potential(params, r + 0.5 * h) - target).max(0.0).sqrt();
            decay += k * h;
            r += h;
        }
        Self::new(r.max(Self::MIN_RADIUS), n_points)
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Nominal spacing r_max / n_points; the actual cells differ by the
    /// rounding of each segment's cell count.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Cell faces for `params`: each segment between 0, r_i, 1 and r_max
    /// gets an even number of cells proportional to its length, at least 2.
    pub fn faces(&self, params: &RingParams) -> Vec<f64> {
        self.faces_scaled(params, 1)
    }

    fn faces_scaled(&self, params: &RingParams, divisor: usize) -> Vec<f64> {
        let mut breaks = vec![0.0];
        if !params.is_dot() {
            breaks.push(params.r_i);
        }
        breaks.push(1.0);
        breaks.push(self.r_max);
        let mut faces = vec![0.0];
        for w in breaks.windows(2) {
            let len = w[1] - w[0];
            if len <= 0.0 {
                continue;
            }
            let pairs = (0.5 * self.n_points as f64 * len / self.r_max).round().max(1.0) as usize;
            let cells = 2 * pairs / divisor;
            for k in 1..=cells {
                faces.push(if k == cells {
                    w[1]
                } else {
                    w[0] + len * k as f64 / cells as f64
                });
            }
        }
        faces
    }
}

/// Cell centres and weights ∫ r dr of a face list.
fn cells(faces: &[f64]) -> (Vec<f64>, Vec<f64>) {
    faces
        .windows(2)
        .map(|f| (0.5 * (f[0] + f[1]), 0.5 * (f[1] * f[1] - f[0] * f[0])))
        .unzip()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdLevel {
    pub e0: f64,
    /// |e(N) - e(N/2)| / 3.
    pub error_estimate: f64,
    /// u at the cell centres, normalized so that 2π Σ u² w = 1 and
    /// positive at its largest-magnitude sample.
    pub u_samples: Vec<f64>,
}

impl FdLevel {
    pub fn reliable(&self) -> bool {
        self.error_estimate <= RELIABLE_ERROR
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdSpectrum {
    pub grid: FDGrid,
    /// Cell centres.
    pub nodes: Vec<f64>,
    /// Cell weights ∫ r dr.
    pub weights: Vec<f64>,
    pub levels: Vec<FdLevel>,
    /// Largest |ũ(r_max)| / max|ũ| over the returned levels.
    pub tail_amplitude: f64,
}

impl FdSpectrum {
    pub fn truncation_warning(&self) -> bool {
        self.tail_amplitude > TRUNCATION_AMPLITUDE
    }
}

/// Symmetric tridiagonal (diagonal, off-diagonal) of the conjugated operator
/// without the -a² shift.
fn operator(params: &RingParams, faces: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (centres, weights) = cells(faces);
    let n = centres.len();
    let pot = params.potential();
    let m2 = (params.m as f64).powi(2);
    let b = params.b;
    let shift = 2.0 * b * params.m as f64;
    // face conductances f_{j+1} / (c_{j+1} - c_j); zero at the origin and
    // Dirichlet (ghost at the mirror point) at r_max
    let mut cond = vec![0.0; n + 1];
    for j in 1..n {
        cond[j] = faces[j] / (centres[j] - centres[j - 1]);
    }
    cond[n] = faces[n] / (faces[n] - centres[n - 1]);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for j in 0..n {
        let (lo, hi, r, w) = (faces[j], faces[j + 1], centres[j], weights[j]);
        // ∫ r³ dr / ∫ r dr over the cell
        let r2_avg = 0.5 * (lo * lo + hi * hi);
        let v = pot.cell_average(lo, hi) + m2 / (r * r) + shift + b * b * r2_avg;
        diag.push((cond[j] + cond[j + 1]) / w + v);
        if j + 1 < n {
            off.push(-cond[j + 1] / (w * weights[j + 1]).sqrt());
        }
    }
    (diag, off)
}

/// Number of eigenvalues below `x` (Sturm sequence).
fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The k-th smallest eigenvalue (0-based) by bisection.
fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + off.get(i).map_or(0.0, |v| v.abs());
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse iteration for the eigenvector at `lambda`.
fn eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    let shift = lambda + 1e-10 * lambda.abs().max(1.0);
    let mut x = vec![1.0; n];
    for _ in 0..3 {
        // Thomas algorithm on (T - shift) y = x
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = diag[0] - shift;
        if denom == 0.0 {
            denom = f64::EPSILON;
        }
        c[0] = if n > 1 { off[0] / denom } else { 0.0 };
        d[0] = x[0] / denom;
        for i in 1..n {
            let mut den = diag[i] - shift - off[i - 1] * c[i - 1];
            if den == 0.0 {
                den = f64::EPSILON;
            }
            c[i] = if i + 1 < n { off[i] / den } else { 0.0 };
            d[i] = (x[i] - off[i - 1] * d[i - 1]) / den;
        }
        let mut y = vec![0.0; n];
        y[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = d[i] - c[i] * y[i + 1];
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Eigen(format!("inverse iteration failed at {lambda}")));
        }
        x = y.into_iter().map(|v| v / norm).collect();
    }
    Ok(x)
}

/// Lowest `n_levels` eigenpairs of the discretized radial problem, with a
/// Richardson error estimate from a second solve at half the resolution.
pub fn fd_spectrum(params: &RingParams, grid: &FDGrid, n_levels: usize) -> Result<FdSpectrum> {
    params.validate()?;
    if n_levels == 0 || n_levels > grid.n_points / 4 {
        return Err(Error::Domain(format!("cannot extract {n_levels} levels from the grid")));
    }
    let a2 = params.a * params.a;
    let faces = grid.faces(params);
    let (diag, off) = operator(params, &faces);
    let (cdiag, coff) = operator(params, &grid.faces_scaled(params, 2));
    let (nodes, weights) = cells(&faces);
    let mut levels = Vec::with_capacity(n_levels);
    let mut tail_amplitude = 0.0f64;
    for k in 0..n_levels {
        let lambda = kth_eigenvalue(&diag, &off, k);
        let lambda_coarse = kth_eigenvalue(&cdiag, &coff, k);
        let v = eigenvector(&diag, &off, lambda)?;
        let largest = v
            .iter()
            .copied()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        tail_amplitude = tail_amplitude.max(v[v.len() - 1].abs() / largest.abs());
        // ũ = √w u with Σ ũ² = 1, rescaled so that 2π Σ u² w = 1
        let scale = largest.signum() / (2.0 * PI).sqrt();
        let u_samples = v.iter().zip(&weights).map(|(x, w)| scale * x / w.sqrt()).collect();
        levels.push(FdLevel {
            e0: lambda - a2,
            error_estimate: (lambda - lambda_coarse).abs() / 3.0,
            u_samples,
        });
    }
    Ok(FdSpectrum {
        grid: *grid,
        nodes,
        weights,
        levels,
        tail_amplitude,
    })
}

/// L² distance √(2π Σ (u_fd - u)² w) between an oracle eigenvector and a
/// normalized radial solution, after aligning their signs.
pub fn eigenvector_l2_error(spectrum: &FdSpectrum, level: &FdLevel, sol: &RadialSolution) -> Result<f64> {
    let mut exact = Vec::with_capacity(spectrum.nodes.len());
    for &r in &spectrum.nodes {
        exact.push(sol.eval_u(r)?);
    }
    let dot: f64 = exact
        .iter()
        .zip(&level.u_samples)
        .zip(&spectrum.weights)
        .map(|((a, b), w)| a * b * w)
        .sum();
    let sign = if dot < 0.0 { -1.0 } else { 1.0 };
    let sum: f64 = exact
        .iter()
        .zip(&level.u_samples)
        .zip(&spectrum.weights)
        .map(|((a, b), w)| (sign * a - b).powi(2) * w)
        .sum();
    Ok((2.0 * PI * sum).sqrt())
}

/// Composite trapezoid rule for ∫₀^{r_max} f(r) dr on `n_points` intervals.
pub fn brute_quadrature<F>(mut f: F, r_max: f64, n_points: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if n_points == 0 || !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::Domain(format!(
            "trapezoid needs n_points >= 1 and r_max > 0, got {n_points}, {r_max}"
        )));
    }
    let h = r_max / n_points as f64;
    let mut sum = 0.5 * (f(0.0) + f(r_max));
    for j in 1..n_points {
        sum += f(j as f64 * h);
    }
    Ok(sum * h)
}
