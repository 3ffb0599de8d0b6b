//! Per-point solving shared by the subcommands: levels, Zeeman splitting and
//! the optional finite-difference cross-check.

use qring_core::oracle::{eigenvector_l2_error, fd_spectrum, FDGrid};
use qring_core::{default_ceiling, find_levels, zeeman_correction, EnergyLevel, Error, RingParams, ZeemanParams};

use crate::error::CliError;

/// Resolution of the cross-check discretization.
pub const ORACLE_POINTS: usize = 8000;

pub const MAX_ABS_M: i32 = 10;
pub const MAX_V: f64 = 1e4;
pub const MAX_A: f64 = 10.0;
pub const B_RANGE: (f64, f64) = (1e-3, 50.0);
pub const MAX_R_I: f64 = 0.99;
pub const MAX_LEVELS: usize = 20;

/// Rejects points outside the validated envelope, naming the violated bound.
pub fn check_envelope(p: &RingParams) -> Result<(), CliError> {
    let fail = |msg: String| Err(CliError::Usage(msg));
    if p.m.abs() > MAX_ABS_M {
        return fail(format!("|m| must be <= {MAX_ABS_M}, got {}", p.m));
    }
    if !(p.v > 0.0 && p.v <= MAX_V) {
        return fail(format!("v must lie in (0, {MAX_V}], got {}", p.v));
    }
    if !(p.a >= 0.0 && p.a <= MAX_A) {
        return fail(format!("a must lie in [0, {MAX_A}], got {}", p.a));
    }
    if !(p.b >= B_RANGE.0 && p.b <= B_RANGE.1) {
        return fail(format!("b must lie in [{}, {}], got {}", B_RANGE.0, B_RANGE.1, p.b));
    }
    if !(p.r_i >= 0.0 && p.r_i <= MAX_R_I) {
        return fail(format!("r_i must lie in [0, {MAX_R_I}], got {}", p.r_i));
    }
    p.validate().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn check_levels(n_levels: usize) -> Result<(), CliError> {
    if n_levels == 0 || n_levels > MAX_LEVELS {
        return Err(CliError::Usage(format!(
            "n must lie in [1, {MAX_LEVELS}], got {n_levels}"
        )));
    }
    Ok(())
}

/// Sorted, de-duplicated angular momenta.
pub fn normalize_m_list(m_list: &[i32]) -> Result<Vec<i32>, CliError> {
    if m_list.is_empty() {
        return Err(CliError::Usage("at least one m is required".into()));
    }
    let mut ms = m_list.to_vec();
    ms.sort_unstable();
    ms.dedup();
    Ok(ms)
}

pub fn describe(p: &RingParams) -> String {
    format!("m={} v={} a={} b={} r_i={}", p.m, p.v, p.a, p.b, p.r_i)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCheck {
    pub e0_fd: f64,
    pub error_estimate: f64,
    /// e0 - e0_fd
    pub deviation: f64,
    pub l2_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRow {
    pub m: i32,
    pub n: usize,
    pub e0: f64,
    pub delta: f64,
    pub e_prime: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub oracle: Option<OracleCheck>,
}

impl LevelRow {
    /// -e′/e₀
    pub fn relative_correction(&self) -> f64 {
        -self.e_prime / self.e0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub params: RingParams,
    pub rows: Vec<LevelRow>,
    /// Set when fewer than the requested levels were produced.
    pub error: Option<String>,
}

/// Lowest `n_levels` levels at one point, partial results kept on failure.
pub fn levels_with_status(p: &RingParams, n_levels: usize) -> (Vec<EnergyLevel>, Option<String>) {
    match find_levels(p, n_levels, default_ceiling(p, n_levels)) {
        Ok(levels) => (levels, None),
        Err(Error::PartialLevels {
            found,
            requested,
            ceiling,
        }) => {
            let msg = format!(
                "{}: found {} of {requested} levels below e0 = {ceiling}",
                describe(p),
                found.len()
            );
            (found, Some(msg))
        }
        Err(e) => (Vec::new(), Some(format!("{}: {e}", describe(p)))),
    }
}

pub fn solve_point(p: &RingParams, n_levels: usize, zeeman_scale: f64, oracle: bool) -> PointResult {
    let (levels, mut error) = levels_with_status(p, n_levels);
    let zp = match ZeemanParams::new(zeeman_scale, p.b) {
        Ok(zp) => zp,
        Err(e) => {
            return PointResult {
                params: *p,
                rows: Vec::new(),
                error: Some(format!("{}: {e}", describe(p))),
            }
        }
    };
    let mut rows = Vec::with_capacity(levels.len());
    for level in &levels {
        match zeeman_correction(level, zp, p.a) {
            Ok(s) => rows.push(LevelRow {
                m: p.m,
                n: level.n,
                e0: s.e0(),
                delta: s.base.delta.unwrap_or(f64::NAN),
                e_prime: s.e_prime(),
                e_plus: s.e_plus,
                e_minus: s.e_minus,
                oracle: None,
            }),
            Err(e) => {
                error.get_or_insert(format!("{} n={}: {e}", describe(p), level.n));
                break;
            }
        }
    }
    if oracle && !levels.is_empty() {
        match cross_check(p, &levels) {
            Ok(checks) => {
                for (row, check) in rows.iter_mut().zip(checks) {
                    row.oracle = Some(check);
                }
            }
            Err(e) => {
                error.get_or_insert(format!("{} oracle: {e}", describe(p)));
            }
        }
    }
    PointResult {
        params: *p,
        rows,
        error,
    }
}

/// Finite-difference eigenpairs paired by index with `levels`.
pub fn cross_check(p: &RingParams, levels: &[EnergyLevel]) -> qring_core::Result<Vec<OracleCheck>> {
    let ceiling = default_ceiling(p, levels.len()).max(levels.last().map_or(0.0, |l| l.e0 + 1.0));
    let grid = FDGrid::for_params(p, ORACLE_POINTS, ceiling)?;
    let spectrum = fd_spectrum(p, &grid, levels.len())?;
    levels
        .iter()
        .zip(&spectrum.levels)
        .map(|(level, fd)| {
            Ok(OracleCheck {
                e0_fd: fd.e0,
                error_estimate: fd.error_estimate,
                deviation: level.e0 - fd.e0,
                l2_error: eigenvector_l2_error(&spectrum, fd, &level.solution)?,
            })
        })
        .collect()
}
