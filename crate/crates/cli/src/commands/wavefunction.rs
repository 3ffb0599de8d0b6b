use qring_core::oracle::{fd_spectrum, FDGrid};
use qring_core::{default_ceiling, RingParams};

use super::Report;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::solve::{check_envelope, check_levels, describe, levels_with_status, ORACLE_POINTS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionSpec {
    pub params: RingParams,
    /// Radial index, 1 for the lowest level.
    pub n: usize,
    /// Defaults to the radius beyond which the tail is negligible.
    pub r_max: Option<f64>,
    pub points: usize,
    pub oracle: bool,
}

/// Linear interpolation in sorted `nodes`, zero outside.
fn interpolate(nodes: &[f64], values: &[f64], r: f64) -> f64 {
    let k = nodes.partition_point(|&x| x <= r);
    if k == 0 || k == nodes.len() {
        return if k == 0 && !values.is_empty() { values[0] } else { 0.0 };
    }
    let t = (r - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
    values[k - 1] + t * (values[k] - values[k - 1])
}

pub fn run(spec: &WavefunctionSpec) -> Result<Report, CliError> {
    let p = &spec.params;
    check_envelope(p)?;
    check_levels(spec.n)?;
    if spec.points < 2 {
        return Err(CliError::Usage(format!(
            "need at least 2 grid points, got {}",
            spec.points
        )));
    }
    let (levels, status) = levels_with_status(p, spec.n);
    let level = levels.into_iter().find(|l| l.n == spec.n).ok_or_else(|| {
        CliError::solver(
            format!("level n={} not found", spec.n),
            qring_core::Error::Domain(status.unwrap_or_else(|| describe(p))),
        )
    })?;
    let sol = &level.solution;
    let r_max = spec.r_max.unwrap_or_else(|| sol.tail_radius());
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(CliError::Usage(format!("r_max must be positive, got {r_max}")));
    }
    let fd = if spec.oracle {
        let ceiling = default_ceiling(p, spec.n).max(level.e0 + 1.0);
        let grid = FDGrid::for_params(p, ORACLE_POINTS, ceiling).map_err(|e| CliError::solver(describe(p), e))?;
        let spectrum = fd_spectrum(p, &grid, spec.n).map_err(|e| CliError::solver(describe(p), e))?;
        let fd_level = &spectrum.levels[spec.n - 1];
        // Align the arbitrary eigenvector sign with the matched solution.
        let overlap: f64 = spectrum
            .nodes
            .iter()
            .zip(&fd_level.u_samples)
            .map(|(&r, &u)| u * sol.eval_u(r).unwrap_or(0.0))
            .sum();
        let sign = if overlap < 0.0 { -1.0 } else { 1.0 };
        let samples: Vec<f64> = fd_level.u_samples.iter().map(|u| sign * u).collect();
        Some((spectrum.nodes.clone(), samples))
    } else {
        None
    };

    let mut columns = vec!["r", "u", "u_prime"];
    if spec.oracle {
        columns.push("u_fd");
    }
    let mut table = Table::new(&columns);
    let h = r_max / (spec.points - 1) as f64;
    for k in 0..spec.points {
        let r = k as f64 * h;
        let u = sol
            .eval_u(r)
            .map_err(|e| CliError::solver(format!("u at r = {r}"), e))?;
        let du = sol
            .eval_u_prime(r)
            .map_err(|e| CliError::solver(format!("u' at r = {r}"), e))?;
        let mut row = vec![Cell::from(r), Cell::from(u), Cell::from(du)];
        if let Some((nodes, samples)) = &fd {
            row.push(Cell::from(interpolate(nodes, samples, r)));
        }
        table.push(row);
    }
    Ok(Report {
        table,
        failures: Vec::new(),
    })
}
