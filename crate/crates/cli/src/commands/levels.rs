use rayon::prelude::*;

use qring_core::RingParams;

use super::Report;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::solve::{check_envelope, check_levels, normalize_m_list, solve_point, PointResult};
use crate::units::{MaterialParams, PhysicalConstants};

#[derive(Debug, Clone, PartialEq)]
pub struct LevelsSpec {
    /// The `m` field is ignored; each entry of `m_list` is solved.
    pub params: RingParams,
    pub m_list: Vec<i32>,
    pub n_levels: usize,
    pub zeeman_scale: f64,
    /// When set, energies are also reported in meV.
    pub physical: Option<(MaterialParams, PhysicalConstants)>,
    pub oracle: bool,
}

pub fn solve(spec: &LevelsSpec) -> Result<Vec<PointResult>, CliError> {
    let ms = normalize_m_list(&spec.m_list)?;
    check_levels(spec.n_levels)?;
    for &m in &ms {
        check_envelope(&spec.params.with_m(m))?;
    }
    Ok(ms
        .par_iter()
        .map(|&m| solve_point(&spec.params.with_m(m), spec.n_levels, spec.zeeman_scale, spec.oracle))
        .collect())
}

pub fn run(spec: &LevelsSpec) -> Result<Report, CliError> {
    let points = solve(spec)?;
    let mut columns = vec!["m", "n", "e0", "delta", "e_prime", "e_plus", "e_minus"];
    if spec.physical.is_some() {
        columns.extend(["E0_meV", "Eprime_meV"]);
    }
    if spec.oracle {
        columns.extend(["e0_fd", "fd_error_estimate", "fd_deviation", "l2_error"]);
    }
    let mut table = Table::new(&columns);
    let mut failures = Vec::new();
    for point in points {
        for row in &point.rows {
            let mut cells = vec![
                Cell::from(row.m),
                Cell::from(row.n),
                Cell::from(row.e0),
                Cell::from(row.delta),
                Cell::from(row.e_prime),
                Cell::from(row.e_plus),
                Cell::from(row.e_minus),
            ];
            if let Some((mat, c)) = &spec.physical {
                let unit = mat.energy_unit(c);
                cells.extend([Cell::from(row.e0 * unit), Cell::from(row.e_prime * unit)]);
            }
            if spec.oracle {
                match &row.oracle {
                    Some(o) => cells.extend([o.e0_fd, o.error_estimate, o.deviation, o.l2_error].map(Cell::from)),
                    None => cells.extend(std::iter::repeat_n(Cell::Empty, 4)),
                }
            }
            table.push(cells);
        }
        failures.extend(point.error);
    }
    Ok(Report { table, failures })
}
