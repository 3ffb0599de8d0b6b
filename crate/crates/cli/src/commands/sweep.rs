use std::fmt;

use rayon::prelude::*;

use qring_core::RingParams;

use super::Report;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::solve::{check_envelope, check_levels, normalize_m_list, solve_point, PointResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Swept {
    A,
    B,
    #[value(name = "ri")]
    RI,
    V,
}

impl fmt::Display for Swept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Swept::A => "a",
            Swept::B => "b",
            Swept::RI => "r_i",
            Swept::V => "v",
        })
    }
}

impl Swept {
    fn apply(self, p: RingParams, value: f64) -> RingParams {
        match self {
            Swept::A => RingParams { a: value, ..p },
            Swept::B => RingParams { b: value, ..p },
            Swept::RI => RingParams { r_i: value, ..p },
            Swept::V => RingParams { v: value, ..p },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub swept: Swept,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// The swept field and `m` are overwritten per point.
    pub fixed: RingParams,
    pub m_list: Vec<i32>,
    pub n_levels: usize,
    pub zeeman_scale: f64,
    pub oracle: bool,
}

impl SweepSpec {
    /// start + k·step for every k with the value not past `stop`.
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(CliError::Usage(format!(
                "sweep needs start < stop, got {} .. {}",
                self.start, self.stop
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(CliError::Usage(format!(
                "sweep step must be positive, got {}",
                self.step
            )));
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| self.start + k as f64 * self.step).collect())
    }

    pub fn points(&self) -> Result<Vec<(f64, RingParams)>, CliError> {
        let ms = normalize_m_list(&self.m_list)?;
        check_levels(self.n_levels)?;
        let mut points = Vec::new();
        for x in self.values()? {
            for &m in &ms {
                let p = self.swept.apply(self.fixed.with_m(m), x);
                check_envelope(&p).map_err(|e| CliError::Usage(format!("at {} = {x}: {e}", self.swept)))?;
                points.push((x, p));
            }
        }
        Ok(points)
    }
}

pub fn solve(spec: &SweepSpec) -> Result<Vec<(f64, PointResult)>, CliError> {
    let points = spec.points()?;
    Ok(points
        .par_iter()
        .map(|(x, p)| (*x, solve_point(p, spec.n_levels, spec.zeeman_scale, spec.oracle)))
        .collect())
}

pub fn run(spec: &SweepSpec) -> Result<Report, CliError> {
    let results = solve(spec)?;
    let mut columns = vec!["swept_value", "m", "n", "e0", "delta", "e_prime", "neg_eprime_over_e0"];
    if spec.oracle {
        columns.extend(["e0_fd", "fd_deviation"]);
    }
    columns.push("error");
    let mut table = Table::new(&columns);
    let mut failures = Vec::new();
    for (x, point) in results {
        for row in &point.rows {
            let mut cells = vec![
                Cell::from(x),
                Cell::from(row.m),
                Cell::from(row.n),
                Cell::from(row.e0),
                Cell::from(row.delta),
                Cell::from(row.e_prime),
                Cell::from(row.relative_correction()),
            ];
            if spec.oracle {
                cells.push(row.oracle.map(|o| o.e0_fd).into());
                cells.push(row.oracle.map(|o| o.deviation).into());
            }
            cells.push(Cell::Empty);
            table.push(cells);
        }
        if let Some(err) = point.error {
            let mut cells = vec![Cell::from(x), Cell::from(point.params.m)];
            cells.extend(std::iter::repeat_n(Cell::Empty, columns.len() - 3));
            cells.push(Cell::Text(err.clone()));
            table.push(cells);
            failures.push(err);
        }
    }
    Ok(Report { table, failures })
}
