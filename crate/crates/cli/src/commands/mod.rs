pub mod convert;
pub mod levels;
pub mod sweep;
pub mod table1;
pub mod wavefunction;

use crate::output::Table;

/// A finished command: the table to print plus any per-point failures.
/// Failures make the process exit nonzero after the table is written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}
