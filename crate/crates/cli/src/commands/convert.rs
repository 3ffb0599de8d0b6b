use super::Report;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::units::{convert, Direction, MaterialParams, PhysicalConstants, Quantity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvertSpec {
    pub value: f64,
    pub direction: Direction,
    pub quantity: Quantity,
    pub material: MaterialParams,
    pub constants: PhysicalConstants,
}

pub fn run(spec: &ConvertSpec) -> Result<Report, CliError> {
    if !spec.value.is_finite() {
        return Err(CliError::Usage(format!("value must be finite, got {}", spec.value)));
    }
    spec.material.validate()?;
    let output = convert(
        spec.value,
        spec.direction,
        spec.quantity,
        &spec.material,
        &spec.constants,
    );
    let unit = match spec.direction {
        Direction::ToPhysical => spec.quantity.unit(),
        Direction::ToDimensionless => "1",
    };
    let mut table = Table::new(&["quantity", "direction", "input", "output", "unit", "s"]);
    table.push(vec![
        Cell::Text(spec.quantity.to_string()),
        Cell::Text(spec.direction.to_string()),
        Cell::from(spec.value),
        Cell::from(output),
        Cell::from(unit),
        Cell::from(spec.material.zeeman_scale()),
    ]);
    Ok(Report {
        table,
        failures: Vec::new(),
    })
}
