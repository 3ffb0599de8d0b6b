//! Bound states of an electron in a finite-depth circular quantum ring in a
//! perpendicular magnetic field, with equal-strength Rashba and Dresselhaus
//! spin-orbit coupling.
//!
//! Energies are roots of a matching determinant built from Kummer and
//! Tricomi functions ([`spectrum`]); the radial wavefunctions are assembled
//! piecewise ([`radial`]); the Zeeman term is treated to first order
//! ([`zeeman`]); and a finite-difference discretization provides an
//! independent cross-check ([`oracle`]).

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::should_implement_trait,
    clippy::needless_range_loop
)]

pub mod error;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod radial;
pub mod roots;
pub mod specfun;
pub mod spectrum;
pub mod zeeman;

pub use error::{Error, Result};
pub use params::{PotentialProfile, RingParams};
pub use radial::{basis_values, solve_coefficients, BasisValues, Branch, RadialSolution, SpinorAnsatz};
pub use spectrum::{
    default_ceiling, find_levels, matching_determinant, verify_relations, DetProfile, EnergyLevel, RelationReport,
};
pub use zeeman::{overlap_delta, zeeman_correction, EigenvectorCombination, SplitLevel, ZeemanParams};
