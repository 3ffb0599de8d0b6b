//! Shared fixtures for the criterion benches in `benches/`.

use qring_core::RingParams;

/// The reference GaAs ring at v = 400, a = 1, b = 1 with r_i = 0.5.
pub fn reference_ring(m: i32) -> RingParams {
    RingParams::new(m, 400.0, 1.0, 1.0, 0.5).expect("valid parameters")
}

/// A weak-field point with many closely spaced levels below the ceiling.
pub fn weak_field_ring() -> RingParams {
    RingParams::new(1, 300.0, 2.0, 0.05, 0.9).expect("valid parameters")
}
