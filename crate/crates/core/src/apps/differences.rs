use crate::error::{CsError, Result};
use crate::filtering::{shift_combine, ShiftTerm};
use crate::types::MaskedMeasurements;

/// Terms of `x_{→1} − 2x + x_{←1}`.
pub const SECOND_DIFFERENCE: [ShiftTerm; 3] = [
    ShiftTerm::new(1, 1.0),
    ShiftTerm::new(0, -2.0),
    ShiftTerm::new(-1, 1.0),
];

/// Measurements of the periodic second difference of the sensed signal.
///
/// The right shift corrupts index 1 and the left shift corrupts index `m`,
/// so the valid set is `[2, m − 1]`.
pub fn second_difference(y: &MaskedMeasurements) -> Result<MaskedMeasurements> {
    if y.len() < 3 {
        return Err(CsError::InvalidInput(format!(
            "second difference needs at least 3 measurements, got {}",
            y.len()
        )));
    }
    shift_combine(y, &SECOND_DIFFERENCE)
}
