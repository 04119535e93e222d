use crate::error::{CsError, Result};
use crate::filtering::{shift_combine, ShiftTerm};
use crate::types::MaskedMeasurements;

/// Terms of the piecewise-linear ×2 interpolator `½x_{→1} + x + ½x_{←1}`.
pub const LINEAR_X2: [ShiftTerm; 3] = [
    ShiftTerm::new(1, 0.5),
    ShiftTerm::new(0, 1.0),
    ShiftTerm::new(-1, 0.5),
];

/// From decimated measurements `y = Φ x_up` (see
/// [`acquire_decimated`](crate::sensing::acquire_decimated)), the
/// measurements `Φ x_INT` of the linearly interpolated length-`2n` signal.
/// Valid on `[2, m − 1]`.
pub fn interpolate2(y: &MaskedMeasurements) -> Result<MaskedMeasurements> {
    if y.len() < 3 {
        return Err(CsError::InvalidInput(format!(
            "interpolation needs at least 3 measurements, got {}",
            y.len()
        )));
    }
    shift_combine(y, &LINEAR_X2)
}
