//! One-level lifting wavelet transform carried out on measurements.
//!
//! Inputs are the measurements of the even and odd sample streams, each
//! embedded at its original positions in a length-`n` vector (see
//! [`acquire_even_odd`](crate::sensing::acquire_even_odd)). In that embedded
//! domain a decimated-rate delay `z^p` is a right shift by `2p`, so a
//! two-tap lifting filter followed by its ±1 re-alignment becomes a
//! [`shift_combine`] with offsets `2p + post_shift` and `2(p + 1) + post_shift`.
//!
//! For 5/3 the predict offsets are `{−1, +1}` and the update offsets are
//! `{+1, −1}`. Predict corrupts indices `{1, m}`; update spreads that to
//! `{1, 2, m − 1, m}`.

use crate::error::{CsError, Result};
use crate::filtering::{shift_combine, ShiftTerm};
use crate::types::MaskedMeasurements;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftingKind {
    /// Adds the filtered even stream to the odd stream.
    Predict,
    /// Adds the filtered odd stream to the even stream.
    Update,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftingStep {
    pub kind: LiftingKind,
    /// Coefficients of `z^lowest_power` and `z^(lowest_power + 1)`.
    pub taps: [f64; 2],
    pub lowest_power: i64,
    /// Re-alignment of the filter output: −1 for predict, +1 for update.
    pub post_shift: i64,
}

impl LiftingStep {
    /// Embedded-domain shift terms of this step.
    pub fn terms(&self) -> [ShiftTerm; 2] {
        let offset = |k: i64| 2 * (self.lowest_power + k) + self.post_shift;
        [
            ShiftTerm::new(offset(0), self.taps[0]),
            ShiftTerm::new(offset(1), self.taps[1]),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftingScheme {
    pub steps: Vec<LiftingStep>,
    /// `K_0`, applied to the lowpass (even) stream.
    pub gain_low: f64,
    /// `K_1`, applied to the highpass (odd) stream.
    pub gain_high: f64,
}

impl LiftingScheme {
    pub fn new(steps: Vec<LiftingStep>, gain_low: f64, gain_high: f64) -> Result<Self> {
        if steps.is_empty() {
            return Err(CsError::InvalidInput("lifting scheme needs at least one step".into()));
        }
        if steps.iter().flat_map(|s| s.taps).any(|t| !t.is_finite()) {
            return Err(CsError::InvalidInput("lifting taps must be finite".into()));
        }
        if gain_low == 0.0 || gain_high == 0.0 || !gain_low.is_finite() || !gain_high.is_finite() {
            return Err(CsError::InvalidInput("lifting gains must be finite and nonzero".into()));
        }
        Ok(LiftingScheme {
            steps,
            gain_low,
            gain_high,
        })
    }

    /// Spline 5/3: `λ1(z) = −½(1 + z)`, `λ2(z) = ¼(1 + z⁻¹)`, `K_0 = 1`, `K_1 = ½`.
    pub fn spline_53() -> Self {
        LiftingScheme {
            steps: vec![
                LiftingStep {
                    kind: LiftingKind::Predict,
                    taps: [-0.5, -0.5],
                    lowest_power: 0,
                    post_shift: -1,
                },
                LiftingStep {
                    kind: LiftingKind::Update,
                    taps: [0.25, 0.25],
                    lowest_power: -1,
                    post_shift: 1,
                },
            ],
            gain_low: 1.0,
            gain_high: 0.5,
        }
    }

    /// Largest absolute shift used by any step.
    pub fn max_offset(&self) -> i64 {
        self.steps
            .iter()
            .flat_map(|s| s.terms())
            .map(|t| t.offset.abs())
            .max()
            .unwrap_or(0)
    }
}

/// Measurements `Φθ` of the interleaved wavelet coefficients from the
/// even/odd stream measurements.
pub fn compressive_wavelet_53(
    y_e: &MaskedMeasurements,
    y_o: &MaskedMeasurements,
    scheme: &LiftingScheme,
) -> Result<MaskedMeasurements> {
    let m = y_e.len();
    if y_o.len() != m {
        return Err(CsError::dim("even/odd measurements", m, y_o.len()));
    }
    if let (Some(a), Some(b)) = (y_e.seed_ref(), y_o.seed_ref()) {
        if a != b {
            return Err(CsError::InvalidInput(format!(
                "even and odd streams use different seeds ({a} vs {b})"
            )));
        }
    }
    if scheme.max_offset() as usize >= m {
        return Err(CsError::dim("measurements for lifting shifts", scheme.max_offset() as usize + 1, m));
    }
    let mut even = y_e.clone();
    let mut odd = y_o.clone();
    for step in &scheme.steps {
        match step.kind {
            LiftingKind::Predict => {
                let p = shift_combine(&even, &step.terms())?;
                odd = MaskedMeasurements::linear_combination(&[(1.0, &odd), (1.0, &p)])?;
            }
            LiftingKind::Update => {
                let u = shift_combine(&odd, &step.terms())?;
                even = MaskedMeasurements::linear_combination(&[(1.0, &even), (1.0, &u)])?;
            }
        }
    }
    MaskedMeasurements::linear_combination(&[(scheme.gain_low, &even), (scheme.gain_high, &odd)])
}
