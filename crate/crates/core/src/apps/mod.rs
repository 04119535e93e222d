//! Compressed-domain applications built on [`shift_combine`](crate::filtering::shift_combine).

pub mod differences;
pub mod interpolation;
pub mod registration;
pub mod shift;
pub mod wavelet;

pub use differences::second_difference;
pub use interpolation::interpolate2;
pub use registration::{register, ReseedCalibration, Registered, RegisterMode, SeedRowRule};
pub use shift::{shift_retrieve, shift_retrieve_with, ResidualNorm, ShiftEstimate};
pub use wavelet::{compressive_wavelet_53, LiftingKind, LiftingScheme, LiftingStep};
