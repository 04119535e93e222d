//! Exact signal processing on compressive measurements.
//!
//! Measurements `y = Φx` taken with a partial circulant sensing matrix `Φ`
//! can be filtered, differentiated, interpolated, registered and wavelet
//! transformed directly, producing the measurements of the processed signal
//! without ever reconstructing `x`. The price is a handful of corrupted
//! entries, tracked by a [`ValidityMask`] on every [`MaskedMeasurements`].
//!
//! ```
//! use circcs::prelude::*;
//!
//! let seed = generate_seed(&SensingConfig::new(64, 16, 7)?)?;
//! let x = gaussian_signal(64, 8)?;
//! let y = acquire(&seed, 16, &x)?;
//! let h = FilterSpec::new(vec![0.5, 0.5], Convention::FirstRow)?;
//! let yf = filter_measurements(&y, &h)?.measurements;
//! assert_eq!(yf.corrupted_indices(), vec![16]);
//! # Ok::<(), circcs::CsError>(())
//! ```
//!
//! Indices that cross the API (corruption lists, valid sets, node ids,
//! matrix rows in docs) are 1-based.

pub mod apps;
pub mod circulant;
pub mod cli;
pub mod dense;
pub mod diagnostics;
pub mod error;
pub mod filtering;
pub mod io;
pub mod mask;
pub mod multinode;
pub mod sensing;
pub mod types;

pub use error::{CsError, Result};
pub use mask::ValidityMask;
pub use types::{Convention, FilterSpec, MaskedMeasurements, Seed, Signal, WaveletCoefficients};

pub mod prelude {
    pub use crate::apps::{
        compressive_wavelet_53, interpolate2, register, second_difference, shift_retrieve, LiftingScheme,
        RegisterMode,
    };
    pub use crate::circulant::{apply, circulant_from_first_row, circular_shift, filter_to_circulant, CirculantSpec};
    pub use crate::error::{CsError, Result};
    pub use crate::filtering::{filter_measurements, shift_combine, valid_count_after_filter, ShiftTerm};
    pub use crate::mask::{mask_and, mask_shift, ValidityMask};
    pub use crate::multinode::{acquire_all, build_ensemble, distributed_filter, ExchangeLog, NodeEnsemble};
    pub use crate::sensing::{
        acquire, acquire_decimated, acquire_even_odd, gaussian_signal, gaussian_vec, generate_seed, SensingConfig,
    };
    pub use crate::types::{Convention, FilterSpec, MaskedMeasurements, Seed, Signal, WaveletCoefficients};
}
