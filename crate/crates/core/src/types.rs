//! Value types shared by every module.
//!
//! Public contracts use 1-based indices whenever an index crosses the API
//! (corruption lists, valid-index sets). Storage is plain 0-based `Vec`s.

use crate::error::{CsError, Result};
use crate::mask::ValidityMask;

fn check_finite(context: &'static str, data: &[f64]) -> Result<()> {
    if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
        return Err(CsError::InvalidInput(format!(
            "{context}: entry {} is not finite",
            pos + 1
        )));
    }
    Ok(())
}

/// A finite, non-empty real sequence: the object being sensed.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    data: Vec<f64>,
}

impl Signal {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(CsError::InvalidInput("signal must be non-empty".into()));
        }
        check_finite("signal", &data)?;
        Ok(Signal { data })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Signal::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }
}

/// Generating first row of a circulant matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    data: Vec<f64>,
    label: Option<String>,
}

impl Seed {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(CsError::InvalidInput("seed must be non-empty".into()));
        }
        check_finite("seed", &data)?;
        Ok(Seed { data, label: None })
    }

    /// Unit seed `e_k` (1-based position `k`).
    pub fn unit(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(CsError::range("unit seed position", k as i64, format!("[1, {n}]")));
        }
        let mut data = vec![0.0; n];
        data[k - 1] = 1.0;
        Seed::new(data)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
}

/// Which line of the filter's circulant matrix carries the taps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// First row is `[h_1..h_Nf, 0..0]`; filtering corrupts the tail.
    FirstRow,
    /// First column is `[h_1..h_Nf, 0..0]` (true circular convolution);
    /// filtering corrupts the head.
    FirstColumn,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::FirstRow => "first-row",
            Convention::FirstColumn => "first-col",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = CsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-row" => Ok(Convention::FirstRow),
            "first-col" | "first-column" => Ok(Convention::FirstColumn),
            other => Err(CsError::InvalidInput(format!("unknown convention `{other}`"))),
        }
    }
}

/// Impulse response of length `N_f` plus its circulant convention.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpec {
    taps: Vec<f64>,
    convention: Convention,
}

impl FilterSpec {
    pub fn new(taps: Vec<f64>, convention: Convention) -> Result<Self> {
        if taps.is_empty() {
            return Err(CsError::InvalidInput("filter needs at least one tap".into()));
        }
        check_finite("filter taps", &taps)?;
        if taps.iter().all(|&t| t == 0.0) {
            return Err(CsError::InvalidInput("filter needs a nonzero tap".into()));
        }
        Ok(FilterSpec { taps, convention })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// `N_f`.
    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }
}

/// Measurements plus a per-entry validity mask.
///
/// A valid entry equals the corresponding entry of the dense measurement
/// vector this object stands for. Invalid entries carry whatever the
/// computation produced and must not be consumed.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedMeasurements {
    data: Vec<f64>,
    mask: ValidityMask,
    seed_ref: Option<String>,
}

impl MaskedMeasurements {
    pub fn new(data: Vec<f64>, mask: ValidityMask) -> Result<Self> {
        if data.is_empty() {
            return Err(CsError::InvalidInput("measurements must be non-empty".into()));
        }
        if data.len() != mask.len() {
            return Err(CsError::dim("measurements vs mask", data.len(), mask.len()));
        }
        check_finite("measurements", &data)?;
        Ok(MaskedMeasurements {
            data,
            mask,
            seed_ref: None,
        })
    }

    pub fn all_valid(data: Vec<f64>) -> Result<Self> {
        let mask = ValidityMask::all_valid(data.len());
        MaskedMeasurements::new(data, mask)
    }

    pub fn with_seed_ref(mut self, label: Option<String>) -> Self {
        self.seed_ref = label;
        self
    }

    /// `m`.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn mask(&self) -> &ValidityMask {
        &self.mask
    }

    pub fn seed_ref(&self) -> Option<&str> {
        self.seed_ref.as_deref()
    }

    pub fn is_valid(&self, index: usize) -> bool {
        self.mask.is_valid(index)
    }

    /// 1-based indices of valid entries.
    pub fn valid_indices(&self) -> Vec<usize> {
        self.mask.valid_indices()
    }

    /// 1-based indices of corrupted entries.
    pub fn corrupted_indices(&self) -> Vec<usize> {
        self.mask.invalid_indices()
    }

    /// `Σ coeff · y` over measurement vectors of equal length; masks are ANDed.
    pub fn linear_combination(terms: &[(f64, &MaskedMeasurements)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| CsError::InvalidInput("empty linear combination".into()))?;
        let m = first.1.len();
        let mut data = vec![0.0; m];
        let mut mask = ValidityMask::all_valid(m);
        for (coeff, y) in terms {
            if y.len() != m {
                return Err(CsError::dim("linear combination", m, y.len()));
            }
            for (acc, v) in data.iter_mut().zip(&y.data) {
                *acc += coeff * v;
            }
            mask = mask.and(&y.mask)?;
        }
        let seed_ref = terms
            .iter()
            .find_map(|(_, y)| y.seed_ref.clone());
        Ok(MaskedMeasurements::new(data, mask)?.with_seed_ref(seed_ref))
    }

    pub fn into_parts(self) -> (Vec<f64>, ValidityMask, Option<String>) {
        (self.data, self.mask, self.seed_ref)
    }
}

/// Interleaved one-level wavelet coefficients: lowpass at odd 1-based
/// positions, highpass at even 1-based positions.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoefficients {
    data: Vec<f64>,
}

impl WaveletCoefficients {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() || !data.len().is_multiple_of(2) {
            return Err(CsError::InvalidInput(format!(
                "wavelet coefficients need a positive even length, got {}",
                data.len()
            )));
        }
        check_finite("wavelet coefficients", &data)?;
        Ok(WaveletCoefficients { data })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn lowpass(&self) -> Vec<f64> {
        self.data.iter().step_by(2).copied().collect()
    }

    pub fn highpass(&self) -> Vec<f64> {
        self.data.iter().skip(1).step_by(2).copied().collect()
    }

    /// The coefficient vector viewed as a signal, for measuring it.
    pub fn to_signal(&self) -> Signal {
        Signal {
            data: self.data.clone(),
        }
    }
}
