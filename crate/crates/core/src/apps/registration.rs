//! Registration: given `v = Φ x_{→s}` and a known `s`, produce measurements
//! of the unshifted `x`.
//!
//! `SameMatrix` shifts the measurement vector back and loses `|s|` entries.
//! `ReseededMatrix` keeps every entry and instead re-labels the sensing
//! matrix: `Φ x_{→s} = Φ′ x` where `Φ′` is the partial circulant seeded by a
//! row of the full circulant. Which row is found by checking the candidate
//! rules against the explicit operator `Φ D_s`.

use crate::circulant::circular_shift;
use crate::diagnostics::shifted_operator_matches;
use crate::error::{CsError, Result};
use crate::filtering::{shift_combine, ShiftTerm};
use crate::types::{MaskedMeasurements, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegisterMode {
    SameMatrix,
    ReseededMatrix,
}

impl std::str::FromStr for RegisterMode {
    type Err = CsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same" => Ok(RegisterMode::SameMatrix),
            "reseed" => Ok(RegisterMode::ReseededMatrix),
            other => Err(CsError::InvalidInput(format!("unknown register mode `{other}`"))),
        }
    }
}

/// Candidate rows (1-based, modulo `n`) of the full circulant to use as `Φ′`'s seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedRowRule {
    /// Row `m − s + 1`.
    MeasurementRow,
    /// Row `n − s + 1`.
    FullRow,
}

impl SeedRowRule {
    pub const CANDIDATES: [SeedRowRule; 2] = [SeedRowRule::MeasurementRow, SeedRowRule::FullRow];

    /// 1-based row index for shift `s` with `m` measurements of a length-`n` signal.
    pub fn row(self, s: i64, m: usize, n: usize) -> usize {
        let base = match self {
            SeedRowRule::MeasurementRow => m as i64,
            SeedRowRule::FullRow => n as i64,
        };
        (base - s).rem_euclid(n as i64) as usize + 1
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SeedRowRule::MeasurementRow => "m-s+1",
            SeedRowRule::FullRow => "n-s+1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReseedCalibration {
    /// The rule whose seed reproduced `Φ D_s` exactly.
    pub rule: SeedRowRule,
    /// 1-based row of the full circulant used as the new seed.
    pub row: usize,
    /// Every candidate tried, in order, with its verdict.
    pub tried: Vec<(SeedRowRule, bool)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Registered {
    pub measurements: MaskedMeasurements,
    /// Seed of `Φ′` (reseeded mode only).
    pub seed: Option<Seed>,
    pub calibration: Option<ReseedCalibration>,
}

/// Registers `v = Φ x_{→s}` back to `x`.
///
/// `seed` (the seed of `Φ`) is required in reseeded mode.
pub fn register(v: &MaskedMeasurements, s: i64, mode: RegisterMode, seed: Option<&Seed>) -> Result<Registered> {
    let m = v.len();
    if s.unsigned_abs() as usize >= m {
        return Err(CsError::range("registration shift", s, format!("(-{m}, {m})")));
    }
    match mode {
        RegisterMode::SameMatrix => Ok(Registered {
            measurements: shift_combine(v, &[ShiftTerm::new(-s, 1.0)])?,
            seed: None,
            calibration: None,
        }),
        RegisterMode::ReseededMatrix => {
            let seed = seed.ok_or_else(|| {
                CsError::InvalidInput("reseeded registration needs the original seed".into())
            })?;
            if seed.len() < m {
                return Err(CsError::dim("seed length vs measurements", m, seed.len()));
            }
            if let (Some(a), Some(b)) = (v.seed_ref(), seed.label()) {
                if a != b {
                    return Err(CsError::InvalidInput(format!(
                        "measurements reference seed {a}, got seed {b}"
                    )));
                }
            }
            let (new_seed, calibration) = calibrate_reseed(seed, m, s)?;
            Ok(Registered {
                measurements: v.clone().with_seed_ref(new_seed.label().map(str::to_owned)),
                seed: Some(new_seed),
                calibration: Some(calibration),
            })
        }
    }
}

/// Tries each candidate row rule and keeps the first one that reproduces
/// `Φ D_s` entry for entry.
pub fn calibrate_reseed(seed: &Seed, m: usize, s: i64) -> Result<(Seed, ReseedCalibration)> {
    let n = seed.len();
    let mut tried = Vec::new();
    for rule in SeedRowRule::CANDIDATES {
        let row = rule.row(s, m, n);
        let candidate = circular_shift(seed.as_slice(), row as i64 - 1);
        let ok = shifted_operator_matches(seed, m, s, &candidate);
        tried.push((rule, ok));
        if ok {
            let label = match seed.label() {
                Some(l) => format!("{l}@row{row}"),
                None => format!("row{row}"),
            };
            let new_seed = Seed::new(candidate)?.with_label(label);
            return Ok((new_seed, ReseedCalibration { rule, row, tried }));
        }
    }
    Err(CsError::InvalidInput(format!(
        "no candidate seed row reproduces the shifted operator for s = {s}"
    )))
}
