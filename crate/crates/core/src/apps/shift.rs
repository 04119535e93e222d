//! Integer shift retrieval between two measurement vectors taken with the
//! same partial circulant matrix.
//!
//! If `z = Φx` and `v = Φx_{→s*}`, then `v_{i} = z_{i−s*}` for every `i`
//! with `i − s*` inside `[1, m]`. The overlap residual therefore vanishes at
//! `s = s*` and (for generic data) nowhere else.

use std::collections::BTreeMap;

use crate::error::{CsError, Result};
use crate::types::MaskedMeasurements;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidualNorm {
    /// Plain Euclidean norm of the overlap difference.
    #[default]
    Raw,
    /// Euclidean norm divided by the square root of the overlap length.
    /// Useful with noisy data, where long overlaps accumulate more noise.
    PerEntry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftEstimate {
    pub s_hat: i64,
    pub residual: f64,
    pub residuals_by_s: BTreeMap<i64, f64>,
}

/// Candidate shifts in tie-break order: 0, 1, −1, 2, −2, ...
fn candidates(s_max: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=s_max).flat_map(|s| [s, -s]))
}

/// Overlapping windows `(z̃, ṽ)` for a trial shift `s`.
fn overlap<'a>(z: &'a [f64], v: &'a [f64], s: i64) -> (&'a [f64], &'a [f64]) {
    let m = z.len();
    let a = s.unsigned_abs() as usize;
    if s >= 0 {
        (&z[..m - a], &v[a..])
    } else {
        (&z[a..], &v[..m - a])
    }
}

pub fn shift_retrieve(z: &MaskedMeasurements, v: &MaskedMeasurements, s_max: usize) -> Result<ShiftEstimate> {
    shift_retrieve_with(z, v, s_max, ResidualNorm::Raw)
}

/// Minimizes `‖z̃ − ṽ‖₂` over `s ∈ [−s_max, s_max]`.
///
/// Ties go to the smallest `|s|`, then to the positive shift.
pub fn shift_retrieve_with(
    z: &MaskedMeasurements,
    v: &MaskedMeasurements,
    s_max: usize,
    norm: ResidualNorm,
) -> Result<ShiftEstimate> {
    let m = z.len();
    if v.len() != m {
        return Err(CsError::dim("shift_retrieve", m, v.len()));
    }
    if s_max == 0 || s_max >= m {
        return Err(CsError::range("s_max", s_max as i64, format!("[1, {}]", m.saturating_sub(1))));
    }
    if !z.mask().all() || !v.mask().all() {
        return Err(CsError::InvalidInput(
            "shift retrieval needs uncorrupted measurements".into(),
        ));
    }
    if let (Some(a), Some(b)) = (z.seed_ref(), v.seed_ref()) {
        if a != b {
            return Err(CsError::InvalidInput(format!(
                "measurements come from different sensing matrices ({a} vs {b})"
            )));
        }
    }

    let mut residuals_by_s = BTreeMap::new();
    let mut best: Option<(i64, f64)> = None;
    for s in candidates(s_max as i64) {
        let (zt, vt) = overlap(z.data(), v.data(), s);
        let sq: f64 = zt.iter().zip(vt).map(|(a, b)| (a - b) * (a - b)).sum();
        let residual = match norm {
            ResidualNorm::Raw => sq.sqrt(),
            ResidualNorm::PerEntry => (sq / zt.len() as f64).sqrt(),
        };
        residuals_by_s.insert(s, residual);
        if best.is_none_or(|(_, r)| residual < r) {
            best = Some((s, residual));
        }
    }
    let (s_hat, residual) = best.expect("at least one candidate");
    Ok(ShiftEstimate {
        s_hat,
        residual,
        residuals_by_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{dense_processed_measurements, oracle_shift};
    use crate::sensing::{acquire, gaussian_signal, gaussian_vec};
    use crate::types::{Seed, Signal};

    fn pair(n: usize, m: usize, s: i64, t: u64) -> (MaskedMeasurements, MaskedMeasurements) {
        let seed = Seed::new(gaussian_vec(n, t)).unwrap().with_label("test");
        let x = gaussian_signal(n, t + 1).unwrap();
        let z = acquire(&seed, m, &x).unwrap();
        let xs = Signal::new(oracle_shift(x.as_slice(), s)).unwrap();
        (z, acquire(&seed, m, &xs).unwrap())
    }

    #[test]
    fn zero_shift() {
        let (z, v) = pair(64, 16, 0, 1);
        let est = shift_retrieve(&z, &v, 15).unwrap();
        assert_eq!(est.s_hat, 0);
        assert_eq!(est.residual, 0.0);
        assert_eq!(est.residuals_by_s.len(), 31);
    }

    #[test]
    fn negative_shift() {
        let (z, v) = pair(128, 32, -5, 2);
        let est = shift_retrieve(&z, &v, 31).unwrap();
        assert_eq!(est.s_hat, -5);
        assert!(est.residual <= 1e-10);
    }

    #[test]
    fn shifted_measurements_agree_with_dense_construction() {
        let seed = Seed::new(gaussian_vec(32, 3)).unwrap();
        let x = gaussian_signal(32, 4).unwrap();
        let v = acquire(&seed, 8, &Signal::new(oracle_shift(x.as_slice(), 3)).unwrap()).unwrap();
        let dense = dense_processed_measurements(&seed, 8, &x, |s| Ok(oracle_shift(s, 3))).unwrap();
        for (a, b) in v.data().iter().zip(&dense) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn every_shift_below_m() {
        let m = 12;
        for s in -(m as i64 - 1)..m as i64 {
            let (z, v) = pair(48, m, s, 50 + s.unsigned_abs());
            assert_eq!(shift_retrieve(&z, &v, m - 1).unwrap().s_hat, s);
        }
    }

    #[test]
    fn tie_break_prefers_small_positive() {
        // all residuals tie at zero
        let z = MaskedMeasurements::all_valid(vec![1.0; 6]).unwrap();
        let est = shift_retrieve(&z, &z, 5).unwrap();
        assert_eq!(est.s_hat, 0);
        // period-2 data: s = ±2 tie with s = 0 excluded
        let z = MaskedMeasurements::all_valid(vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        let v = MaskedMeasurements::all_valid(vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        let est = shift_retrieve(&z, &v, 5).unwrap();
        assert_eq!(est.s_hat, 1);
    }

    #[test]
    fn errors() {
        let (z, v) = pair(16, 8, 1, 9);
        assert!(matches!(shift_retrieve(&z, &v, 8), Err(CsError::Range { .. })));
        assert!(matches!(shift_retrieve(&z, &v, 0), Err(CsError::Range { .. })));
        let short = MaskedMeasurements::all_valid(vec![1.0; 4]).unwrap();
        assert!(matches!(shift_retrieve(&z, &short, 2), Err(CsError::Dimension { .. })));
        let other = v.clone().with_seed_ref(Some("other".into()));
        assert!(shift_retrieve(&z, &other, 3).is_err());
        let corrupted = crate::apps::second_difference(&v).unwrap();
        assert!(shift_retrieve(&z, &corrupted, 3).is_err());
    }

    #[test]
    fn per_entry_norm_still_finds_shift() {
        let (z, v) = pair(64, 16, 4, 11);
        let est = shift_retrieve_with(&z, &v, 15, ResidualNorm::PerEntry).unwrap();
        assert_eq!(est.s_hat, 4);
    }
}
