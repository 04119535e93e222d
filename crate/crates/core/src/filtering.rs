//! Filtering in the measurement domain.
//!
//! For `y = Φx` with `Φ` partial circulant, `(Φ x_{→d})_i = y_{i−d}` whenever
//! `i − d` stays inside `[1, m]`. Every compressed-domain operation here is a
//! weighted sum of shifted measurement vectors, and its validity mask is the
//! AND of the per-shift masks.

use log::warn;

use crate::circulant::circular_shift;
use crate::error::{CsError, Result};
use crate::mask::{mask_shift, ValidityMask};
use crate::types::{Convention, FilterSpec, MaskedMeasurements};

/// One `coeff · y_{→offset}` term; negative offsets shift left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftTerm {
    pub offset: i64,
    pub coeff: f64,
}

impl ShiftTerm {
    pub const fn new(offset: i64, coeff: f64) -> Self {
        ShiftTerm { offset, coeff }
    }
}

/// Raised when the filter is too long for the available measurements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterWarning {
    /// Every output entry is corrupted; `needed` more rows would have left one valid.
    NoValidOutput { filter_len: usize, measurements: usize, needed: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    pub measurements: MaskedMeasurements,
    pub warning: Option<FilterWarning>,
}

/// `Σ_t coeff_t · y_{→offset_t}` with the matching validity mask.
pub fn shift_combine(y: &MaskedMeasurements, terms: &[ShiftTerm]) -> Result<MaskedMeasurements> {
    let m = y.len();
    if terms.is_empty() {
        return Err(CsError::InvalidInput("shift_combine needs at least one term".into()));
    }
    let mut data = vec![0.0; m];
    let mut mask = ValidityMask::all_valid(m);
    for term in terms {
        if !term.coeff.is_finite() {
            return Err(CsError::InvalidInput("shift coefficient is not finite".into()));
        }
        mask = mask.and(&mask_shift(y.mask(), term.offset)?)?;
        let shifted = circular_shift(y.data(), term.offset);
        for (acc, v) in data.iter_mut().zip(shifted) {
            *acc += term.coeff * v;
        }
    }
    Ok(MaskedMeasurements::new(data, mask)?.with_seed_ref(y.seed_ref().map(str::to_owned)))
}

/// Shift terms equivalent to multiplying the signal by the filter circulant.
///
/// First-row filters read ahead (`Hx = Σ_j h_j x_{←(j−1)}`); first-column
/// filters are true convolutions (`Hx = Σ_j h_j x_{→(j−1)}`).
pub fn filter_terms(h: &FilterSpec) -> Vec<ShiftTerm> {
    let sign = match h.convention() {
        Convention::FirstRow => -1,
        Convention::FirstColumn => 1,
    };
    h.taps()
        .iter()
        .enumerate()
        .map(|(j, &c)| ShiftTerm::new(sign * j as i64, c))
        .collect()
}

/// Measurements of the filtered signal `ΦHx` from `y = Φx`.
///
/// Input-valid everywhere, a first-row filter leaves `[1, m − N_f + 1]`
/// valid and a first-column filter leaves `[N_f, m]` valid.
pub fn filter_measurements(y: &MaskedMeasurements, h: &FilterSpec) -> Result<FilterOutput> {
    let m = y.len();
    let nf = h.len();
    if nf > m {
        warn!("filter of length {nf} corrupts all {m} measurements");
        let measurements = MaskedMeasurements::new(vec![0.0; m], ValidityMask::all_invalid(m))?
            .with_seed_ref(y.seed_ref().map(str::to_owned));
        return Ok(FilterOutput {
            measurements,
            warning: Some(FilterWarning::NoValidOutput {
                filter_len: nf,
                measurements: m,
                needed: nf - m,
            }),
        });
    }
    Ok(FilterOutput {
        measurements: shift_combine(y, &filter_terms(h))?,
        warning: None,
    })
}

/// `max(0, m − N_f + 1)`.
pub fn valid_count_after_filter(m: usize, nf: usize) -> usize {
    (m + 1).saturating_sub(nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{dense_processed_measurements, discover_valid_set, dense_filter_signal, MATCH_TOL};
    use crate::sensing::{acquire, gaussian_signal, gaussian_vec};
    use crate::types::{Seed, Signal};

    fn setup(n: usize, m: usize, t: u64) -> (Seed, Signal, MaskedMeasurements) {
        let seed = Seed::new(gaussian_vec(n, t)).unwrap();
        let x = gaussian_signal(n, 10_000 + t).unwrap();
        let y = acquire(&seed, m, &x).unwrap();
        (seed, x, y)
    }

    #[test]
    fn identity_term() {
        let (_, _, y) = setup(8, 4, 1);
        let out = shift_combine(&y, &[ShiftTerm::new(0, 1.0)]).unwrap();
        assert_eq!(out, y);
    }

    #[test]
    fn second_difference_mask() {
        let (_, _, y) = setup(12, 6, 2);
        let out = shift_combine(
            &y,
            &[ShiftTerm::new(1, 1.0), ShiftTerm::new(0, -2.0), ShiftTerm::new(-1, 1.0)],
        )
        .unwrap();
        assert_eq!(out.mask().as_slice(), &[false, true, true, true, true, false]);
    }

    #[test]
    fn right_shift_by_two_matches_dense() {
        let (seed, x, y) = setup(10, 5, 3);
        let out = shift_combine(&y, &[ShiftTerm::new(2, 1.0)]).unwrap();
        assert_eq!(out.data(), circular_shift(y.data(), 2).as_slice());
        assert_eq!(out.mask().as_slice(), &[false, false, true, true, true]);
        let truth = dense_processed_measurements(&seed, 5, &x, |s| Ok(circular_shift(s, 2))).unwrap();
        assert_eq!(discover_valid_set(&out, &truth, MATCH_TOL).unwrap(), vec![3, 4, 5]);
    }

    #[test]
    fn offset_out_of_range() {
        let (_, _, y) = setup(8, 4, 4);
        assert!(matches!(
            shift_combine(&y, &[ShiftTerm::new(4, 1.0)]),
            Err(CsError::Range { .. })
        ));
    }

    #[test]
    fn delta_filter_is_identity() {
        let (_, _, y) = setup(8, 4, 5);
        for conv in [Convention::FirstRow, Convention::FirstColumn] {
            let h = FilterSpec::new(vec![1.0], conv).unwrap();
            let out = filter_measurements(&y, &h).unwrap();
            assert_eq!(out.measurements, y);
            assert!(out.warning.is_none());
        }
    }

    #[test]
    fn two_tap_first_row_against_oracle() {
        let (seed, x, y) = setup(8, 4, 6);
        let h = FilterSpec::new(vec![1.0, 1.0], Convention::FirstRow).unwrap();
        let out = filter_measurements(&y, &h).unwrap().measurements;
        let truth = dense_processed_measurements(&seed, 4, &x, |s| dense_filter_signal(&h, s)).unwrap();
        assert_eq!(discover_valid_set(&out, &truth, MATCH_TOL).unwrap(), vec![1, 2, 3]);
        assert_eq!(out.corrupted_indices(), vec![4]);
        assert!((out.data()[3] - truth[3]).abs() > 1e-6);
    }

    #[test]
    fn corruption_count_is_filter_length_minus_one() {
        let (_, _, y) = setup(64, 32, 7);
        for nf in 1..=8 {
            for conv in [Convention::FirstRow, Convention::FirstColumn] {
                let h = FilterSpec::new(gaussian_vec(nf, nf as u64), conv).unwrap();
                let out = filter_measurements(&y, &h).unwrap().measurements;
                let bad = out.corrupted_indices();
                assert_eq!(bad.len(), nf - 1);
                assert_eq!(out.mask().count_valid(), valid_count_after_filter(32, nf));
                let expected: Vec<usize> = match conv {
                    Convention::FirstRow => (32 - nf + 2..=32).collect(),
                    Convention::FirstColumn => (1..nf).collect(),
                };
                assert_eq!(bad, expected);
            }
        }
    }

    #[test]
    fn too_long_filter_warns() {
        let (_, _, y) = setup(8, 3, 8);
        let h = FilterSpec::new(vec![1.0; 5], Convention::FirstRow).unwrap();
        let out = filter_measurements(&y, &h).unwrap();
        assert!(out.measurements.mask().none());
        assert_eq!(
            out.warning,
            Some(FilterWarning::NoValidOutput { filter_len: 5, measurements: 3, needed: 2 })
        );
    }

    #[test]
    fn valid_count_formula() {
        assert_eq!(valid_count_after_filter(64, 3), 62);
        assert_eq!(valid_count_after_filter(4, 1), 4);
        assert_eq!(valid_count_after_filter(3, 5), 0);
        assert_eq!(valid_count_after_filter(3, 4), 0);
    }

    #[test]
    fn invalid_inputs_propagate() {
        let (_, _, y) = setup(8, 4, 9);
        let (data, _, _) = y.into_parts();
        let y = MaskedMeasurements::new(data, ValidityMask::from_bools(vec![true, false, true, true]).unwrap()).unwrap();
        let h = FilterSpec::new(vec![1.0, 1.0], Convention::FirstRow).unwrap();
        let out = filter_measurements(&y, &h).unwrap().measurements;
        // indices 1 and 2 read y_2, index 4 wraps
        assert_eq!(out.valid_indices(), vec![3]);
    }

    #[test]
    fn linearity_on_common_valid_set() {
        let n = 32;
        let m = 12;
        let seed = Seed::new(gaussian_vec(n, 70)).unwrap();
        let y1 = acquire(&seed, m, &gaussian_signal(n, 71).unwrap()).unwrap();
        let y2 = acquire(&seed, m, &gaussian_signal(n, 72).unwrap()).unwrap();
        let h = FilterSpec::new(vec![0.5, -1.0, 0.25], Convention::FirstColumn).unwrap();
        let (a, b) = (1.7, -0.4);
        let mix = MaskedMeasurements::linear_combination(&[(a, &y1), (b, &y2)]).unwrap();
        let lhs = filter_measurements(&mix, &h).unwrap().measurements;
        let f1 = filter_measurements(&y1, &h).unwrap().measurements;
        let f2 = filter_measurements(&y2, &h).unwrap().measurements;
        for i in lhs.mask().valid_indices() {
            let rhs = a * f1.data()[i - 1] + b * f2.data()[i - 1];
            assert!((lhs.data()[i - 1] - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn composition_matches_oracle() {
        let n = 64;
        let m = 20;
        for t in 0..10u64 {
            let (seed, x, y) = setup(n, m, 100 + t);
            let h1 = FilterSpec::new(gaussian_vec(3, 200 + t), Convention::FirstRow).unwrap();
            let h2 = FilterSpec::new(gaussian_vec(2, 300 + t), Convention::FirstRow).unwrap();
            let once = filter_measurements(&y, &h1).unwrap().measurements;
            let twice = filter_measurements(&once, &h2).unwrap().measurements;
            let truth = dense_processed_measurements(&seed, m, &x, |s| {
                dense_filter_signal(&h2, &dense_filter_signal(&h1, s)?)
            })
            .unwrap();
            assert_eq!(twice.valid_indices(), (1..=m - 3).collect::<Vec<_>>());
            let found = discover_valid_set(&twice, &truth, MATCH_TOL).unwrap();
            for i in twice.valid_indices() {
                assert!(found.contains(&i));
            }
        }
    }
}
