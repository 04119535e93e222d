//! Validity-mask algebra.
//!
//! A mask marks which measurement entries are still exact after a chain of
//! compressed-domain operations. Shifting measurements by `d` positions
//! invalidates the `|d|` entries that wrapped around, and combining several
//! shifted copies ANDs their masks.

use crate::error::{CsError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValidityMask {
    valid: Vec<bool>,
}

impl ValidityMask {
    pub fn from_bools(valid: Vec<bool>) -> Result<Self> {
        if valid.is_empty() {
            return Err(CsError::InvalidInput("mask must be non-empty".into()));
        }
        Ok(ValidityMask { valid })
    }

    pub fn all_valid(m: usize) -> Self {
        ValidityMask {
            valid: vec![true; m],
        }
    }

    pub fn all_invalid(m: usize) -> Self {
        ValidityMask {
            valid: vec![false; m],
        }
    }

    /// Valid exactly on the 1-based closed interval `[first, last]`.
    pub fn valid_range(m: usize, first: usize, last: usize) -> Self {
        ValidityMask {
            valid: (1..=m).map(|i| i >= first && i <= last).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.valid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valid.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.valid
    }

    /// 0-based lookup.
    pub fn is_valid(&self, index: usize) -> bool {
        self.valid[index]
    }

    pub fn count_valid(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    pub fn all(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }

    pub fn none(&self) -> bool {
        !self.valid.iter().any(|&v| v)
    }

    /// 1-based indices of valid entries.
    pub fn valid_indices(&self) -> Vec<usize> {
        self.indices_where(true)
    }

    /// 1-based indices of invalid entries.
    pub fn invalid_indices(&self) -> Vec<usize> {
        self.indices_where(false)
    }

    fn indices_where(&self, state: bool) -> Vec<usize> {
        self.valid
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == state)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn and(&self, other: &ValidityMask) -> Result<ValidityMask> {
        mask_and(self, other)
    }

    pub fn shift(&self, offset: i64) -> Result<ValidityMask> {
        mask_shift(self, offset)
    }

    /// Entrywise `self ≤ other` (self valid implies other valid).
    pub fn is_subset_of(&self, other: &ValidityMask) -> bool {
        self.len() == other.len() && self.valid.iter().zip(&other.valid).all(|(&a, &b)| !a || b)
    }
}

pub fn mask_and(a: &ValidityMask, b: &ValidityMask) -> Result<ValidityMask> {
    if a.len() != b.len() {
        return Err(CsError::dim("mask_and", a.len(), b.len()));
    }
    Ok(ValidityMask {
        valid: a.valid.iter().zip(&b.valid).map(|(&x, &y)| x && y).collect(),
    })
}

/// Mask of `y_{→d}` given the mask of `y` (`d < 0` is a left shift).
///
/// Right shift by `d`: entry `i` (1-based) is valid iff `i > d` and input
/// entry `i − d` was valid. Left shift by `s`: valid iff `i ≤ m − s` and
/// input entry `i + s` was valid.
pub fn mask_shift(mask: &ValidityMask, offset: i64) -> Result<ValidityMask> {
    let m = mask.len();
    if offset.unsigned_abs() as usize >= m {
        return Err(CsError::range("mask shift", offset, format!("(-{m}, {m})")));
    }
    let valid = (0..m as i64)
        .map(|i| {
            let src = i - offset;
            src >= 0 && src < m as i64 && mask.valid[src as usize]
        })
        .collect();
    Ok(ValidityMask { valid })
}
