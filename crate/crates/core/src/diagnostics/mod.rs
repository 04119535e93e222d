//! Brute-force reference implementations.
//!
//! Everything here works on explicit dense matrices with direct summation
//! and never calls the structured kernels it is used to check. The CLI's
//! `oracle-check` command runs the [`scenarios`] built on top of it.

pub mod scenarios;

use crate::circulant::CirculantSpec;
use crate::dense::DenseMatrix;
use crate::error::{CsError, Result};
use crate::types::{Convention, FilterSpec, MaskedMeasurements, Seed, Signal, WaveletCoefficients};

/// Relative tolerance for "matches the ground truth": `|a − b| ≤ tol·(1 + |b|)`.
pub const MATCH_TOL: f64 = 1e-9;
/// Absolute deviation that counts as "genuinely differs".
pub const DIFFER_TOL: f64 = 1e-6;

/// Explicit matrix of a circulant spec.
pub fn materialize(spec: &CirculantSpec) -> Result<DenseMatrix> {
    dense_partial_circulant(spec.seed(), spec.rows())
}

/// First `m` rows of the circulant whose row `i` is `seed_{→(i−1)}`.
pub fn dense_partial_circulant(seed: &Seed, m: usize) -> Result<DenseMatrix> {
    let n = seed.len();
    if m == 0 || m > n {
        return Err(CsError::range("dense rows", m as i64, format!("[1, {n}]")));
    }
    let mut out = DenseMatrix::zeros(m, n)?;
    for i in 0..m {
        let row = oracle_shift(seed.as_slice(), i as i64);
        for (k, v) in row.into_iter().enumerate() {
            out.set(i, k, v);
        }
    }
    Ok(out)
}

/// `x_{→s}` by the index definition `out[i] = x[(i − s) mod n]`.
pub fn oracle_shift(x: &[f64], s: i64) -> Vec<f64> {
    let n = x.len() as i64;
    (0..n).map(|i| x[(i - s).rem_euclid(n) as usize]).collect()
}

/// Dense `n × n` filter matrix built entry by entry from the taps.
pub fn dense_filter_matrix(h: &FilterSpec, n: usize) -> Result<DenseMatrix> {
    if h.len() > n {
        return Err(CsError::dim("filter length vs signal length", n, h.len()));
    }
    let mut out = DenseMatrix::zeros(n, n)?;
    for i in 0..n {
        for k in 0..n {
            let lag = match h.convention() {
                Convention::FirstRow => (k + n - i) % n,
                Convention::FirstColumn => (i + n - k) % n,
            };
            if lag < h.len() {
                out.set(i, k, h.taps()[lag]);
            }
        }
    }
    Ok(out)
}

/// `Hx` in the signal domain.
pub fn dense_filter_signal(h: &FilterSpec, x: &[f64]) -> Result<Vec<f64>> {
    dense_filter_matrix(h, x.len())?.matvec(x)
}

/// Processes `x` in the signal domain, then measures it densely with the
/// first `m` rows of the circulant generated by `seed`.
pub fn dense_processed_measurements<F>(seed: &Seed, m: usize, x: &Signal, process: F) -> Result<Vec<f64>>
where
    F: FnOnce(&[f64]) -> Result<Vec<f64>>,
{
    let processed = process(x.as_slice())?;
    if processed.len() != seed.len() {
        return Err(CsError::dim("processed signal length", seed.len(), processed.len()));
    }
    dense_partial_circulant(seed, m)?.matvec(&processed)
}

/// 1-based indices where `|a − b| ≤ tol·(1 + |b|)`.
pub fn discover_valid_set(result: &MaskedMeasurements, truth: &[f64], tol: f64) -> Result<Vec<usize>> {
    if result.len() != truth.len() {
        return Err(CsError::dim("discover_valid_set", truth.len(), result.len()));
    }
    Ok(result
        .data()
        .iter()
        .zip(truth)
        .enumerate()
        .filter(|(_, (a, b))| (*a - *b).abs() <= tol * (1.0 + b.abs()))
        .map(|(i, _)| i + 1)
        .collect())
}

/// Largest `|a − b| / (1 + |b|)` over entries the mask calls valid.
pub fn max_valid_error(result: &MaskedMeasurements, truth: &[f64]) -> f64 {
    result
        .data()
        .iter()
        .zip(truth)
        .enumerate()
        .filter(|(i, _)| result.is_valid(*i))
        .map(|(_, (a, b))| (a - b).abs() / (1.0 + b.abs()))
        .fold(0.0, f64::max)
}

/// Smallest `|a − b|` over entries the mask calls invalid (`∞` if none).
pub fn min_invalid_deviation(result: &MaskedMeasurements, truth: &[f64]) -> f64 {
    result
        .data()
        .iter()
        .zip(truth)
        .enumerate()
        .filter(|(i, _)| !result.is_valid(*i))
        .map(|(_, (a, b))| (a - b).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Single-level periodic 5/3 lifting (`K_0 = 1`, `K_1 = ½`).
///
/// `d[k] = x[2k+1] − ½(x[2k] + x[2k+2])`, `s[k] = x[2k] + ¼(d[k−1] + d[k])`,
/// output `[s_0, d_0/2, s_1, d_1/2, ...]`.
pub fn reference_lifting_53(x: &Signal) -> Result<WaveletCoefficients> {
    let n = x.len();
    if !n.is_multiple_of(2) {
        return Err(CsError::InvalidInput(format!("5/3 lifting needs even length, got {n}")));
    }
    let half = n / 2;
    let even: Vec<f64> = x.as_slice().iter().step_by(2).copied().collect();
    let odd: Vec<f64> = x.as_slice().iter().skip(1).step_by(2).copied().collect();
    let detail: Vec<f64> = (0..half)
        .map(|k| odd[k] - 0.5 * (even[k] + even[(k + 1) % half]))
        .collect();
    let smooth: Vec<f64> = (0..half)
        .map(|k| even[k] + 0.25 * (detail[(k + half - 1) % half] + detail[k]))
        .collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..half {
        out.push(smooth[k]);
        out.push(0.5 * detail[k]);
    }
    WaveletCoefficients::new(out)
}

/// Inverse of [`reference_lifting_53`].
pub fn inverse_lifting_53(theta: &WaveletCoefficients) -> Result<Signal> {
    let half = theta.len() / 2;
    let smooth = theta.lowpass();
    let detail: Vec<f64> = theta.highpass().iter().map(|d| 2.0 * d).collect();
    let even: Vec<f64> = (0..half)
        .map(|k| smooth[k] - 0.25 * (detail[(k + half - 1) % half] + detail[k]))
        .collect();
    let odd: Vec<f64> = (0..half)
        .map(|k| detail[k] + 0.5 * (even[k] + even[(k + 1) % half]))
        .collect();
    let mut out = Vec::with_capacity(2 * half);
    for k in 0..half {
        out.push(even[k]);
        out.push(odd[k]);
    }
    Signal::new(out)
}

/// Checks entry by entry that the partial circulant seeded by `candidate`
/// equals `Φ D_s` (columns of `Φ` permuted so that `Φ D_s x = Φ x_{→s}`).
pub fn shifted_operator_matches(seed: &Seed, m: usize, s: i64, candidate: &[f64]) -> bool {
    let n = seed.len();
    if candidate.len() != n || m == 0 || m > n {
        return false;
    }
    let phi = |i: usize, k: usize| seed.as_slice()[(k + n - i) % n];
    let cand = |i: usize, k: usize| candidate[(k + n - i) % n];
    (0..m).all(|i| {
        (0..n).all(|k| {
            let src = (k as i64 + s).rem_euclid(n as i64) as usize;
            phi(i, src) == cand(i, k)
        })
    })
}

/// Dense matrix of node `j` (1-based): each base row shifted right by
/// `(j − 1) · step`.
pub fn dense_node_matrix(base_rows: &[Vec<f64>], j: usize, step: usize) -> Result<DenseMatrix> {
    let shifted: Vec<Vec<f64>> = base_rows
        .iter()
        .map(|r| oracle_shift(r, ((j - 1) * step) as i64))
        .collect();
    DenseMatrix::from_rows(&shifted)
}

/// Node combination at `j` with node indices wrapped modulo `J`.
///
/// Used only to show that nodes outside the valid range cannot filter.
pub fn wrapped_node_combination(node_data: &[Vec<f64>], terms: &[(i64, f64)], j: usize) -> Vec<f64> {
    let nodes = node_data.len() as i64;
    let m = node_data[0].len();
    let mut out = vec![0.0; m];
    for &(offset, coeff) in terms {
        let src = (j as i64 - 1 - offset).rem_euclid(nodes) as usize;
        for (acc, v) in out.iter_mut().zip(&node_data[src]) {
            *acc += coeff * v;
        }
    }
    out
}
