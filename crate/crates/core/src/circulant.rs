//! Circulant and partial-circulant operators described by their seed.
//!
//! Row `i` (1-based) of the represented matrix is the seed circularly
//! right-shifted by `i − 1`. Products never materialize the matrix; the
//! commutator diagnostics are the only dense consumers.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::dense::DenseMatrix;
use crate::diagnostics::materialize;
use crate::error::{CsError, Result};
use crate::types::{Convention, FilterSpec, Seed, Signal};

/// Below this length products always use direct summation.
pub const FFT_MIN_LEN: usize = 32;
/// Auto kernel switches to the FFT once `rows · n` reaches this much work.
pub const FFT_MIN_WORK: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    seed: Seed,
    rows: usize,
}

impl CirculantSpec {
    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    /// `m`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `n`.
    pub fn cols(&self) -> usize {
        self.seed.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.seed.len()
    }

    /// Entry `(i, k)`, 0-based.
    pub fn entry(&self, i: usize, k: usize) -> f64 {
        let n = self.cols();
        self.seed.as_slice()[(k + n - i % n) % n]
    }
}

pub fn circulant_from_first_row(seed: Seed, rows: usize) -> Result<CirculantSpec> {
    if rows == 0 || rows > seed.len() {
        return Err(CsError::range(
            "circulant rows",
            rows as i64,
            format!("[1, {}]", seed.len()),
        ));
    }
    Ok(CirculantSpec { seed, rows })
}

/// Square `n × n` circulant of a filter under its convention.
pub fn filter_to_circulant(h: &FilterSpec, n: usize) -> Result<CirculantSpec> {
    let nf = h.len();
    if nf > n {
        return Err(CsError::dim("filter length vs signal length", n, nf));
    }
    let mut row = vec![0.0; n];
    match h.convention() {
        Convention::FirstRow => row[..nf].copy_from_slice(h.taps()),
        Convention::FirstColumn => {
            // first column [h1..hNf,0..] <=> first row [h1, 0.., hNf..h2]
            row[0] = h.taps()[0];
            for (j, &t) in h.taps().iter().enumerate().skip(1) {
                row[n - j] = t;
            }
        }
    }
    let label = format!("filter:{}", h.convention().as_str());
    circulant_from_first_row(Seed::new(row)?.with_label(label), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// Direct summation for small problems, FFT otherwise.
    Auto,
    Direct,
    Fft,
}

pub fn apply(spec: &CirculantSpec, x: &Signal) -> Result<Vec<f64>> {
    apply_with(spec, x, Kernel::Auto)
}

pub fn apply_with(spec: &CirculantSpec, x: &Signal, kernel: Kernel) -> Result<Vec<f64>> {
    if x.len() != spec.cols() {
        return Err(CsError::dim("circulant apply", spec.cols(), x.len()));
    }
    let seed = spec.seed.as_slice();
    let x = x.as_slice();
    let use_fft = match kernel {
        Kernel::Direct => false,
        Kernel::Fft => true,
        Kernel::Auto => seed.len() >= FFT_MIN_LEN && spec.rows * seed.len() >= FFT_MIN_WORK,
    };
    Ok(if use_fft {
        correlate_fft(seed, x, spec.rows)
    } else {
        correlate_direct(seed, x, spec.rows)
    })
}

/// `y_i = Σ_k seed[(k − i) mod n] · x[k]` for `i < rows`.
///
/// Even and odd columns are accumulated separately and added last, so a
/// product split by column parity sums back to the full product exactly.
pub(crate) fn correlate_direct(seed: &[f64], x: &[f64], rows: usize) -> Vec<f64> {
    let n = seed.len();
    (0..rows)
        .map(|i| {
            let mut even = 0.0;
            let mut odd = 0.0;
            for (k, &xk) in x.iter().enumerate() {
                let term = seed[(k + n - i) % n] * xk;
                if k % 2 == 0 {
                    even += term;
                } else {
                    odd += term;
                }
            }
            even + odd
        })
        .collect()
}

fn correlate_fft(seed: &[f64], x: &[f64], rows: usize) -> Vec<f64> {
    let n = seed.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward: Arc<dyn rustfft::Fft<f64>> = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut s: Vec<Complex<f64>> = seed.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut xf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    forward.process(&mut s);
    forward.process(&mut xf);
    // correlation: conj(S) · X
    let mut prod: Vec<Complex<f64>> = s.iter().zip(&xf).map(|(a, b)| a.conj() * b).collect();
    inverse.process(&mut prod);
    let scale = 1.0 / n as f64;
    prod.iter().take(rows).map(|c| c.re * scale).collect()
}

/// `(x_{→s})_i = x_{((i − s − 1) mod n) + 1}`; negative `s` shifts left.
pub fn circular_shift<T: Copy>(x: &[T], s: i64) -> Vec<T> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let s = s.rem_euclid(n as i64) as usize;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&x[n - s..]);
    out.extend_from_slice(&x[..n - s]);
    out
}

/// `AB − BA` for two square circulants.
pub fn commutator(a: &CirculantSpec, b: &CirculantSpec) -> Result<DenseMatrix> {
    if !a.is_square() || !b.is_square() {
        return Err(CsError::InvalidInput("commutator needs square circulants".into()));
    }
    if a.cols() != b.cols() {
        return Err(CsError::dim("commutator", a.cols(), b.cols()));
    }
    materialize(a)?.commutator(&materialize(b)?)
}

/// m-partial commutator `ΦH − H̃Φ`, with `H̃` the leading `m × m` block of `H`.
pub fn partial_commutator(phi: &CirculantSpec, h: &CirculantSpec) -> Result<DenseMatrix> {
    if !h.is_square() {
        return Err(CsError::InvalidInput("filter circulant must be square".into()));
    }
    if phi.cols() != h.cols() {
        return Err(CsError::dim("partial commutator", phi.cols(), h.cols()));
    }
    let phi_d = materialize(phi)?;
    let h_d = materialize(h)?;
    let h_tilde = h_d.submatrix(phi.rows(), phi.rows())?;
    phi_d.matmul(&h_d)?.sub(&h_tilde.matmul(&phi_d)?)
}

/// (J, m)-distributed partial commutator `Φ̃H − (H_J ⊗ I_m)Φ̃`.
pub fn distributed_partial_commutator(
    phi_tilde: &DenseMatrix,
    h: &CirculantSpec,
    nodes: usize,
    m: usize,
) -> Result<DenseMatrix> {
    if !h.is_square() {
        return Err(CsError::InvalidInput("filter circulant must be square".into()));
    }
    if phi_tilde.rows() != nodes * m {
        return Err(CsError::dim("stacked rows", nodes * m, phi_tilde.rows()));
    }
    if phi_tilde.cols() != h.cols() {
        return Err(CsError::dim("stacked cols", h.cols(), phi_tilde.cols()));
    }
    if nodes > h.cols() {
        return Err(CsError::dim("node count vs filter size", h.cols(), nodes));
    }
    let h_d = materialize(h)?;
    let h_j = h_d.submatrix(nodes, nodes)?;
    let lifted = h_j.kronecker(&DenseMatrix::identity(m)?)?;
    phi_tilde.matmul(&h_d)?.sub(&lifted.matmul(phi_tilde)?)
}
