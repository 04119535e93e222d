//! Seed generation and the acquisition modes: plain partial circulant,
//! column-decimated (for interpolation by 2) and even/odd split (for the
//! lifting wavelet).
//!
//! Parity: the lifting literature splits a signal into `x[0::2]` ("even",
//! 0-based) and `x[1::2]` ("odd"). In 1-based terms the even stream sits at
//! positions 1, 3, 5, ... which is also where column decimation
//! (`Φ̂_i = Φ_{2i−1}`) places its samples.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::circulant::{apply, circulant_from_first_row};
use crate::error::{CsError, Result};
use crate::types::{MaskedMeasurements, Seed, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distribution {
    #[default]
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensingConfig {
    pub n: usize,
    pub m: usize,
    pub prng_seed: u64,
    pub distribution: Distribution,
}

impl SensingConfig {
    pub fn new(n: usize, m: usize, prng_seed: u64) -> Result<Self> {
        if m == 0 || m > n {
            return Err(CsError::range("measurement count", m as i64, format!("[1, {n}]")));
        }
        Ok(SensingConfig {
            n,
            m,
            prng_seed,
            distribution: Distribution::Gaussian,
        })
    }
}

/// `n` i.i.d. standard normal samples from a seeded ChaCha8 stream.
pub fn gaussian_vec(n: usize, prng_seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(prng_seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

pub fn gaussian_signal(n: usize, prng_seed: u64) -> Result<Signal> {
    Signal::new(gaussian_vec(n, prng_seed))
}

pub fn generate_seed(cfg: &SensingConfig) -> Result<Seed> {
    let data = match cfg.distribution {
        Distribution::Gaussian => gaussian_vec(cfg.n, cfg.prng_seed),
    };
    Ok(Seed::new(data)?.with_label(format!("gaussian:{}", cfg.prng_seed)))
}

/// `y = Φx` with `Φ` the first `m` rows of the circulant generated by `seed`.
pub fn acquire(seed: &Seed, m: usize, x: &Signal) -> Result<MaskedMeasurements> {
    if x.len() != seed.len() {
        return Err(CsError::dim("acquire", seed.len(), x.len()));
    }
    let spec = circulant_from_first_row(seed.clone(), m)?;
    let y = apply(&spec, x)?;
    Ok(MaskedMeasurements::all_valid(y)?.with_seed_ref(seed.label().map(str::to_owned)))
}

/// Places `x` at odd 1-based positions of a vector twice as long.
pub fn zero_stuff(x: &Signal) -> Signal {
    let mut up = vec![0.0; 2 * x.len()];
    for (i, &v) in x.as_slice().iter().enumerate() {
        up[2 * i] = v;
    }
    Signal::new(up).expect("zero-stuffing preserves finiteness")
}

/// `Φ̂x` where column `i` of `Φ̂` is column `2i − 1` of the `m × N` partial
/// circulant (`N = seed.len() = 2 · x.len()`).
pub fn acquire_decimated(seed: &Seed, m: usize, x: &Signal) -> Result<MaskedMeasurements> {
    let big_n = seed.len();
    if !big_n.is_multiple_of(2) {
        return Err(CsError::InvalidInput(format!(
            "decimated acquisition needs an even seed length, got {big_n}"
        )));
    }
    if x.len() * 2 != big_n {
        return Err(CsError::dim("decimated signal length", big_n / 2, x.len()));
    }
    acquire(seed, m, &zero_stuff(x))
}

/// Keeps entries at 0-based positions of the given parity, zeroing the rest.
pub fn parity_part(x: &Signal, odd: bool) -> Signal {
    let data = x
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &v)| if (k % 2 == 1) == odd { v } else { 0.0 })
        .collect();
    Signal::new(data).expect("parity split preserves finiteness")
}

/// Measurements of the even (`x[0::2]`) and odd (`x[1::2]`) sample streams.
///
/// `Φ^(e)` keeps the columns of the even stream and zeroes the others;
/// `Φ^(o)` the reverse. Their sum is the plain partial circulant, and with
/// direct summation `y_e + y_o` reproduces `acquire(seed, m, x)` bit for bit.
pub fn acquire_even_odd(
    seed: &Seed,
    m: usize,
    x: &Signal,
) -> Result<(MaskedMeasurements, MaskedMeasurements)> {
    if !x.len().is_multiple_of(2) {
        return Err(CsError::InvalidInput(format!(
            "even/odd acquisition needs an even signal length, got {}",
            x.len()
        )));
    }
    let y_e = acquire(seed, m, &parity_part(x, false))?;
    let y_o = acquire(seed, m, &parity_part(x, true))?;
    Ok((y_e, y_o))
}
