//! One level of the 5/3 lifting wavelet computed from even/odd stream
//! measurements.

use circcs::diagnostics::{dense_partial_circulant, max_valid_error, reference_lifting_53};
use circcs::prelude::*;

fn main() -> Result<()> {
    let (n, m) = (64, 16);
    let seed = Seed::new(gaussian_vec(n, 13))?;
    let x = gaussian_signal(n, 14)?;
    let (ye, yo) = acquire_even_odd(&seed, m, &x)?;
    let theta_m = compressive_wavelet_53(&ye, &yo, &LiftingScheme::spline_53())?;

    let theta = reference_lifting_53(&x)?;
    let truth = dense_partial_circulant(&seed, m)?.matvec(theta.as_slice())?;
    println!("corrupted indices {:?}", theta_m.corrupted_indices());
    println!("max valid error   {:.2e}", max_valid_error(&theta_m, &truth));
    println!("lowpass[..3]  {:?}", &theta.lowpass()[..3]);
    println!("highpass[..3] {:?}", &theta.highpass()[..3]);
    Ok(())
}
