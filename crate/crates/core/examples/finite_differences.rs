//! Second difference of the underlying signal from its measurements.

use circcs::diagnostics::{dense_processed_measurements, max_valid_error, oracle_shift};
use circcs::prelude::*;

fn main() -> Result<()> {
    let (n, m) = (64, 12);
    let seed = Seed::new(gaussian_vec(n, 3))?;
    let x = gaussian_signal(n, 4)?;
    let d2 = second_difference(&acquire(&seed, m, &x)?)?;

    let truth = dense_processed_measurements(&seed, m, &x, |s| {
        let (r, l) = (oracle_shift(s, 1), oracle_shift(s, -1));
        Ok((0..s.len()).map(|k| r[k] - 2.0 * s[k] + l[k]).collect())
    })?;
    println!("valid indices     {:?}", d2.valid_indices());
    println!("corrupted indices {:?}", d2.corrupted_indices());
    println!("max valid error   {:.2e}", max_valid_error(&d2, &truth));
    Ok(())
}
