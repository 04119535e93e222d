//! Linear interpolation by two: measure the zero-stuffed signal, then
//! interpolate in the measurement domain.

use circcs::diagnostics::{dense_partial_circulant, max_valid_error};
use circcs::prelude::*;

fn main() -> Result<()> {
    let (n, m) = (32, 16);
    let seed = Seed::new(gaussian_vec(2 * n, 5))?;
    let x = gaussian_signal(n, 6)?;
    let y = acquire_decimated(&seed, m, &x)?;
    let up = interpolate2(&y)?;

    let xs = x.as_slice();
    let x_int: Vec<f64> = (0..2 * n)
        .map(|k| if k % 2 == 0 { xs[k / 2] } else { 0.5 * (xs[k / 2] + xs[(k / 2 + 1) % n]) })
        .collect();
    let truth = dense_partial_circulant(&seed, m)?.matvec(&x_int)?;
    println!("valid indices   {:?}", up.valid_indices());
    println!("max valid error {:.2e}", max_valid_error(&up, &truth));
    Ok(())
}
