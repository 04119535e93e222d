//! Undo a known shift: either in place (losing |s| entries) or by
//! reinterpreting the measurements under a reseeded matrix.

use circcs::diagnostics::{dense_partial_circulant, max_valid_error, oracle_shift};
use circcs::prelude::*;

fn main() -> Result<()> {
    let (n, m, s) = (64, 16, 3);
    let seed = Seed::new(gaussian_vec(n, 11))?.with_label("demo");
    let x = gaussian_signal(n, 12)?;
    let y = acquire(&seed, m, &x)?;
    let v = acquire(&seed, m, &Signal::new(oracle_shift(x.as_slice(), s))?)?;

    let same = register(&v, s, RegisterMode::SameMatrix, None)?;
    println!("same matrix: valid {:?}", same.measurements.valid_indices());
    println!("  error vs fresh acquisition {:.2e}", max_valid_error(&same.measurements, y.data()));

    let reseeded = register(&v, s, RegisterMode::ReseededMatrix, Some(&seed))?;
    let new_seed = reseeded.seed.expect("reseeded mode returns a seed");
    let cal = reseeded.calibration.expect("reseeded mode calibrates");
    let truth = dense_partial_circulant(&new_seed, m)?.matvec(x.as_slice())?;
    println!("reseeded: rule {} (row {}), tried {:?}", cal.rule.as_str(), cal.row, cal.tried);
    println!("  new seed {:?}, error {:.2e}", new_seed.label(), max_valid_error(&reseeded.measurements, &truth));
    Ok(())
}
