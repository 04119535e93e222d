//! Filter a signal using only its measurements, then compare with
//! measuring the filtered signal directly.

use circcs::diagnostics::{dense_filter_signal, dense_processed_measurements, discover_valid_set, MATCH_TOL};
use circcs::prelude::*;

fn main() -> Result<()> {
    let (n, m) = (128, 24);
    let seed = Seed::new(gaussian_vec(n, 1))?;
    let x = gaussian_signal(n, 2)?;
    let y = acquire(&seed, m, &x)?;

    for conv in [Convention::FirstRow, Convention::FirstColumn] {
        let h = FilterSpec::new(vec![0.25, 0.5, 0.25], conv)?;
        let out = filter_measurements(&y, &h)?;
        let truth = dense_processed_measurements(&seed, m, &x, |s| dense_filter_signal(&h, s))?;
        let agree = discover_valid_set(&out.measurements, &truth, MATCH_TOL)?;
        println!("{}:", conv.as_str());
        println!("  corrupted indices   {:?}", out.measurements.corrupted_indices());
        println!("  agreeing with truth {} of {m} (expected {})", agree.len(), valid_count_after_filter(m, h.len()));
    }

    let long = FilterSpec::new(vec![1.0; 30], Convention::FirstRow)?;
    println!("filter longer than m: {:?}", filter_measurements(&y, &long)?.warning);
    Ok(())
}
