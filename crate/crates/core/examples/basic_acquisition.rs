//! Generate a seed, take partial-circulant measurements and check them
//! against the dense matrix.

use circcs::diagnostics::dense_partial_circulant;
use circcs::prelude::*;

fn main() -> Result<()> {
    let cfg = SensingConfig::new(64, 16, 7)?;
    let seed = generate_seed(&cfg)?;
    let x = gaussian_signal(cfg.n, 8)?;
    let y = acquire(&seed, cfg.m, &x)?;

    let dense = dense_partial_circulant(&seed, cfg.m)?.matvec(x.as_slice())?;
    let err = y.data().iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("seed {:?}, n = {}, m = {}", seed.label(), cfg.n, cfg.m);
    println!("y[..4] = {:?}", &y.data()[..4]);
    println!("max |y - dense| = {err:.2e}");

    // even/odd streams add back to y exactly
    let (ye, yo) = acquire_even_odd(&seed, cfg.m, &x)?;
    let exact = (0..cfg.m).all(|i| ye.data()[i] + yo.data()[i] == y.data()[i]);
    println!("y_e + y_o == y: {exact}");
    Ok(())
}
