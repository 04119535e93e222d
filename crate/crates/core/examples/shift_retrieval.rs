//! Recover an unknown circular shift from two measurement vectors.

use circcs::diagnostics::oracle_shift;
use circcs::prelude::*;

fn main() -> Result<()> {
    let (n, m) = (128, 32);
    let seed = Seed::new(gaussian_vec(n, 9))?;
    let x = gaussian_signal(n, 10)?;
    let z = acquire(&seed, m, &x)?;

    for s_star in [-17, 0, 5, 31] {
        let v = acquire(&seed, m, &Signal::new(oracle_shift(x.as_slice(), s_star))?)?;
        let est = shift_retrieve(&z, &v, m - 1)?;
        let runner_up = est
            .residuals_by_s
            .iter()
            .filter(|(&s, _)| s != est.s_hat)
            .map(|(_, &r)| r)
            .fold(f64::INFINITY, f64::min);
        println!(
            "s* = {s_star:>3}  s_hat = {:>3}  residual {:.1e}  next best {runner_up:.2}",
            est.s_hat, est.residual
        );
    }
    Ok(())
}
