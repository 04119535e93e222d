//! Several nodes with row-shifted sensing matrices cooperate to filter a
//! signal, exchanging one measurement vector per neighbour.

use circcs::diagnostics::{dense_filter_signal, dense_node_matrix, max_valid_error};
use circcs::prelude::*;

fn main() -> Result<()> {
    let (n, m, nodes) = (64, 8, 6);
    let ens = build_ensemble(&SensingConfig::new(n, m, 21)?, nodes)?;
    let x = gaussian_signal(n, 22)?;
    let ys = acquire_all(&ens, &x)?;

    let h = FilterSpec::new(vec![1.0, -1.0, 0.5], Convention::FirstColumn)?;
    let mut log = ExchangeLog::new();
    let out = distributed_filter(&ys, &h, &mut log)?;
    let xf = dense_filter_signal(&h, x.as_slice())?;
    for nm in &out.nodes {
        let truth = dense_node_matrix(ens.base_rows(), nm.node_id, 1)?.matvec(&xf)?;
        let status = if nm.y.mask().all() {
            format!("exact, error {:.1e}", max_valid_error(&nm.y, &truth))
        } else {
            "cannot filter (too few predecessors)".to_owned()
        };
        println!("node {}: {status}", nm.node_id);
    }
    println!("{} transfers, {} reals moved", log.len(), log.volume());
    Ok(())
}
