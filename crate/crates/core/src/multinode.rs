//! Cooperative filtering across `J` nodes whose sensing matrices obey the
//! distributed circulation property: row `i` of node `j` is row `i` of node
//! `j − 1` circularly right-shifted by `shift_step`.
//!
//! With that property `Φ^(j) x_{→d} = Φ^(j − d/step) x`, so a node filters
//! by combining measurements fetched from its neighbours. Node indices are
//! never wrapped: a node whose neighbourhood leaves `[1, J]` cannot filter.
//!
//! The exchange runs on a synchronous round-based simulator. Round 1 moves
//! measurement vectors between nodes, round 2 computes; every node reads
//! only state produced by earlier rounds, so the processing order inside a
//! round cannot change the result.

use std::collections::{BTreeMap, BTreeSet};

use log::{debug, warn};

use crate::dense::DenseMatrix;
use crate::error::{CsError, Result};
use crate::filtering::{filter_terms, ShiftTerm};
use crate::mask::ValidityMask;
use crate::sensing::{gaussian_vec, SensingConfig};
use crate::types::{Convention, FilterSpec, MaskedMeasurements, Signal};

/// Largest signal length [`stack_ensemble`] will materialize.
pub const STACK_MAX_N: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct NodeEnsemble {
    nodes: usize,
    m: usize,
    n: usize,
    base_rows: Vec<Vec<f64>>,
    shift_step: usize,
}

impl NodeEnsemble {
    /// Ensemble from explicit node-1 rows.
    pub fn from_base_rows(base_rows: Vec<Vec<f64>>, nodes: usize, shift_step: usize) -> Result<Self> {
        let m = base_rows.len();
        let n = base_rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(CsError::InvalidInput("ensemble needs at least one non-empty row".into()));
        }
        if let Some(bad) = base_rows.iter().find(|r| r.len() != n) {
            return Err(CsError::dim("ensemble row length", n, bad.len()));
        }
        if base_rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(CsError::InvalidInput("ensemble rows must be finite".into()));
        }
        if m > n {
            return Err(CsError::range("measurements per node", m as i64, format!("[1, {n}]")));
        }
        if shift_step == 0 {
            return Err(CsError::InvalidInput("shift step must be positive".into()));
        }
        if nodes == 0 || nodes * shift_step > n {
            return Err(CsError::range(
                "node count",
                nodes as i64,
                format!("[1, {}]", n / shift_step),
            ));
        }
        Ok(NodeEnsemble {
            nodes,
            m,
            n,
            base_rows,
            shift_step,
        })
    }

    /// `J`.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shift_step(&self) -> usize {
        self.shift_step
    }

    pub fn base_rows(&self) -> &[Vec<f64>] {
        &self.base_rows
    }

    fn check_node(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.nodes {
            return Err(CsError::range("node id", j as i64, format!("[1, {}]", self.nodes)));
        }
        Ok(())
    }

    /// Row `i` (1-based) of node `j` (1-based).
    pub fn node_row(&self, j: usize, i: usize) -> Result<Vec<f64>> {
        self.check_node(j)?;
        if i == 0 || i > self.m {
            return Err(CsError::range("row index", i as i64, format!("[1, {}]", self.m)));
        }
        let shift = ((j - 1) * self.shift_step) as i64;
        Ok(crate::circulant::circular_shift(&self.base_rows[i - 1], shift))
    }

    /// `Φ^(j) x` without materializing the node matrix.
    pub fn node_apply(&self, j: usize, x: &Signal) -> Result<Vec<f64>> {
        self.check_node(j)?;
        if x.len() != self.n {
            return Err(CsError::dim("node apply", self.n, x.len()));
        }
        let n = self.n;
        let shift = (j - 1) * self.shift_step % n;
        let x = x.as_slice();
        Ok(self
            .base_rows
            .iter()
            .map(|row| {
                // (row_{→shift})[k] = row[(k − shift) mod n]
                x.iter()
                    .enumerate()
                    .map(|(k, &xk)| row[(k + n - shift) % n] * xk)
                    .sum()
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeMeasurements {
    pub node_id: usize,
    pub shift_step: usize,
    pub y: MaskedMeasurements,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExchangeRecord {
    pub round: usize,
    pub from_node: usize,
    pub to_node: usize,
    pub vector_length: usize,
}

/// Append-only record of every cross-node vector transfer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExchangeLog {
    records: Vec<ExchangeRecord>,
}

impl ExchangeLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: ExchangeRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[ExchangeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Total number of reals moved between nodes.
    pub fn volume(&self) -> usize {
        self.records.iter().map(|r| r.vector_length).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributedOutput {
    pub nodes: Vec<NodeMeasurements>,
    /// Set when no node can produce filtered measurements.
    pub warning: Option<String>,
}

impl DistributedOutput {
    /// 1-based ids of nodes whose output is valid.
    pub fn valid_nodes(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|nm| !nm.y.mask().none())
            .map(|nm| nm.node_id)
            .collect()
    }
}

pub fn build_ensemble(cfg: &SensingConfig, nodes: usize) -> Result<NodeEnsemble> {
    build_ensemble_with_step(cfg, nodes, 1)
}

pub fn build_ensemble_with_step(cfg: &SensingConfig, nodes: usize, shift_step: usize) -> Result<NodeEnsemble> {
    let flat = gaussian_vec(cfg.m * cfg.n, cfg.prng_seed);
    let base_rows = flat.chunks(cfg.n).map(<[f64]>::to_vec).collect();
    NodeEnsemble::from_base_rows(base_rows, nodes, shift_step)
}

/// `y^(j) = Φ^(j) x` for every node.
pub fn acquire_all(ens: &NodeEnsemble, x: &Signal) -> Result<Vec<NodeMeasurements>> {
    (1..=ens.nodes)
        .map(|j| {
            Ok(NodeMeasurements {
                node_id: j,
                shift_step: ens.shift_step,
                y: MaskedMeasurements::all_valid(ens.node_apply(j, x)?)?,
            })
        })
        .collect()
}

/// Node-domain filtering `y_f^(j) = Σ_i h_i y^(j−i)`, valid for `j ∈ [N_f, J]`.
///
/// Needs a first-column (true convolution) filter. First-row filters use
/// [`distributed_filter_forward`].
pub fn distributed_filter(
    measurements: &[NodeMeasurements],
    h: &FilterSpec,
    log: &mut ExchangeLog,
) -> Result<DistributedOutput> {
    if h.convention() != Convention::FirstColumn {
        return Err(CsError::InvalidInput(
            "distributed_filter needs a first-column filter; use distributed_filter_forward".into(),
        ));
    }
    filter_on_nodes(measurements, h, log)
}

/// Forward-indexed variant `y_f^(j) = Σ_i h_i y^(j+i)`, valid for
/// `j ∈ [1, J − N_f + 1]`, for first-row filters.
pub fn distributed_filter_forward(
    measurements: &[NodeMeasurements],
    h: &FilterSpec,
    log: &mut ExchangeLog,
) -> Result<DistributedOutput> {
    if h.convention() != Convention::FirstRow {
        return Err(CsError::InvalidInput(
            "distributed_filter_forward needs a first-row filter".into(),
        ));
    }
    filter_on_nodes(measurements, h, log)
}

fn filter_on_nodes(
    measurements: &[NodeMeasurements],
    h: &FilterSpec,
    log: &mut ExchangeLog,
) -> Result<DistributedOutput> {
    let mut out = distributed_shift_combine(measurements, &filter_terms(h), log)?;
    if h.len() > measurements.len() {
        let msg = format!(
            "filter length {} exceeds node count {}; no node can filter",
            h.len(),
            measurements.len()
        );
        warn!("{msg}");
        out.warning = Some(msg);
    }
    Ok(out)
}

/// Node-domain `Σ_t coeff_t · Φ^(j) x_{→offset_t}` for every node.
pub fn distributed_shift_combine(
    measurements: &[NodeMeasurements],
    terms: &[ShiftTerm],
    log: &mut ExchangeLog,
) -> Result<DistributedOutput> {
    let order: Vec<usize> = (1..=measurements.len()).collect();
    RoundSimulator::new(measurements)?.run(terms, &order, log)
}

/// Synchronous two-round exchange-then-compute simulator.
#[derive(Debug)]
pub struct RoundSimulator<'a> {
    nodes: &'a [NodeMeasurements],
    m: usize,
    step: usize,
}

impl<'a> RoundSimulator<'a> {
    pub fn new(nodes: &'a [NodeMeasurements]) -> Result<Self> {
        let first = nodes
            .first()
            .ok_or_else(|| CsError::InvalidInput("no node measurements".into()))?;
        let m = first.y.len();
        let step = first.shift_step;
        for (idx, nm) in nodes.iter().enumerate() {
            if nm.node_id != idx + 1 {
                return Err(CsError::InvalidInput(format!(
                    "node measurements must be ordered 1..J; position {} holds node {}",
                    idx + 1,
                    nm.node_id
                )));
            }
            if nm.y.len() != m {
                return Err(CsError::dim("node measurement length", m, nm.y.len()));
            }
            if nm.shift_step != step {
                return Err(CsError::InvalidInput("nodes disagree on shift step".into()));
            }
        }
        Ok(RoundSimulator { nodes, m, step })
    }

    /// Source node for each term at node `j`, or `None` when it falls
    /// outside `[1, J]`.
    fn sources(&self, j: usize, node_terms: &[(i64, f64)]) -> Option<Vec<usize>> {
        let nodes = self.nodes.len() as i64;
        node_terms
            .iter()
            .map(|&(delta, _)| {
                let src = j as i64 - delta;
                (1..=nodes).contains(&src).then_some(src as usize)
            })
            .collect()
    }

    /// Runs both rounds, visiting nodes in `order` (a permutation of `1..=J`).
    pub fn run(&self, terms: &[ShiftTerm], order: &[usize], log: &mut ExchangeLog) -> Result<DistributedOutput> {
        let nodes = self.nodes.len();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=nodes).collect::<Vec<_>>() {
            return Err(CsError::InvalidInput("processing order must permute 1..=J".into()));
        }
        if terms.is_empty() {
            return Err(CsError::InvalidInput("no shift terms".into()));
        }
        let step = self.step as i64;
        let node_terms: Vec<(i64, f64)> = terms
            .iter()
            .map(|t| {
                if t.offset % step != 0 {
                    return Err(CsError::InvalidInput(format!(
                        "offset {} is not a multiple of the node shift step {step}",
                        t.offset
                    )));
                }
                Ok((t.offset / step, t.coeff))
            })
            .collect::<Result<_>>()?;

        // round 1: exchange
        let mut inbox: BTreeMap<(usize, usize), &[f64]> = BTreeMap::new();
        let mut round_log = Vec::new();
        for &j in order {
            let Some(sources) = self.sources(j, &node_terms) else {
                continue;
            };
            let remote: BTreeSet<usize> = sources.into_iter().filter(|&s| s != j).collect();
            for src in remote {
                inbox.insert((j, src), self.nodes[src - 1].y.data());
                round_log.push(ExchangeRecord {
                    round: 1,
                    from_node: src,
                    to_node: j,
                    vector_length: self.m,
                });
            }
        }
        round_log.sort_unstable();
        debug!("round 1: {} transfers", round_log.len());
        for r in round_log {
            log.push(r);
        }

        // round 2: compute from own data and round-1 deliveries
        let mut results: Vec<Option<NodeMeasurements>> = vec![None; nodes];
        for &j in order {
            let y = match self.sources(j, &node_terms) {
                Some(sources) => {
                    let mut data = vec![0.0; self.m];
                    let mut mask = ValidityMask::all_valid(self.m);
                    for (&src, &(_, coeff)) in sources.iter().zip(&node_terms) {
                        let vec = if src == j {
                            self.nodes[j - 1].y.data()
                        } else {
                            inbox[&(j, src)]
                        };
                        for (acc, v) in data.iter_mut().zip(vec) {
                            *acc += coeff * v;
                        }
                        mask = mask.and(self.nodes[src - 1].y.mask())?;
                    }
                    MaskedMeasurements::new(data, mask)?
                }
                None => MaskedMeasurements::new(vec![0.0; self.m], ValidityMask::all_invalid(self.m))?,
            };
            results[j - 1] = Some(NodeMeasurements {
                node_id: j,
                shift_step: self.step,
                y,
            });
        }
        let nodes = results.into_iter().map(|r| r.expect("every node visited")).collect();
        Ok(DistributedOutput { nodes, warning: None })
    }
}

/// Vertical stack `[Φ^(1); ...; Φ^(J)]` as a dense `Jm × n` matrix.
pub fn stack_ensemble(ens: &NodeEnsemble) -> Result<DenseMatrix> {
    if ens.n > STACK_MAX_N {
        return Err(CsError::SizeGuard {
            rows: ens.nodes * ens.m,
            cols: ens.n,
        });
    }
    let mut rows = Vec::with_capacity(ens.nodes * ens.m);
    for j in 1..=ens.nodes {
        for i in 1..=ens.m {
            rows.push(ens.node_row(j, i)?);
        }
    }
    DenseMatrix::from_rows(&rows)
}
