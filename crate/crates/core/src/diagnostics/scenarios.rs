//! Seeded certification runs comparing every compressed-domain operation
//! with its dense ground truth.

use std::fmt;

use super::*;
use crate::apps::{
    compressive_wavelet_53, interpolate2, register, second_difference, shift_retrieve, LiftingScheme, RegisterMode,
};
use crate::circulant::{
    apply_with, circulant_from_first_row, distributed_partial_commutator, filter_to_circulant, partial_commutator,
    Kernel,
};
use crate::filtering::{filter_measurements, filter_terms};
use crate::multinode::{acquire_all, build_ensemble, distributed_filter, stack_ensemble, ExchangeLog};
use crate::sensing::{
    acquire, acquire_decimated, acquire_even_odd, gaussian_signal, gaussian_vec, zero_stuff, SensingConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Filtering,
    Commutator,
    Distributed,
    Diff2,
    Interp2,
    Shift,
    Register,
    Wavelet53,
    Sensing,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::Filtering,
        Scenario::Commutator,
        Scenario::Distributed,
        Scenario::Diff2,
        Scenario::Interp2,
        Scenario::Shift,
        Scenario::Register,
        Scenario::Wavelet53,
        Scenario::Sensing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Filtering => "theorem1",
            Scenario::Commutator => "commutator",
            Scenario::Distributed => "theorem2",
            Scenario::Diff2 => "diff2",
            Scenario::Interp2 => "interp2",
            Scenario::Shift => "shift",
            Scenario::Register => "register",
            Scenario::Wavelet53 => "wavelet53",
            Scenario::Sensing => "sensing",
        }
    }

    pub fn from_name(name: &str) -> Option<Scenario> {
        Scenario::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn default_trials(self) -> usize {
        match self {
            Scenario::Filtering | Scenario::Diff2 | Scenario::Interp2 | Scenario::Wavelet53 | Scenario::Sensing => 100,
            Scenario::Distributed | Scenario::Register => 50,
            Scenario::Commutator => 20,
            // one trial sweeps every shift in (−m, m)
            Scenario::Shift => 1,
        }
    }

    pub fn run(self, trials: usize) -> Result<Report> {
        let mut report = Report::new(self.name(), trials);
        match self {
            Scenario::Filtering => filtering(trials, &mut report)?,
            Scenario::Commutator => commutator(trials, &mut report)?,
            Scenario::Distributed => distributed(trials, &mut report)?,
            Scenario::Diff2 => diff2(trials, &mut report)?,
            Scenario::Interp2 => interp2(trials, &mut report)?,
            Scenario::Shift => shift(trials, &mut report)?,
            Scenario::Register => registration(trials, &mut report)?,
            Scenario::Wavelet53 => wavelet53(trials, &mut report)?,
            Scenario::Sensing => sensing(trials, &mut report)?,
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub trials: usize,
    /// Largest relative error on entries claimed valid.
    pub max_valid_error: f64,
    /// Smallest absolute deviation on entries claimed invalid (`∞` if none).
    pub min_invalid_deviation: f64,
    pub failures: Vec<String>,
}

impl Report {
    fn new(name: &str, trials: usize) -> Self {
        Report {
            name: name.to_owned(),
            trials,
            max_valid_error: 0.0,
            min_invalid_deviation: f64::INFINITY,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn error(&mut self, e: f64) {
        self.max_valid_error = self.max_valid_error.max(e);
    }

    fn deviation(&mut self, d: f64) {
        self.min_invalid_deviation = self.min_invalid_deviation.min(d);
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records error/deviation for a masked result and checks thresholds.
    fn masked(&mut self, trial: usize, result: &MaskedMeasurements, truth: &[f64], expect_valid: &[usize]) {
        let err = max_valid_error(result, truth);
        let dev = min_invalid_deviation(result, truth);
        self.error(err);
        self.deviation(dev);
        let mask = result.valid_indices();
        self.check(mask == expect_valid, || format!("trial {trial}: mask {mask:?} != {expect_valid:?}"));
        self.check(err <= MATCH_TOL, || format!("trial {trial}: valid error {err:e}"));
        self.check(dev > DIFFER_TOL, || format!("trial {trial}: invalid entry deviates only {dev:e}"));
        let found = discover_valid_set(result, truth, MATCH_TOL).unwrap_or_default();
        self.check(found == expect_valid, || format!("trial {trial}: discovered {found:?}"));
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dev = if self.min_invalid_deviation.is_finite() {
            format!("{:.3e}", self.min_invalid_deviation)
        } else {
            "-".to_owned()
        };
        write!(
            f,
            "{:<12} {:>6} {:>14.3e} {:>14} {:>6}",
            self.name,
            self.trials,
            self.max_valid_error,
            dev,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

pub const REPORT_HEADER: &str = "scenario     trials  max_valid_err  min_inval_dev result";

fn filtering(trials: usize, r: &mut Report) -> Result<()> {
    let (n, m) = (256, 64);
    for t in 0..trials {
        let nf = 2 + t % 7;
        let seed = Seed::new(gaussian_vec(n, 1_000 + t as u64))?;
        let x = gaussian_signal(n, 2_000 + t as u64)?;
        let h = FilterSpec::new(gaussian_vec(nf, 3_000 + t as u64), Convention::FirstRow)?;
        let y = acquire(&seed, m, &x)?;
        let out = filter_measurements(&y, &h)?.measurements;
        let truth = dense_processed_measurements(&seed, m, &x, |s| dense_filter_signal(&h, s))?;
        r.masked(t, &out, &truth, &(1..=m - nf + 1).collect::<Vec<_>>());
    }
    Ok(())
}

fn commutator(trials: usize, r: &mut Report) -> Result<()> {
    for t in 0..trials {
        let n = [16, 32, 64][t % 3];
        let m = n / 2;
        let nf = 2 + t % 4;
        let phi = circulant_from_first_row(Seed::new(gaussian_vec(n, 4_000 + t as u64))?, m)?;
        let h = FilterSpec::new(gaussian_vec(nf, 5_000 + t as u64), Convention::FirstRow)?;
        let c = partial_commutator(&phi, &filter_to_circulant(&h, n)?)?;
        for i in 0..m {
            let row = c.row_max_abs(i);
            if i < m - nf + 1 {
                r.error(row);
                r.check(row <= 1e-12, || format!("trial {t}: row {} max {row:e}", i + 1));
            } else {
                r.deviation(row);
                r.check(row > 1e-8, || format!("trial {t}: row {} only {row:e}", i + 1));
            }
        }
    }
    Ok(())
}

fn distributed(trials: usize, r: &mut Report) -> Result<()> {
    let (n, m, nodes) = (64, 16, 8);
    for t in 0..trials {
        let nf = 2 + t % 3;
        let ens = build_ensemble(&SensingConfig::new(n, m, 6_000 + t as u64)?, nodes)?;
        let x = gaussian_signal(n, 7_000 + t as u64)?;
        let h = FilterSpec::new(gaussian_vec(nf, 8_000 + t as u64), Convention::FirstColumn)?;
        let ys = acquire_all(&ens, &x)?;
        let out = distributed_filter(&ys, &h, &mut ExchangeLog::new())?;
        let valid = out.valid_nodes();
        r.check(valid == (nf..=nodes).collect::<Vec<_>>(), || format!("trial {t}: valid nodes {valid:?}"));
        let xf = dense_filter_signal(&h, x.as_slice())?;
        let node_data: Vec<Vec<f64>> = ys.iter().map(|nm| nm.y.data().to_vec()).collect();
        let terms: Vec<(i64, f64)> = filter_terms(&h).iter().map(|t| (t.offset, t.coeff)).collect();
        for j in 1..=nodes {
            let truth = dense_node_matrix(ens.base_rows(), j, 1)?.matvec(&xf)?;
            if j >= nf {
                let e = max_valid_error(&out.nodes[j - 1].y, &truth);
                r.error(e);
                r.check(e <= MATCH_TOL, || format!("trial {t}: node {j} error {e:e}"));
            } else {
                let wrapped = wrapped_node_combination(&node_data, &terms, j);
                let dev = wrapped.iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                r.deviation(dev);
                r.check(dev > DIFFER_TOL, || format!("trial {t}: wrapped node {j} matches ({dev:e})"));
            }
        }
        let c = distributed_partial_commutator(&stack_ensemble(&ens)?, &filter_to_circulant(&h, n)?, nodes, m)?;
        for j in 1..=nodes {
            let block = (0..m).map(|i| c.row_max_abs((j - 1) * m + i)).fold(0.0, f64::max);
            if j >= nf {
                r.check(block <= 1e-12, || format!("trial {t}: block {j} max {block:e}"));
            } else {
                r.check(block > 1e-8, || format!("trial {t}: block {j} vanishes"));
            }
        }
    }
    Ok(())
}

fn diff2(trials: usize, r: &mut Report) -> Result<()> {
    let (n, m) = (64, 16);
    for t in 0..trials {
        let seed = Seed::new(gaussian_vec(n, 9_000 + t as u64))?;
        let x = gaussian_signal(n, 10_000 + t as u64)?;
        let out = second_difference(&acquire(&seed, m, &x)?)?;
        let truth = dense_processed_measurements(&seed, m, &x, |s| {
            let (rs, ls) = (oracle_shift(s, 1), oracle_shift(s, -1));
            Ok((0..s.len()).map(|k| rs[k] - 2.0 * s[k] + ls[k]).collect())
        })?;
        r.masked(t, &out, &truth, &(2..m).collect::<Vec<_>>());
    }
    Ok(())
}

fn interp_truth(seed: &Seed, m: usize, up: &Signal) -> Result<Vec<f64>> {
    dense_processed_measurements(seed, m, up, |s| {
        let (rs, ls) = (oracle_shift(s, 1), oracle_shift(s, -1));
        Ok((0..s.len()).map(|k| 0.5 * rs[k] + s[k] + 0.5 * ls[k]).collect())
    })
}

fn interp2(trials: usize, r: &mut Report) -> Result<()> {
    let (n, m) = (32, 16);
    for t in 0..trials {
        let seed = Seed::new(gaussian_vec(2 * n, 11_000 + t as u64))?;
        let x = gaussian_signal(n, 12_000 + t as u64)?;
        let out = interpolate2(&acquire_decimated(&seed, m, &x)?)?;
        let truth = interp_truth(&seed, m, &zero_stuff(&x))?;
        r.masked(t, &out, &truth, &(2..m).collect::<Vec<_>>());
    }
    let seed = Seed::new(gaussian_vec(2 * n, 11_999))?;
    let c = Signal::constant(n, 0.75)?;
    let out = interpolate2(&acquire_decimated(&seed, m, &c)?)?;
    let truth = dense_partial_circulant(&seed, m)?.matvec(&vec![0.75; 2 * n])?;
    let e = max_valid_error(&out, &truth);
    r.error(e);
    r.check(e <= MATCH_TOL, || format!("constant signal error {e:e}"));
    Ok(())
}

fn shift(trials: usize, r: &mut Report) -> Result<()> {
    let (n, m) = (128, 32);
    for t in 0..trials {
        let seed = Seed::new(gaussian_vec(n, 13_000 + t as u64))?;
        let x = gaussian_signal(n, 14_000 + t as u64)?;
        let z = acquire(&seed, m, &x)?;
        for s_star in -(m as i64 - 1)..m as i64 {
            let v = acquire(&seed, m, &Signal::new(oracle_shift(x.as_slice(), s_star))?)?;
            let est = shift_retrieve(&z, &v, m - 1)?;
            r.error(est.residual);
            r.check(est.s_hat == s_star, || format!("trial {t}: s*={s_star} found {}", est.s_hat));
            r.check(est.residual <= 1e-10, || format!("trial {t}: s*={s_star} residual {:e}", est.residual));
            let wrong = est
                .residuals_by_s
                .iter()
                .filter(|(&s, _)| s != s_star)
                .map(|(_, &v)| v)
                .fold(f64::INFINITY, f64::min);
            r.deviation(wrong);
            r.check(wrong > 1e-4, || format!("trial {t}: s*={s_star} wrong-shift residual {wrong:e}"));
        }
    }
    Ok(())
}

fn registration(trials: usize, r: &mut Report) -> Result<()> {
    let (n, m) = (64, 16);
    for t in 0..trials {
        let seed = Seed::new(gaussian_vec(n, 15_000 + t as u64))?;
        let x = gaussian_signal(n, 16_000 + t as u64)?;
        let y = acquire(&seed, m, &x)?;
        let s = 1 + (t % 8) as i64;
        let s = if t % 16 >= 8 { -s } else { s };
        let v = acquire(&seed, m, &Signal::new(oracle_shift(x.as_slice(), s))?)?;

        let same = register(&v, s, RegisterMode::SameMatrix, None)?.measurements;
        let agree = discover_valid_set(&same, y.data(), MATCH_TOL)?;
        r.check(agree.len() == m - s.unsigned_abs() as usize, || {
            format!("trial {t}: s={s} agrees on {} indices", agree.len())
        });
        r.check(agree == same.valid_indices(), || format!("trial {t}: mask disagrees with oracle"));
        r.error(max_valid_error(&same, y.data()));

        let reseeded = register(&v, s, RegisterMode::ReseededMatrix, Some(&seed))?;
        let new_seed = reseeded.seed.expect("reseeded mode returns a seed");
        let truth = dense_partial_circulant(&new_seed, m)?.matvec(x.as_slice())?;
        let e = max_valid_error(&reseeded.measurements, &truth);
        r.error(e);
        r.check(e <= MATCH_TOL && reseeded.measurements.mask().all(), || {
            format!("trial {t}: reseeded error {e:e}")
        });
    }
    Ok(())
}

fn wavelet53(trials: usize, r: &mut Report) -> Result<()> {
    let (n, m) = (64, 16);
    let scheme = LiftingScheme::spline_53();
    for t in 0..trials {
        let seed = Seed::new(gaussian_vec(n, 17_000 + t as u64))?;
        let x = gaussian_signal(n, 18_000 + t as u64)?;
        let (ye, yo) = acquire_even_odd(&seed, m, &x)?;
        let out = compressive_wavelet_53(&ye, &yo, &scheme)?;
        let theta = reference_lifting_53(&x)?;
        let truth = dense_partial_circulant(&seed, m)?.matvec(theta.as_slice())?;
        r.masked(t, &out, &truth, &(3..=m - 2).collect::<Vec<_>>());

        let back = inverse_lifting_53(&theta)?;
        let rt = back.as_slice().iter().zip(x.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        r.check(rt <= 1e-12, || format!("trial {t}: lifting round trip {rt:e}"));
    }
    Ok(())
}

fn sensing(trials: usize, r: &mut Report) -> Result<()> {
    for t in 0..trials {
        let (n, m) = (64, 16);
        let seed = Seed::new(gaussian_vec(n, 19_000 + t as u64))?;
        let x = gaussian_signal(n, 20_000 + t as u64)?;
        let y = acquire(&seed, m, &x)?;
        let (ye, yo) = acquire_even_odd(&seed, m, &x)?;
        let split = (0..m).map(|i| (ye.data()[i] + yo.data()[i] - y.data()[i]).abs()).fold(0.0, f64::max);
        r.check(split == 0.0, || format!("trial {t}: even+odd differs by {split:e}"));

        let half = gaussian_signal(n / 2, 21_000 + t as u64)?;
        let dec = acquire_decimated(&seed, m, &half)?;
        let stuffed = acquire(&seed, m, &zero_stuff(&half))?;
        r.check(dec.data() == stuffed.data(), || format!("trial {t}: decimated != zero-stuffed"));

        let spec = circulant_from_first_row(seed.clone(), m)?;
        let dense = materialize(&spec)?.matvec(x.as_slice())?;
        for kernel in [Kernel::Direct, Kernel::Fft] {
            let fast = apply_with(&spec, &x, kernel)?;
            let e = fast.iter().zip(&dense).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())).fold(0.0, f64::max);
            r.error(e);
            r.check(e <= 1e-12, || format!("trial {t}: {kernel:?} apply error {e:e}"));
        }
    }
    Ok(())
}
