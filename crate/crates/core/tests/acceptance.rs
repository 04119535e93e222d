//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always show up in
//! `cargo test` output.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use circcs::apps::{
    compressive_wavelet_53, interpolate2, register, second_difference, shift_retrieve, LiftingScheme, RegisterMode,
    SeedRowRule,
};
use circcs::circulant::{
    apply_with, circulant_from_first_row, distributed_partial_commutator, filter_to_circulant, partial_commutator,
    Kernel,
};
use circcs::diagnostics::{
    dense_filter_signal, dense_node_matrix, dense_partial_circulant, dense_processed_measurements, discover_valid_set,
    inverse_lifting_53, materialize, max_valid_error, min_invalid_deviation, oracle_shift, reference_lifting_53,
    wrapped_node_combination, DIFFER_TOL, MATCH_TOL,
};
use circcs::filtering::{filter_measurements, filter_terms};
use circcs::io::Document;
use circcs::multinode::{acquire_all, build_ensemble, distributed_filter, stack_ensemble, ExchangeLog};
use circcs::sensing::{
    acquire, acquire_decimated, acquire_even_odd, gaussian_signal, gaussian_vec, zero_stuff, SensingConfig,
};
use circcs::{Convention, FilterSpec, Seed, Signal};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: circcs::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..=b).collect()
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let (n, m) = (256, 64);
    let start = Instant::now();
    let (mut worst, mut gap) = (0.0f64, f64::INFINITY);
    for t in 0..100u64 {
        let nf = 2 + (t % 7) as usize;
        let seed = lib(Seed::new(gaussian_vec(n, 50_000 + t)))?;
        let x = lib(gaussian_signal(n, 51_000 + t))?;
        let h = lib(FilterSpec::new(gaussian_vec(nf, 52_000 + t), Convention::FirstRow))?;
        let y = lib(acquire(&seed, m, &x))?;
        let out = lib(filter_measurements(&y, &h))?.measurements;
        let truth = lib(dense_processed_measurements(&seed, m, &x, |s| dense_filter_signal(&h, s)))?;
        let found = lib(discover_valid_set(&out, &truth, MATCH_TOL))?;
        ensure(found == range(1, m - nf + 1), || format!("trial {t}: discovered {found:?}"))?;
        ensure(out.valid_indices() == found, || format!("trial {t}: mask disagrees"))?;
        worst = worst.max(max_valid_error(&out, &truth));
        gap = gap.min(min_invalid_deviation(&out, &truth));
    }
    ensure(worst <= MATCH_TOL, || format!("valid error {worst:e}"))?;
    ensure(gap > DIFFER_TOL, || format!("invalid deviation {gap:e}"))?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("max valid err {worst:.2e}, min invalid dev {gap:.2e}, {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let (mut zero, mut nonzero) = (0.0f64, f64::INFINITY);
    for t in 0..20u64 {
        let n = [16, 32, 48, 64][(t % 4) as usize];
        let m = n / 2 - (t % 3) as usize;
        let nf = 2 + (t % 5) as usize;
        let phi = lib(circulant_from_first_row(lib(Seed::new(gaussian_vec(n, 53_000 + t)))?, m))?;
        let h = lib(FilterSpec::new(gaussian_vec(nf, 54_000 + t), Convention::FirstRow))?;
        let c = lib(partial_commutator(&phi, &lib(filter_to_circulant(&h, n))?))?;
        for i in 0..m {
            let row = c.row_max_abs(i);
            if i + nf <= m {
                zero = zero.max(row);
            } else {
                nonzero = nonzero.min(row);
            }
        }
    }
    ensure(zero <= 1e-12, || format!("leading rows reach {zero:e}"))?;
    ensure(nonzero > 1e-8, || format!("a trailing row is only {nonzero:e}"))?;
    Ok(format!("leading rows ≤ {zero:.2e}, trailing rows ≥ {nonzero:.2e}"))
}

fn criterion_3() -> Outcome {
    let (n, m, nodes) = (64, 16, 8);
    let (mut worst, mut gap) = (0.0f64, f64::INFINITY);
    for t in 0..50u64 {
        let nf = 2 + (t % 3) as usize;
        let ens = lib(build_ensemble(&lib(SensingConfig::new(n, m, 55_000 + t))?, nodes))?;
        let x = lib(gaussian_signal(n, 56_000 + t))?;
        let h = lib(FilterSpec::new(gaussian_vec(nf, 57_000 + t), Convention::FirstColumn))?;
        let ys = lib(acquire_all(&ens, &x))?;
        let out = lib(distributed_filter(&ys, &h, &mut ExchangeLog::new()))?;
        let valid = out.valid_nodes();
        ensure(valid == range(nf, nodes), || format!("trial {t}: valid nodes {valid:?}"))?;
        let xf = lib(dense_filter_signal(&h, x.as_slice()))?;
        let data: Vec<Vec<f64>> = ys.iter().map(|nm| nm.y.data().to_vec()).collect();
        let terms: Vec<(i64, f64)> = filter_terms(&h).iter().map(|s| (s.offset, s.coeff)).collect();
        for j in 1..=nodes {
            let truth = lib(lib(dense_node_matrix(ens.base_rows(), j, 1))?.matvec(&xf))?;
            if j >= nf {
                let node = &out.nodes[j - 1].y;
                ensure(node.mask().all(), || format!("trial {t}: node {j} not fully valid"))?;
                worst = worst.max(max_valid_error(node, &truth));
            } else {
                let wrapped = wrapped_node_combination(&data, &terms, j);
                let dev = wrapped.iter().zip(&truth).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                gap = gap.min(dev);
            }
        }
        let c = lib(distributed_partial_commutator(
            &lib(stack_ensemble(&ens))?,
            &lib(filter_to_circulant(&h, n))?,
            nodes,
            m,
        ))?;
        for j in 1..=nodes {
            let block = (0..m).map(|i| c.row_max_abs((j - 1) * m + i)).fold(0.0, f64::max);
            ensure((block <= 1e-12) == (j >= nf), || format!("trial {t}: block {j} max {block:e}"))?;
        }
    }
    ensure(worst <= MATCH_TOL, || format!("node error {worst:e}"))?;
    ensure(gap > DIFFER_TOL, || format!("wrapped node deviation {gap:e}"))?;
    Ok(format!("node err {worst:.2e}, wrapped dev {gap:.2e}, block pattern ok"))
}

fn criterion_4() -> Outcome {
    let (n, m) = (64, 16);
    let (mut worst, mut gap) = (0.0f64, f64::INFINITY);
    for t in 0..100u64 {
        let seed = lib(Seed::new(gaussian_vec(n, 58_000 + t)))?;
        let x = lib(gaussian_signal(n, 59_000 + t))?;
        let out = lib(second_difference(&lib(acquire(&seed, m, &x))?))?;
        let truth = lib(dense_processed_measurements(&seed, m, &x, |s| {
            let (r, l) = (oracle_shift(s, 1), oracle_shift(s, -1));
            Ok((0..s.len()).map(|k| r[k] - 2.0 * s[k] + l[k]).collect())
        }))?;
        let found = lib(discover_valid_set(&out, &truth, MATCH_TOL))?;
        ensure(found == range(2, m - 1), || format!("trial {t}: discovered {found:?}"))?;
        worst = worst.max(max_valid_error(&out, &truth));
        gap = gap.min(min_invalid_deviation(&out, &truth));
    }
    ensure(worst <= MATCH_TOL, || format!("valid error {worst:e}"))?;
    Ok(format!("valid set {{2..m-1}}, err {worst:.2e}, invalid dev {gap:.2e}"))
}

fn linear_interp(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..2 * n)
        .map(|k| if k % 2 == 0 { x[k / 2] } else { 0.5 * (x[k / 2] + x[(k / 2 + 1) % n]) })
        .collect()
}

fn criterion_5() -> Outcome {
    let (n, big_n, m) = (32, 64, 16);
    let mut worst = 0.0f64;
    for t in 0..100u64 {
        let seed = lib(Seed::new(gaussian_vec(big_n, 60_000 + t)))?;
        let x = lib(gaussian_signal(n, 61_000 + t))?;
        let out = lib(interpolate2(&lib(acquire_decimated(&seed, m, &x))?))?;
        let truth = lib(lib(dense_partial_circulant(&seed, m))?.matvec(&linear_interp(x.as_slice())))?;
        ensure(out.valid_indices() == range(2, m - 1), || format!("trial {t}: mask {:?}", out.valid_indices()))?;
        worst = worst.max(max_valid_error(&out, &truth));
    }
    let seed = lib(Seed::new(gaussian_vec(big_n, 60_999)))?;
    let c = lib(Signal::constant(n, -1.25))?;
    let out = lib(interpolate2(&lib(acquire_decimated(&seed, m, &c))?))?;
    let truth = lib(lib(dense_partial_circulant(&seed, m))?.matvec(&vec![-1.25; big_n]))?;
    let flat = max_valid_error(&out, &truth);
    ensure(worst <= MATCH_TOL, || format!("valid error {worst:e}"))?;
    ensure(flat <= 1e-12, || format!("constant signal error {flat:e}"))?;
    Ok(format!("valid err {worst:.2e}, constant err {flat:.2e}"))
}

fn criterion_6() -> Outcome {
    let (n, m) = (128, 32);
    let start = Instant::now();
    let seed = lib(Seed::new(gaussian_vec(n, 62_000)))?;
    let x = lib(gaussian_signal(n, 62_001))?;
    let z = lib(acquire(&seed, m, &x))?;
    let (mut worst, mut gap) = (0.0f64, f64::INFINITY);
    for s_star in -31i64..=31 {
        let v = lib(acquire(&seed, m, &lib(Signal::new(oracle_shift(x.as_slice(), s_star)))?))?;
        let est = lib(shift_retrieve(&z, &v, 31))?;
        ensure(est.s_hat == s_star, || format!("s*={s_star}: found {}", est.s_hat))?;
        worst = worst.max(est.residual);
        for (&s, &r) in &est.residuals_by_s {
            if s != s_star {
                gap = gap.min(r);
            }
        }
    }
    ensure(worst <= 1e-10, || format!("true-shift residual {worst:e}"))?;
    ensure(gap > 1e-4, || format!("wrong-shift residual {gap:e}"))?;
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("residual {worst:.2e}, wrong-shift min {gap:.2e}, {:?}", start.elapsed()))
}

fn criterion_7() -> Outcome {
    let (n, m) = (64, 16);
    for s in 1..=8i64 {
        let seed = lib(Seed::new(gaussian_vec(n, 63_000 + s as u64)))?;
        let x = lib(gaussian_signal(n, 63_100 + s as u64))?;
        let y = lib(acquire(&seed, m, &x))?;
        let v = lib(acquire(&seed, m, &lib(Signal::new(oracle_shift(x.as_slice(), s)))?))?;
        let same = lib(register(&v, s, RegisterMode::SameMatrix, None))?.measurements;
        let agree = lib(discover_valid_set(&same, y.data(), MATCH_TOL))?;
        ensure(agree.len() == m - s as usize, || format!("s={s}: agrees on {} indices", agree.len()))?;
        ensure(agree == same.valid_indices(), || format!("s={s}: mask {:?}", same.valid_indices()))?;
    }
    let mut worst = 0.0f64;
    for t in 0..50u64 {
        let s = [1i64, -1, 3, -5, 7, 8, -15, 12][(t % 8) as usize];
        let seed = lib(Seed::new(gaussian_vec(n, 64_000 + t)))?;
        let x = lib(gaussian_signal(n, 65_000 + t))?;
        let v = lib(acquire(&seed, m, &lib(Signal::new(oracle_shift(x.as_slice(), s)))?))?;
        let reg = lib(register(&v, s, RegisterMode::ReseededMatrix, Some(&seed)))?;
        let cal = reg.calibration.ok_or("no calibration")?;
        ensure(cal.rule == SeedRowRule::FullRow, || format!("trial {t}: calibrated {:?}", cal.rule))?;
        let phi2 = reg.seed.ok_or("no reseeded seed")?;
        let truth = lib(lib(dense_partial_circulant(&phi2, m))?.matvec(x.as_slice()))?;
        worst = worst.max(max_valid_error(&reg.measurements, &truth));
        ensure(reg.measurements.mask().all(), || format!("trial {t}: reseeded output masked"))?;
    }
    ensure(worst <= MATCH_TOL, || format!("reseeded error {worst:e}"))?;
    Ok(format!("same-matrix agreement m-|s|, reseeded err {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let (n, m) = (64, 16);
    let scheme = LiftingScheme::spline_53();
    let (mut worst, mut round_trip) = (0.0f64, 0.0f64);
    for t in 0..100u64 {
        let seed = lib(Seed::new(gaussian_vec(n, 66_000 + t)))?;
        let x = lib(gaussian_signal(n, 67_000 + t))?;
        let (ye, yo) = lib(acquire_even_odd(&seed, m, &x))?;
        let out = lib(compressive_wavelet_53(&ye, &yo, &scheme))?;
        let theta = lib(reference_lifting_53(&x))?;
        let truth = lib(lib(dense_partial_circulant(&seed, m))?.matvec(theta.as_slice()))?;
        let bad = out.corrupted_indices();
        ensure(bad == vec![1, 2, m - 1, m], || format!("trial {t}: corrupted {bad:?}"))?;
        let found = lib(discover_valid_set(&out, &truth, MATCH_TOL))?;
        ensure(found == range(3, m - 2), || format!("trial {t}: discovered {found:?}"))?;
        worst = worst.max(max_valid_error(&out, &truth));
        let back = lib(inverse_lifting_53(&theta))?;
        for (a, b) in back.as_slice().iter().zip(x.as_slice()) {
            round_trip = round_trip.max((a - b).abs());
        }
    }
    ensure(worst <= MATCH_TOL, || format!("valid error {worst:e}"))?;
    ensure(round_trip <= 1e-12, || format!("lifting round trip {round_trip:e}"))?;
    Ok(format!("valid err {worst:.2e}, lifting round trip {round_trip:.2e}"))
}

fn criterion_9() -> Outcome {
    let mut fast_err = 0.0f64;
    for t in 0..100u64 {
        let n = [64, 128, 256][(t % 3) as usize];
        let m = n / 4;
        let seed = lib(Seed::new(gaussian_vec(n, 68_000 + t)))?;
        let x = lib(gaussian_signal(n, 69_000 + t))?;
        let y = lib(acquire(&seed, m, &x))?;
        let (ye, yo) = lib(acquire_even_odd(&seed, m, &x))?;
        for i in 0..m {
            ensure(ye.data()[i] + yo.data()[i] == y.data()[i], || format!("trial {t}: y_e + y_o != y at {}", i + 1))?;
        }
        let half = lib(gaussian_signal(n / 2, 70_000 + t))?;
        let dec = lib(acquire_decimated(&seed, m, &half))?;
        let stuffed = lib(acquire(&seed, m, &zero_stuff(&half)))?;
        ensure(dec.data() == stuffed.data(), || format!("trial {t}: decimated != zero-stuffed"))?;
        let spec = lib(circulant_from_first_row(seed.clone(), m))?;
        let dense = lib(lib(materialize(&spec))?.matvec(x.as_slice()))?;
        let fast = lib(apply_with(&spec, &x, Kernel::Fft))?;
        for (a, b) in fast.iter().zip(&dense) {
            fast_err = fast_err.max((a - b).abs() / (1.0 + b.abs()));
        }
    }
    ensure(fast_err <= 1e-12, || format!("fft apply error {fast_err:e}"))?;
    Ok(format!("split and decimation exact, fft err {fast_err:.2e}"))
}

fn circcs(args: &[&str]) -> Result<i32, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_circcs"))
        .args(args)
        .env_remove("CIRCCS_TRIALS")
        .output()
        .map_err(|e| e.to_string())?;
    Ok(status.status.code().unwrap_or(-1))
}

fn run_ok(args: &[&str]) -> Result<(), String> {
    let code = circcs(args)?;
    ensure(code == 0, || format!("`circcs {}` exited {code}", args.join(" ")))
}

const PIPELINE_FILES: [&str; 16] = [
    "seed.json", "seed_big.json", "x.json", "x_shift.json", "half.json", "y.json", "v.json", "filt.json", "d2.json",
    "dec.json", "i2.json", "est.json", "reg_same.json", "reg_reseed.json", "theta.json", "nodes.json",
];

fn pipeline(dir: &Path) -> Result<(), String> {
    let p = |name: &str| dir.join(name).to_str().expect("utf-8 temp path").to_owned();
    run_ok(&["gen-seed", "--n", "64", "--prng-seed", "7", "--out", &p("seed.json")])?;
    run_ok(&["gen-seed", "--n", "128", "--prng-seed", "8", "--out", &p("seed_big.json")])?;
    run_ok(&["gen-signal", "--n", "64", "--prng-seed", "9", "--out", &p("x.json")])?;
    run_ok(&["gen-signal", "--n", "64", "--prng-seed", "10", "--out", &p("half.json")])?;
    let x = lib(lib(Document::from_json(&std::fs::read_to_string(p("x.json")).map_err(|e| e.to_string())?))?.to_signal())?;
    let shifted = lib(Signal::new(oracle_shift(x.as_slice(), 3)))?;
    std::fs::write(p("x_shift.json"), lib(Document::signal(&shifted).to_json())?).map_err(|e| e.to_string())?;

    let seed = p("seed.json");
    run_ok(&["acquire", "--seed-file", &seed, "--m", "16", "--signal", &p("x.json"), "--out", &p("y.json")])?;
    run_ok(&["acquire", "--seed-file", &seed, "--m", "16", "--signal", &p("x_shift.json"), "--out", &p("v.json")])?;
    run_ok(&["filter", "--in", &p("y.json"), "--taps", "0.5,-1,0.25", "--convention", "first-row", "--out", &p("filt.json")])?;
    run_ok(&["diff2", "--in", &p("y.json"), "--out", &p("d2.json")])?;
    run_ok(&["acquire", "--seed-file", &p("seed_big.json"), "--m", "16", "--signal", &p("half.json"), "--decimated", "--out", &p("dec.json")])?;
    run_ok(&["interp2", "--in", &p("dec.json"), "--out", &p("i2.json")])?;
    run_ok(&["shift-find", "--z", &p("y.json"), "--v", &p("v.json"), "--s-max", "8", "--out", &p("est.json")])?;
    run_ok(&["register", "--in", &p("v.json"), "--s", "3", "--mode", "same", "--out", &p("reg_same.json")])?;
    run_ok(&["register", "--in", &p("v.json"), "--s", "3", "--mode", "reseed", "--out", &p("reg_reseed.json")])?;
    run_ok(&[
        "acquire", "--seed-file", &seed, "--m", "16", "--signal", &p("x.json"), "--even-odd", "--out", &p("ye.json"),
        "--out-odd", &p("yo.json"),
    ])?;
    run_ok(&["wavelet53", "--even", &p("ye.json"), "--odd", &p("yo.json"), "--out", &p("theta.json")])?;
    let config = r#"{"n": 64, "m": 16, "nodes": 8, "prng_seed": 11, "signal": {"prng_seed": 12},
        "filter": {"taps": [1.0, -2.0, 1.0], "convention": "first-col"}}"#;
    std::fs::write(p("config.json"), config).map_err(|e| e.to_string())?;
    run_ok(&["simulate-nodes", "--config", &p("config.json"), "--out", &p("nodes.json")])?;

    let est = lib(Document::from_json(&std::fs::read_to_string(p("est.json")).map_err(|e| e.to_string())?))?;
    ensure(matches!(est.payload, circcs::io::Payload::Estimate { s_hat: 3, .. }), || "shift-find missed s=3".into())
}

fn criterion_10() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    pipeline(a.path())?;
    pipeline(b.path())?;
    for name in PIPELINE_FILES {
        let fa = std::fs::read(a.path().join(name)).map_err(|e| e.to_string())?;
        let fb = std::fs::read(b.path().join(name)).map_err(|e| e.to_string())?;
        ensure(fa == fb, || format!("{name} differs between runs"))?;
    }
    let scenarios = ["theorem1", "commutator", "theorem2", "diff2", "interp2", "shift", "register", "wavelet53"];
    for sc in scenarios {
        run_ok(&["oracle-check", "--scenario", sc])?;
    }
    Ok(format!("{} pipeline files byte-identical, {} oracle scenarios exit 0", PIPELINE_FILES.len(), scenarios.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("FIR filtering exactness on the valid set", criterion_1),
        ("partial commutator row structure", criterion_2),
        ("distributed filtering across nodes", criterion_3),
        ("second difference", criterion_4),
        ("interpolation by two", criterion_5),
        ("shift retrieval", criterion_6),
        ("registration", criterion_7),
        ("compressive 5/3 wavelet", criterion_8),
        ("sensing identities", criterion_9),
        ("CLI determinism and oracle checks", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} ({why})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
