//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 dimension or validation
//! error, 3 oracle-check failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::apps::{compressive_wavelet_53, interpolate2, register, second_difference, shift_retrieve, LiftingScheme, RegisterMode};
use crate::diagnostics::scenarios::{Scenario, REPORT_HEADER};
use crate::error::CsError;
use crate::filtering::{filter_measurements, FilterWarning, ShiftTerm};
use crate::io::{read_document, write_document, Document, ExchangeDoc, Meta, NodeRecord, Payload};
use crate::multinode::{
    acquire_all, build_ensemble_with_step, distributed_filter, distributed_filter_forward, distributed_shift_combine,
    ExchangeLog, NodeMeasurements,
};
use crate::sensing::{acquire, acquire_decimated, acquire_even_odd, gaussian_signal, generate_seed, SensingConfig};
use crate::types::{Convention, FilterSpec, Signal};

pub const TRIALS_ENV: &str = "CIRCCS_TRIALS";

#[derive(Debug, Parser)]
#[command(name = "circcs", version, about = "Signal processing on circulant compressive measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a Gaussian seed vector.
    GenSeed {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prng_seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        binary: bool,
    },
    /// Generate a Gaussian test signal.
    GenSignal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prng_seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        binary: bool,
    },
    /// Take m partial-circulant measurements of a signal.
    Acquire {
        #[arg(long)]
        seed_file: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Measure the zero-stuffed signal.
        #[arg(long, conflicts_with = "even_odd")]
        decimated: bool,
        /// Measure the even and odd streams separately (odd goes to --out-odd).
        #[arg(long, requires = "out_odd")]
        even_odd: bool,
        #[arg(long)]
        out_odd: Option<PathBuf>,
    },
    /// Filter measurements with an FIR filter.
    Filter {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated taps h1,h2,...
        #[arg(long, allow_hyphen_values = true)]
        taps: String,
        #[arg(long)]
        convention: Convention,
        #[arg(long)]
        out: PathBuf,
    },
    /// Second difference of the underlying signal.
    Diff2 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Linear interpolation by two of the underlying signal.
    Interp2 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the circular shift between two measurement vectors.
    ShiftFind {
        #[arg(long)]
        z: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long)]
        s_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Undo a known shift of the measured signal.
    Register {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long)]
        mode: RegisterMode,
        #[arg(long)]
        out: PathBuf,
    },
    /// 5/3 wavelet coefficients from even/odd stream measurements.
    Wavelet53 {
        #[arg(long)]
        even: PathBuf,
        #[arg(long)]
        odd: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a multi-node filtering simulation from a JSON config.
    SimulateNodes {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check library results against the dense oracle.
    OracleCheck {
        /// Scenario name or "all".
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Oracle(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Oracle(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Oracle(m) => m,
        }
    }
}

impl From<CsError> for Failure {
    fn from(e: CsError) -> Self {
        Failure::Validation(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs the tool with `std` streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "circcs: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::GenSeed { n, prng_seed, out: path, binary } => {
            if n == 0 {
                return Err(Failure::Validation("--n must be positive".into()));
            }
            let cfg = SensingConfig::new(n, n, prng_seed)?;
            let seed = generate_seed(&cfg)?;
            save(&path, &Document::seed(&seed, Some(prng_seed)), binary)
        }
        Command::GenSignal { n, prng_seed, out: path, binary } => {
            let x = gaussian_signal(n, prng_seed)?;
            let mut doc = Document::signal(&x);
            doc.meta.prng_seed = Some(prng_seed);
            save(&path, &doc, binary)
        }
        Command::Acquire { seed_file, m, signal, out: path, decimated, even_odd, out_odd } => {
            let seed_doc = load(&seed_file)?;
            let seed = seed_doc.to_seed()?;
            let x = load(&signal)?.to_signal()?;
            let meta = |acq: &str| Meta {
                prng_seed: seed_doc.meta.prng_seed,
                n: Some(x.len()),
                seed_label: seed.label().map(str::to_owned),
                seed: Some(seed.as_slice().to_vec()),
                acquisition: Some(acq.to_owned()),
                ..Meta::default()
            };
            if even_odd {
                let odd_path = out_odd.ok_or_else(|| Failure::Usage("--even-odd needs --out-odd".into()))?;
                let (y_e, y_o) = acquire_even_odd(&seed, m, &x)?;
                save(&path, &Document::measurements(&y_e, meta("even")), false)?;
                save(&odd_path, &Document::measurements(&y_o, meta("odd")), false)
            } else if decimated {
                let y = acquire_decimated(&seed, m, &x)?;
                save(&path, &Document::measurements(&y, meta("decimated")), false)
            } else {
                let y = acquire(&seed, m, &x)?;
                save(&path, &Document::measurements(&y, meta("plain")), false)
            }
        }
        Command::Filter { input, taps, convention, out: path } => {
            let doc = load(&input)?;
            let y = doc.to_measurements()?;
            let h = FilterSpec::new(parse_taps(&taps)?, convention)?;
            let result = filter_measurements(&y, &h)?;
            let mut meta = doc.meta.clone();
            meta.convention = Some(convention.as_str().to_owned());
            meta.push_operation(format!("filter {} [{taps}]", convention.as_str()));
            if let Some(FilterWarning::NoValidOutput { filter_len, measurements, needed }) = result.warning {
                meta.warning = Some(format!(
                    "filter length {filter_len} leaves no valid entry of {measurements}; {needed} more measurements needed"
                ));
            }
            save(&path, &Document::measurements(&result.measurements, meta), false)
        }
        Command::Diff2 { input, out: path } => {
            let doc = load(&input)?;
            let y = second_difference(&doc.to_measurements()?)?;
            let mut meta = doc.meta.clone();
            meta.push_operation("diff2");
            save(&path, &Document::measurements(&y, meta), false)
        }
        Command::Interp2 { input, out: path } => {
            let doc = load(&input)?;
            let y = interpolate2(&doc.to_measurements()?)?;
            let mut meta = doc.meta.clone();
            meta.push_operation("interp2");
            save(&path, &Document::measurements(&y, meta), false)
        }
        Command::ShiftFind { z, v, s_max, out: path } => {
            let zd = load(&z)?;
            let vd = load(&v)?;
            if let (Some(a), Some(b)) = (&zd.meta.seed, &vd.meta.seed) {
                if a != b {
                    return Err(Failure::Validation("z and v were acquired with different seeds".into()));
                }
            }
            let est = shift_retrieve(&zd.to_measurements()?, &vd.to_measurements()?, s_max)?;
            writeln!(out, "s_hat = {}  residual = {}", est.s_hat, est.residual).map_err(io_failure)?;
            let doc = Document::new(
                Payload::Estimate {
                    s_hat: est.s_hat,
                    residual: est.residual,
                    residuals_by_s: est.residuals_by_s.into_iter().collect(),
                },
                Meta {
                    m: zd.meta.m,
                    seed_label: zd.meta.seed_label.clone(),
                    ..Meta::default()
                },
            );
            save(&path, &doc, false)
        }
        Command::Register { input, s, mode, out: path } => {
            let doc = load(&input)?;
            let v = doc.to_measurements()?;
            let seed = doc.meta_seed()?;
            if mode == RegisterMode::ReseededMatrix && seed.is_none() {
                return Err(Failure::Validation(
                    "reseeded registration needs measurements that record their seed".into(),
                ));
            }
            let reg = register(&v, s, mode, seed.as_ref())?;
            let mut meta = doc.meta.clone();
            meta.push_operation(format!("register {s} {}", mode_name(mode)));
            if let (Some(new_seed), Some(cal)) = (&reg.seed, &reg.calibration) {
                meta.seed = Some(new_seed.as_slice().to_vec());
                meta.seed_label = new_seed.label().map(str::to_owned);
                meta.calibration = Some(format!("{} (row {})", cal.rule.as_str(), cal.row));
            }
            save(&path, &Document::measurements(&reg.measurements, meta), false)
        }
        Command::Wavelet53 { even, odd, out: path } => {
            let ed = load(&even)?;
            let od = load(&odd)?;
            let theta = compressive_wavelet_53(&ed.to_measurements()?, &od.to_measurements()?, &LiftingScheme::spline_53())?;
            let mut meta = ed.meta.clone();
            meta.acquisition = None;
            meta.push_operation("wavelet53");
            save(&path, &Document::measurements(&theta, meta), false)
        }
        Command::SimulateNodes { config, out: path } => {
            let text = std::fs::read_to_string(&config).map_err(|e| io_path_failure(&config, e))?;
            let cfg: NodeConfig =
                serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("bad config: {e}")))?;
            save(&path, &simulate(&cfg)?, false)
        }
        Command::OracleCheck { scenario, trials } => oracle_check(&scenario, trials, out),
    }
}

fn mode_name(mode: RegisterMode) -> &'static str {
    match mode {
        RegisterMode::SameMatrix => "same",
        RegisterMode::ReseededMatrix => "reseed",
    }
}

fn parse_taps(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("cannot parse tap {t:?}")))
        })
        .collect()
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn io_path_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> CliResult<Document> {
    read_document(path)
        .map_err(|e| io_path_failure(path, e))?
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn save(path: &Path, doc: &Document, binary: bool) -> CliResult<()> {
    Ok(write_document(path, doc, binary).map_err(|e| io_path_failure(path, e))??)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeConfig {
    n: usize,
    m: usize,
    nodes: usize,
    prng_seed: u64,
    #[serde(default = "one")]
    shift_step: usize,
    signal: SignalSource,
    #[serde(default)]
    filter: Option<FilterConfig>,
    /// Explicit `[offset, coeff]` terms, an alternative to `filter`.
    #[serde(default)]
    terms: Option<Vec<(i64, f64)>>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SignalSource {
    Data { data: Vec<f64> },
    Random { prng_seed: u64 },
}

#[derive(Debug, Deserialize)]
struct FilterConfig {
    taps: Vec<f64>,
    convention: String,
}

fn node_records(nodes: &[NodeMeasurements]) -> Vec<NodeRecord> {
    nodes
        .iter()
        .map(|nm| NodeRecord {
            node_id: nm.node_id,
            data: nm.y.data().to_vec(),
            valid: nm.y.mask().as_slice().to_vec(),
        })
        .collect()
}

fn simulate(cfg: &NodeConfig) -> CliResult<Document> {
    let sensing = SensingConfig::new(cfg.n, cfg.m, cfg.prng_seed)?;
    let ens = build_ensemble_with_step(&sensing, cfg.nodes, cfg.shift_step)?;
    let x = match &cfg.signal {
        SignalSource::Data { data } => Signal::new(data.clone())?,
        SignalSource::Random { prng_seed } => gaussian_signal(cfg.n, *prng_seed)?,
    };
    let measured = acquire_all(&ens, &x)?;
    let mut log = ExchangeLog::new();
    let mut meta = Meta {
        prng_seed: Some(cfg.prng_seed),
        n: Some(cfg.n),
        m: Some(cfg.m),
        ..Meta::default()
    };
    let filtered = match (&cfg.filter, &cfg.terms) {
        (Some(_), Some(_)) => return Err(Failure::Validation("config sets both filter and terms".into())),
        (Some(f), None) => {
            let conv: Convention = f.convention.parse().map_err(|e: CsError| Failure::Validation(e.to_string()))?;
            let h = FilterSpec::new(f.taps.clone(), conv)?;
            meta.convention = Some(conv.as_str().to_owned());
            Some(match conv {
                Convention::FirstColumn => distributed_filter(&measured, &h, &mut log)?,
                Convention::FirstRow => distributed_filter_forward(&measured, &h, &mut log)?,
            })
        }
        (None, Some(terms)) => {
            let terms: Vec<ShiftTerm> = terms.iter().map(|&(o, c)| ShiftTerm::new(o, c)).collect();
            Some(distributed_shift_combine(&measured, &terms, &mut log)?)
        }
        (None, None) => None,
    };
    if let Some(w) = filtered.as_ref().and_then(|f| f.warning.clone()) {
        meta.warning = Some(w);
    }
    if let Some(f) = &filtered {
        let valid = f.valid_nodes();
        meta.corruption = Some((1..=cfg.nodes).filter(|j| !valid.contains(j)).collect());
    }
    Ok(Document::new(
        Payload::Ensemble {
            nodes: ens.nodes(),
            m: ens.m(),
            n: ens.n(),
            shift_step: ens.shift_step(),
            base_rows: ens.base_rows().to_vec(),
            measurements: node_records(&measured),
            filtered: filtered.map(|f| node_records(&f.nodes)),
            exchanges: log.records().iter().map(ExchangeDoc::from).collect(),
        },
        meta,
    ))
}

fn oracle_check(name: &str, trials: Option<usize>, out: &mut dyn Write) -> CliResult<()> {
    let scenarios: Vec<Scenario> = if name == "all" {
        Scenario::ALL.to_vec()
    } else {
        vec![Scenario::from_name(name).ok_or_else(|| {
            let names: Vec<&str> = Scenario::ALL.iter().map(|s| s.name()).collect();
            Failure::Usage(format!("unknown scenario {name:?}; expected one of {} or all", names.join(", ")))
        })?]
    };
    let env_trials = match std::env::var(TRIALS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("{TRIALS_ENV} must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => None,
    };
    writeln!(out, "{REPORT_HEADER}").map_err(io_failure)?;
    let mut failed = Vec::new();
    for sc in scenarios {
        let t = trials.or(env_trials).unwrap_or_else(|| sc.default_trials());
        if t == 0 {
            return Err(Failure::Usage("trial count must be positive".into()));
        }
        let report = sc.run(t)?;
        writeln!(out, "{report}").map_err(io_failure)?;
        for f in &report.failures {
            writeln!(out, "  failure: {f}").map_err(io_failure)?;
        }
        if !report.passed() {
            failed.push(sc.name());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Oracle(format!("oracle check failed: {}", failed.join(", "))))
    }
}
