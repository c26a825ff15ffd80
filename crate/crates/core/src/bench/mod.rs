//! Benchmark harness: warmup and measured iterations in forked worker
//! processes, average-time and single-shot modes, µs/op statistics.

mod report;
mod size;
pub mod stats;

use std::fmt;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::{Child, Command, Stdio};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::ciphers::CipherSuite;
use crate::crypt::{decrypt_payload, encrypt_payload, CryptError};
use crate::fixtures::{sized_fixture, FixtureSize};
use crate::pdf::{collect_encryption_targets, parse_document, ObjectId, PdfDocument, PdfValue};
use crate::security::{derive_object_key, Credentials, SecurityParams, DEFAULT_PERMISSIONS};

pub use self::report::{emit_report, size_csv, ReportFormat};
pub use self::size::{framing_overhead, size_report, SizeRow};

pub const UNIT: &str = "µs/op";
pub const CONFIDENCE: f64 = 0.999;
pub const DEFAULT_SEED: u64 = 42;

/// Optimizer-opaque sink for values a benchmark computes but never uses.
#[inline(never)]
pub fn blackhole_consume(data: &[u8]) {
    std::hint::black_box(data);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchMode {
    AverageTime,
    SingleShot,
}

impl BenchMode {
    pub const ALL: [BenchMode; 2] = [BenchMode::AverageTime, BenchMode::SingleShot];

    /// JMH-style short label.
    pub fn label(self) -> &'static str {
        match self {
            BenchMode::AverageTime => "avgt",
            BenchMode::SingleShot => "ss",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            BenchMode::AverageTime => "Average Time",
            BenchMode::SingleShot => "Single Shot Time",
        }
    }
}

impl fmt::Display for BenchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BenchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "avgt" | "avg" | "average" => Ok(BenchMode::AverageTime),
            "ss" | "single" | "singleshot" => Ok(BenchMode::SingleShot),
            other => Err(format!("unknown mode '{other}'")),
        }
    }
}

/// Document the workload runs over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BenchInput {
    File(PathBuf),
    Fixture(FixtureSize),
}

impl BenchInput {
    pub fn load(&self) -> Result<PdfDocument, BenchError> {
        match self {
            BenchInput::Fixture(size) => Ok(sized_fixture(*size)),
            BenchInput::File(path) => {
                let bytes = std::fs::read(path).map_err(|e| BenchError::Workload(format!("{}: {e}", path.display())))?;
                parse_document(&bytes).map_err(|e| BenchError::Workload(format!("{}: {e}", path.display())))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub warmup_iterations: u32,
    pub measurement_iterations: u32,
    pub forks: u32,
    pub modes: Vec<BenchMode>,
    pub suites: Vec<CipherSuite>,
    pub input: BenchInput,
    pub verify_tag: bool,
    /// Wall-clock budget of one AverageTime iteration.
    pub iteration_time: Duration,
    pub seed: u64,
    /// Run the forks of one (suite, mode) pair at the same time.
    pub concurrent_forks: bool,
    /// Executable that understands the hidden `bench-fork` subcommand.
    pub worker_exe: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            warmup_iterations: 5,
            measurement_iterations: 10,
            forks: 2,
            modes: BenchMode::ALL.to_vec(),
            suites: CipherSuite::ALL.to_vec(),
            input: BenchInput::Fixture(FixtureSize::Medium),
            verify_tag: false,
            iteration_time: Duration::from_secs(1),
            seed: DEFAULT_SEED,
            concurrent_forks: false,
            worker_exe: None,
        }
    }
}

impl BenchConfig {
    /// `BENCH_SEED` when set and numeric, otherwise `DEFAULT_SEED`.
    pub fn seed_from_env() -> u64 {
        std::env::var("BENCH_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("fork failed: {0}")]
    ForkFailure(String),
    #[error("workload failed: {0}")]
    Workload(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl From<CryptError> for BenchError {
    fn from(e: CryptError) -> Self {
        BenchError::Workload(e.to_string())
    }
}

/// Counters reported by one worker process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForkReport {
    pub pid: u32,
    pub warmup_iterations: u32,
    pub measured_iterations: u32,
    pub warmup_ops: u64,
    pub measured_ops: u64,
    /// Payload bytes processed by every op, identical across ops.
    pub bytes_per_op: u64,
}

#[derive(Clone, Debug)]
pub struct BenchResult {
    pub suite: CipherSuite,
    pub mode: BenchMode,
    /// One value in µs/op per measured iteration, fork by fork.
    pub samples: Vec<f64>,
    pub mean: f64,
    pub error_margin: f64,
    pub unit: &'static str,
    pub forks: Vec<ForkReport>,
}

impl BenchResult {
    pub fn from_samples(suite: CipherSuite, mode: BenchMode, samples: Vec<f64>, forks: Vec<ForkReport>) -> Self {
        Self {
            suite,
            mode,
            mean: stats::mean(&samples),
            error_margin: stats::error_margin(&samples, CONFIDENCE),
            samples,
            unit: UNIT,
            forks,
        }
    }
}

/// Payloads and keys prepared once, outside any timed region.
pub struct Workload {
    suite: CipherSuite,
    file_key: Vec<u8>,
    payloads: Vec<(ObjectId, Vec<u8>)>,
    rng: ChaCha20Rng,
    verify_tag: bool,
}

impl Workload {
    pub fn prepare(doc: &PdfDocument, suite: CipherSuite, seed: u64, verify_tag: bool) -> Result<Self, BenchError> {
        let id0 = doc.file_id().map(|(a, _)| a.to_vec()).unwrap_or_else(|| vec![0; 16]);
        let params = SecurityParams::derive(&Credentials::default(), DEFAULT_PERMISSIONS, &id0, suite.key_bits())
            .map_err(|e| BenchError::Workload(e.to_string()))?;
        let payloads = collect_encryption_targets(doc)
            .into_iter()
            .map(|t| {
                let bytes = match doc.value_at(&t.location) {
                    Some(PdfValue::Stream(s)) => s.data.clone(),
                    Some(v) => v.as_string_bytes().unwrap_or_default().to_vec(),
                    None => Vec::new(),
                };
                (t.owner, bytes)
            })
            .collect();
        Ok(Self {
            suite,
            file_key: params.file_encryption_key,
            payloads,
            rng: ChaCha20Rng::seed_from_u64(seed),
            verify_tag,
        })
    }

    /// A workload with no payloads, for measuring harness overhead.
    pub fn empty(suite: CipherSuite) -> Self {
        Self { suite, file_key: vec![0; 16], payloads: Vec::new(), rng: ChaCha20Rng::seed_from_u64(0), verify_tag: false }
    }

    pub fn payload_count(&self) -> usize {
        self.payloads.len()
    }

    pub fn payload_bytes(&self) -> u64 {
        self.payloads.iter().map(|(_, p)| p.len() as u64).sum()
    }

    /// One op: for every payload derive the object key, encrypt, decrypt
    /// and sink the plaintext. Returns the plaintext bytes processed.
    pub fn run_op(&mut self) -> Result<u64, CryptError> {
        let mut total = 0u64;
        for (owner, pt) in &self.payloads {
            let key: [u8; 16] = derive_object_key(&self.file_key, owner.num, owner.gen, self.suite)
                .try_into()
                .map_err(|_| CryptError::UnsupportedHandler("short object key".into()))?;
            let framed = encrypt_payload(&key, self.suite, &mut self.rng, pt);
            let back = decrypt_payload(&key, self.suite, &framed, self.verify_tag)?;
            total += back.len() as u64;
            blackhole_consume(&back);
        }
        Ok(total)
    }
}

/// What a worker process runs.
#[derive(Clone, Debug, PartialEq)]
pub struct ForkSpec {
    pub suite: CipherSuite,
    pub mode: BenchMode,
    pub warmup_iterations: u32,
    pub measurement_iterations: u32,
    pub iteration_time: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForkOutcome {
    pub samples: Vec<f64>,
    pub report: ForkReport,
}

/// One iteration: returns (ops run, elapsed).
fn iteration(w: &mut Workload, mode: BenchMode, budget: Duration, bytes: &mut Option<u64>) -> Result<(u64, Duration), CryptError> {
    let mut check = |b: u64| {
        match bytes {
            Some(prev) if *prev != b => Err(CryptError::UnsupportedHandler(format!("op processed {b} bytes, expected {prev}"))),
            _ => {
                *bytes = Some(b);
                Ok(())
            }
        }
    };
    let start = Instant::now();
    match mode {
        BenchMode::SingleShot => {
            let b = w.run_op()?;
            let elapsed = start.elapsed();
            check(b)?;
            Ok((1, elapsed))
        }
        BenchMode::AverageTime => {
            let mut ops = 0u64;
            loop {
                let b = w.run_op()?;
                ops += 1;
                check(b)?;
                let elapsed = start.elapsed();
                if elapsed >= budget {
                    return Ok((ops, elapsed));
                }
            }
        }
    }
}

/// Runs warmup then measured iterations in the current process.
pub fn run_fork(workload: &mut Workload, spec: &ForkSpec) -> Result<ForkOutcome, CryptError> {
    let mut bytes = None;
    let mut warmup_ops = 0;
    for _ in 0..spec.warmup_iterations {
        warmup_ops += iteration(workload, spec.mode, spec.iteration_time, &mut bytes)?.0;
    }
    let mut measured_ops = 0;
    let mut samples = Vec::with_capacity(spec.measurement_iterations as usize);
    for _ in 0..spec.measurement_iterations {
        let (ops, elapsed) = iteration(workload, spec.mode, spec.iteration_time, &mut bytes)?;
        measured_ops += ops;
        samples.push(elapsed.as_secs_f64() * 1e6 / ops as f64);
    }
    Ok(ForkOutcome {
        samples,
        report: ForkReport {
            pid: std::process::id(),
            warmup_iterations: spec.warmup_iterations,
            measured_iterations: spec.measurement_iterations,
            warmup_ops,
            measured_ops,
            bytes_per_op: bytes.unwrap_or(0),
        },
    })
}

/// Pipe protocol: `sample,<suite>,<mode>,<µs/op>` per measured iteration,
/// then one `fork,<suite>,<mode>,<pid>,<warmup it>,<measured it>,<warmup
/// ops>,<measured ops>,<bytes/op>` row.
pub fn write_fork_rows<W: Write + ?Sized>(out: &mut W, spec: &ForkSpec, outcome: &ForkOutcome) -> io::Result<()> {
    let (s, m) = (spec.suite.name(), spec.mode.label());
    for x in &outcome.samples {
        writeln!(out, "sample,{s},{m},{x:.6}")?;
    }
    let r = &outcome.report;
    writeln!(
        out,
        "fork,{s},{m},{},{},{},{},{},{}",
        r.pid, r.warmup_iterations, r.measured_iterations, r.warmup_ops, r.measured_ops, r.bytes_per_op
    )?;
    out.flush()
}

pub fn parse_fork_rows(text: &str) -> Result<ForkOutcome, BenchError> {
    let bad = |line: &str| BenchError::ForkFailure(format!("unparsable row '{line}'"));
    let mut samples = Vec::new();
    let mut report = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        match f.first().copied() {
            Some("sample") if f.len() == 4 => samples.push(f[3].parse().map_err(|_| bad(line))?),
            Some("fork") if f.len() == 9 => {
                let n = |i: usize| f[i].parse::<u64>().map_err(|_| bad(line));
                report = Some(ForkReport {
                    pid: n(3)? as u32,
                    warmup_iterations: n(4)? as u32,
                    measured_iterations: n(5)? as u32,
                    warmup_ops: n(6)?,
                    measured_ops: n(7)?,
                    bytes_per_op: n(8)?,
                });
            }
            _ => return Err(bad(line)),
        }
    }
    let report = report.ok_or_else(|| BenchError::ForkFailure("worker sent no fork row".into()))?;
    Ok(ForkOutcome { samples, report })
}

/// Arguments for the hidden worker subcommand.
pub fn fork_args(config: &BenchConfig, suite: CipherSuite, mode: BenchMode) -> Vec<String> {
    let mut args = vec![
        "bench-fork".to_string(),
        "--cipher".into(),
        suite.name().into(),
        "--mode".into(),
        mode.label().into(),
        "--warmup".into(),
        config.warmup_iterations.to_string(),
        "--iters".into(),
        config.measurement_iterations.to_string(),
        "--iteration-ms".into(),
        config.iteration_time.as_millis().to_string(),
        "--seed".into(),
        config.seed.to_string(),
    ];
    match &config.input {
        BenchInput::File(p) => {
            args.push("--in".into());
            args.push(p.display().to_string());
        }
        BenchInput::Fixture(f) => {
            args.push("--fixture".into());
            args.push(f.name().into());
        }
    }
    if config.verify_tag {
        args.push("--verify-tag".into());
    }
    args
}

fn spawn(exe: &PathBuf, args: &[String]) -> Result<Child, BenchError> {
    Command::new(exe)
        .args(args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| BenchError::ForkFailure(format!("{}: {e}", exe.display())))
}

fn collect(child: Child) -> Result<ForkOutcome, BenchError> {
    let out = child.wait_with_output().map_err(|e| BenchError::ForkFailure(e.to_string()))?;
    if !out.status.success() {
        let err = String::from_utf8_lossy(&out.stderr);
        return Err(BenchError::ForkFailure(format!("worker exited with {}: {}", out.status, err.trim())));
    }
    let mut text = String::new();
    for line in BufReader::new(&out.stdout[..]).lines() {
        text.push_str(&line.map_err(|e| BenchError::ForkFailure(e.to_string()))?);
        text.push('\n');
    }
    parse_fork_rows(&text)
}

/// For every suite and mode, runs `forks` worker processes and pools their
/// samples.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<BenchResult>, BenchError> {
    if config.forks == 0 || config.measurement_iterations == 0 {
        return Err(BenchError::Config("forks and measurement iterations must be at least 1".into()));
    }
    if config.suites.is_empty() || config.modes.is_empty() {
        return Err(BenchError::Config("no suites or modes selected".into()));
    }
    // Fail early, in this process, on unreadable input.
    config.input.load()?;
    let exe = match &config.worker_exe {
        Some(p) => p.clone(),
        None => std::env::current_exe().map_err(|e| BenchError::ForkFailure(e.to_string()))?,
    };

    let mut results = Vec::new();
    for &mode in &config.modes {
        for &suite in &config.suites {
            let args = fork_args(config, suite, mode);
            let outcomes = if config.concurrent_forks {
                let children = (0..config.forks).map(|_| spawn(&exe, &args)).collect::<Result<Vec<_>, _>>()?;
                children.into_iter().map(collect).collect::<Result<Vec<_>, _>>()?
            } else {
                (0..config.forks).map(|_| spawn(&exe, &args).and_then(collect)).collect::<Result<Vec<_>, _>>()?
            };
            let mut samples = Vec::new();
            let mut forks = Vec::new();
            for o in outcomes {
                if o.samples.len() != config.measurement_iterations as usize {
                    return Err(BenchError::ForkFailure(format!(
                        "worker sent {} samples, expected {}",
                        o.samples.len(),
                        config.measurement_iterations
                    )));
                }
                samples.extend(o.samples);
                forks.push(o.report);
            }
            results.push(BenchResult::from_samples(suite, mode, samples, forks));
        }
    }
    Ok(results)
}

/// Whether both lightweight suites beat AES in `mode`; `None` if any of
/// the three is missing.
pub fn ordering_verdict(results: &[BenchResult], mode: BenchMode) -> Option<(bool, bool)> {
    let mean = |s| results.iter().find(|r| r.suite == s && r.mode == mode).map(|r| r.mean);
    let aes = mean(CipherSuite::Aes128)?;
    Some((mean(CipherSuite::Ascon128)? <= aes, mean(CipherSuite::Xoodyak)? <= aes))
}
