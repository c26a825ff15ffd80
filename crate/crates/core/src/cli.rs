//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 crypto or authentication
//! failure, 3 I/O or parse failure. Failures print one line on stderr
//! starting with `error: CODE:`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use crate::bench::{
    self, emit_report, ordering_verdict, run_fork, size_csv, size_report, write_fork_rows, BenchConfig, BenchError, BenchInput,
    BenchMode, ForkSpec, ReportFormat, Workload,
};
use crate::ciphers::{aes128_self_test, run_kat_file, CipherError, CipherSuite};
use crate::crypt::{decrypt_document, encrypt_document, read_security_params, CryptError};
use crate::fixtures::FixtureSize;
use crate::pdf::{collect_encryption_targets, parse_document, serialize_document, PdfDocument, PdfError, PdfValue, TargetKind};
use crate::security::{Credentials, DEFAULT_PERMISSIONS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CRYPTO: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Random AES round trips run by `kat --cipher aes128`.
const AES_ROUND_TRIPS: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "pdf-lwc", version, about = "PDF standard security handler with lightweight AEAD crypt filters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Encrypt a PDF file.
    Encrypt(EncryptArgs),
    /// Decrypt a PDF file.
    Decrypt(DecryptArgs),
    /// Print the security summary of a PDF file.
    Inspect(InspectArgs),
    /// Benchmark the three crypt filters.
    Bench(BenchArgs),
    /// Check a cipher against known-answer vectors.
    Kat(KatArgs),
    #[command(name = "bench-fork", hide = true)]
    BenchFork(ForkArgs),
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "aes128", value_parser = parse_suite)]
    pub cipher: CipherSuite,
    #[arg(long, default_value = "")]
    pub user_pw: String,
    #[arg(long, default_value = "")]
    pub owner_pw: String,
    #[arg(long, default_value_t = DEFAULT_PERMISSIONS, allow_hyphen_values = true)]
    pub permissions: i32,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "")]
    pub password: String,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub verify_tag: bool,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Print `key=value` lines only.
    #[arg(long)]
    pub kv: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Avg,
    Single,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportArg {
    Csv,
    Md,
    Plot,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Document to benchmark; a built-in fixture when absent.
    #[arg(long = "in", conflicts_with = "fixture")]
    pub input: Option<PathBuf>,
    #[arg(long, value_parser = parse_fixture)]
    pub fixture: Option<FixtureSize>,
    /// Report file; stdout when absent (csv and md only).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 5)]
    pub warmup: u32,
    #[arg(long, default_value_t = 10)]
    pub iters: u32,
    #[arg(long, default_value_t = 2)]
    pub forks: u32,
    #[arg(long, value_delimiter = ',', value_parser = parse_suite, default_value = "aes128,ascon128,xoodyak")]
    pub ciphers: Vec<CipherSuite>,
    #[arg(long, value_enum, default_value = "md")]
    pub report: ReportArg,
    /// Directory for report files when --out is absent.
    #[arg(long)]
    pub report_path: Option<PathBuf>,
    /// Wall-clock budget of one average-time iteration.
    #[arg(long, default_value_t = 1000)]
    pub iteration_ms: u64,
    /// Overrides BENCH_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = false, action = ArgAction::Set)]
    pub verify_tag: bool,
    #[arg(long)]
    pub concurrent_forks: bool,
    /// Print the encrypted-size table instead of timing.
    #[arg(long)]
    pub sizes: bool,
}

#[derive(Debug, Args)]
pub struct KatArgs {
    #[arg(long, value_parser = parse_suite)]
    pub cipher: CipherSuite,
    /// NIST LWC AEAD KAT file; required for the AEAD suites.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ForkArgs {
    #[arg(long, value_parser = parse_suite)]
    pub cipher: CipherSuite,
    #[arg(long, value_parser = parse_mode)]
    pub mode: BenchMode,
    #[arg(long)]
    pub warmup: u32,
    #[arg(long)]
    pub iters: u32,
    #[arg(long)]
    pub iteration_ms: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long = "in", conflicts_with = "fixture")]
    pub input: Option<PathBuf>,
    #[arg(long, value_parser = parse_fixture)]
    pub fixture: Option<FixtureSize>,
    #[arg(long)]
    pub verify_tag: bool,
}

fn parse_suite(s: &str) -> Result<CipherSuite, String> {
    s.parse()
}

fn parse_fixture(s: &str) -> Result<FixtureSize, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<BenchMode, String> {
    s.parse()
}

/// A failure with its exit code and stable one-word tag.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub tag: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: i32, tag: &'static str, message: impl Into<String>) -> Self {
        Self { code, tag, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, "USAGE", message)
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(EXIT_IO, "IO", format!("{}: {e}", path.display()))
    }
}

impl From<PdfError> for CliError {
    fn from(e: PdfError) -> Self {
        Self::new(EXIT_IO, "PARSE", e.to_string())
    }
}

impl From<CryptError> for CliError {
    fn from(e: CryptError) -> Self {
        match e {
            CryptError::WrongPassword => Self::new(EXIT_CRYPTO, "AUTH", e.to_string()),
            CryptError::TagMismatch => Self::new(EXIT_CRYPTO, "TAG", e.to_string()),
            _ => Self::new(EXIT_CRYPTO, "CRYPTO", e.to_string()),
        }
    }
}

impl From<CipherError> for CliError {
    fn from(e: CipherError) -> Self {
        match e {
            CipherError::MalformedKatFile(_) => Self::new(EXIT_IO, "PARSE", e.to_string()),
            _ => Self::new(EXIT_CRYPTO, "CRYPTO", e.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Config(_) => Self::usage(e.to_string()),
            BenchError::ForkFailure(_) => Self::new(EXIT_IO, "FORK", e.to_string()),
            BenchError::Workload(_) => Self::new(EXIT_IO, "WORKLOAD", e.to_string()),
        }
    }
}

fn read_pdf(path: &Path) -> Result<PdfDocument, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_document(&bytes)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "error: USAGE: {first}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.tag, e.message);
            e.code
        }
    }
}

fn dispatch(cmd: CliCommand, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        CliCommand::Encrypt(a) => encrypt(&a),
        CliCommand::Decrypt(a) => decrypt(&a),
        CliCommand::Inspect(a) => {
            let doc = read_pdf(&a.input)?;
            let text = if a.kv { inspect_kv(&doc) } else { inspect(&doc) };
            out.write_all(text.as_bytes()).map_err(|e| CliError::new(EXIT_IO, "IO", e.to_string()))
        }
        CliCommand::Bench(a) => run_bench(&a, out, err),
        CliCommand::Kat(a) => kat(&a, out),
        CliCommand::BenchFork(a) => bench_fork(&a, out),
    }
}

fn encrypt(a: &EncryptArgs) -> Result<(), CliError> {
    let doc = read_pdf(&a.input)?;
    let creds = Credentials::new(a.owner_pw.as_bytes(), a.user_pw.as_bytes());
    let enc = encrypt_document(&doc, &creds, a.permissions, a.cipher, a.seed)?;
    write_file(&a.out, &serialize_document(&enc))
}

fn decrypt(a: &DecryptArgs) -> Result<(), CliError> {
    let doc = read_pdf(&a.input)?;
    let dec = decrypt_document(&doc, a.password.as_bytes(), a.verify_tag)?;
    write_file(&a.out, &serialize_document(&dec))
}

/// Ordered `(key, value)` pairs describing the security state of `doc`.
pub fn inspect_fields(doc: &PdfDocument) -> Vec<(&'static str, String)> {
    let mut f: Vec<(&'static str, String)> = Vec::new();
    f.push(("version", doc.version.clone()));
    f.push(("objects", doc.objects.len().to_string()));
    f.push(("encrypted", doc.is_encrypted().to_string()));
    match doc.file_id() {
        Some((a, b)) => {
            f.push(("id0", hex::encode(a)));
            f.push(("id1", hex::encode(b)));
        }
        None => f.push(("id", "none".into())),
    }
    let mut strings = 0;
    let mut streams = 0;
    if let Some(d) = doc.encrypt_dict() {
        let get = |k: &[u8]| d.get(k).and_then(|v| doc.resolve(v));
        let name = |k: &[u8]| get(k).and_then(PdfValue::as_name).map(|n| String::from_utf8_lossy(n).into_owned());
        let int = |k: &[u8]| get(k).and_then(PdfValue::as_i64);
        f.push(("filter", name(b"Filter").unwrap_or_else(|| "-".into())));
        for (key, raw) in [("v", &b"V"[..]), ("r", b"R"), ("length", b"Length")] {
            f.push((key, int(raw).map_or_else(|| "-".into(), |v| v.to_string())));
        }
        let stmf = name(b"StmF");
        let cfm = stmf.as_deref().and_then(|n| {
            get(b"CF")
                .and_then(PdfValue::as_dict)
                .and_then(|cf| cf.get(n.as_bytes()))
                .and_then(|v| doc.resolve(v))
                .and_then(PdfValue::as_dict)
                .and_then(|d| d.get(b"CFM"))
                .and_then(PdfValue::as_name)
                .map(|n| String::from_utf8_lossy(n).into_owned())
        });
        f.push(("cfm", cfm.unwrap_or_else(|| "-".into())));
        f.push(("stmf", stmf.unwrap_or_else(|| "-".into())));
        f.push(("strf", name(b"StrF").unwrap_or_else(|| "-".into())));
        if let Some(p) = int(b"P") {
            let bits = p as u32;
            f.push(("p", (bits as i32).to_string()));
            f.push(("p_hex", format!("0x{bits:08X}")));
        }
        for (key, raw) in [("o", &b"O"[..]), ("u", b"U")] {
            f.push((key, get(raw).and_then(PdfValue::as_string_bytes).map_or_else(|| "-".into(), hex::encode)));
        }
        let meta = !matches!(get(b"EncryptMetadata"), Some(PdfValue::Boolean(false)));
        f.push(("encrypt_metadata", meta.to_string()));

        if let Ok((_, sel)) = read_security_params(doc) {
            for t in collect_encryption_targets(doc) {
                let skip_meta = !meta
                    && matches!(doc.value_at(&t.location), Some(PdfValue::Stream(s)) if s.dict.has_name(b"Type", b"Metadata"));
                match t.kind {
                    TargetKind::String if sel.strings.is_some() => strings += 1,
                    TargetKind::Stream if sel.streams.is_some() && !skip_meta => streams += 1,
                    _ => {}
                }
            }
        }
    }
    f.push(("encrypted_strings", strings.to_string()));
    f.push(("encrypted_streams", streams.to_string()));
    f
}

pub fn inspect_kv(doc: &PdfDocument) -> String {
    inspect_fields(doc).into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

/// Human-readable form of [`inspect_fields`].
pub fn inspect(doc: &PdfDocument) -> String {
    inspect_fields(doc).into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

fn kat(a: &KatArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let report = match (&a.file, a.cipher.is_aead()) {
        (Some(path), true) => {
            let text = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
            run_kat_file(a.cipher, &text)?
        }
        (None, false) => aes128_self_test(AES_ROUND_TRIPS, bench::DEFAULT_SEED),
        (None, true) => return Err(CliError::usage("--file is required for AEAD suites")),
        (Some(_), false) => return Err(CliError::usage("aes128 runs the built-in FIPS-197 check and takes no --file")),
    };
    let _ = writeln!(out, "suite={} total={} passed={}", a.cipher.name(), report.total, report.passed);
    match report.first_failure {
        None if report.all_passed() => Ok(()),
        None => Err(CliError::new(EXIT_CRYPTO, "KAT", "no records")),
        Some(c) => Err(CliError::new(EXIT_CRYPTO, "KAT", format!("first failure at Count = {c}"))),
    }
}

fn bench_input(input: &Option<PathBuf>, fixture: Option<FixtureSize>) -> BenchInput {
    match (input, fixture) {
        (Some(p), _) => BenchInput::File(p.clone()),
        (None, f) => BenchInput::Fixture(f.unwrap_or(FixtureSize::Medium)),
    }
}

fn bench_fork(a: &ForkArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = bench_input(&a.input, a.fixture).load()?;
    let mut workload = Workload::prepare(&doc, a.cipher, a.seed, a.verify_tag)?;
    let spec = ForkSpec {
        suite: a.cipher,
        mode: a.mode,
        warmup_iterations: a.warmup,
        measurement_iterations: a.iters,
        iteration_time: Duration::from_millis(a.iteration_ms),
    };
    let outcome = run_fork(&mut workload, &spec)?;
    write_fork_rows(out, &spec, &outcome).map_err(|e| CliError::new(EXIT_IO, "IO", e.to_string()))
}

fn run_bench(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let input = bench_input(&a.input, a.fixture);
    let seed = a.seed.unwrap_or_else(BenchConfig::seed_from_env);
    if a.sizes {
        let doc = input.load()?;
        let rows = size_report(&doc, &a.ciphers, seed)?;
        return emit(a, out, size_csv(&rows).as_bytes(), "sizes.csv");
    }
    let (format, name) = match a.report {
        ReportArg::Csv => (ReportFormat::Csv, "bench.csv"),
        ReportArg::Md => (ReportFormat::Markdown, "bench.md"),
        ReportArg::Plot => (ReportFormat::Svg, "bench.svg"),
    };
    if format == ReportFormat::Svg && a.out.is_none() && a.report_path.is_none() {
        return Err(CliError::usage("--report plot needs --out or --report-path"));
    }
    let modes = match a.mode {
        ModeArg::Avg => vec![BenchMode::AverageTime],
        ModeArg::Single => vec![BenchMode::SingleShot],
        ModeArg::Both => BenchMode::ALL.to_vec(),
    };
    let config = BenchConfig {
        warmup_iterations: a.warmup,
        measurement_iterations: a.iters,
        forks: a.forks,
        modes: modes.clone(),
        suites: a.ciphers.clone(),
        input,
        verify_tag: a.verify_tag,
        iteration_time: Duration::from_millis(a.iteration_ms),
        seed,
        concurrent_forks: a.concurrent_forks,
        worker_exe: None,
    };
    let results = bench::run_benchmark(&config)?;
    for mode in modes {
        match ordering_verdict(&results, mode) {
            Some((ascon, xoodyak)) => {
                let _ = writeln!(err, "verdict {}: ascon128<=aes128 {ascon} xoodyak<=aes128 {xoodyak}", mode.label());
            }
            None => {
                let _ = writeln!(err, "verdict {}: incomplete", mode.label());
            }
        }
    }
    emit(a, out, emit_report(&results, format).as_bytes(), name)
}

fn emit(a: &BenchArgs, out: &mut dyn Write, bytes: &[u8], default_name: &str) -> Result<(), CliError> {
    let path = match (&a.out, &a.report_path) {
        (Some(p), _) => p.clone(),
        (None, Some(dir)) => dir.join(default_name),
        (None, None) => return out.write_all(bytes).map_err(|e| CliError::new(EXIT_IO, "IO", e.to_string())),
    };
    write_file(&path, bytes)
}
