//! The `gue` command line tool.
//!
//! Exit codes: 0 on success, 1 on a parameter or I/O error, 2 when a budget
//! or a numerical tolerance is exhausted, 3 when `verify` ran to completion
//! and at least one criterion failed.
//!
//! CSV layouts (header row always present):
//!
//! | command             | columns                                  |
//! |---------------------|------------------------------------------|
//! | `sample`            | `worker,index,k,x`                       |
//! | `sample-joint`      | `index,attempts,x1,...,xn`               |
//! | `bench`             | `mode,n,accepted,mean_proposals,...`     |
//! | `tabulate-envelope` | `x,h_n,phi_sq`                           |
//! | `tabulate-squeeze`  | `x,lower,phi_sq,upper`                   |
//! | `oracle`            | `index,x1,...,xn`                        |

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::joint::{JointSampler, DEFAULT_MAX_ATTEMPTS};
use crate::oracle::{eigenvalues_small, sample_gue_matrix, Convention, MAX_ORACLE_N};
use crate::rng::{parse_seed, RandomStream};
use crate::samplers::{benchmark, GueEigenvalueSampler, Mode, PhiSquaredSampler, SamplerStats};
use crate::tabulate;
use crate::verify::{self, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "gue", version, about = "Exact sampling of GUE eigenvalues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Uniformly chosen eigenvalues of GUE(n), or draws from phi_k^2 with --k.
    Sample(SampleArgs),
    /// Full ordered spectra from the joint rejection sampler.
    SampleJoint(JointArgs),
    /// Proposals, exact evaluations and time per variate across degrees.
    Bench(BenchArgs),
    /// Run acceptance criteria and print a JSON report.
    Verify(VerifyArgs),
    /// CSV of the envelope h_n next to phi_n^2.
    TabulateEnvelope(TabulateArgs),
    /// CSV of the squeeze bounds around phi_n^2 on [-x1, x1].
    TabulateSqueeze(SqueezeArgs),
    /// Spectra of explicitly built GUE matrices, for external comparison.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Plain,
    Squeeze,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Squeeze => Mode::Squeeze,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Unscaled,
    Intro,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Convention {
        match c {
            ConventionArg::Unscaled => Convention::Unscaled,
            ConventionArg::Intro => Convention::Intro,
        }
    }
}

fn seed_arg(text: &str) -> Result<u64, String> {
    parse_seed(text).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Matrix dimension.
    #[arg(long)]
    n: Option<u64>,
    /// Sample phi_k^2 directly instead of a random index below n.
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    count: u64,
    #[arg(long, value_enum, default_value = "squeeze")]
    mode: ModeArg,
    #[arg(long, value_parser = seed_arg)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads, each on its own derived stream. Only one worker
    /// reproduces the library's single-stream output.
    #[arg(long, default_value_t = 1)]
    workers: u64,
    #[arg(long, value_enum, default_value = "unscaled")]
    convention: ConventionArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct JointArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long)]
    count: u64,
    #[arg(long, value_parser = seed_arg)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "squeeze")]
    mode: ModeArg,
    /// Comma-separated degrees, e.g. 100,1000,10000.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<u64>,
    /// Accepted variates per degree.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, value_parser = seed_arg)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// `all`, or criterion ids such as `3` or `1,5,11`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// A tenth of the sample counts, same thresholds.
    #[arg(long)]
    quick: bool,
    #[arg(long, value_parser = seed_arg, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct TabulateArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 2001)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SqueezeArgs {
    #[command(flatten)]
    table: TabulateArgs,
    /// Also emit f_n and h_n.
    #[arg(long)]
    all_columns: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    count: u64,
    #[arg(long, value_parser = seed_arg)]
    seed: u64,
    #[arg(long, value_enum, default_value = "unscaled")]
    convention: ConventionArg,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Lib(e) => e.exit_code(),
            Failure::Io(_) | Failure::Json(_) => 1,
        }
    }
}

type CliResult = Result<i32, Failure>;
type WorkerOutput = Result<(Vec<(u64, f64)>, SamplerStats), Error>;

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Sample(a) => sample(a),
        Command::SampleJoint(a) => sample_joint(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => run_verify(a),
        Command::TabulateEnvelope(a) => tabulate_envelope(a),
        Command::TabulateSqueeze(a) => tabulate_squeeze(a),
        Command::Oracle(a) => oracle(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn reject(msg: impl Into<String>) -> Failure {
    Failure::Lib(Error::Parameter(msg.into()))
}

#[derive(Serialize)]
struct SampleReport<'a> {
    n: Option<u64>,
    k: Option<u64>,
    mode: Mode,
    seed: u64,
    workers: u64,
    convention: Convention,
    indices: Vec<u64>,
    values: Vec<f64>,
    stats: &'a SamplerStats,
}

fn sample(a: SampleArgs) -> CliResult {
    let mode = Mode::from(a.mode);
    let convention = Convention::from(a.convention);
    if a.count == 0 {
        return Err(reject("--count must be at least 1"));
    }
    if a.workers == 0 || a.workers > 1024 {
        return Err(reject("--workers must be between 1 and 1024"));
    }
    let scale = match (a.n, a.k) {
        (None, None) => return Err(reject("give --n, --k, or both")),
        (Some(0), _) => return Err(reject("--n must be at least 1")),
        (Some(n), Some(k)) if k >= n => return Err(reject(format!("--k {k} must be below --n {n}"))),
        (None, Some(_)) if convention == Convention::Intro => {
            return Err(reject("--convention intro rescales by sqrt(n) and needs --n"))
        }
        (Some(n), _) => convention.scale(n as usize),
        (None, Some(_)) => 1.0,
    };
    // validate before any sampling starts
    let gue = match a.n {
        Some(n) => Some(GueEigenvalueSampler::new(n, mode)?),
        None => None,
    };
    let fixed = match (a.k, &gue) {
        (Some(k), Some(g)) => Some(g.component(k)?),
        (Some(k), None) => Some(PhiSquaredSampler::new(k, mode)?),
        _ => None,
    };
    let draw = |stream: &mut RandomStream, stats: &mut SamplerStats| -> Result<(u64, f64), Error> {
        match (&fixed, &gue) {
            (Some(s), _) => Ok((s.k(), s.sample(stream, stats)?)),
            (None, Some(g)) => g.sample_with_index(stream, stats),
            (None, None) => unreachable!("arguments were validated"),
        }
    };
    let run_worker = |w: u64, count: u64| -> WorkerOutput {
        let mut stream = if a.workers == 1 { RandomStream::new(a.seed) } else { RandomStream::new(a.seed).derive(w) };
        let mut stats = SamplerStats::default();
        let out = (0..count).map(|_| draw(&mut stream, &mut stats)).collect::<Result<Vec<_>, _>>()?;
        Ok((out, stats))
    };
    let share = |w: u64| a.count / a.workers + u64::from(w < a.count % a.workers);
    let results: Vec<WorkerOutput> = if a.workers == 1 {
        vec![run_worker(0, a.count)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..a.workers).map(|w| scope.spawn(move || run_worker(w, share(w)))).collect();
            handles.into_iter().map(|h| h.join().expect("sampling worker panicked")).collect()
        })
    };
    let mut stats = SamplerStats::default();
    let mut rows = Vec::with_capacity(a.count as usize);
    for (w, r) in results.into_iter().enumerate() {
        let (out, s) = r?;
        stats += s;
        rows.extend(out.into_iter().enumerate().map(|(i, (k, x))| (w, i, k, x * scale)));
    }
    let mut out = a.output.open()?;
    match a.format {
        Format::Csv => {
            writeln!(out, "worker,index,k,x")?;
            for (w, i, k, x) in &rows {
                writeln!(out, "{w},{i},{k},{x}")?;
            }
        }
        Format::Json => {
            let report = SampleReport {
                n: a.n,
                k: a.k,
                mode,
                seed: a.seed,
                workers: a.workers,
                convention,
                indices: rows.iter().map(|r| r.2).collect(),
                values: rows.iter().map(|r| r.3).collect(),
                stats: &stats,
            };
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    eprintln!(
        "{} variates, {:.4} proposals per variate, {:.4} of proposals needed the recurrence",
        stats.accepted,
        stats.proposals_per_accept(),
        stats.exact_eval_share()
    );
    Ok(0)
}

fn sample_joint(a: JointArgs) -> CliResult {
    if a.count == 0 {
        return Err(reject("--count must be at least 1"));
    }
    let sampler = JointSampler::with_beta(a.n, a.beta)?.max_attempts(a.max_attempts);
    let mut stream = RandomStream::new(a.seed);
    let mut samples = Vec::with_capacity(a.count as usize);
    for i in 0..a.count {
        let mut progress = |attempts: u64| eprintln!("sample {i}: {attempts} attempts so far");
        samples.push(sampler.sample_with_progress(&mut stream, &mut progress)?);
    }
    let mut out = a.output.open()?;
    match a.format {
        Format::Csv => {
            let header: Vec<String> = (1..=a.n).map(|j| format!("x{j}")).collect();
            writeln!(out, "index,attempts,{}", header.join(","))?;
            for (i, s) in samples.iter().enumerate() {
                let values: Vec<String> = s.values.iter().map(f64::to_string).collect();
                writeln!(out, "{i},{},{}", s.attempts, values.join(","))?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &samples)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(0)
}

fn bench(a: BenchArgs) -> CliResult {
    if a.samples == 0 {
        return Err(reject("--samples must be at least 1"));
    }
    let rows = benchmark(a.mode.into(), &a.n_list, a.samples, a.seed)?;
    let mut out = a.output.open()?;
    match a.format {
        Format::Csv => {
            writeln!(
                out,
                "mode,n,accepted,mean_proposals,expected_proposals,exact_eval_share,exact_evals_per_accept,cost_proxy,ns_per_sample"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.mode,
                    r.n,
                    r.accepted,
                    r.mean_proposals,
                    r.expected_proposals,
                    r.exact_eval_share,
                    r.exact_evals_per_accept,
                    r.cost_proxy,
                    r.ns_per_sample
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(0)
}

fn run_verify(a: VerifyArgs) -> CliResult {
    let ids = verify::parse_suite(&a.suite)?;
    let cfg = if a.quick { VerifyConfig::quick(a.seed) } else { VerifyConfig::full(a.seed) };
    let mut criteria = Vec::with_capacity(ids.len());
    for id in ids {
        let report = verify::run_criterion(id, &cfg)?;
        for line in report.lines() {
            eprintln!("{line}");
        }
        criteria.push(report);
    }
    let report = verify::SuiteReport { seed: cfg.seed, quick: cfg.quick, pass: criteria.iter().all(|c| c.pass), criteria };
    let mut out = a.output.open()?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(if report.pass { 0 } else { 3 })
}

fn tabulate_envelope(a: TabulateArgs) -> CliResult {
    let rows = tabulate::envelope_rows(a.n, a.points)?;
    let mut out = a.output.open()?;
    tabulate::write_envelope_csv(&mut out, &rows)?;
    out.flush()?;
    Ok(0)
}

fn tabulate_squeeze(a: SqueezeArgs) -> CliResult {
    let rows = tabulate::squeeze_rows(a.table.n, a.table.points)?;
    let mut out = a.table.output.open()?;
    tabulate::write_squeeze_csv(&mut out, &rows, a.all_columns)?;
    out.flush()?;
    Ok(0)
}

fn oracle(a: OracleArgs) -> CliResult {
    if a.n == 0 || a.n > MAX_ORACLE_N {
        return Err(reject(format!("--n must be between 1 and {MAX_ORACLE_N}")));
    }
    if a.count == 0 {
        return Err(reject("--count must be at least 1"));
    }
    let mut stream = RandomStream::new(a.seed);
    let mut out = a.output.open()?;
    let header: Vec<String> = (1..=a.n).map(|j| format!("x{j}")).collect();
    writeln!(out, "index,{}", header.join(","))?;
    for i in 0..a.count {
        let m = sample_gue_matrix(a.n, a.convention.into(), &mut stream)?;
        let values: Vec<String> = eigenvalues_small(&m)?.iter().map(f64::to_string).collect();
        writeln!(out, "{i},{}", values.join(","))?;
    }
    out.flush()?;
    Ok(0)
}
