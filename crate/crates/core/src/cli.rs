//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 I/O or format error.

use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::internal_lpq::LpqIndex;
use crate::mepal_index::{decode_file, IndexParams, PalIndex, SpaceReport, FLAG_LPQ};
use crate::pal_core::{brute_general, brute_mepal_even};
use crate::short_index::ShortMode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mepal", version, about = "Succinct maximal-palindrome index")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index file from a text file ("-" reads stdin).
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Answer center, odd/even center or range queries.
    Query {
        index: PathBuf,
        #[command(flatten)]
        kind: QueryKind,
    },
    /// Print the space breakdown of an index file.
    Stats {
        index: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check an index built from the input against brute-force answers.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random ranges to check.
        #[arg(long, default_value_t = 1000)]
        iters: usize,
    },
    /// Time random center queries.
    Bench {
        index: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Also run the queries from this many threads at once.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        threads: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BuildArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub tau: Option<u64>,
    #[arg(long, default_value = "table")]
    pub short: ShortMode,
    /// Index odd palindromes too and add range-query structures.
    #[arg(long)]
    pub general: bool,
}

impl BuildArgs {
    fn params(&self) -> IndexParams {
        IndexParams {
            tau: self.tau.map(|t| t as usize),
            short_mode: self.short,
            general: self.general,
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("kind").required(true).multiple(false)))]
pub struct QueryKind {
    #[arg(long, group = "kind")]
    pub center: Option<usize>,
    #[arg(long, group = "kind")]
    pub pal_center: Option<usize>,
    #[arg(long, group = "kind", num_args = 2, value_names = ["I", "J"])]
    pub range: Option<Vec<usize>>,
    /// One query per line: `center C`, `pal-center C`, `range I J`, or a bare center.
    #[arg(long, group = "kind")]
    pub batch: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutOfRange { .. } | Error::InvalidRange { .. } | Error::InvalidTau { .. } | Error::ModeMismatch(_) => {
                EXIT_USAGE
            }
            _ => EXIT_IO,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Build { input, output, build } => run_build(&input, &output, build, &mut out),
        Command::Query { index, kind } => run_query(&index, &kind, &mut out),
        Command::Stats { index, json } => run_stats(&index, json, &mut out),
        Command::Verify {
            input,
            build,
            seed,
            iters,
        } => run_verify(&input, build, seed, iters, &mut out),
        Command::Bench {
            index,
            queries,
            seed,
            json,
            threads,
        } => run_bench(&index, queries, seed, json, threads, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read_input(path: &Path) -> std::result::Result<Vec<u8>, Failure> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| io_failure(path, e))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| io_failure(path, e))
    }
}

fn write_err(e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: e.to_string(),
    }
}

enum Loaded {
    Pal(PalIndex),
    Lpq(LpqIndex),
}

impl Loaded {
    fn read(path: &Path) -> std::result::Result<Self, Failure> {
        let bytes = read_input(path)?;
        let raw = decode_file(&bytes)?;
        Ok(if raw.flags & FLAG_LPQ != 0 {
            Loaded::Lpq(LpqIndex::from_raw(&raw)?)
        } else {
            Loaded::Pal(PalIndex::from_raw(&raw)?)
        })
    }

    fn pal(&self) -> &PalIndex {
        match self {
            Loaded::Pal(p) => p,
            Loaded::Lpq(l) => l.pal(),
        }
    }

    fn range(&self, i: usize, j: usize) -> crate::error::Result<usize> {
        match self {
            Loaded::Lpq(l) => l.internal_longest_pal(i, j),
            Loaded::Pal(_) => Err(Error::ModeMismatch("range queries need an index built with --general")),
        }
    }
}

fn run_build(input: &Path, output: &Path, args: BuildArgs, out: &mut impl Write) -> CliResult {
    let text = read_input(input)?;
    let params = args.params();
    let (bytes, report, pal_tau, fallback) = if params.general {
        let idx = LpqIndex::build(&text, params)?;
        (idx.serialize(), idx.space_report(), idx.pal().tau(), idx.pal().is_fallback())
    } else {
        let idx = PalIndex::build(&text, params)?;
        (idx.serialize(), idx.space_report(), idx.tau(), idx.is_fallback())
    };
    fs::write(output, &bytes).map_err(|e| io_failure(output, e))?;
    let mode = match (params.general, fallback) {
        (_, true) => "plain".to_string(),
        (g, false) => format!("{}{}", if g { "general, " } else { "" }, short_name(params.short_mode)),
    };
    writeln!(
        out,
        "n={} tau={} mode={} total_bits={} bits_per_symbol={:.3}",
        text.len(),
        pal_tau,
        mode,
        report.total_bits,
        report.bits_per_symbol
    )
    .map_err(write_err)?;
    Ok(EXIT_OK)
}

fn short_name(m: ShortMode) -> &'static str {
    match m {
        ShortMode::Table => "table",
        ShortMode::Packed => "packed",
    }
}

fn run_query(index: &Path, kind: &QueryKind, out: &mut impl Write) -> CliResult {
    let idx = Loaded::read(index)?;
    let answer = if let Some(c) = kind.center {
        idx.pal().query(c)?
    } else if let Some(c) = kind.pal_center {
        idx.pal().pal_center_query(c)?
    } else if let Some(r) = &kind.range {
        idx.range(r[0], r[1])?
    } else if let Some(batch) = &kind.batch {
        return run_batch(&idx, batch, out);
    } else {
        unreachable!("clap requires one query kind")
    };
    writeln!(out, "{answer}").map_err(write_err)?;
    Ok(EXIT_OK)
}

fn run_batch(idx: &Loaded, batch: &Path, out: &mut impl Write) -> CliResult {
    let file = fs::File::open(batch).map_err(|e| io_failure(batch, e))?;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| io_failure(batch, e))?;
        match answer_line(idx, &line) {
            Ok(v) => writeln!(out, "{v}"),
            Err(msg) => writeln!(out, "error: {msg}"),
        }
        .map_err(write_err)?;
    }
    Ok(EXIT_OK)
}

fn answer_line(idx: &Loaded, line: &str) -> std::result::Result<usize, String> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| format!("not a number: '{s}'"));
    let result = match words.as_slice() {
        [c] => idx.pal().query(num(c)?),
        ["center", c] => idx.pal().query(num(c)?),
        ["pal-center", c] => idx.pal().pal_center_query(num(c)?),
        ["range", i, j] => idx.range(num(i)?, num(j)?),
        _ => return Err(format!("cannot parse query '{line}'")),
    };
    result.map_err(|e| e.to_string())
}

fn run_stats(index: &Path, json: bool, out: &mut impl Write) -> CliResult {
    let bytes = read_input(index)?;
    let report = SpaceReport::from_file(&bytes)?;
    if json {
        let s = serde_json::to_string_pretty(&report).expect("report serializes");
        writeln!(out, "{s}").map_err(write_err)?;
    } else {
        write_report(&report, out).map_err(write_err)?;
    }
    Ok(EXIT_OK)
}

fn write_report(r: &SpaceReport, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "n            {}", r.n_original)?;
    writeln!(out, "tau          {}", r.tau)?;
    writeln!(out, "ls_bits      {}", r.ls_bits)?;
    writeln!(out, "block_bits   {}", r.block_bits)?;
    writeln!(out, "short_bits   {}", r.short_bits)?;
    if r.plain_bits > 0 {
        writeln!(out, "plain_bits   {}", r.plain_bits)?;
    }
    if r.rmq_bits > 0 {
        writeln!(out, "rmq_bits     {}", r.rmq_bits)?;
    }
    writeln!(out, "header_bits  {}", r.header_bits)?;
    writeln!(out, "total_bits   {}", r.total_bits)?;
    writeln!(out, "bits/symbol  {:.3}", r.bits_per_symbol)
}

/// Longest palindrome inside `w[i..=j]`, from the per-center lengths of the
/// whole string clipped to the range.
fn clipped_range_answer(general: &[usize], i: usize, j: usize) -> usize {
    (2 * i..=2 * j)
        .map(|c| {
            let room = if c % 2 == 0 {
                2 * (c / 2 - i).min(j - c / 2) + 1
            } else {
                2 * ((c - 1) / 2 + 1 - i).min(j + 1 - (c + 1) / 2)
            };
            general[c].min(room)
        })
        .max()
        .unwrap_or(0)
}

fn excerpt(text: &[u8], around: usize) -> String {
    let lo = around.saturating_sub(20);
    let hi = (around + 20).min(text.len());
    String::from_utf8_lossy(&text[lo..hi]).into_owned()
}

fn run_verify(input: &Path, args: BuildArgs, seed: u64, iters: usize, out: &mut impl Write) -> CliResult {
    let text = read_input(input)?;
    let n = text.len();
    let mut checked = 0usize;
    let mut failed = 0usize;
    let mut first: Option<String> = None;
    let mut record = |ok: bool, what: &dyn Fn() -> String| {
        checked += 1;
        if !ok {
            failed += 1;
            if first.is_none() {
                first = Some(what());
            }
        }
    };

    let even = PalIndex::build(
        &text,
        IndexParams {
            general: false,
            ..args.params()
        },
    )?;
    let m = brute_mepal_even(&text);
    for c in 0..n {
        let got = even.query(c)?;
        record(got == m.get(c), &|| {
            format!("center {c}: expected {} got {got} near '{}'", m.get(c), excerpt(&text, c))
        });
    }

    let lpq = LpqIndex::build(&text, args.params())?;
    let general = brute_general(&text);
    for (c, &want) in general.iter().enumerate() {
        let got = lpq.pal().pal_center_query(c)?;
        record(got == want, &|| {
            format!("pal-center {c}: expected {want} got {got} near '{}'", excerpt(&text, c / 2))
        });
    }

    if n > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..iters {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(i..n);
            let want = clipped_range_answer(&general, i, j);
            let got = lpq.internal_longest_pal(i, j)?;
            record(got == want, &|| {
                format!("range [{i}..{j}]: expected {want} got {got} near '{}'", excerpt(&text, i))
            });
        }
    }

    writeln!(out, "checked {checked} answers, {failed} mismatches").map_err(write_err)?;
    if let Some(msg) = first {
        writeln!(out, "first mismatch: {msg}").map_err(write_err)?;
        return Ok(EXIT_MISMATCH);
    }
    writeln!(out, "pass").map_err(write_err)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub n_centers: usize,
    pub queries: usize,
    pub mean_ns: f64,
    pub median_ns: f64,
    pub threads: Option<u32>,
    pub parallel_mean_ns: Option<f64>,
}

const BENCH_CHUNK: usize = 4096;

/// Mean and median ns/query over chunks of random center queries.
pub fn bench_centers(idx: &PalIndex, queries: usize, seed: u64) -> (f64, f64) {
    let n = idx.n_centers();
    if n == 0 || queries == 0 {
        return (0.0, 0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<usize> = (0..queries).map(|_| rng.gen_range(0..n)).collect();
    let mut per_chunk = Vec::with_capacity(queries.div_ceil(BENCH_CHUNK));
    let start = Instant::now();
    for chunk in centers.chunks(BENCH_CHUNK) {
        let t = Instant::now();
        let mut acc = 0usize;
        for &c in chunk {
            acc = acc.wrapping_add(idx.query(c).unwrap_or(0));
        }
        std::hint::black_box(acc);
        per_chunk.push(t.elapsed().as_nanos() as f64 / chunk.len() as f64);
    }
    let mean = start.elapsed().as_nanos() as f64 / queries as f64;
    per_chunk.sort_by(f64::total_cmp);
    (mean, per_chunk[per_chunk.len() / 2])
}

fn run_bench(
    index: &Path,
    queries: usize,
    seed: u64,
    json: bool,
    threads: Option<u32>,
    out: &mut impl Write,
) -> CliResult {
    let loaded = Loaded::read(index)?;
    let idx = loaded.pal();
    let (mean_ns, median_ns) = bench_centers(idx, queries, seed);
    let parallel_mean_ns = threads.map(|t| {
        let start = Instant::now();
        std::thread::scope(|s| {
            for k in 0..t {
                s.spawn(move || bench_centers(idx, queries, seed.wrapping_add(k as u64 + 1)));
            }
        });
        start.elapsed().as_nanos() as f64 / (queries as f64 * t as f64)
    });
    let report = BenchReport {
        n_centers: idx.n_centers(),
        queries,
        mean_ns,
        median_ns,
        threads,
        parallel_mean_ns,
    };
    if json {
        let s = serde_json::to_string_pretty(&report).expect("report serializes");
        writeln!(out, "{s}").map_err(write_err)?;
    } else {
        writeln!(
            out,
            "{} queries over {} centers: mean {:.1} ns, median {:.1} ns",
            queries, report.n_centers, mean_ns, median_ns
        )
        .map_err(write_err)?;
        if let (Some(t), Some(p)) = (threads, parallel_mean_ns) {
            writeln!(out, "{t} threads: {p:.1} ns per query (wall clock / total queries)").map_err(write_err)?;
        }
    }
    Ok(EXIT_OK)
}
