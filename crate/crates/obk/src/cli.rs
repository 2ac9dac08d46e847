//! Command-line front end. Everything routes through [`run`], which
//! returns the full report as a string plus an exit code, so the whole
//! surface is testable without spawning processes.
//!
//! Exit codes: 0 success, 1 a mathematical check failed (verification
//! mismatch, normalization error, fuzz failure), 2 bad input (unreadable
//! or malformed files, inconsistent flags, unknown arguments).
//!
//! Reports are deterministic: identical inputs and flags produce
//! byte-identical output. `--format machine` switches every subcommand to
//! line-oriented `key=value` records. The only environment variable read
//! is `OBK_COLOR`; set to `1` it wraps verdict words in ANSI colors (off
//! by default, and never in machine format).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::birkhoff::splitting_type;
use crate::bundle::TransitionMatrix;
use crate::format::{
    read_bundle_file, read_gauge_file, write_bundle, write_bundle_file, write_gauge_file,
};
use crate::normal_form::{canonical_dim, canonical_dim_total, canonical_support, normalize,
    window_depth};
use crate::random::{fuzz_seed, scrambled_diagonal, RandomSpec, RoundtripVerdict};
use crate::scalar::format_scalar;
use crate::sections::{line_section, v_expr_string, vanishing_report, verify_cocycle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub report: String,
}

impl CommandResult {
    fn ok(report: String) -> Self {
        CommandResult {
            exit_code: 0,
            report,
        }
    }

    fn fail(exit_code: i32, msg: impl std::fmt::Display) -> Self {
        CommandResult {
            exit_code,
            report: format!("error: {msg}\n"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// human-readable text
    Plain,
    /// line-oriented key=value records
    Machine,
}

#[derive(Parser)]
#[command(
    name = "obk",
    version,
    about = "Exact canonical forms for transition matrices of bundles on the total space of O(-k) over the projective line"
)]
struct Cli {
    /// Report style
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a bundle file into canonical form
    Normalize {
        /// Input bundle file
        input: PathBuf,
        /// Write the canonical bundle here (otherwise printed)
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Write the certifying gauge transform here
        #[arg(long = "emit-gauge")]
        emit_gauge: Option<PathBuf>,
        /// Working truncation order (default: deep enough for the
        /// input's windows, plus a margin of two)
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Print the splitting type of a bundle file, exponents descending
    Splitting {
        /// Input bundle file
        input: PathBuf,
    },
    /// Canonical-space dimension for one exponent pair
    Dim {
        #[arg(long)]
        k: i64,
        /// Larger diagonal exponent
        #[arg(long, allow_hyphen_values = true)]
        j1: i64,
        /// Smaller diagonal exponent
        #[arg(long, allow_hyphen_values = true)]
        j2: i64,
        /// Also list the window slots, one per line
        #[arg(long)]
        verbose: bool,
    },
    /// Check that a gauge file carries one bundle to another exactly
    Verify {
        /// Input bundle file
        input: PathBuf,
        /// Expected canonical bundle file
        canonical: PathBuf,
        /// Gauge transform file
        gauge: PathBuf,
    },
    /// Cocycle and vanishing report for the standard line-bundle section
    Section {
        #[arg(long)]
        k: i64,
        /// Transition exponent of the line bundle
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
    },
    /// Generate a reproducible random bundle
    Random {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        rank: usize,
        /// Diagonal exponents of the base, comma-separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        j: Vec<i64>,
        #[arg(long)]
        seed: u64,
        /// Number of elementary scramble factors
        #[arg(long)]
        ops: usize,
        /// Write the bundle here (otherwise printed)
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Scramble-normalize round trips over a seed range
    Fuzz {
        #[arg(long)]
        k: i64,
        /// Inclusive seed range, e.g. 0..49
        #[arg(long)]
        seeds: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

struct Ctx {
    format: OutputFormat,
    color: bool,
}

impl Ctx {
    fn paint(&self, text: &str, code: &str) -> String {
        if self.color && self.format == OutputFormat::Plain {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn good(&self, text: &str) -> String {
        self.paint(text, "32")
    }

    fn bad(&self, text: &str) -> String {
        self.paint(text, "31")
    }
}

/// Parse and execute one invocation. The first element of `argv` is the
/// program name, as in `std::env::args`.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here with a zero exit
            let exit_code = if e.use_stderr() { 2 } else { 0 };
            return CommandResult {
                exit_code,
                report: e.render().to_string(),
            };
        }
    };
    let ctx = Ctx {
        format: cli.format,
        color: std::env::var("OBK_COLOR").map(|v| v == "1").unwrap_or(false),
    };
    match cli.command {
        Command::Normalize {
            input,
            output,
            emit_gauge,
            trunc,
        } => cmd_normalize(&ctx, &input, output.as_deref(), emit_gauge.as_deref(), trunc),
        Command::Splitting { input } => cmd_splitting(&ctx, &input),
        Command::Dim { k, j1, j2, verbose } => cmd_dim(&ctx, k, j1, j2, verbose),
        Command::Verify {
            input,
            canonical,
            gauge,
        } => cmd_verify(&ctx, &input, &canonical, &gauge),
        Command::Section { k, j } => cmd_section(&ctx, k, j),
        Command::Random {
            k,
            rank,
            j,
            seed,
            ops,
            output,
        } => cmd_random(&ctx, k, rank, &j, seed, ops, output.as_deref()),
        Command::Fuzz {
            k,
            seeds,
            rank,
            jobs,
        } => cmd_fuzz(&ctx, k, &seeds, rank, jobs),
    }
}

fn cmd_normalize(
    ctx: &Ctx,
    input: &std::path::Path,
    output: Option<&std::path::Path>,
    emit_gauge: Option<&std::path::Path>,
    trunc: Option<usize>,
) -> CommandResult {
    let t = match read_bundle_file(input) {
        Ok(t) => t,
        Err(e) => return CommandResult::fail(2, e),
    };
    let header = t.trunc();
    let split = match splitting_type(&t) {
        Ok(s) => s,
        Err(e) => return CommandResult::fail(1, e),
    };
    let exps = split.exponents();
    let depth = window_depth(t.k(), exps[0], exps[exps.len() - 1]);
    let work = trunc.unwrap_or_else(|| header.max(depth + 2));
    let out_trunc = header.min(work);

    let (canon, gauge) = match normalize(&t.retruncated(work)) {
        Ok(pair) => pair,
        Err(e) => return CommandResult::fail(1, e),
    };
    let out_matrix = canon.to_matrix().retruncated(out_trunc);
    let gauge_out = match gauge.retruncated(out_trunc) {
        Ok(g) => g,
        Err(e) => return CommandResult::fail(1, e),
    };

    if let Some(path) = output {
        if let Err(e) = write_bundle_file(path, &out_matrix) {
            return CommandResult::fail(2, e);
        }
    }
    if let Some(path) = emit_gauge {
        if let Err(e) = write_gauge_file(path, &gauge_out) {
            return CommandResult::fail(2, e);
        }
    }

    let dim = canonical_dim_total(canon.k(), canon.exponents())
        .expect("canonical exponents are sorted");
    let mut report = String::new();
    match ctx.format {
        OutputFormat::Plain => {
            writeln!(report, "splitting type: {split}").unwrap();
            writeln!(report, "canonical space dimension: {dim}").unwrap();
            writeln!(
                report,
                "split: {}",
                if canon.is_split() { "yes" } else { "no" }
            )
            .unwrap();
            for (r, c, u, z, coeff) in canon.terms() {
                writeln!(
                    report,
                    "surviving term: entry ({},{}) u^{u} z^{z} coefficient {}",
                    r + 1,
                    c + 1,
                    format_scalar(&coeff)
                )
                .unwrap();
            }
            if let Some(path) = output {
                writeln!(report, "wrote canonical bundle to {}", path.display()).unwrap();
            }
            if let Some(path) = emit_gauge {
                writeln!(report, "wrote gauge to {}", path.display()).unwrap();
            }
        }
        OutputFormat::Machine => {
            writeln!(report, "splitting={}", join_exponents(canon.exponents())).unwrap();
            writeln!(report, "dim={dim}").unwrap();
            writeln!(report, "split={}", canon.is_split()).unwrap();
            writeln!(report, "trunc={out_trunc}").unwrap();
            for (r, c, u, z, coeff) in canon.terms() {
                writeln!(
                    report,
                    "term r={} c={} u={u} z={z} coeff={}",
                    r + 1,
                    c + 1,
                    format_scalar(&coeff)
                )
                .unwrap();
            }
            if let Some(path) = output {
                writeln!(report, "output={}", path.display()).unwrap();
            }
            if let Some(path) = emit_gauge {
                writeln!(report, "gauge={}", path.display()).unwrap();
            }
        }
    }
    if output.is_none() {
        report.push_str(&write_bundle(&out_matrix));
    }
    CommandResult::ok(report)
}

fn cmd_splitting(ctx: &Ctx, input: &std::path::Path) -> CommandResult {
    let t = match read_bundle_file(input) {
        Ok(t) => t,
        Err(e) => return CommandResult::fail(2, e),
    };
    let split = match splitting_type(&t) {
        Ok(s) => s,
        Err(e) => return CommandResult::fail(1, e),
    };
    let exps: Vec<String> = split.exponents().iter().map(|j| j.to_string()).collect();
    let report = match ctx.format {
        OutputFormat::Plain => format!("{}\n", exps.join(" ")),
        OutputFormat::Machine => format!("splitting={}\n", join_exponents(split.exponents())),
    };
    CommandResult::ok(report)
}

fn cmd_dim(ctx: &Ctx, k: i64, j1: i64, j2: i64, verbose: bool) -> CommandResult {
    if k < 1 {
        return CommandResult::fail(2, "k must be at least 1");
    }
    let dim = canonical_dim(k, j1, j2);
    let mut report = match ctx.format {
        OutputFormat::Plain => format!("{dim}\n"),
        OutputFormat::Machine => format!("dim={dim}\n"),
    };
    if verbose {
        for (u, z) in canonical_support(k, j1, j2) {
            match ctx.format {
                OutputFormat::Plain => writeln!(report, "u={u} z={z}").unwrap(),
                OutputFormat::Machine => writeln!(report, "window u={u} z={z}").unwrap(),
            }
        }
    }
    CommandResult::ok(report)
}

/// First coefficient where the two matrices differ, as
/// `(row, col, u_deg, z_exp, got, expected)`, scanning row-major, then by
/// u-order, then by z-exponent.
fn first_mismatch(
    got: &TransitionMatrix,
    expected: &TransitionMatrix,
) -> Option<(usize, usize, usize, i64, String, String)> {
    for r in 0..got.rank() {
        for c in 0..got.rank() {
            let a = got.entry(r, c);
            let b = expected.entry(r, c);
            if a == b {
                continue;
            }
            for u in 0..=got.trunc() {
                let pa = a.coeff(u);
                let pb = b.coeff(u);
                if pa == pb {
                    continue;
                }
                let mut exps: Vec<i64> = pa.iter().map(|(e, _)| e).collect();
                exps.extend(pb.iter().map(|(e, _)| e));
                exps.sort_unstable();
                exps.dedup();
                for z in exps {
                    let ca = pa.coeff(z);
                    let cb = pb.coeff(z);
                    if ca != cb {
                        return Some((r, c, u, z, format_scalar(&ca), format_scalar(&cb)));
                    }
                }
            }
        }
    }
    None
}

/// In `verify`, a file that reads fine but breaks a mathematical
/// invariant (a gauge whose stored inverse does not check out, say) is a
/// failed verification, not a malformed input.
fn load_exit_code(e: &crate::error::Error) -> i32 {
    match e {
        crate::error::Error::Parse { .. } | crate::error::Error::Io { .. } => 2,
        _ => 1,
    }
}

fn cmd_verify(
    ctx: &Ctx,
    input: &std::path::Path,
    canonical: &std::path::Path,
    gauge: &std::path::Path,
) -> CommandResult {
    let t = match read_bundle_file(input) {
        Ok(t) => t,
        Err(e) => return CommandResult::fail(load_exit_code(&e), e),
    };
    let expected = match read_bundle_file(canonical) {
        Ok(t) => t,
        Err(e) => return CommandResult::fail(load_exit_code(&e), e),
    };
    let g = match read_gauge_file(gauge) {
        Ok(g) => g,
        Err(e) => return CommandResult::fail(load_exit_code(&e), e),
    };
    let n = t.trunc().min(expected.trunc()).min(g.trunc());
    let t = t.retruncated(n);
    let expected = expected.retruncated(n);
    let g = match g.retruncated(n) {
        Ok(g) => g,
        Err(e) => return CommandResult::fail(1, e),
    };
    let got = match g.apply(&t) {
        Ok(m) => m,
        Err(e) => return CommandResult::fail(1, e),
    };
    if got == expected {
        let report = match ctx.format {
            OutputFormat::Plain => format!(
                "verification {}: gauge carries {} to {}\n",
                ctx.good("passed"),
                input.display(),
                canonical.display()
            ),
            OutputFormat::Machine => "verify=ok\n".to_string(),
        };
        return CommandResult::ok(report);
    }
    let (r, c, u, z, got_c, want_c) =
        first_mismatch(&got, &expected).expect("unequal matrices differ somewhere");
    let report = match ctx.format {
        OutputFormat::Plain => format!(
            "verification {}: entry ({},{}) coefficient at u^{u} z^{z} is {got_c}, expected {want_c}\n",
            ctx.bad("failed"),
            r + 1,
            c + 1
        ),
        OutputFormat::Machine => format!(
            "verify=fail\nmismatch r={} c={} u={u} z={z} got={got_c} expected={want_c}\n",
            r + 1,
            c + 1
        ),
    };
    CommandResult {
        exit_code: 1,
        report,
    }
}

fn cmd_section(ctx: &Ctx, k: i64, j: i64) -> CommandResult {
    if k < 1 {
        return CommandResult::fail(2, "k must be at least 1");
    }
    let s = line_section(k, j);
    let cocycle = verify_cocycle(&s);
    let report = vanishing_report(&s);
    let text = match ctx.format {
        OutputFormat::Plain => {
            let mut out = String::new();
            writeln!(out, "section for k={k}, j={j}").unwrap();
            writeln!(out, "s_U = {}", s.s_u).unwrap();
            writeln!(out, "s_V = {}", v_expr_string(&s.s_v)).unwrap();
            writeln!(
                out,
                "cocycle z^j*s_U = s_V: {}",
                if cocycle {
                    ctx.good("holds")
                } else {
                    ctx.bad("fails")
                }
            )
            .unwrap();
            writeln!(out, "{report}").unwrap();
            out
        }
        OutputFormat::Machine => {
            let mut out = String::new();
            writeln!(out, "k={k}").unwrap();
            writeln!(out, "j={j}").unwrap();
            writeln!(out, "cocycle={cocycle}").unwrap();
            for (name, chart) in [("u", &report.u_chart), ("v", &report.v_chart)] {
                writeln!(out, "{name}_holomorphic={}", chart.holomorphic).unwrap();
                writeln!(out, "{name}_vanishes_fiber={}", chart.vanishes_on_fiber).unwrap();
                writeln!(
                    out,
                    "{name}_vanishes_zero_section={}",
                    chart.vanishes_on_zero_section
                )
                .unwrap();
            }
            writeln!(
                out,
                "trivializes={}",
                report.trivializes_off_zero_section()
            )
            .unwrap();
            out
        }
    };
    CommandResult {
        exit_code: if cocycle { 0 } else { 1 },
        report: text,
    }
}

fn cmd_random(
    ctx: &Ctx,
    k: i64,
    rank: usize,
    j: &[i64],
    seed: u64,
    ops: usize,
    output: Option<&std::path::Path>,
) -> CommandResult {
    if k < 1 || rank < 1 {
        return CommandResult::fail(2, "k and rank must be at least 1");
    }
    if j.len() != rank {
        return CommandResult::fail(
            2,
            format!("got {} exponents for rank {rank}", j.len()),
        );
    }
    let hi = *j.iter().max().expect("rank is at least 1");
    let lo = *j.iter().min().expect("rank is at least 1");
    let mut spec = RandomSpec::new(seed, k, rank, window_depth(k, hi, lo) + 2);
    spec.gauge_ops = ops;
    let t = match scrambled_diagonal(&spec, j) {
        Ok(t) => t,
        Err(e) => return CommandResult::fail(1, e),
    };
    if let Some(path) = output {
        if let Err(e) = write_bundle_file(path, &t) {
            return CommandResult::fail(2, e);
        }
        let report = match ctx.format {
            OutputFormat::Plain => format!("wrote random bundle to {}\n", path.display()),
            OutputFormat::Machine => format!("output={}\n", path.display()),
        };
        CommandResult::ok(report)
    } else {
        CommandResult::ok(write_bundle(&t))
    }
}

fn parse_seed_range(text: &str) -> Option<(u64, u64)> {
    let (a, b) = text.split_once("..")?;
    let lo: u64 = a.trim().parse().ok()?;
    let hi: u64 = b.trim().parse().ok()?;
    (lo <= hi).then_some((lo, hi))
}

fn cmd_fuzz(ctx: &Ctx, k: i64, seeds: &str, rank: usize, jobs: usize) -> CommandResult {
    if k < 1 || rank < 1 {
        return CommandResult::fail(2, "k and rank must be at least 1");
    }
    if jobs < 1 {
        return CommandResult::fail(2, "jobs must be at least 1");
    }
    let Some((lo, hi)) = parse_seed_range(seeds) else {
        return CommandResult::fail(
            2,
            format!("seed range must look like 0..49 (inclusive), got {seeds:?}"),
        );
    };
    let seeds: Vec<u64> = (lo..=hi).collect();
    let mut verdicts: Vec<Option<RoundtripVerdict>> = vec![None; seeds.len()];
    let chunk = seeds.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        for (seed_chunk, out_chunk) in seeds.chunks(chunk).zip(verdicts.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (seed, slot) in seed_chunk.iter().zip(out_chunk.iter_mut()) {
                    *slot = Some(fuzz_seed(k, rank, *seed));
                }
            });
        }
    });

    let mut report = String::new();
    let mut failed = 0usize;
    for verdict in verdicts.iter().map(|v| v.as_ref().expect("all seeds ran")) {
        if !verdict.pass {
            failed += 1;
        }
        match ctx.format {
            OutputFormat::Plain => {
                if verdict.pass {
                    writeln!(
                        report,
                        "seed {}: {} (splitting {})",
                        verdict.seed,
                        ctx.good("ok"),
                        join_spaced(&verdict.splitting_in)
                    )
                    .unwrap();
                } else {
                    writeln!(
                        report,
                        "seed {}: {} {}",
                        verdict.seed,
                        ctx.bad("FAIL"),
                        verdict.failure.as_deref().unwrap_or("unknown failure")
                    )
                    .unwrap();
                }
            }
            OutputFormat::Machine => {
                if verdict.pass {
                    writeln!(
                        report,
                        "seed={} pass=true splitting={}",
                        verdict.seed,
                        join_exponents(&verdict.splitting_in)
                    )
                    .unwrap();
                } else {
                    writeln!(
                        report,
                        "seed={} pass=false reason={}",
                        verdict.seed,
                        verdict.failure.as_deref().unwrap_or("unknown failure")
                    )
                    .unwrap();
                }
            }
        }
    }
    match ctx.format {
        OutputFormat::Plain => writeln!(
            report,
            "{} seeds: {} passed, {} failed",
            seeds.len(),
            seeds.len() - failed,
            failed
        )
        .unwrap(),
        OutputFormat::Machine => writeln!(
            report,
            "total={} passed={} failed={}",
            seeds.len(),
            seeds.len() - failed,
            failed
        )
        .unwrap(),
    }
    CommandResult {
        exit_code: if failed == 0 { 0 } else { 1 },
        report,
    }
}

fn join_exponents(exps: &[i64]) -> String {
    exps.iter()
        .map(|j| j.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_spaced(exps: &[i64]) -> String {
    exps.iter()
        .map(|j| j.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
