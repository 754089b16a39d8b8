//! Command-line front end. The `rle-acs` binary is a thin wrapper over [`run`].
//!
//! Exit codes: 0 success, 1 usage, 2 data error, 3 verification failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{
    decoupling_sweep, doubling_sweep, measure, render_table, unary_closed_form, unary_pair,
};
use crate::engine::{dist, AcsEngine, AcsResult, EngineOptions, LogBase};
use crate::error::{Error, Result};
use crate::matrix::distance_matrix;
use crate::rle::{encode_bytes, parse_fasta, parse_rle_text, RleSeq};
use crate::sigma::FreqRule;
use crate::verify::run_verification;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "rle-acs",
    version,
    about = "Average Common Substring over run-length encoded sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// ACS of the first sequence with respect to the second
    Acs(PairArgs),
    /// Symmetric ACS distance between two sequences
    Dist(PairArgs),
    /// Distance matrix over all input sequences
    Matrix(MatrixArgs),
    /// Check the engine against brute force on a seeded random corpus
    Verify(VerifyArgs),
    /// Timing sweeps over compressed size and run-length scale
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Fasta,
    Rle,
    /// whole file is one sequence named after the file stem
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Phylip,
    Tsv,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// input files, read in order
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::Fasta)]
    format: InputFormat,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long = "log-base", default_value = "e")]
    log_base: LogBase,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long = "log-base", default_value = "e")]
    log_base: LogBase,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Phylip)]
    output: OutputFormat,
    /// worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// allow names over 10 characters, written unpadded (nonstandard PHYLIP)
    #[arg(long = "relaxed-names")]
    relaxed_names: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// largest combined decoded length of a pair
    #[arg(long = "n-max", default_value_t = 2000)]
    n_max: u64,
    #[arg(long = "inject-fault", hide = true)]
    inject_fault: Option<String>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// total run counts for the doubling sweep
    #[arg(long, value_delimiter = ',', default_values_t = [16384usize, 32768, 65536, 131072])]
    sizes: Vec<usize>,
    /// total run count for the run-length scaling sweep
    #[arg(long = "decouple-n", default_value_t = 100_000)]
    decouple_n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100, 1000, 10_000, 100_000, 1_000_000])]
    scales: Vec<u64>,
}

/// Reads every record from the inputs, in order.
pub fn load_inputs(
    paths: &[PathBuf],
    format: InputFormat,
    warn: &mut dyn Write,
) -> Result<Vec<RleSeq>> {
    let mut out = Vec::new();
    for path in paths {
        let open = || -> Result<BufReader<File>> { Ok(BufReader::new(File::open(path)?)) };
        match format {
            InputFormat::Fasta => out.extend(parse_fasta(open()?)?),
            InputFormat::Rle => {
                let parsed = parse_rle_text(open()?)?;
                for w in &parsed.warnings {
                    let _ = writeln!(warn, "warning: {}: {w}", path.display());
                }
                out.extend(parsed.records);
            }
            InputFormat::Text => {
                let text: Vec<u8> = std::fs::read(path)?
                    .into_iter()
                    .filter(|b| !b.is_ascii_whitespace())
                    .collect();
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                if text.is_empty() {
                    return Err(Error::EmptyRecord(name));
                }
                out.push(encode_bytes(&text, name)?);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    for s in &out {
        if !seen.insert(s.name().to_string()) {
            return Err(Error::DuplicateName(s.name().to_string()));
        }
    }
    Ok(out)
}

fn two(seqs: Vec<RleSeq>) -> std::result::Result<(RleSeq, RleSeq), String> {
    match <[RleSeq; 2]>::try_from(seqs) {
        Ok([x, y]) => Ok((x, y)),
        Err(v) => Err(format!("expected exactly two sequences, found {}", v.len())),
    }
}

/// `ACS = 4/3 ≈ 1.333333`, or `ACS = 0/x = 0` when nothing matches.
pub fn acs_headline(r: &AcsResult) -> String {
    if r.lsum == 0 {
        format!("ACS = 0/{} = 0", r.x)
    } else {
        format!("ACS = {r} ≈ {:.6}", r.value())
    }
}

fn emit(out_path: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out_path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

enum Failure {
    Usage(String),
    Data(Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

fn cmd_acs(
    args: &PairArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let seqs = load_inputs(&args.input.inputs, args.input.format, stderr)?;
    let (x, y) = two(seqs).map_err(Failure::Usage)?;
    let r = AcsEngine::new(&x, &y)?.acs()?;
    let report = format!(
        "{}\nx_name\t{}\ny_name\t{}\nN\t{}\nx_runs\t{}\ny_runs\t{}\nx\t{}\ny\t{}\nlsum\t{}\nacs\t{}\n",
        acs_headline(&r),
        x.name(),
        y.name(),
        x.run_count() + y.run_count(),
        x.run_count(),
        y.run_count(),
        x.text_length(),
        y.text_length(),
        r.lsum,
        r.value()
    );
    emit(args.out.as_deref(), stdout, &report)?;
    Ok(())
}

fn cmd_dist(
    args: &PairArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let seqs = load_inputs(&args.input.inputs, args.input.format, stderr)?;
    let (x, y) = two(seqs).map_err(Failure::Usage)?;
    let d = dist(&x, &y, args.log_base)?;
    let report = format!(
        "Dist = {:.6}\ndist\t{}\nlog_base\t{}\nacs_xy\t{}\nacs_yx\t{}\nacs_xx\t{}\nacs_yy\t{}\n",
        d.dist, d.dist, d.log_base, d.acs_xy, d.acs_yx, d.acs_xx, d.acs_yy
    );
    emit(args.out.as_deref(), stdout, &report)?;
    Ok(())
}

fn cmd_matrix(
    args: &MatrixArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let seqs = load_inputs(&args.input.inputs, args.input.format, stderr)?;
    if seqs.len() < 2 {
        return Err(Failure::Usage(format!(
            "matrix needs at least two sequences, found {}",
            seqs.len()
        )));
    }
    let m = distance_matrix(&seqs, args.log_base, args.threads)?;
    let text = match args.output {
        OutputFormat::Phylip => m.to_phylip(args.relaxed_names)?,
        OutputFormat::Tsv => m.to_tsv(),
    };
    emit(args.out.as_deref(), stdout, &text)?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let freq_rule = match args.inject_fault.as_deref() {
        None => FreqRule::Max,
        Some("freq-min") => FreqRule::Min,
        Some(other) => return Err(Failure::Usage(format!("unknown fault {other:?}"))),
    };
    let report = run_verification(
        args.seed,
        args.trials,
        args.n_max,
        EngineOptions { freq_rule },
    )?;
    if report.ok() {
        writeln!(stdout, "{report}").map_err(Error::from)?;
        Ok(())
    } else {
        Err(Failure::Verify(report.to_string()))
    }
}

fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let mut text = String::from("# runs doubling, run lengths 1..4\n");
    text.push_str(&render_table(&doubling_sweep(
        &args.sizes,
        args.reps,
        args.seed,
    )?));
    text.push_str(&format!(
        "\n# fixed N = {}, run lengths scaled\n",
        args.decouple_n
    ));
    text.push_str(&render_table(&decoupling_sweep(
        args.decouple_n,
        &args.scales,
        args.reps,
        args.seed,
    )?));
    let (x_len, y_len) = (1_000_000_000u64, 1_000_000u64);
    let (x, y) = unary_pair(x_len, y_len);
    let row = measure("unary", &x, &y, args.reps)?;
    let expect = unary_closed_form(x_len, y_len);
    text.push_str(&format!(
        "\n# unary pair (a,{x_len}) vs (a,{y_len})\n{}\nclosed form {expect}/{x_len}: {}\ntime_ms\t{:.3}\n",
        acs_headline(&row.acs),
        if row.acs.lsum == expect { "match" } else { "MISMATCH" },
        row.total().as_secs_f64() * 1e3
    ));
    stdout.write_all(text.as_bytes()).map_err(Error::from)?;
    Ok(())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Acs(a) => cmd_acs(a, stdout, stderr),
        Command::Dist(a) => cmd_dist(a, stdout, stderr),
        Command::Matrix(a) => cmd_matrix(a, stdout, stderr),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
        Err(Failure::Verify(report)) => {
            let _ = writeln!(stderr, "{report}");
            EXIT_VERIFY
        }
    }
}
