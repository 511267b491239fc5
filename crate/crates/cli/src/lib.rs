//! `literate-bench`: benchmark evaluation, corpus curation and the layout codec
//! from the command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | success |
//! | 1    | fatal error (unreadable input, orphan predictions, ...) |
//! | 2    | finished, but some predictions were malformed and read leniently |
//! | 64   | usage error |
//! | 65   | codec input could not be parsed |

mod codec_cmd;
mod curate_cmd;
mod eval_cmd;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FATAL: u8 = 1;
pub const EXIT_MALFORMED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

#[derive(Debug)]
pub(crate) struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn fatal(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FATAL,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

pub(crate) type CmdResult = Result<u8, Failure>;

#[derive(Debug, Parser)]
#[command(name = "literate-bench", version, about = "Document OCR / markdown benchmark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score predictions against a benchmark manifest.
    Eval(EvalArgs),
    /// Filter, deduplicate or mix corpus records.
    #[command(subcommand)]
    Curate(CurateCommand),
    /// Convert between page JSON and the layout wire formats.
    #[command(subcommand)]
    Codec(CodecCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Ocr,
    #[value(alias = "md")]
    Markdown,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    task: TaskArg,
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Directory for report.json and report.txt.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 4096)]
    bins: u32,
    #[arg(long, env = "LITERATE_BENCH_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct CommonCurate {
    /// Input JSONL; every record needs a string `id`.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, env = "LITERATE_BENCH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CurateCommand {
    /// Drop near-duplicates of `text` (MinHash + LSH), keeping the first of each cluster.
    Dedup {
        #[command(flatten)]
        common: CommonCurate,
        #[arg(long, default_value_t = 0.8)]
        threshold: f64,
        #[arg(long, default_value_t = 128)]
        k: usize,
        #[arg(long, default_value_t = 32)]
        bands: usize,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        /// Words per shingle.
        #[arg(long, default_value_t = 5)]
        shingle: usize,
        /// Deduplicate across all records instead of within each `source`.
        #[arg(long)]
        global: bool,
    },
    /// Keep records whose `text` and `markdown` token overlap exceeds the ratio.
    Align {
        #[command(flatten)]
        common: CommonCurate,
        #[arg(long, default_value_t = 0.95)]
        min_ratio: f64,
    },
    /// Keep records whose `text` is English with enough confidence.
    Lang {
        #[command(flatten)]
        common: CommonCurate,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
    },
    /// Sample a mixture of sources by ratio.
    Mix {
        /// JSON array of {"name", "path", "ratio"}; paths are relative to this file.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        total: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "LITERATE_BENCH_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tokens,
    Bracketed,
}

#[derive(Debug, Args)]
struct CodecIo {
    #[arg(long, value_enum)]
    format: Format,
    #[arg(long, default_value_t = 4096)]
    bins: u32,
    /// Read from this file instead of stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CodecCommand {
    /// Page JSON (or quantized lines JSON) to the wire format.
    Encode {
        #[command(flatten)]
        io: CodecIo,
    },
    /// Wire format to quantized lines JSON, or to page JSON when the page size is given.
    Decode {
        #[command(flatten)]
        io: CodecIo,
        #[arg(long, requires = "height")]
        width: Option<u32>,
        #[arg(long, requires = "width")]
        height: Option<u32>,
    },
}

/// Runs the tool with the given arguments (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => eval_cmd::run(a, stdout, stderr),
        Command::Curate(c) => curate_cmd::run(c, stdout),
        Command::Codec(c) => codec_cmd::run(c, stdin, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

pub(crate) fn check_jobs(jobs: Option<usize>) -> Result<(), Failure> {
    if jobs == Some(0) {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    Ok(())
}

pub(crate) fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|p| p.install(f))
            .map_err(|e| Failure::fatal(format!("thread pool: {e}"))),
    }
}

pub(crate) fn create_dir(dir: &std::path::Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::fatal(format!("{}: {e}", dir.display())))
}

pub(crate) fn write_file(path: &std::path::Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::fatal(format!("{}: {e}", path.display())))
}

pub(crate) fn open(path: &std::path::Path) -> Result<std::io::BufReader<std::fs::File>, Failure> {
    std::fs::File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|e| Failure::fatal(format!("{}: {e}", path.display())))
}
