//! `btl`: batch front end for block Toeplitz semi-commutator and commutator
//! diagnostics. Symbols are read from JSON files, verdicts are written as JSON
//! and scans as CSV.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use btl_core::criteria::ScanMode;
use btl_core::generate::Kind;
use clap::{Args, Parser, Subcommand};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "btl", version, about = "Semi-commutator and commutator criteria for block Toeplitz operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Pair {
    /// Symbol file for F.
    f: PathBuf,
    /// Symbol file for G.
    g: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide T_F T_G = T_{FG} exactly and with the criterion at z = 0.
    CheckZeroSemicommutator {
        #[command(flatten)]
        pair: Pair,
        /// Max-abs entry below which the exact semi-commutator counts as zero.
        #[arg(long, default_value_t = 1e-12)]
        exact_zero: f64,
        /// Criterion norm below which the criterion counts as zero.
        #[arg(long, default_value_t = 1e-10)]
        criterion_zero: f64,
    },
    /// Decide T_F T_G = T_G T_F.
    CheckZeroCommutator {
        #[command(flatten)]
        pair: Pair,
    },
    /// Decide whether T_F is normal.
    CheckNormal {
        /// Symbol file for F.
        f: PathBuf,
    },
    /// Evaluate a criterion on a polar grid and write CSV.
    Scan {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value = "semicommutator")]
        mode: ModeArg,
        /// Comma-separated radii in [0, 1).
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        /// Number of equispaced angles 2πj/count.
        #[arg(long, default_value_t = 8)]
        angles: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: available parallelism; BTL_THREADS overrides).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Certificate (A, R) for a zero Hankel-product sum, or the Ξ₂ minimizer at --z.
    Certificate {
        #[command(flatten)]
        pair: Pair,
        /// Column of G used as g; the f_k are all columns of F.
        #[arg(long, default_value_t = 0)]
        column: usize,
        /// Evaluate Ξ₂ at this point instead; f is then column --column of F.
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        z: Option<Vec<f64>>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Ξ₂(z) for f = column --column of F and g = column --column of G.
    Xi2 {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        column: usize,
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true, default_values_t = [0.0, 0.0])]
        z: Vec<f64>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compare the Gram and Poisson evaluations of the trace identity on a grid.
    TraceIdentity {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.3, 0.6, 0.9])]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        angles: usize,
    },
    /// Write a built-in symbol as JSON.
    Generate {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Jump location of the square wave.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phase: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, Args)]
struct Sampling {
    /// Random permutations to try when n exceeds the exhaustive limit.
    #[arg(long)]
    perm_samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Semicommutator,
    Commutator,
    Normality,
}

impl From<ModeArg> for ScanMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Semicommutator => ScanMode::Semicommutator,
            ModeArg::Commutator => ScanMode::Commutator,
            ModeArg::Normality => ScanMode::Normality,
        }
    }
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum KindArg {
    Squarewave,
    Random,
    Analytic,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Squarewave => Kind::Squarewave,
            KindArg::Random => Kind::Random,
            KindArg::Analytic => Kind::Analytic,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    use commands as c;
    match cli.command {
        Command::Scan { pair, mode, radii, angles, out, threads } => {
            let threads = c::thread_count(std::env::var("BTL_THREADS").ok().as_deref(), threads)?;
            c::scan(&pair.f, &pair.g, mode.into(), &radii, angles, out.as_deref(), threads)
        }
        Command::Generate { kind, n, degree, seed, phase, out } => {
            c::generate(kind.into(), n, degree, seed, phase, out.as_deref())
        }
        // Everything else runs single-threaded.
        other => c::single_threaded(move || match other {
            Command::CheckZeroSemicommutator { pair, exact_zero, criterion_zero } => {
                c::check_zero_semicommutator(&pair.f, &pair.g, exact_zero, criterion_zero)
            }
            Command::CheckZeroCommutator { pair } => c::check_zero_commutator(&pair.f, &pair.g),
            Command::CheckNormal { f } => c::check_normal(&f),
            Command::Certificate { pair, column, z, sampling } => {
                c::certificate(&pair.f, &pair.g, column, z.as_deref(), sampling.perm_samples, sampling.seed)
            }
            Command::Xi2 { pair, column, z, sampling } => {
                c::xi2(&pair.f, &pair.g, column, &z, sampling.perm_samples, sampling.seed)
            }
            Command::TraceIdentity { pair, radii, angles } => c::trace_identity(&pair.f, &pair.g, &radii, angles),
            Command::Scan { .. } | Command::Generate { .. } => unreachable!(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("btl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
