//! `steiner`: Betti numbers of Steiner bundle moduli and GIT stability of
//! matrices of linear forms.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_convention, ConventionArg, Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "steiner", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Sign convention, `auto` to calibrate against the golden table, or an
    /// explicit one such as `+++pos`.
    #[arg(long, default_value = "auto", global = true, value_parser = parse_convention)]
    convention: ConventionArg,
    /// Directory for the cached calibration result.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers of M_{n,m,2} (m odd).
    Betti {
        #[arg(long)]
        n: usize,
        /// Defaults to n.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Euler characteristic of M_{n,m,2} from the closed formula.
    Euler {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Hodge numbers h^{p,p} of the configuration space M_l.
    HodgeMl {
        #[arg(long)]
        l: usize,
    },
    /// Torus fixed points of M_{n,m,2} with their weights.
    FixedPoints {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Weights and tangent counts at one fixed point, e.g. `1:0,1,2;1,2,3`
    /// or `2:0,1,2,3,3`.
    Weights {
        #[arg(long)]
        n: usize,
        point: String,
    },
    /// Stability verdict for a matrix file.
    Stability { file: PathBuf },
    /// Dimension of the degeneracy locus of a k = 2 matrix file.
    Degeneracy { file: PathBuf },
    /// Strata indices of a matrix file, or stratum codimensions for --n/--m.
    Strata {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        m: Option<usize>,
        #[arg(long, requires = "n")]
        j: Option<usize>,
    },
    /// Calibrate, then run every acceptance check.
    Selftest {
        /// Golden table CSV to use instead of the built-in one.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

pub enum Outcome {
    Done(String),
    Undecided(String),
    SelftestFailed(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli
        .jobs
        .map(usize::from)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let config = RunConfig {
        jobs,
        convention: cli.convention.0,
        format: cli.format,
        cache_dir: cli.cache_dir,
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| commands::run(cli.command, &config));
    let mut out = std::io::stdout().lock();
    match result {
        Ok(Outcome::Done(text)) => {
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Outcome::Undecided(text)) => {
            let _ = out.write_all(text.as_bytes());
            ExitCode::from(2)
        }
        Ok(Outcome::SelftestFailed(text)) => {
            let _ = out.write_all(text.as_bytes());
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
