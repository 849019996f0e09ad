mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser)]
#[command(name = "liedegen", version, about = "Exact checks for Lie algebra deformations and degenerations")]
struct Cli {
    /// Write a machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Print nothing; only the exit status is meaningful.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    LowerCentral,
    Derived,
}

#[derive(Args)]
struct IdealArgs {
    /// Algebra file (`*.alg.json`).
    alg: PathBuf,

    /// 1-based basis indices spanning the codimension-1 ideal, e.g. `2,3,4,5,6`.
    #[arg(long, value_delimiter = ',', required = true)]
    ideal: Vec<usize>,

    /// Derivation of the ideal (`*.map.json`), either in the ideal's basis or
    /// as a full matrix preserving it.
    #[arg(long)]
    derivation: PathBuf,

    /// 1-based index of the basis vector used as `X` (default: the first
    /// index outside the ideal).
    #[arg(long)]
    complement: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Jacobi identity on all basis triples.
    Jacobi { alg: PathBuf },
    /// Lower central or derived series.
    Series {
        alg: PathBuf,
        #[arg(long, value_enum, default_value = "lower-central")]
        kind: Kind,
    },
    /// Basis of the derivation algebra.
    Derivations {
        alg: PathBuf,
        /// Only diagonal derivations, as primitive integer weight vectors.
        #[arg(long)]
        diagonal: bool,
    },
    /// Eigenspace grading induced by a diagonalizable derivation.
    Grading {
        alg: PathBuf,
        #[arg(long)]
        derivation: PathBuf,
    },
    /// Build the 2-cocycle attached to an ideal and a derivation.
    Cocycle(IdealArgs),
    /// Build the linear deformation mu + t*mu_D.
    Deform {
        #[command(flatten)]
        args: IdealArgs,
        /// Save the curve as an algebra file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check mu1(g e_i, g e_j) = g mu_t(e_i, e_j) on all pairs.
    Witness {
        mu1: PathBuf,
        curve: PathBuf,
        g: PathBuf,
        /// The curve is read with t replaced by t^N.
        #[arg(long, default_value_t = 1)]
        reparametrization: u32,
    },
    /// Structure constants at t = 0.
    Limit { curve: PathBuf },
    /// Full degeneration certificate.
    Pipeline {
        alg: PathBuf,
        /// Derivation: of the ideal when `--ideal` is given, otherwise a
        /// semisimple derivation of the whole algebra.
        #[arg(long)]
        derivation: PathBuf,
        #[arg(long, value_delimiter = ',')]
        ideal: Option<Vec<usize>>,
        #[arg(long)]
        complement: Option<usize>,
        /// Explicit witness family; constructed from the derivation otherwise.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        reparametrization: u32,
    },
    /// Certify every complete bundled fixture.
    #[command(name = "verify-paper")]
    VerifyFixtures,
    /// Supply structure constants for a bundled fixture and certify it.
    Attach {
        fixture: String,
        alg: PathBuf,
        /// Overwrite the constants of an already complete fixture.
        #[arg(long)]
        replace: bool,
    },
    /// Write a bundled file (fixture, template) to disk.
    Export {
        name: String,
        #[arg(long, short)]
        output: PathBuf,
    },
}

fn configure_threads() {
    if let Ok(v) = std::env::var("LIEDEGEN_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => Report::from_error(commands::name(&cli.command), &e),
    };
    if !cli.quiet {
        report.print();
    }
    if let Some(path) = &cli.json {
        if let Err(e) = report.write_json(path) {
            if !cli.quiet {
                eprintln!("error: cannot write {}: {e}", path.display());
            }
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.status)
}
