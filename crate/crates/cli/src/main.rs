use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chromsym::{basis_from_name, CliError};
use chromsym_core::csf::Algorithm;
use chromsym_core::Limits;
use clap::{Args, Parser, Subcommand, ValueEnum};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (format chromsym/1)");

/// Chromatic symmetric and multisymmetric functions of weighted graphs.
#[derive(Parser)]
#[command(name = "chromsym", version = VERSION, long_version = long_version())]
struct Cli {
    #[command(flatten)]
    limits: LimitArgs,
    #[command(subcommand)]
    command: Command,
}

fn long_version() -> &'static str {
    let s = format!("{} (library chromsym-core {}, format chromsym/1)", env!("CARGO_PKG_VERSION"), chromsym_core::VERSION);
    Box::leak(s.into_boxed_str())
}

#[derive(Args)]
struct LimitArgs {
    /// Largest norm of a graded component that may be enumerated.
    #[arg(long, global = true, default_value_t = Limits::default().partition_norm)]
    max_partition_norm: u32,
    /// Vertex bound for the coloring algorithm.
    #[arg(long, global = true, default_value_t = Limits::default().coloring_vertices)]
    max_coloring_vertices: usize,
    /// Edge bound for the edge-subset algorithm.
    #[arg(long, global = true, default_value_t = Limits::default().subset_edges)]
    max_subset_edges: usize,
    /// Vertex bound for canonical labelling.
    #[arg(long, global = true, default_value_t = Limits::default().canon_vertices)]
    max_canon_vertices: usize,
    /// Vertex bound for kernel rewriting.
    #[arg(long, global = true, default_value_t = Limits::default().rewrite_vertices)]
    max_rewrite_vertices: usize,
    /// Bound on maps enumerated for reduction coefficients.
    #[arg(long, global = true, default_value_t = Limits::default().gp_maps)]
    max_gp_maps: u64,
    /// Bound on each side of a homogeneous pair.
    #[arg(long, global = true, default_value_t = Limits::default().pair_side)]
    max_pair_side: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            partition_norm: self.max_partition_norm,
            coloring_vertices: self.max_coloring_vertices,
            subset_edges: self.max_subset_edges,
            canon_vertices: self.max_canon_vertices,
            rewrite_vertices: self.max_rewrite_vertices,
            gp_maps: self.max_gp_maps,
            pair_side: self.max_pair_side,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Auto,
    Colorings,
    Subsets,
    Delcon,
    Verify,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Auto => Algorithm::Auto,
            Algo::Colorings => Algorithm::Colorings,
            Algo::Subsets => Algorithm::Subsets,
            Algo::Delcon => Algorithm::DeletionContraction,
            Algo::Verify => Algorithm::Verify,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic function of a graph in a chosen basis.
    Compute {
        #[arg(long)]
        graph: PathBuf,
        /// One of m, mtilde, p, e, r.
        #[arg(long, default_value = "p")]
        basis: String,
        #[arg(long, value_enum, default_value = "auto")]
        algo: Algo,
    },
    /// Decide kernel membership of a graph combination.
    Kernel {
        #[arg(long)]
        combo: PathBuf,
        /// Write the rewriting certificate here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Lift a combination into an augmented graph and check validity.
    Lift {
        #[arg(long)]
        combo: PathBuf,
        #[arg(long)]
        augmentation: PathBuf,
        /// Permutation list, or a certificate written by `kernel`.
        #[arg(long)]
        sufficient_set: Option<PathBuf>,
    },
    /// Reduce a (3+1)-free poset to (2+2)-free ones.
    GpReduce {
        #[arg(long)]
        poset: PathBuf,
        /// Write the per-step trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Test e-positivity of a graph's chromatic function.
    Epos {
        #[arg(long)]
        graph: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn run(cli: Cli) -> Result<String, CliError> {
    let limits = cli.limits.limits();
    match cli.command {
        Command::Compute { graph, basis, algo } => {
            chromsym::compute(&read(&graph)?, basis_from_name(&basis)?, algo.into(), &limits)
        }
        Command::Kernel { combo, certificate } => {
            let (verdict, cert) = chromsym::kernel(&read(&combo)?, &limits)?;
            if let Some(path) = certificate {
                write(&path, &cert)?;
            }
            Ok(verdict)
        }
        Command::Lift { combo, augmentation, sufficient_set } => {
            let set = sufficient_set.as_deref().map(read).transpose()?;
            chromsym::lift_command(&read(&combo)?, &read(&augmentation)?, set.as_deref(), &limits)
        }
        Command::GpReduce { poset, trace } => {
            let (leaves, steps) = chromsym::gp_reduce_command(&read(&poset)?, &limits)?;
            if let Some(path) = trace {
                write(&path, &steps)?;
            }
            Ok(leaves)
        }
        Command::Epos { graph } => chromsym::epos(&read(&graph)?, &limits),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
