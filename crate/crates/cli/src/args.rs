use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "lgks", version, about = "Steady-state uniqueness audits for Lindblad models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Model file (JSON)
    pub path: PathBuf,
    /// Relative tolerance for rank and kernel decisions
    #[arg(long, default_value_t = lgks_core::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here (atomically) instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest accepted Hilbert dimension
    #[arg(long, default_value_t = lgks_core::superop::DEFAULT_MAX_DIM)]
    pub max_dim: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every criterion and the Liouvillian oracle
    Audit {
        #[command(flatten)]
        common: Common,
        /// Seed of the randomized combination search
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random combinations tried per search
        #[arg(long, default_value_t = 32)]
        search_draws: usize,
    },
    /// Emit a model file from the built-in catalog
    Zoo(ZooArgs),
    /// Stationary states from the Liouvillian kernel
    Steady {
        #[command(flatten)]
        common: Common,
    },
    /// Propagate initial states and report distances to the stationary state
    Evolve {
        #[command(flatten)]
        common: Common,
        /// Comma-separated times
        #[arg(long = "t", value_delimiter = ',', required = true, allow_negative_numbers = true)]
        times: Vec<f64>,
        /// ground, excited, maximally-mixed, basis:K or random:SEED
        #[arg(long, default_value = "maximally-mixed")]
        rho0: String,
        /// Random initial states (with random:SEED; sample k uses SEED+k)
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Liouvillian eigenvalues, gap and near-kernel counts
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn out_path(&self) -> Option<&Path> {
        match self {
            Command::Audit { common, .. }
            | Command::Steady { common }
            | Command::Evolve { common, .. }
            | Command::Spectrum { common } => common.out.as_deref(),
            Command::Zoo(z) => z.out.as_deref(),
        }
    }
}

#[derive(Debug, Args)]
pub struct ZooArgs {
    /// two-level-t0, two-level-finite-t, dephasing, n-level, spin-decay,
    /// fock-decay or lattice
    pub name: String,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Level splitting; the Hamiltonian is omega·σz/2, omega·S_z or omega·n
    #[arg(long)]
    pub omega: Option<f64>,
    /// Thermal occupation
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Number of levels (n-level)
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma-separated emission rates, d-1 of them
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub down: Option<Vec<f64>>,
    /// Comma-separated absorption rates, d-1 of them
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub up: Option<Vec<f64>>,
    #[arg(long)]
    pub spin: Option<f64>,
    /// Fock cutoff
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Lattice sites
    #[arg(long)]
    pub sites: Option<usize>,
    /// Local model of each lattice site
    #[arg(long)]
    pub local: Option<String>,
    /// Nearest-neighbour exchange strength
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
