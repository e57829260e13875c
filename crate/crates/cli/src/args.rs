use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "fiberwise", version, about = "Numerical calculus of relative Fourier-Mukai transforms")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Global {
    /// Seed for randomized workflows.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Assume a generic fibration (enables periodicity in P-class rewriting).
    #[arg(long, global = true)]
    pub generic: bool,
    /// Degree bound B of the stability oracle.
    #[arg(long, global = true)]
    pub bound: Option<i64>,
    /// Coefficient field: `rational` or `prime:<p>`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for scans.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Render the report as an aligned table instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
    /// Progress messages on standard error.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a transform kernel to a fiber class.
    Transform {
        /// Kernel record, e.g. {"a":1,"b":2,"c":0,"n":5}; `@path` reads a file.
        kernel: String,
        /// Fiber class record, e.g. {"r":1,"d":5,"space":"M"}.
        class: String,
        /// Apply the inverse transform instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Canonical representative of a P-class, with its derivation.
    Canonicalize { class: String },
    /// Decide equality of two P-classes.
    Equal {
        lhs: String,
        rhs: String,
        /// Kernel whose rank-one identities are registered as bridges.
        #[arg(long)]
        kernel: Option<String>,
        /// Degrees `d` of the registered identities (comma separated).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        degrees: Vec<i64>,
    },
    /// Validate a kernel record and print its matrix and inverse.
    Kernel { kernel: String },
    /// Hom dimension between two bundles, or h0/h1 of one.
    Hom { source: PathBuf, target: Option<PathBuf> },
    /// Whether a bundle is simple.
    Simple { bundle: PathBuf },
    /// Gieseker stability of a bundle, with a certificate when unstable.
    Stable { bundle: PathBuf },
    /// Seeded agreement scan between simplicity and stability.
    Scan { config: Option<PathBuf> },
    /// Euler characteristic of a sheaf class by Riemann-Roch.
    Chi {
        /// Shipped ring name or path to a ring file.
        ring: String,
        #[command(flatten)]
        sheaf: SheafArgs,
    },
    /// Relative Riemann-Roch pushforward to the base.
    Push {
        ring: String,
        #[command(flatten)]
        sheaf: SheafArgs,
        /// Base divisor whose pullback twists the sheaf, e.g. `h=1`.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
    },
    /// Cubic form and c2 pairings on divisors.
    Cubic {
        ring: String,
        /// Three divisors to evaluate; with none, the full table on the basis.
        #[arg(allow_hyphen_values = true)]
        divisors: Vec<String>,
    },
    /// Solve for the cubic form and c2 pairings of a moduli space.
    Solve {
        /// Sample-set file.
        samples: Option<PathBuf>,
        /// Generate a synthetic sample set from this seed instead.
        #[arg(long, conflicts_with = "samples")]
        synthetic: Option<u64>,
        /// Largest rank used in synthetic samples.
        #[arg(long, default_value_t = 24)]
        max_r: i64,
        /// Also write the synthetic sample set to this file.
        #[arg(long, requires = "synthetic")]
        emit_samples: Option<PathBuf>,
    },
    /// Check a ring presentation.
    Validate { ring: String },
    /// Run a workflow file.
    Run { workflow: PathBuf },
}

#[derive(Debug, Clone, Default, Args)]
pub struct SheafArgs {
    /// Full Chern character as terms, e.g. `1=2,h=3,pt=-9/2`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["rank", "c1", "c2", "c3"])]
    pub ch: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rank: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c3: Option<String>,
}
