//! File formats and the `hcfold` command-line tool.
//!
//! Every command produces a JSON report (with `schema_version`) and a
//! plain-text rendering; `--json` selects the former.

pub mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{run, CliError, Report};

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_INVALID_FOLD: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "hcfold", version, about = "Folding, Markov and Gibbs cocycles of nearest-neighbour spaces")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Print the JSON report.
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Print the text report (default).
    #[arg(long, global = true)]
    pub text: bool,
    /// Cap on enumeration work (candidate assignments explored).
    #[arg(long, global = true, default_value_t = hcfold::DEFAULT_CAP)]
    pub cap: u64,
    /// Symmetry group: trivial, full-aut, stabilizer or file:<path>.
    #[arg(long, global = true, default_value = "trivial")]
    pub group: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graph folds, dismantling and automorphisms.
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Configuration spaces.
    Space {
        #[command(subcommand)]
        cmd: SpaceCmd,
    },
    /// Dimensions of the Markov and Gibbs cocycle spaces.
    Cocycles {
        space: PathBuf,
        /// Write the bases to this file.
        #[arg(long)]
        export_basis: Option<PathBuf>,
    },
    /// Folds of a configuration space.
    Fold {
        #[command(subcommand)]
        cmd: FoldCmd,
    },
    /// Restrict a cocycle on X to the fold described by a certificate.
    Restrict {
        space: PathBuf,
        certificate: PathBuf,
        cocycle: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Find an interaction realizing a cocycle by an exact linear solve.
    Solve {
        space: PathBuf,
        cocycle: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Extend an interaction on the fold to X and verify it.
    Build {
        space: PathBuf,
        certificate: PathBuf,
        cocycle: PathBuf,
        interaction: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Markov random field check and cocycle of a measure.
    Measure { space: PathBuf, measure: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    Folds { graph: PathBuf },
    Dismantle { graph: PathBuf },
    Autgroup { graph: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum SpaceCmd {
    Enumerate {
        space: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    Hom {
        domain: PathBuf,
        target: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    TmfCheck { space: PathBuf },
    SafeSymbols { space: PathBuf },
    Constraints { space: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum FoldCmd {
    /// List the available symbol folds.
    List { space: PathBuf },
    Check { space: PathBuf, a: String, b: String },
    Apply {
        space: PathBuf,
        a: String,
        b: String,
        /// Write the fold certificate here.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Write the folded space here.
        #[arg(long)]
        folded_output: Option<PathBuf>,
    },
    Sequence { space: PathBuf },
}
