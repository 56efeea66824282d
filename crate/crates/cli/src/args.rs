use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact Lipschitz-free norms, metric constructions and equivalence
/// witnesses on finite pointed metric spaces.
#[derive(Parser, Debug)]
#[command(name = "lipfree", version)]
pub struct Cli {
    /// How numbers in reports are rendered; spaces and witnesses are always exact.
    #[arg(long, value_enum, default_value_t = Mode::Exact, global = true)]
    pub mode: Mode,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Run on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the metric axioms; exit 1 listing every violation.
    Validate { space: PathBuf },

    /// Free norm of a finite combination by both solvers, with certificates.
    Norm {
        space: PathBuf,
        /// Terms as `label:rational`, comma separated, e.g. `1:1,2:-1/2`.
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },

    /// Build a construction and its witness.
    #[command(subcommand)]
    Construct(Construct),

    /// Inspect a witness file (or any document with a `witness` entry).
    Witness {
        #[arg(value_enum)]
        action: WitnessAction,
        witness: PathBuf,
    },

    /// Least constant K with ‖f̂‖ ≤ K·L(f) for scalar f on a basis.
    BasisConstant {
        /// Basis document (or a document with a `basis` entry).
        basis: PathBuf,
    },

    /// Covering numbers, doubling constant and an Assouad-dimension estimate.
    Doubling(DoublingArgs),

    /// Run the seeded property batteries.
    Suite(SuiteArgs),
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Coproduct of two pointed spaces with glued base points.
    Sum { left: PathBuf, right: PathBuf },

    /// Quotient by a set, or the witness splitting off a retract.
    Quotient {
        space: PathBuf,
        /// Labels of the set collapsed to a point, comma separated.
        #[arg(long, conflicts_with = "retraction", required_unless_present = "retraction")]
        collapse: Option<String>,
        /// Retraction as `label:image` pairs; unlisted points are fixed.
        #[arg(long)]
        retraction: Option<String>,
        /// Label of the collapsed class.
        #[arg(long)]
        class_label: Option<String>,
    },

    /// Rescale every point evaluation to unit norm.
    Normalize { space: PathBuf },

    /// Split a basis along a projection.
    Project {
        /// Basis document, or a space (its point evaluations are the basis).
        basis: PathBuf,
        /// Images as `label:label` pairs; the base label stands for zero and
        /// unlisted vectors are fixed.
        #[arg(long)]
        projection: String,
    },

    /// Telescoping witness onto the unit path.
    Discrete { space: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessAction {
    Check,
    Opnorm,
    Condition,
}

#[derive(Args, Debug)]
pub struct DoublingArgs {
    pub space: PathBuf,
    /// Scales to evaluate instead of the default grid, comma separated.
    #[arg(long)]
    pub scales: Option<String>,
    /// Largest ball solved exactly by branch and bound.
    #[arg(long, env = "LIPFREE_EXACT_THRESHOLD", default_value_t = lipfree::doubling::DEFAULT_EXACT_THRESHOLD)]
    pub exact_threshold: usize,
    /// Also write `scale,count,exact` rows here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Skip the Assouad-dimension estimate.
    #[arg(long)]
    pub no_assouad: bool,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest space size.
    #[arg(long, default_value_t = 8)]
    pub sizes: usize,
    /// Random spaces per property.
    #[arg(long, default_value_t = 200)]
    pub spaces: usize,
    /// Let the flow solver see stretched distances.
    #[arg(long)]
    pub inject_fault: bool,
}
