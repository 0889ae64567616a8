//! `polycomplex`: batch front end for the exact polyhedral pipeline.
//!
//! Machine artifacts go to `--out`, a short human summary to stdout.
//! Exit status: 0 success, 1 verification failure, 2 input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polycomplex::polyhedra::rational::parse_rational;
use polycomplex::polyhedra::Rational;
use polycomplex::topology::{DualMoveKind, Ring};

#[derive(Parser, Debug)]
#[command(name = "polycomplex", version, about = "Exact rational polyhedral complexes and their invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Perturbation bound `p/q`.
    #[arg(long, global = true, value_parser = rational_arg)]
    pub bound: Option<Rational>,
    /// Degree cap for the no-limit check.
    #[arg(long, global = true, default_value_t = 2)]
    pub degree: usize,
    /// Coefficient ring for homology.
    #[arg(long, global = true, value_enum, default_value_t = RingArg::Z)]
    pub ring: RingArg,
    /// Where to write the artifact or report.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RingArg {
    Z,
    Q,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Z => Ring::Z,
            RingArg::Q => Ring::Q,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MoveArg {
    Barycentric,
    ConeOverStar,
}

impl From<MoveArg> for DualMoveKind {
    fn from(m: MoveArg) -> DualMoveKind {
        match m {
            MoveArg::Barycentric => DualMoveKind::Barycentric,
            MoveArg::ConeOverStar => DualMoveKind::ConeOverStar,
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("expected a rational p/q, found {s:?}"))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Voronoi complex of a PTS/1 site set, written as CPLX/1.
    Voronoi {
        #[arg(long)]
        points: PathBuf,
    },
    /// Simplicity of a site configuration (PTS/1) or of a complex (CPLX/1).
    CheckSimple {
        #[arg(long, required_unless_present = "complex", conflicts_with = "complex")]
        points: Option<PathBuf>,
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Seeded rational perturbation to a simple configuration (needs --bound).
    Perturb {
        #[arg(long)]
        points: PathBuf,
    },
    /// Certified Delaunay complex of a simple site set, written as SCX/1.
    Delaunay {
        #[arg(long)]
        points: PathBuf,
    },
    /// Voronoi complex clipped to an RGN/1 region, written as CPLX/1.
    Clip {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        region: PathBuf,
    },
    /// Nerve of a pure CPLX/1 complex, written as SCX/1.
    Nerve {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Parasitic span intersections of a CPLX/1 complex.
    Parasites {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Saturation of parasitic records along the morphisms.
    Saturate {
        #[arg(long)]
        complex: PathBuf,
        /// PARASITES/1 input; computed from the complex when absent.
        #[arg(long)]
        parasites: Option<PathBuf>,
    },
    /// Dimension and face-containment checks on saturated records.
    VerifyProper {
        #[arg(long)]
        complex: PathBuf,
        /// Saturated PARASITES/1 records; computed when absent.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Dimension-ordered blow-up schedule, written as LEDGER/1.
    BlowupPlan {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Simplicial homology of an SCX/1 complex over --ring.
    Homology {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Edge-path presentation of the fundamental group, written as GRP/1.
    Pi1 {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Q-superperfect certificate for an SCX/1 complex or a GRP/1 presentation.
    Superperfect {
        #[arg(long, required_unless_present = "presentation", conflicts_with = "presentation")]
        complex: Option<PathBuf>,
        #[arg(long)]
        presentation: Option<PathBuf>,
    },
    /// Barycentric or cone-over-star move on an SCX/1 complex.
    DualMove {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, value_enum)]
        kind: MoveArg,
        /// Target simplex as comma-separated vertex indices.
        #[arg(long, required = true, value_delimiter = ',')]
        target: Vec<usize>,
    },
    /// Dual complex of STRATA/1 normal-crossing data, written as SCX/1.
    DualComplex {
        #[arg(long)]
        strata: PathBuf,
    },
    /// Gluing-equation check that the line collapses, up to --degree.
    NoLimitCheck {
        /// Run the unsheared system and expect the line to survive.
        #[arg(long)]
        control: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(commands::Verdict::Passed) => ExitCode::SUCCESS,
        Ok(commands::Verdict::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
