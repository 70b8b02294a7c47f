//! `gridlab`: generators, lemma checkers and seeded experiments.
//!
//! Exit codes: 0 when every emitted check passed (or was inconclusive), 1
//! when at least one check failed with a witness, 2 on usage or input errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "gridlab",
    version,
    about = "Transductions, flip structures and slice decompositions on small graphs"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search budget for exact width solvers; exhausted searches downgrade to bounds.
    #[arg(long, global = true, default_value_t = gridlab::width::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Write a generated instance as JSON.
    #[command(subcommand)]
    Generate(Generate),
    /// Run a checker and emit one JSON line per checked instance or window.
    Verify(Verify),
    /// Run an end-to-end experiment.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Treewidth or cliquewidth with a verified certificate.
    Width(WidthArgs),
    /// Apply a transduction to a colored graph.
    Transduce(TransduceArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generate {
    /// The grid cube Q_N with coordinates.
    Cube {
        #[arg(long)]
        n: usize,
        /// Attach the coordinate-mod-3 colors X0..Z2.
        #[arg(long)]
        mod3_colors: bool,
    },
    /// The diagonal cube with coordinates.
    Diagcube {
        #[arg(long)]
        n: usize,
    },
    /// H ⊠ P_p; `--embedding-out` also writes the identity embedding.
    Product {
        /// A graph file, or a family `path:N`, `cycle:N`, `complete:N`, `edgeless:N`.
        #[arg(long)]
        h: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        embedding_out: Option<PathBuf>,
    },
    /// A flip structure whose flip is Q_N; the cube witness rides in `graph.coords`.
    FlippedCube {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Layout::Random)]
        layout: Layout,
        /// Number of leading parts without pattern edges.
        #[arg(long, default_value_t = 0)]
        isolated: usize,
        #[arg(long, default_value_t = 13)]
        min_part: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    Random,
    Slabs,
    Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    InducedSubgrid,
    AvoidSubcube,
    SmallDist,
    Connected,
    ComponentDiameter,
    DiameterBound,
    LocalityWindow,
    ConditionI,
    ConditionIi,
    TwProduct,
}

#[derive(Debug, Args, Serialize)]
pub struct Verify {
    #[arg(value_enum)]
    pub lemma: Lemma,
    /// Flip structure (flip lemmas) or graph (slice and width checks).
    #[arg(long)]
    pub input: PathBuf,
    /// Center vertex for induced-subgrid.
    #[arg(long, default_value_t = 0)]
    pub vertex: usize,
    /// Ball radius for induced-subgrid.
    #[arg(long, default_value_t = 3)]
    pub radius: usize,
    /// One-based part for avoid-subcube.
    #[arg(long)]
    pub part: Option<usize>,
    /// One-based parts `i,j` for small-dist; all pattern edges when absent.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub parts: Option<Vec<usize>>,
    /// Join distance parameter for diameter-bound; defaults to λ (0 without pattern edges).
    #[arg(long)]
    pub alpha: Option<usize>,
    /// Parts count for diameter-bound, window length for condition-ii and
    /// locality-window, path length for tw-product.
    #[arg(long)]
    pub k: Option<usize>,
    /// Interpretation formula in x, y for locality-window.
    #[arg(long)]
    pub formula: Option<String>,
    #[command(flatten)]
    pub slices: SliceArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SliceArgs {
    /// Slice decomposition file.
    #[arg(long)]
    pub slices: Option<PathBuf>,
    /// Product embedding file.
    #[arg(long)]
    pub embedding: Option<PathBuf>,
    /// Embedding derived from the input's cube coordinates.
    #[arg(long, value_enum)]
    pub cube_embedding: Option<CubeEmbedding>,
    /// Axis for fiber embeddings.
    #[arg(long, default_value_t = 2)]
    pub axis: usize,
    /// Layers per slice.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Extension radius of windows.
    #[arg(long, default_value_t = 0)]
    pub r: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubeEmbedding {
    /// Fibers along `--axis`, one layer per coordinate value.
    Fiber,
    /// Grid positions (i, j) with layer i + j + k − 2.
    Layering,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Transduce colored Q_N and compare with the diagonal cube.
    DiagPipeline {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// Even/odd split of a fiber slice decomposition of the diagonal cube.
    SliceSplit {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        axis: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Seeded bipartitions of the diagonal cube with the larger side's treewidth.
    BipartitionSample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Emit one line per bipartition (always on when exhaustive).
        #[arg(long)]
        records: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WidthKindArg {
    Tw,
    Cw,
}

#[derive(Debug, Args, Serialize)]
pub struct WidthArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = WidthKindArg::Tw)]
    pub kind: WidthKindArg,
    /// Largest label count tried by the exact cliquewidth search.
    #[arg(long, default_value_t = gridlab::width::EXACT_CLIQUEWIDTH_LIMIT)]
    pub max_labels: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TransduceArgs {
    /// Colored graph.
    #[arg(long)]
    pub input: PathBuf,
    /// Transduction file; required unless `--diag`.
    #[arg(long, required_unless_present = "diag")]
    pub transduction: Option<PathBuf>,
    /// Use the built-in diagonal transduction.
    #[arg(long)]
    pub diag: bool,
    /// Run file; defaults to the input's colors with every vertex kept.
    #[arg(long)]
    pub run: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
