use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wsrank::Exponent;

#[derive(Debug, Parser, Serialize)]
#[command(name = "wsrank", version, about = "Wasserstein stable ranks and algebraic Wasserstein distances")]
pub struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Output format of the main artifact.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Stable rank of a barcode as a step function.
    StableRank(StableRankArgs),
    /// Interleaving distance between the stable ranks of two barcodes.
    Interleave(PairArgs),
    /// Pairwise interleaving distances over a dataset manifest.
    DistanceMatrix(DatasetArgs),
    /// Wasserstein distance between two barcodes after the contour transform.
    Wasserstein(PairArgs),
    /// Zero-dimensional persistence of a PGM image or a filtered graph.
    Persistence(PersistenceArgs),
    /// Generate a synthetic image dataset with barcodes and a manifest.
    GenSynthetic(GenArgs),
    /// Learn an exponent and Gaussian-mixture contour that separate two classes.
    LearnMetric(LearnArgs),
    /// Leave-one-out k-nearest-neighbour error over a dataset manifest.
    Classify(ClassifyArgs),
    /// Reduce a presentation matrix and run the bar-to-bar algorithm.
    Reduce(ReduceArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct MetricArgs {
    /// Exponent p in [1, inf].
    #[arg(long, default_value = "1")]
    pub p: Exponent,

    /// Exponent q in [1, inf].
    #[arg(long, default_value = "1")]
    pub q: Exponent,

    /// `standard` or a contour JSON file.
    #[arg(long, default_value = "standard")]
    pub contour: String,

    /// Learned parameters (JSON with mu, sigma, lambda, p and optional
    /// floor); replaces --p and --contour and sets q = 1.
    #[arg(long, conflicts_with_all = ["p", "contour"])]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct StableRankArgs {
    /// Barcode CSV (`birth,death`, `inf` allowed).
    #[arg(long)]
    pub barcode: PathBuf,
    #[command(flatten)]
    pub metric: MetricArgs,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PairArgs {
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    #[command(flatten)]
    pub metric: MetricArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DatasetArgs {
    /// Dataset manifest; defaults to `<output dir>/manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub metric: MetricArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub out_dir: OutDir,
}

#[derive(Debug, Args, Serialize)]
pub struct PersistenceArgs {
    /// PGM image; super-level filtration reported as 255 - intensity.
    #[arg(long, conflicts_with_all = ["vertices", "edges"], required_unless_present = "vertices")]
    pub image: Option<PathBuf>,
    /// Vertex CSV `id,value`; sub-level filtration.
    #[arg(long, requires = "edges")]
    pub vertices: Option<PathBuf>,
    /// Edge CSV `u,v`.
    #[arg(long, requires = "vertices")]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct OutDir {
    /// Output directory.
    #[arg(long = "out-dir", env = "WSRANK_OUT", default_value = "wsrank-out")]
    pub dir: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    /// 1 or 2.
    #[arg(long)]
    pub dataset: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Images per class.
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Args, Serialize)]
pub struct LearnArgs {
    /// Dataset manifest; defaults to `<output dir>/manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Training configuration JSON; defaults apply to missing fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the configured number of iterations.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Overrides the configured seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Number of neighbours.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Demo {
    RunningExample,
    /// Same as running-example.
    Paper,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    /// Built-in example.
    #[arg(long, value_enum, conflicts_with = "input", required_unless_present = "input")]
    pub demo: Option<Demo>,
    /// Morphism JSON: `domain` and `codomain` barcodes and `images`, the
    /// codomain bars hit by each domain bar.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Treat the morphism as an epimorphism and compute its kernel.
    #[arg(long)]
    pub epi: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
