use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "nod",
    version,
    about = "Onion decomposition, nested configuration models and network onion divergence"
)]
pub struct Cli {
    /// Suppress warnings on standard error.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Onion layers and coreness of every node, plus the layer table.
    Decompose(DecomposeArgs),
    /// Degree, layer and edge-matrix statistics of all four models.
    Stats(InputArgs),
    /// Entropies, description lengths and the selected model.
    Mdl(MdlArgs),
    /// Network onion divergence between two graphs or across a directory.
    Compare(CompareArgs),
    /// Draw random graphs.
    Sample(SampleArgs),
    /// Batch experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge-list file, or `-` for standard input.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Edge-list file, or `-` for standard input.
    pub input: PathBuf,

    #[arg(long, value_enum, default_value = "tsv")]
    pub format: Format,

    /// Write `nodes.tsv` and `layers.tsv` here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MdlArgs {
    /// Edge-list file, or `-` for standard input.
    #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
    pub input: Option<PathBuf>,

    /// Score every file in this directory, one TSV row each.
    #[arg(long)]
    pub corpus: Option<PathBuf>,

    /// Write the output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Align {
    Index,
    Coreness,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Two edge-list files.
    #[arg(num_args = 2, required_unless_present = "matrix", conflicts_with = "matrix")]
    pub inputs: Vec<PathBuf>,

    /// Compare every pair of files in this directory.
    #[arg(long)]
    pub matrix: Option<PathBuf>,

    /// How layers of the two graphs are matched.
    #[arg(long, value_enum, default_value = "index")]
    pub align: Align,

    /// Matrix mode: write `d_cm.tsv`, `d_ccm.tsv`, `d_lcm.tsv` and `d_lccm.tsv` here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleModel {
    Er,
    Ba,
    Rt,
    Cm,
    Ccm,
    Lcm,
    Lccm,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: SampleModel,

    /// Edge list whose statistics the configuration models reproduce.
    #[arg(long)]
    pub from: Option<PathBuf>,

    /// Node count for er, ba and rt.
    #[arg(long)]
    pub n: Option<usize>,

    /// Edge count for er.
    #[arg(long)]
    pub e: Option<usize>,

    /// Edges added per node for ba.
    #[arg(long, default_value_t = 1)]
    pub m: usize,

    /// Replicate `i` uses `seed + i`. Chosen at random and reported when absent.
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, default_value_t = 1)]
    pub count: usize,

    /// Attempts per layered sample before giving up.
    #[arg(long, default_value_t = nod_core::sampling::DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: usize,

    /// Write one edge list per sample here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    /// Clustering and mean shortest path of ensemble samples fitted to one ER anchor.
    Dispersal(DispersalArgs),
    /// Divergences between random graph pairs drawn from ba, er and rt.
    DivergenceGrid(GridArgs),
}

#[derive(Debug, Args)]
pub struct DispersalArgs {
    #[arg(long, default_value_t = 250)]
    pub nodes: usize,

    #[arg(long, default_value_t = 311)]
    pub edges: usize,

    /// Samples per ensemble.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,

    /// Comma-separated subset of er, cm, ccm, lcm, lccm.
    #[arg(long, value_delimiter = ',', default_value = "er,cm,ccm,lcm")]
    pub ensembles: Vec<String>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, default_value_t = nod_core::sampling::DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: usize,

    /// Emit per-ensemble variances with bootstrap standard errors instead of raw rows.
    #[arg(long)]
    pub summary: bool,

    /// Bootstrap resamples for `--summary`.
    #[arg(long, default_value_t = 200)]
    pub bootstrap: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 200)]
    pub nodes: usize,

    /// Graph pairs per model combination.
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,

    /// Comma-separated subset of ba, er, rt.
    #[arg(long, value_delimiter = ',', default_value = "ba,er,rt")]
    pub models: Vec<String>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_enum, default_value = "index")]
    pub align: Align,

    #[arg(long)]
    pub out: Option<PathBuf>,
}
