use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "kappa",
    version,
    about = "Cutset, percolation, random-walk and free-field experiments on finite graphs"
)]
pub struct Cli {
    /// Output format; tabular commands default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for Monte Carlo fan-out.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON file whose keys mirror the command-line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output path, or `csv` / `json` as a format shorthand.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
pub struct GraphArgs {
    /// Edge-list file, corpus name, or family such as `path5`, `grid:3x3`,
    /// `grid:4x4:torus`, `box3d:3x3x3`, `star3`, `cycle6`.
    #[arg(long)]
    pub graph: String,
    /// `boundary`, `none`, or a vertex list `0,4`; overrides the file's.
    #[arg(long)]
    pub horizon: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct Sampling {
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Minimal cutset enumeration and minimum cuts.
    Cutsets {
        #[command(subcommand)]
        cmd: CutsetsCmd,
    },
    /// Bernoulli bond percolation.
    Perc {
        #[command(subcommand)]
        cmd: PercCmd,
    },
    /// Chained sequences for the connectivity lower bound.
    Chain {
        #[command(subcommand)]
        cmd: ChainCmd,
    },
    /// Covering sums of symmetric sub-stochastic matrices.
    Cover {
        #[command(subcommand)]
        cmd: CoverCmd,
    },
    /// Killed random walks and the subdivided-graph sampler.
    Rw {
        #[command(subcommand)]
        cmd: RwCmd,
    },
    /// Gaussian free field.
    Gff {
        #[command(subcommand)]
        cmd: GffCmd,
    },
    /// Graph generation.
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Brute,
    Components,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutsetsCmd {
    /// Counts `q_n(v)` for `n = 1..=nmax`.
    Enum {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "components")]
        algo: Algo,
    },
    /// Distinct minimum cuts by repeated random contraction.
    Karger {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PercCmd {
    /// `P_p(v ↔ horizon)`.
    Theta {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        vertex: usize,
        /// Exact enumeration (the default without --trials).
        #[arg(long, conflicts_with = "trials")]
        exact: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Exact finite-cluster probability against the union bound.
    Peierls {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        vertex: usize,
        /// One or more comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// Largest cutset size counted; all sizes by default.
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Hit counts of the exposed boundary of the cluster of `v`.
    Census {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Exact positive-association checks for pairs of connection events.
    Fkg {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: f64,
        /// Pair of events `a-b,c-d`, where `h` stands for the horizon;
        /// repeatable. Defaults to all pairs `u-h,v-h`.
        #[arg(long = "events")]
        events: Vec<String>,
    },
    /// `-ln P(S isolated)` against the isoperimetric profile.
    Strong {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        c_fit: f64,
        /// Largest connected set size considered.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Restrict the profile minimum to connected sets.
        #[arg(long)]
        connected_only: bool,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainCmd {
    /// Greedy chained sequence from `o` with its certificate.
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated vertices of `A`.
        #[arg(long = "setA", alias = "set-a")]
        set_a: String,
        /// Comma-separated vertices of `B ⊆ A`.
        #[arg(long = "setB", alias = "set-b")]
        set_b: String,
        #[arg(long)]
        origin: usize,
        #[arg(long)]
        p: f64,
        /// Defaults to `min_u P(u ↔ B)`.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, conflicts_with = "trials")]
        exact: bool,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct MatrixArgs {
    /// First line `n`, then `n` rows of `n` reals.
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverCmd {
    Exact {
        #[command(flatten)]
        matrix: MatrixArgs,
    },
    Mc {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Compares the covering sum with `δ^n`; Monte Carlo with --trials.
    Verify {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hitting,
    Green,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RwCmd {
    /// `d_v P_v(no return)` for every interior vertex.
    Escape {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, conflicts_with = "trials")]
        exact: bool,
        #[arg(long, value_enum, default_value = "green")]
        method: Method,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Cutsets decoded from walk ranges on the length-2 subdivision.
    Census {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        origin: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Crossing matrix between the midpoints of a cutset.
    Crossing {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated edge ids.
        #[arg(long)]
        cutset: String,
        #[arg(long)]
        origin: usize,
    },
    /// Escape bounds and the visit identity on the length-2 subdivision.
    Subdiv {
        #[command(flatten)]
        graph: GraphArgs,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GffCmd {
    /// Green matrix of the walk killed at the horizon.
    Green {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Excursion-set events on the length-3 subdivision.
    Pipeline {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        origin: usize,
        #[arg(long)]
        cutset: String,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphCmd {
    /// Prints a generated graph in the edge-list format.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
    },
}
