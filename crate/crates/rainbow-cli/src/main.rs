//! `rainbow`: generate colourings and trees, embed rainbow trees, build
//! packings, labellings and double covers, verify them, and run the
//! statistical harness.
//!
//! Exit codes: 0 success, 2 a validated failure (no embedding found, a
//! verifier witness, a pass rate below threshold), 1 anything else.

mod commands;
mod dot;
mod inputs;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rainbow", version, about = "Rainbow trees in locally bounded edge-colourings of complete graphs")]
pub struct Cli {
    /// Worker threads for batch subcommands (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a colouring or a tree.
    Gen(GenArgs),
    /// Find a rainbow copy of a tree.
    Embed(EmbedArgs),
    /// Pack translated copies of a tree into a complete graph.
    Pack(PackArgs),
    /// Harmonious labelling of a tree.
    Label(LabelArgs),
    /// Double cover of `K_{2^k}` by translates of a tree.
    Odc(OdcArgs),
    /// Check an embedding, packing, double cover or labelling.
    Verify(VerifyArgs),
    /// Monte-Carlo checks of random vertex and colour sets.
    Stats(StatsArgs),
    /// Timed embedding runs over several trees and seeds.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// JSON output file; a manifest is written beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Graphviz export.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub mu: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub retries: usize,
    /// Skip the bounded search after the pipeline gives up.
    #[arg(long)]
    pub no_fallback: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(subcommand)]
    pub what: GenTarget,
}

#[derive(Subcommand, Debug)]
pub enum GenTarget {
    /// Colouring JSON from an inline spec (`nd:8`, `zsum:101`, `z2k:4`, `rr:12`, `rand:n:k:seed`, `group:2x3`).
    Colouring {
        spec: String,
        /// List every edge even for closed-form colourings.
        #[arg(long)]
        explicit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tree text from a shape (`path:n`, `star:l`, `spider:a,b`, `broom:h:b`, `caterpillar:a,b`, `double-star:a:b`, `random:n[:seed]`).
    Tree {
        shape: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    /// Colouring file or inline spec.
    #[arg(long)]
    pub colouring: String,
    /// Tree file or shape.
    #[arg(long)]
    pub tree: String,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PackArgs {
    #[arg(long)]
    pub tree: String,
    /// Host `K_{2t-1}`, decomposed exactly.
    #[arg(long)]
    pub exact: bool,
    /// Slack of the host `K_{2l+1}` with `2l+1 >= (2+slack)(t-1)+1`.
    #[arg(long, default_value_t = 0.2)]
    pub slack: f64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LabelArgs {
    #[arg(long)]
    pub tree: String,
    /// Group (`7`, `z7`, `2^3`, `2x3`); without it `Z_m` is searched upward from `|T|`.
    #[arg(long)]
    pub group: Option<String>,
    /// Largest `m` tried in the search (default `ceil(1.25 |T|)`).
    #[arg(long)]
    pub max_order: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OdcArgs {
    #[arg(long)]
    pub tree: String,
    /// Host `K_{2^rank}`.
    #[arg(long)]
    pub rank: u32,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyKind {
    Embedding,
    Packing,
    Odc,
    Harmonious,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = VerifyKind::Embedding)]
    pub kind: VerifyKind,
    /// JSON with `map`, `copies` or `labels`, as written by the other subcommands.
    #[arg(long, alias = "embedding")]
    pub input: PathBuf,
    /// Defaults to the tree recorded in the input.
    #[arg(long)]
    pub tree: Option<String>,
    /// Needed for embeddings.
    #[arg(long)]
    pub colouring: Option<String>,
    /// Overrides the group stored in a labelling.
    #[arg(long)]
    pub group: Option<String>,
    /// Require packings to cover every edge.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaArg {
    EdgeDensity,
    Multiplicity,
    Diversity,
    Neighbourhood,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeArg {
    Random,
    Interval,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingArg {
    Independent,
    Paired,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long, value_enum)]
    pub lemma: LemmaArg,
    #[arg(long)]
    pub colouring: String,
    #[arg(long)]
    pub p: f64,
    /// Colour probability for the neighbourhood check (default `p`).
    #[arg(long)]
    pub q: Option<f64>,
    /// `|A|`.
    #[arg(long)]
    pub a: Option<usize>,
    /// `|B|`; for diversity, all of `X` when omitted.
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 30)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ShapeArg::Random)]
    pub shape: ShapeArg,
    #[arg(long, value_enum, default_value_t = CouplingArg::Independent)]
    pub coupling: CouplingArg,
    /// Exit 2 when the pass rate is lower.
    #[arg(long, default_value_t = 0.95)]
    pub min_pass_rate: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub colouring: String,
    /// Tree files or shapes; repeat for several. A `random:n` shape draws a new tree per seed.
    #[arg(long, required = true)]
    pub tree: Vec<String>,
    /// Runs per tree, with seeds `0..seeds`.
    #[arg(long, default_value_t = 4)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub mu: f64,
    #[arg(long, default_value_t = 10)]
    pub retries: usize,
    /// Exit 2 when the success rate is lower.
    #[arg(long, default_value_t = 0.0)]
    pub min_success_rate: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(commands::Status::Success) => ExitCode::SUCCESS,
        Ok(commands::Status::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
