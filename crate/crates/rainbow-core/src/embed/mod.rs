//! Rainbow tree embedding: exhaustive search on small hosts, bounded
//! randomized search for small trees, and the layered randomized pipeline
//! otherwise.

mod partition;
mod pipeline;
mod small;

pub use partition::{
    layer_probabilities, sample_given_reserve, sample_partitions, sample_reserve, PartitionPlan, SIMPLEX_TOLERANCE,
    STAR_CLASS,
};
pub use small::{brute_force_embed, greedy_embed_small, BRUTE_FORCE_MAX_HOST, BRUTE_FORCE_MAX_TREE};

use serde::{Deserialize, Serialize};

use crate::colouring::{ColourId, EdgeColouring, VertexId};
use crate::error::{Error, Result};
use crate::matching::SwitchingParams;
use crate::rng::{derive_seed, substream};
use crate::stars::DEFAULT_STAR_BUDGET;
use crate::tree::Tree;
use crate::verify::{check_rainbow_embedding, Verdict};
use small::{backtrack_embed, Search};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub epsilon: f64,
    pub mu: f64,
    /// Star threshold `D`; `None` selects `min(⌈ln² n⌉, 10)`.
    pub star_threshold: Option<usize>,
    /// Reserve probability; `None` selects `ε/(2k)`.
    pub p0: Option<f64>,
    pub retries: usize,
    pub seed: u64,
    /// Hosts with at most this many vertices are searched exhaustively.
    pub fallback_cutoff: usize,
    /// Smallest number of leaves sharing one class; `None` selects `⌈2√n⌉`.
    pub min_group_size: Option<usize>,
    /// Split overrides; `None` keeps the defaults of [`SplitParams`](crate::tree::SplitParams).
    pub bare_path_len: Option<usize>,
    pub leaf_batch: Option<usize>,
    /// Run one bounded randomized search when every pipeline attempt fails.
    pub search_fallback: bool,
    pub switching: SwitchingParams,
    pub star_budget: usize,
    pub path_budget: usize,
    /// Node budget per attempt of the randomized search used for small trees.
    pub search_budget: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            epsilon: 0.2,
            mu: 0.01,
            star_threshold: None,
            p0: None,
            retries: 10,
            seed: 0,
            fallback_cutoff: 20,
            min_group_size: None,
            bare_path_len: None,
            leaf_batch: None,
            search_fallback: true,
            switching: SwitchingParams::default(),
            star_budget: DEFAULT_STAR_BUDGET,
            path_budget: 50_000_000,
            search_budget: 2_000_000,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < self.epsilon && self.epsilon < 1.0) {
            return Err(Error::Parameter(format!(
                "need 0 < mu < epsilon < 1, got mu = {} and epsilon = {}",
                self.mu, self.epsilon
            )));
        }
        if let Some(p0) = self.p0 {
            if !(p0 > 0.0 && p0 < 1.0) {
                return Err(Error::Parameter(format!("p0 must lie in (0, 1), got {p0}")));
            }
        }
        if self.retries == 0 {
            return Err(Error::Parameter("retries must be at least 1".into()));
        }
        if self.star_threshold == Some(0) {
            return Err(Error::Parameter("star threshold must be at least 1".into()));
        }
        self.switching.validate()
    }

    pub fn p0_for(&self, k: usize) -> f64 {
        self.p0.unwrap_or(self.epsilon / (2.0 * k as f64))
    }
}

/// An injective map of tree vertices to host vertices whose edge colours,
/// listed in tree edge order, are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowEmbedding {
    pub map: Vec<VertexId>,
    pub colours: Vec<ColourId>,
}

impl RainbowEmbedding {
    /// Builds and validates the embedding given by `map`.
    pub fn from_map(colouring: &EdgeColouring, tree: &Tree, map: Vec<VertexId>) -> Result<Self> {
        if let Verdict::Fail { witness } = check_rainbow_embedding(colouring, tree, &map)? {
            return Err(Error::Violation(format!("{witness:?}")));
        }
        let colours = tree.edges().iter().map(|&(u, v)| colouring.colour(map[u], map[v])).collect();
        Ok(RainbowEmbedding { map, colours })
    }

    pub fn validate(&self, colouring: &EdgeColouring, tree: &Tree) -> Result<()> {
        let rebuilt = RainbowEmbedding::from_map(colouring, tree, self.map.clone())?;
        if rebuilt.colours != self.colours {
            return Err(Error::Violation("recorded colours differ from the colouring".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exhaustive backtracking on a small host.
    Exhaustive,
    /// Bounded randomized backtracking for a small tree.
    Search,
    /// The layered randomized pipeline.
    Pipeline,
}

/// The pipeline stage that failed, named after the property it checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    /// The tree could not be split.
    Split,
    /// Reserve minimum degree, or the base forest blocked in the reserve.
    R1,
    /// A path request without any candidate path.
    R2,
    /// Minimum degree outside the reserve colours.
    R3,
    /// Star reservoirs do not meet the star class in enough vertices.
    Q0,
    /// A leaf layer could not be completed from the reserve.
    Q1,
    /// Star reservoirs are too small.
    Star,
    /// Length-3 paths could not be connected.
    Path,
    /// The reserve was drawn on beyond its budget.
    Reserve,
    /// Randomized or exhaustive search found nothing.
    Search,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Stage,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReserveUsage {
    pub vertices: usize,
    pub colours: usize,
    pub vertex_budget: f64,
    pub colour_budget: f64,
}

/// One processed block of layers.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlockTrace {
    pub kind: String,
    /// Decomposition layers `first..=last` covered by this block.
    pub layers: (usize, usize),
    pub class: usize,
    pub size: usize,
    pub waves: usize,
    /// Vertices placed inside the block's own class.
    pub own: usize,
    /// Vertices placed in leftovers of earlier classes.
    pub carried: usize,
    /// Vertices placed from the reserve.
    pub reserve: usize,
    pub augmentations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AttemptTrace {
    pub attempt: usize,
    pub seed: u64,
    pub failure: Option<Failure>,
    pub reserve: ReserveUsage,
    pub q0_repairs: usize,
    pub blocks: Vec<BlockTrace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedOutcome {
    pub embedding: Option<RainbowEmbedding>,
    pub method: Method,
    pub attempts: Vec<AttemptTrace>,
}

impl EmbedOutcome {
    pub fn is_success(&self) -> bool {
        self.embedding.is_some()
    }

    /// Failed stages over all attempts, in attempt order.
    pub fn failures(&self) -> Vec<&Failure> {
        self.attempts.iter().filter_map(|a| a.failure.as_ref()).collect()
    }
}

fn single_attempt(method: Method, embedding: Option<RainbowEmbedding>, failure: Option<Failure>, seed: u64) -> EmbedOutcome {
    EmbedOutcome {
        embedding,
        method,
        attempts: vec![AttemptTrace { seed, failure, ..AttemptTrace::default() }],
    }
}

/// Finds a rainbow copy of `tree`. Hosts with at most `fallback_cutoff`
/// vertices are searched exhaustively before any size check; otherwise the
/// tree must have at most `(1-ε)n/k` vertices. Trees with at most
/// [`BRUTE_FORCE_MAX_TREE`] vertices, and hosts too small for `μn ≥ 1`, use
/// randomized backtracking; everything else runs the pipeline.
pub fn embed_tree(colouring: &EdgeColouring, tree: &Tree, config: &PipelineConfig) -> Result<EmbedOutcome> {
    config.validate()?;
    let n = colouring.n();
    let k = colouring.k();
    if tree.len() > n {
        return Err(Error::Infeasible(format!("tree has {} vertices, host only {n}", tree.len())));
    }
    if n <= config.fallback_cutoff {
        return Ok(exhaustive(colouring, tree, config));
    }
    let limit = (1.0 - config.epsilon) * n as f64 / k as f64;
    if tree.len() as f64 > limit {
        return Err(Error::Infeasible(format!(
            "tree has {} vertices, above (1 - epsilon) n / k = {limit:.1}",
            tree.len()
        )));
    }
    if tree.len() <= BRUTE_FORCE_MAX_TREE || config.mu * (n as f64) < 1.0 {
        return Ok(randomized_search(colouring, tree, config));
    }
    let mut outcome = pipeline::run(colouring, tree, config)?;
    if !outcome.is_success() && config.search_fallback {
        let search = randomized_search(colouring, tree, &PipelineConfig { retries: 1, ..config.clone() });
        let offset = outcome.attempts.len();
        outcome.attempts.extend(search.attempts.into_iter().map(|mut a| {
            a.attempt += offset;
            a
        }));
        if search.embedding.is_some() {
            outcome.embedding = search.embedding;
            outcome.method = Method::Search;
        }
    }
    Ok(outcome)
}

/// Backtracking search with no size check against `(1-ε)n/k`: exhaustive
/// for hosts up to `fallback_cutoff`, randomized with `search_budget` nodes
/// per attempt above that.
pub fn search_embed(colouring: &EdgeColouring, tree: &Tree, config: &PipelineConfig) -> Result<EmbedOutcome> {
    config.validate()?;
    if tree.len() > colouring.n() {
        return Err(Error::Infeasible(format!("tree has {} vertices, host only {}", tree.len(), colouring.n())));
    }
    Ok(if colouring.n() <= config.fallback_cutoff {
        exhaustive(colouring, tree, config)
    } else {
        randomized_search(colouring, tree, config)
    })
}

fn exhaustive(colouring: &EdgeColouring, tree: &Tree, config: &PipelineConfig) -> EmbedOutcome {
    let budget = if tree.len() <= BRUTE_FORCE_MAX_TREE { usize::MAX } else { config.search_budget };
    let (embedding, detail) = match backtrack_embed(colouring, tree, budget, None) {
        Search::Found(map) => {
            (Some(RainbowEmbedding::from_map(colouring, tree, map).expect("search yields rainbow maps")), None)
        }
        Search::Absent => (None, Some("no rainbow copy exists")),
        Search::OutOfBudget => (None, Some("search budget exhausted")),
    };
    let failure = detail.map(|d| Failure { stage: Stage::Search, detail: d.into() });
    single_attempt(Method::Exhaustive, embedding, failure, 0)
}

fn randomized_search(colouring: &EdgeColouring, tree: &Tree, config: &PipelineConfig) -> EmbedOutcome {
    let mut attempts = Vec::new();
    for attempt in 0..config.retries {
        let seed = derive_seed(config.seed, "attempt", attempt as u64);
        let mut rng = substream(seed, "search", 0);
        let mut trace = AttemptTrace { attempt, seed, ..AttemptTrace::default() };
        match backtrack_embed(colouring, tree, config.search_budget, Some(&mut rng)) {
            Search::Found(map) => {
                attempts.push(trace);
                let embedding = RainbowEmbedding::from_map(colouring, tree, map).expect("search yields rainbow maps");
                return EmbedOutcome { embedding: Some(embedding), method: Method::Search, attempts };
            }
            Search::Absent => {
                trace.failure = Some(Failure { stage: Stage::Search, detail: "no rainbow copy exists".into() });
                attempts.push(trace);
                break;
            }
            Search::OutOfBudget => {
                trace.failure = Some(Failure { stage: Stage::Search, detail: "search budget exhausted".into() });
                attempts.push(trace);
            }
        }
    }
    EmbedOutcome { embedding: None, method: Method::Search, attempts }
}
