//! Tree packings of `K_{2ℓ+1}`, harmonious labellings and orthogonal double
//! covers, each obtained by translating one rainbow copy around a group.

use std::collections::{HashMap, HashSet};

use rand::seq::index::sample;

use serde::{Deserialize, Serialize};

use crate::colouring::{EdgeColouring, VertexId};
use crate::embed::{embed_tree, search_embed, EmbedOutcome, Method, PipelineConfig, RainbowEmbedding};
use crate::error::{Error, Result};
use crate::generators::{group_sum_colouring, nd_colouring};
use crate::group::{Group, GroupSpec};
use crate::rng::substream;
use crate::tree::Tree;
use crate::verify::{check_harmonious, check_odc, check_packing, check_rainbow_embedding};

/// Image of a copy under `v ↦ v + shift` in `group`.
pub fn translate_copy(map: &[VertexId], shift: VertexId, group: &Group) -> Vec<VertexId> {
    map.iter().map(|&v| group.add(v, shift)).collect()
}

/// The pipeline when the tree is small enough for it, bounded search otherwise.
fn embed_any(colouring: &EdgeColouring, tree: &Tree, config: &PipelineConfig) -> Result<EmbedOutcome> {
    let limit = (1.0 - config.epsilon) * colouring.n() as f64 / colouring.k() as f64;
    if tree.len() as f64 <= limit {
        embed_tree(colouring, tree, config)
    } else {
        search_embed(colouring, tree, config)
    }
}

fn require(outcome: EmbedOutcome, host: &str) -> Result<(RainbowEmbedding, Method)> {
    let method = outcome.method;
    match outcome.embedding {
        Some(e) => Ok((e, method)),
        None => {
            let why = outcome
                .failures()
                .last()
                .map(|f| format!("{:?}: {}", f.stage, f.detail))
                .unwrap_or_else(|| "no attempt made".into());
            Err(Error::Infeasible(format!("no rainbow copy found in {host} ({why})")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum PackRegime {
    /// Host `K_{2t-1}`; the copies decompose it.
    Exact,
    /// Smallest `ℓ` with `2ℓ+1 ≥ (2+ε)(t-1)+1`.
    Asymptotic { epsilon: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreePacking {
    /// Number of host vertices `2ℓ+1`.
    pub host: usize,
    pub regime: PackRegime,
    pub method: Method,
    pub base: RainbowEmbedding,
    /// Copy `i` is the base translated by `i`.
    pub copies: Vec<Vec<VertexId>>,
    /// Whether the copies cover every host edge exactly once.
    pub decomposition: bool,
}

/// Packs `2ℓ+1` edge-disjoint copies of `tree` into `K_{2ℓ+1}`.
pub fn ringel_pack(tree: &Tree, regime: PackRegime, config: &PipelineConfig) -> Result<TreePacking> {
    let t = tree.len();
    let ell = match regime {
        PackRegime::Exact => t - 1,
        PackRegime::Asymptotic { epsilon } => {
            if !(epsilon > 0.0 && epsilon.is_finite()) {
                return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
            }
            ((2.0 + epsilon) * (t - 1) as f64 / 2.0).ceil() as usize
        }
    };
    if t == 1 {
        let base = RainbowEmbedding { map: vec![0], colours: Vec::new() };
        return Ok(TreePacking { host: 1, regime, method: Method::Exhaustive, base, copies: vec![vec![0]], decomposition: true });
    }
    let colouring = nd_colouring(ell)?;
    let (base, method) = require(embed_any(&colouring, tree, config)?, &format!("nd({ell})"))?;
    let mut packing = packing_from(tree, ell, base)?;
    packing.regime = regime;
    packing.method = method;
    Ok(packing)
}

fn packing_from(tree: &Tree, ell: usize, base: RainbowEmbedding) -> Result<TreePacking> {
    let host = 2 * ell + 1;
    let group = Group::new(GroupSpec::cyclic(host))?;
    let copies: Vec<_> = (0..host).map(|s| translate_copy(&base.map, s, &group)).collect();
    let decomposition = ell + 1 == tree.len();
    let verdict = check_packing(host, tree, &copies, decomposition)?;
    if let Some(w) = verdict.witness() {
        return Err(Error::Violation(format!("translated copies do not pack: {w:?}")));
    }
    Ok(TreePacking { host, regime: PackRegime::Exact, method: Method::Exhaustive, base, copies, decomposition })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmoniousLabelling {
    pub group: GroupSpec,
    /// Group element of each tree vertex.
    pub labels: Vec<usize>,
    /// `None` for groups too small to colour, labelled directly.
    pub method: Option<Method>,
}

/// Harmonious labelling of `tree` in the group `spec`, read off a rainbow
/// copy in the group-sum colouring.
pub fn harmonious_label(tree: &Tree, spec: &GroupSpec, config: &PipelineConfig) -> Result<HarmoniousLabelling> {
    let group = Group::new(spec.clone())?;
    if group.order() < tree.len() {
        return Err(Error::SizeLimit(format!(
            "group {} has order {} below the tree size {}",
            spec.label(),
            group.order(),
            tree.len()
        )));
    }
    let (labels, method) = if group.order() < 3 {
        ((0..tree.len()).collect(), None)
    } else {
        let colouring = group_sum_colouring(spec)?;
        let (base, method) = require(embed_any(&colouring, tree, config)?, &spec.label())?;
        let rainbow = check_rainbow_embedding(&colouring, tree, &base.map)?;
        let harmonious = check_harmonious(tree, &group, &base.map)?;
        if rainbow.passed() != harmonious.passed() {
            return Err(Error::Internal("rainbow and harmonious verdicts disagree".into()));
        }
        (base.map, Some(method))
    };
    if let Some(w) = check_harmonious(tree, &group, &labels)?.witness() {
        return Err(Error::Violation(format!("labelling is not harmonious: {w:?}")));
    }
    Ok(HarmoniousLabelling { group: spec.clone(), labels, method })
}

/// Tries `Z_m` for `m` from `max(|T|, 2)` up to `max_order` and returns the
/// first labelling found.
pub fn smallest_harmonious(tree: &Tree, max_order: usize, config: &PipelineConfig) -> Result<HarmoniousLabelling> {
    let first = tree.len().max(2);
    for m in first..=max_order {
        match harmonious_label(tree, &GroupSpec::cyclic(m), config) {
            Ok(labelling) => return Ok(labelling),
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Infeasible(format!("no harmonious labelling in Z_m for {first} <= m <= {max_order}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleCover {
    pub rank: u32,
    pub method: Option<Method>,
    /// Copy `x` is the base translated by `x`; otherwise the copies were
    /// placed one by one.
    pub translates: bool,
    pub copies: Vec<Vec<VertexId>>,
}

const COVER_RESTARTS: u64 = 500;
const COVER_TRIES: usize = 5000;

/// The `2^rank` translates of a rainbow copy in the sum colouring of
/// `Z_2^rank`. A tree with no rainbow copy there gets `2^rank` copies placed
/// at random, one at a time, subject to the double-cover conditions.
pub fn odc_construct(tree: &Tree, rank: u32, config: &PipelineConfig) -> Result<DoubleCover> {
    let spec = GroupSpec::elementary_two(rank);
    let group = Group::new(spec.clone())?;
    let n = group.order();
    if tree.len() > n {
        return Err(Error::SizeLimit(format!("tree has {} vertices, Z_2^{rank} only {n}", tree.len())));
    }
    let (map, method) = if n < 3 {
        ((0..tree.len()).collect(), None)
    } else {
        let colouring = group_sum_colouring(&spec)?;
        match require(embed_any(&colouring, tree, config)?, &spec.label()) {
            Ok((base, method)) => (base.map, Some(method)),
            Err(Error::Infeasible(why)) => {
                let copies = random_cover(tree, n, config.seed)
                    .ok_or_else(|| Error::Infeasible(format!("{why}; random placement found no cover either")))?;
                if let Some(w) = check_odc(n, tree, &copies)?.witness() {
                    return Err(Error::Internal(format!("random cover fails validation: {w:?}")));
                }
                return Ok(DoubleCover { rank, method: Some(Method::Search), translates: false, copies });
            }
            Err(e) => return Err(e),
        }
    };
    let mut cover = cover_from(tree, &group, &map)?;
    cover.method = method;
    Ok(cover)
}

fn random_cover(tree: &Tree, n: usize, seed: u64) -> Option<Vec<Vec<VertexId>>> {
    let edges_of = |map: &[VertexId]| -> Vec<(VertexId, VertexId)> {
        tree.edges().iter().map(|&(u, v)| (map[u].min(map[v]), map[u].max(map[v]))).collect()
    };
    'restart: for restart in 0..COVER_RESTARTS {
        let mut rng = substream(seed, "odc-cover", restart);
        let mut uses: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        let mut placed: Vec<HashSet<(VertexId, VertexId)>> = Vec::new();
        let mut copies = Vec::with_capacity(n);
        'copy: while copies.len() < n {
            for _ in 0..COVER_TRIES {
                let map = sample(&mut rng, n, tree.len()).into_vec();
                let edges = edges_of(&map);
                if edges.iter().any(|e| uses.get(e).copied().unwrap_or(0) >= 2) {
                    continue;
                }
                if placed.iter().any(|p| edges.iter().filter(|e| p.contains(e)).count() > 1) {
                    continue;
                }
                for &e in &edges {
                    *uses.entry(e).or_insert(0) += 1;
                }
                placed.push(edges.into_iter().collect());
                copies.push(map);
                continue 'copy;
            }
            continue 'restart;
        }
        return Some(copies);
    }
    None
}

fn cover_from(tree: &Tree, group: &Group, map: &[VertexId]) -> Result<DoubleCover> {
    let n = group.order();
    let copies: Vec<_> = (0..n).map(|x| translate_copy(map, x, group)).collect();
    if let Some(w) = check_odc(n, tree, &copies)?.witness() {
        return Err(Error::Violation(format!("translates are not a double cover: {w:?}")));
    }
    let mut holders: HashMap<(VertexId, VertexId), Vec<usize>> = HashMap::new();
    for (x, copy) in copies.iter().enumerate() {
        for &(u, v) in tree.edges() {
            holders.entry((copy[u].min(copy[v]), copy[u].max(copy[v]))).or_default().push(x);
        }
    }
    for ((u, v), shifts) in holders {
        if let [x, y] = shifts[..] {
            if group.sub(x, y) != group.add(u, v) {
                return Err(Error::Violation(format!(
                    "edge {{{u},{v}}} is shared by translates {x} and {y} whose difference is not its colour"
                )));
            }
        }
    }
    let rank = n.trailing_zeros();
    Ok(DoubleCover { rank, method: None, translates: true, copies })
}
