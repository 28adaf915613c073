//! Layered decomposition `T_0 ⊂ T_1 ⊂ … ⊂ T_ℓ = T`.
//!
//! Layer 0 is a small base forest, layer 1 adds stars with many leaves,
//! layer `j` adds vertex-disjoint bare paths of length 3 and every other
//! layer adds non-neighbouring leaves.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{extract_bare_subpaths, Tree};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayerKind {
    Base,
    Stars,
    Paths3,
    Leaves,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarAttachment {
    pub root: usize,
    pub leaves: Vec<usize>,
}

/// Path `ends.0 – interior.0 – interior.1 – ends.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathAttachment {
    pub ends: (usize, usize),
    pub interior: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub kind: LayerKind,
    /// Vertices first present in this layer.
    pub vertices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stars: Vec<StarAttachment>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<PathAttachment>,
    /// `(parent, leaf)` pairs for leaf layers.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leaves: Vec<(usize, usize)>,
}

impl Layer {
    fn empty(kind: LayerKind) -> Self {
        Layer { kind, vertices: Vec::new(), stars: Vec::new(), paths: Vec::new(), leaves: Vec::new() }
    }

    fn of_leaves(pairs: Vec<(usize, usize)>) -> Self {
        let mut layer = Layer::empty(LayerKind::Leaves);
        layer.vertices = pairs.iter().map(|&(_, leaf)| leaf).collect();
        layer.leaves = pairs;
        layer
    }

    /// Number of vertices this layer adds.
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayeredDecomposition {
    pub layers: Vec<Layer>,
    /// Index of the length-3 path layer.
    pub path_layer: usize,
    pub star_threshold: usize,
    pub mu: f64,
    pub n_target: usize,
    pub bare_path_len: usize,
    pub leaf_batch: usize,
}

impl LayeredDecomposition {
    /// Index of the last layer.
    pub fn ell(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn base(&self) -> &[usize] {
        &self.layers[0].vertices
    }

    /// Membership of each tree vertex in the prefix union `T_0 ∪ … ∪ T_i`.
    pub fn prefix_membership(&self, n: usize, i: usize) -> Vec<bool> {
        let mut keep = vec![false; n];
        for layer in &self.layers[..=i] {
            for &v in &layer.vertices {
                keep[v] = true;
            }
        }
        keep
    }

    /// Layer index of every tree vertex.
    pub fn layer_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (i, layer) in self.layers.iter().enumerate() {
            for &v in &layer.vertices {
                out[v] = i;
            }
        }
        out
    }
}

/// Knobs for [`split_tree_with`]. `None` selects the formula defaults
/// `m = max(8, ⌈100/μ⌉)` and `b = max(2, ⌈μ·n/(16·m·D)⌉)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitParams {
    pub star_threshold: usize,
    pub mu: f64,
    pub n_target: usize,
    pub bare_path_len: Option<usize>,
    pub leaf_batch: Option<usize>,
}

impl SplitParams {
    pub fn new(star_threshold: usize, mu: f64, n_target: usize) -> Self {
        SplitParams { star_threshold, mu, n_target, bare_path_len: None, leaf_batch: None }
    }
}

/// Default star threshold `min(⌈ln² n⌉, 10)`.
pub fn default_star_threshold(n: usize) -> usize {
    let l = (n.max(2) as f64).ln();
    ((l * l).ceil() as usize).clamp(1, 10)
}

pub fn split_tree(tree: &Tree, star_threshold: usize, mu: f64, n_target: usize) -> Result<LayeredDecomposition> {
    split_tree_with(tree, &SplitParams::new(star_threshold, mu, n_target))
}

/// Splits `tree` into layers. If the batch threshold leaves a base larger
/// than `μ·n_target`, the split is redone with single-leaf batches, which
/// always reaches the budget.
pub fn split_tree_with(tree: &Tree, params: &SplitParams) -> Result<LayeredDecomposition> {
    let SplitParams { star_threshold, mu, n_target, .. } = *params;
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::Parameter(format!("mu must lie in (0, 1), got {mu}")));
    }
    if star_threshold == 0 {
        return Err(Error::Parameter("star threshold must be at least 1".into()));
    }
    if tree.len() > n_target {
        return Err(Error::Parameter(format!("tree has {} vertices, above n_target {n_target}", tree.len())));
    }
    let budget = mu * n_target as f64;
    if budget < 1.0 {
        return Err(Error::Parameter(format!("mu * n_target = {budget} is below 1")));
    }
    let m = params.bare_path_len.unwrap_or_else(|| ((100.0 / mu).ceil() as usize).max(8));
    if m < 8 {
        return Err(Error::Parameter(format!("bare path length must be at least 8, got {m}")));
    }
    let batch = params.leaf_batch.unwrap_or_else(|| {
        ((budget / (16.0 * m as f64 * star_threshold as f64)).ceil() as usize).max(2)
    });
    let first = run_split(tree, params, budget, m, batch.max(1));
    let decomposition = if first.layers[0].size() as f64 > budget && batch > 1 {
        run_split(tree, params, budget, m, 1)
    } else {
        first
    };
    if decomposition.layers[0].size() as f64 > budget {
        return Err(Error::Internal(format!(
            "base layer has {} vertices, above mu * n_target = {budget}",
            decomposition.layers[0].size()
        )));
    }
    debug_assert_eq!(validate_decomposition(tree, &decomposition), Ok(()));
    Ok(decomposition)
}

struct Forest<'a> {
    tree: &'a Tree,
    alive: Vec<bool>,
    degree: Vec<usize>,
    count: usize,
}

impl<'a> Forest<'a> {
    fn new(tree: &'a Tree) -> Self {
        Forest {
            tree,
            alive: vec![true; tree.len()],
            degree: (0..tree.len()).map(|v| tree.degree(v)).collect(),
            count: tree.len(),
        }
    }

    fn alive_neighbour(&self, v: usize) -> Option<usize> {
        self.tree.neighbours(v).iter().copied().find(|&u| self.alive[u])
    }

    fn remove(&mut self, v: usize) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        self.count -= 1;
        for &u in self.tree.neighbours(v) {
            if self.alive[u] {
                self.degree[u] -= 1;
            }
        }
    }

    /// Greedy maximal set of leaves with pairwise distinct, surviving parents.
    fn non_neighbouring_leaves(&self) -> Vec<(usize, usize)> {
        let n = self.tree.len();
        let mut parent_taken = vec![false; n];
        let mut leaf_taken = vec![false; n];
        let mut out = Vec::new();
        for v in (0..n).filter(|&v| self.alive[v] && self.degree[v] == 1) {
            let p = self.alive_neighbour(v).expect("leaf has a neighbour");
            if parent_taken[p] || leaf_taken[p] || parent_taken[v] {
                continue;
            }
            parent_taken[p] = true;
            leaf_taken[v] = true;
            out.push((p, v));
        }
        out
    }
}

fn run_split(tree: &Tree, params: &SplitParams, budget: f64, m: usize, batch: usize) -> LayeredDecomposition {
    let mut forest = Forest::new(tree);

    let mut stripped: Vec<Vec<(usize, usize)>> = Vec::new();
    while forest.count as f64 > budget {
        let set = forest.non_neighbouring_leaves();
        if set.is_empty() || set.len() < batch {
            break;
        }
        for &(_, leaf) in &set {
            forest.remove(leaf);
        }
        stripped.push(set);
    }

    let mut paths = Vec::new();
    let mut growth: Vec<Vec<(usize, usize)>> = Vec::new();
    if forest.count as f64 > budget {
        let (sub, back) = alive_subtree(&forest);
        let bare = extract_bare_subpaths(&sub, m).expect("m >= 8");
        if !bare.is_empty() {
            let mut middles: Vec<VecDeque<usize>> = Vec::new();
            for path in &bare {
                let p: Vec<usize> = path.vertices().iter().map(|&v| back[v]).collect();
                paths.push(PathAttachment { ends: (p[0], p[3]), interior: (p[1], p[2]) });
                paths.push(PathAttachment { ends: (p[m - 3], p[m]), interior: (p[m - 2], p[m - 1]) });
                for v in [p[1], p[2], p[m - 2], p[m - 1]] {
                    forest.remove(v);
                }
                middles.push(p[3..=m - 3].iter().copied().collect());
            }
            // Layer i (for i = m-5 down to 2) re-adds one end of every middle path.
            for _ in 2..=m - 5 {
                let mut layer = Vec::with_capacity(middles.len());
                for mid in &mut middles {
                    let (front, back_end) = (*mid.front().unwrap(), *mid.back().unwrap());
                    let (leaf, parent) = if front < back_end {
                        (mid.pop_front().unwrap(), *mid.front().unwrap())
                    } else {
                        (mid.pop_back().unwrap(), *mid.back().unwrap())
                    };
                    forest.remove(leaf);
                    layer.push((parent, leaf));
                }
                growth.push(layer);
            }
            growth.reverse();
        }
    }

    let n = tree.len();
    let leaf_of = |f: &Forest, v: usize| f.alive[v] && f.degree[v] == 1;
    let mut is_root = vec![false; n];
    let mut taken = vec![false; n];
    let mut stars = Vec::new();
    for v in (0..n).filter(|&v| forest.alive[v]) {
        if taken[v] {
            continue;
        }
        let leaves: Vec<usize> = tree
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&u| leaf_of(&forest, u) && !is_root[u] && !taken[u])
            .collect();
        if leaves.len() >= params.star_threshold {
            is_root[v] = true;
            for &u in &leaves {
                taken[u] = true;
            }
            stars.push(StarAttachment { root: v, leaves });
        }
    }
    for s in &stars {
        for &u in &s.leaves {
            forest.remove(u);
        }
    }

    let mut base = Layer::empty(LayerKind::Base);
    base.vertices = (0..n).filter(|&v| forest.alive[v]).collect();
    let mut star_layer = Layer::empty(LayerKind::Stars);
    star_layer.vertices = stars.iter().flat_map(|s| s.leaves.iter().copied()).collect();
    star_layer.stars = stars;
    let mut path_layer = Layer::empty(LayerKind::Paths3);
    path_layer.vertices = paths.iter().flat_map(|p| [p.interior.0, p.interior.1]).collect();
    path_layer.paths = paths;

    let mut layers = vec![base, star_layer];
    layers.extend(growth.into_iter().map(Layer::of_leaves));
    let j = layers.len();
    layers.push(path_layer);
    layers.extend(stripped.into_iter().rev().map(Layer::of_leaves));

    LayeredDecomposition {
        layers,
        path_layer: j,
        star_threshold: params.star_threshold,
        mu: params.mu,
        n_target: params.n_target,
        bare_path_len: m,
        leaf_batch: batch,
    }
}

/// The surviving vertices as a relabelled tree, with the map back.
fn alive_subtree(forest: &Forest) -> (Tree, Vec<usize>) {
    let back: Vec<usize> = (0..forest.tree.len()).filter(|&v| forest.alive[v]).collect();
    let mut index = vec![usize::MAX; forest.tree.len()];
    for (i, &v) in back.iter().enumerate() {
        index[v] = i;
    }
    let edges = forest
        .tree
        .edges()
        .iter()
        .filter(|&&(u, v)| forest.alive[u] && forest.alive[v])
        .map(|&(u, v)| (index[u], index[v]))
        .collect();
    (Tree::new(back.len(), edges).expect("stripping leaves keeps a tree"), back)
}

/// Checks the structural properties of a decomposition, returning the first
/// violation as text.
pub fn validate_decomposition(tree: &Tree, d: &LayeredDecomposition) -> std::result::Result<(), String> {
    let n = tree.len();
    let budget = d.mu * d.n_target as f64;
    if d.layers.len() < 3 {
        return Err(format!("expected at least 3 layers, got {}", d.layers.len()));
    }
    let j = d.path_layer;
    if j < 2 || j > d.ell() {
        return Err(format!("path layer index {j} outside 2..={}", d.ell()));
    }
    let cap = 1e4 * d.star_threshold as f64 / (d.mu * d.mu);
    if d.ell() as f64 > cap {
        return Err(format!("ell = {} exceeds 10^4 D / mu^2 = {cap}", d.ell()));
    }
    for (i, layer) in d.layers.iter().enumerate() {
        let expected = match i {
            0 => LayerKind::Base,
            1 => LayerKind::Stars,
            _ if i == j => LayerKind::Paths3,
            _ => LayerKind::Leaves,
        };
        if layer.kind != expected {
            return Err(format!("layer {i} has kind {:?}, expected {expected:?}", layer.kind));
        }
    }
    if d.layers[0].size() as f64 > budget {
        return Err(format!("base has {} vertices, above {budget}", d.layers[0].size()));
    }

    let mut present = vec![false; n];
    let mut edges_present = 0usize;
    for (i, layer) in d.layers.iter().enumerate() {
        for &v in &layer.vertices {
            if v >= n || present[v] {
                return Err(format!("vertex {v} repeated or out of range in layer {i}"));
            }
        }
        let mut new_edges: Vec<(usize, usize)> = Vec::new();
        match layer.kind {
            LayerKind::Base => {}
            LayerKind::Stars => {
                let mut listed = Vec::new();
                for s in &layer.stars {
                    if !present[s.root] {
                        return Err(format!("star root {} not in the base", s.root));
                    }
                    if s.leaves.len() < d.star_threshold {
                        return Err(format!("star at {} has {} < D leaves", s.root, s.leaves.len()));
                    }
                    listed.extend(s.leaves.iter().copied());
                    new_edges.extend(s.leaves.iter().map(|&l| (s.root, l)));
                }
                if !same_members(&listed, &layer.vertices) {
                    return Err("star leaves do not match the layer vertices".into());
                }
            }
            LayerKind::Paths3 => {
                if layer.paths.len() as f64 > budget {
                    return Err(format!("{} paths exceed {budget}", layer.paths.len()));
                }
                let mut listed = Vec::new();
                for p in &layer.paths {
                    let (a, b) = p.ends;
                    let (x, y) = p.interior;
                    if !present[a] || !present[b] {
                        return Err(format!("path ends {a},{b} not in the previous prefix"));
                    }
                    listed.extend([x, y]);
                    new_edges.extend([(a, x), (x, y), (y, b)]);
                }
                if !same_members(&listed, &layer.vertices) {
                    return Err("path interiors do not match the layer vertices".into());
                }
            }
            LayerKind::Leaves => {
                let mut parents = std::collections::HashSet::new();
                for &(p, leaf) in &layer.leaves {
                    if !present[p] {
                        return Err(format!("layer {i}: parent {p} of {leaf} not in the previous prefix"));
                    }
                    if !parents.insert(p) {
                        return Err(format!("layer {i}: parent {p} receives two leaves"));
                    }
                    new_edges.push((p, leaf));
                }
                let listed: Vec<_> = layer.leaves.iter().map(|&(_, l)| l).collect();
                if !same_members(&listed, &layer.vertices) {
                    return Err(format!("layer {i}: leaves do not match the layer vertices"));
                }
            }
        }
        if let Some(&(u, v)) = new_edges.iter().find(|&&(u, v)| !tree.has_edge(u, v)) {
            return Err(format!("layer {i}: {u}-{v} is not a tree edge"));
        }
        for &v in &layer.vertices {
            present[v] = true;
        }
        if i == 0 {
            edges_present = tree.edges().iter().filter(|&&(u, v)| present[u] && present[v]).count();
        } else {
            let induced = tree.edges().iter().filter(|&&(u, v)| present[u] && present[v]).count();
            if induced != edges_present + new_edges.len() {
                return Err(format!(
                    "layer {i}: prefix induces {induced} edges, expected {}",
                    edges_present + new_edges.len()
                ));
            }
            edges_present = induced;
        }
    }
    if present.iter().any(|&p| !p) {
        return Err("layers do not cover every vertex".into());
    }
    Ok(())
}

fn same_members(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_becomes_base_plus_one_star() {
        let t = Tree::star(100);
        let d = split_tree(&t, 10, 0.01, 200).unwrap();
        assert_eq!(d.base(), &[0]);
        assert_eq!(d.layers[1].stars.len(), 1);
        assert_eq!(d.layers[1].stars[0].leaves.len(), 100);
        assert!(d.layers[2..].iter().all(|l| l.size() == 0));
        validate_decomposition(&t, &d).unwrap();
    }

    #[test]
    fn small_path_is_all_base() {
        let t = Tree::path(4);
        let d = split_tree(&t, 3, 0.5, 8).unwrap();
        assert_eq!(d.base().len(), 4);
        assert!(d.layers[1..].iter().all(|l| l.size() == 0));
    }

    #[test]
    fn rejects_bad_parameters() {
        let t = Tree::path(10);
        assert!(split_tree(&t, 3, 0.05, 10).is_err());
        assert!(split_tree(&t, 3, 0.0, 100).is_err());
        assert!(split_tree(&t, 0, 0.5, 100).is_err());
        assert!(split_tree(&t, 3, 0.5, 5).is_err());
    }

    #[test]
    fn random_thousand_vertex_tree_validates() {
        let t = Tree::random(1000, 5).unwrap();
        let d = split_tree(&t, default_star_threshold(1000), 0.05, 1000).unwrap();
        validate_decomposition(&t, &d).unwrap();
        assert!(d.base().len() as f64 <= 50.0);
    }

    #[test]
    fn forced_bare_paths_produce_path_layer() {
        let t = Tree::path(200);
        let params = SplitParams { bare_path_len: Some(12), leaf_batch: Some(3), ..SplitParams::new(3, 0.25, 200) };
        let d = split_tree_with(&t, &params).unwrap();
        validate_decomposition(&t, &d).unwrap();
        assert_eq!(d.path_layer, 12 - 4);
        assert!(!d.layers[d.path_layer].paths.is_empty());
        for i in 2..d.path_layer {
            assert_eq!(d.layers[i].size(), d.layers[d.path_layer].paths.len() / 2);
        }
    }

    #[test]
    fn double_star_gives_two_stars() {
        let t = Tree::double_star(30, 40);
        let d = split_tree(&t, 5, 0.2, 100).unwrap();
        validate_decomposition(&t, &d).unwrap();
        assert!(d.base().len() <= 20);
    }

    #[test]
    fn validator_catches_shared_parent() {
        let t = Tree::star(3);
        let mut base = Layer::empty(LayerKind::Base);
        base.vertices = vec![0];
        let d = LayeredDecomposition {
            layers: vec![
                base,
                Layer::empty(LayerKind::Stars),
                Layer::empty(LayerKind::Paths3),
                Layer::of_leaves(vec![(0, 1), (0, 2), (0, 3)]),
            ],
            path_layer: 2,
            star_threshold: 10,
            mu: 0.5,
            n_target: 4,
            bare_path_len: 8,
            leaf_batch: 1,
        };
        assert!(validate_decomposition(&t, &d).unwrap_err().contains("two leaves"));
    }
}
