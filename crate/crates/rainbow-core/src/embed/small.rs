//! Greedy embedding of small forests into a reserve, and exhaustive search.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::RainbowEmbedding;
use crate::colouring::{ColourSet, EdgeColouring, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::tree::Tree;

/// Tree size limit for [`brute_force_embed`].
pub const BRUTE_FORCE_MAX_TREE: usize = 10;
/// Host size limit for [`brute_force_embed`].
pub const BRUTE_FORCE_MAX_HOST: usize = 20;

const NONE: usize = usize::MAX;

/// Placement order for a forest: every vertex after its parent.
/// Returns `(vertex, parent)` pairs; component roots have parent `None`.
pub(crate) fn forest_order(tree: &Tree, keep: &[bool]) -> Vec<(usize, Option<usize>)> {
    let mut seen = vec![false; tree.len()];
    let mut out = Vec::new();
    for start in 0..tree.len() {
        if !keep[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        out.push((start, None));
        let mut head = out.len() - 1;
        while head < out.len() {
            let v = out[head].0;
            head += 1;
            for &u in tree.neighbours(v) {
                if keep[u] && !seen[u] {
                    seen[u] = true;
                    out.push((u, Some(v)));
                }
            }
        }
    }
    out
}

/// Mutable placement state shared by the greedy and exhaustive searches.
pub(crate) struct Placement {
    pub host: Vec<VertexId>,
    pub used_v: Vec<bool>,
    pub used_c: Vec<bool>,
}

impl Placement {
    pub fn new(tree_len: usize, n: usize, colours: usize) -> Self {
        Placement { host: vec![NONE; tree_len], used_v: vec![false; n], used_c: vec![false; colours] }
    }

    pub fn place(&mut self, colouring: &EdgeColouring, v: usize, parent: Option<usize>, x: VertexId) {
        self.host[v] = x;
        self.used_v[x] = true;
        if let Some(p) = parent {
            self.used_c[colouring.colour(self.host[p], x)] = true;
        }
    }

    fn unplace(&mut self, colouring: &EdgeColouring, v: usize, parent: Option<usize>) {
        let x = self.host[v];
        self.used_v[x] = false;
        if let Some(p) = parent {
            self.used_c[colouring.colour(self.host[p], x)] = false;
        }
        self.host[v] = NONE;
    }

    pub fn is_placed(&self, v: usize) -> bool {
        self.host[v] != NONE
    }
}

/// Greedy extension along `order` with hosts from `within` and colours from
/// `allowed`. Returns the first vertex that could not be placed.
pub(crate) fn greedy_extend(
    colouring: &EdgeColouring,
    order: &[(usize, Option<usize>)],
    placement: &mut Placement,
    within: &[VertexId],
    allowed: &ColourSet,
) -> std::result::Result<(), usize> {
    for &(v, parent) in order {
        let found = within.iter().copied().find(|&x| {
            !placement.used_v[x]
                && match parent {
                    None => true,
                    Some(p) => {
                        let c = colouring.colour(placement.host[p], x);
                        allowed.contains(c) && !placement.used_c[c]
                    }
                }
        });
        match found {
            Some(x) => placement.place(colouring, v, parent, x),
            None => return Err(v),
        }
    }
    Ok(())
}

/// Rainbow copy of `tree` inside `x0` using only colours of `c0`, built by
/// greedy extension in BFS order. When every `x0` vertex has at least
/// `3k·|T|` colour-`c0` neighbours in `x0` a block is impossible and is
/// reported as an internal error; otherwise a block is `Infeasible`.
pub fn greedy_embed_small(
    colouring: &EdgeColouring,
    tree: &Tree,
    x0: &VertexSet,
    c0: &ColourSet,
) -> Result<RainbowEmbedding> {
    let within: Vec<VertexId> = x0.ones().collect();
    if within.iter().any(|&x| x >= colouring.n()) {
        return Err(Error::VertexOutOfRange { vertex: colouring.n(), n: colouring.n() });
    }
    let order = forest_order(tree, &vec![true; tree.len()]);
    let mut placement = Placement::new(tree.len(), colouring.n(), colouring.num_colours());
    match greedy_extend(colouring, &order, &mut placement, &within, c0) {
        Ok(()) => RainbowEmbedding::from_map(colouring, tree, placement.host),
        Err(v) => {
            let need = 3 * colouring.k() * tree.len();
            let dense = within.iter().all(|&x| {
                within.iter().filter(|&&y| y != x && c0.contains(colouring.colour(x, y))).count() >= need
            });
            if dense {
                Err(Error::Internal(format!("greedy extension blocked at tree vertex {v} despite min degree {need}")))
            } else {
                Err(Error::Infeasible(format!("greedy extension blocked at tree vertex {v}")))
            }
        }
    }
}

/// Outcome of a bounded exhaustive search.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Search {
    Found(Vec<VertexId>),
    Absent,
    OutOfBudget,
}

/// Backtracking over host images in BFS order from a maximum-degree vertex,
/// pruning on used colours. `shuffle` randomises candidate order.
pub(crate) fn backtrack_embed(
    colouring: &EdgeColouring,
    tree: &Tree,
    budget: usize,
    mut shuffle: Option<&mut ChaCha8Rng>,
) -> Search {
    let n = colouring.n();
    if tree.len() > n {
        return Search::Absent;
    }
    let root = tree.max_degree_vertex();
    let parents = tree.parents(root);
    let order: Vec<(usize, Option<usize>)> = tree.bfs_order(root).into_iter().map(|v| (v, parents[v])).collect();
    let mut candidates: Vec<VertexId> = (0..n).collect();
    if let Some(rng) = shuffle.as_mut() {
        candidates.shuffle(rng);
    }
    let mut placement = Placement::new(tree.len(), n, colouring.num_colours());
    let mut cursor = vec![0usize; order.len()];
    let mut depth = 0;
    let mut steps = 0usize;
    loop {
        if depth == order.len() {
            return Search::Found(placement.host);
        }
        let (v, parent) = order[depth];
        let mut placed = false;
        while cursor[depth] < n {
            let x = candidates[cursor[depth]];
            cursor[depth] += 1;
            steps += 1;
            if steps > budget {
                return Search::OutOfBudget;
            }
            if placement.used_v[x] {
                continue;
            }
            if let Some(p) = parent {
                if placement.used_c[colouring.colour(placement.host[p], x)] {
                    continue;
                }
            }
            placement.place(colouring, v, parent, x);
            placed = true;
            break;
        }
        if placed {
            depth += 1;
            if depth < order.len() {
                cursor[depth] = 0;
            }
            continue;
        }
        if depth == 0 {
            return Search::Absent;
        }
        depth -= 1;
        let (u, up) = order[depth];
        placement.unplace(colouring, u, up);
    }
}

/// Exhaustive search for a rainbow copy. `Ok(None)` certifies that no copy
/// exists.
pub fn brute_force_embed(colouring: &EdgeColouring, tree: &Tree) -> Result<Option<RainbowEmbedding>> {
    if tree.len() > BRUTE_FORCE_MAX_TREE || colouring.n() > BRUTE_FORCE_MAX_HOST {
        return Err(Error::SizeLimit(format!(
            "exhaustive embedding handles trees up to {BRUTE_FORCE_MAX_TREE} vertices in hosts up to \
             {BRUTE_FORCE_MAX_HOST}, got {} and {}",
            tree.len(),
            colouring.n()
        )));
    }
    match backtrack_embed(colouring, tree, usize::MAX, None) {
        Search::Found(map) => RainbowEmbedding::from_map(colouring, tree, map).map(Some),
        Search::Absent => Ok(None),
        Search::OutOfBudget => Err(Error::Internal("unbounded search ran out of budget".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{full_set, set_of};
    use crate::generators::{group_sum_colouring, nd_colouring};
    use crate::rng::substream;
    use crate::tree::enumerate_trees;
    use crate::GroupSpec;
    use rand::Rng;

    #[test]
    fn greedy_small_examples() {
        let z = group_sum_colouring(&GroupSpec::cyclic(50)).unwrap();
        let single = greedy_embed_small(&z, &Tree::path(1), &set_of(50, [7]), &full_set(50)).unwrap();
        assert_eq!(single.map, vec![7]);
        let edge = greedy_embed_small(&z, &Tree::path(2), &full_set(50), &set_of(50, [9])).unwrap();
        assert_eq!(z.colour(edge.map[0], edge.map[1]), 9);

        let mut rng = substream(5, "test", 0);
        let x0 = set_of(50, (0..50).filter(|_| rng.gen::<f64>() < 0.4));
        let c0 = set_of(50, (0..50).filter(|_| rng.gen::<f64>() < 0.4));
        let path = Tree::path(5);
        let e = greedy_embed_small(&z, &path, &x0, &c0).unwrap();
        e.validate(&z, &path).unwrap();
        assert!(e.map.iter().all(|&x| x0.contains(x)));
        assert!(e.colours.iter().all(|&c| c0.contains(c)));
    }

    #[test]
    fn greedy_block_is_infeasible() {
        let z = group_sum_colouring(&GroupSpec::cyclic(7)).unwrap();
        let err = greedy_embed_small(&z, &Tree::path(3), &set_of(7, [0, 1]), &full_set(7)).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
    }

    #[test]
    fn brute_force_examples() {
        let nd = nd_colouring(2).unwrap();
        assert!(brute_force_embed(&nd, &Tree::path(2)).unwrap().is_some());
        let e = brute_force_embed(&nd, &Tree::path(3)).unwrap().unwrap();
        e.validate(&nd, &Tree::path(3)).unwrap();
        let mono = EdgeColouring::explicit_from_fn(3, 2, |_, _| 0).unwrap();
        assert_eq!(brute_force_embed(&mono, &Tree::path(3)).unwrap(), None);
        let nd5 = nd_colouring(5).unwrap();
        let trees = enumerate_trees(6).unwrap();
        assert_eq!(trees.len(), 6);
        for t in &trees {
            brute_force_embed(&nd5, t).unwrap().expect("rainbow copy exists").validate(&nd5, t).unwrap();
        }
        let big = nd_colouring(10).unwrap();
        assert!(matches!(brute_force_embed(&big, &Tree::path(3)), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn forest_order_puts_parents_first() {
        let t = Tree::path(6);
        let keep = [true, true, false, true, true, true];
        let order = forest_order(&t, &keep);
        assert_eq!(order, vec![(0, None), (1, Some(0)), (3, None), (4, Some(3)), (5, Some(4))]);
    }
}
