//! Independent oracles. Written from the definitions only; they share no
//! code with the library's validators.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rainbow_core::{EdgeColouring, Tree, VertexId};

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn injective_into(map: &[usize], n: usize) -> bool {
    let distinct: HashSet<_> = map.iter().collect();
    distinct.len() == map.len() && map.iter().all(|&x| x < n)
}

/// Injective, and no colour appears on two tree edges.
pub fn is_rainbow_copy(colouring: &EdgeColouring, tree: &Tree, map: &[VertexId]) -> bool {
    if map.len() != tree.len() || !injective_into(map, colouring.n()) {
        return false;
    }
    let colours: HashSet<_> = tree.edges().iter().map(|&(u, v)| colouring.colour(map[u], map[v])).collect();
    colours.len() == tree.edges().len()
}

/// How often each edge of `K_n` is used by the copies, or `None` if a copy
/// is not an injective map into `0..n`.
pub fn edge_multiplicities(n: usize, tree: &Tree, copies: &[Vec<VertexId>]) -> Option<HashMap<(usize, usize), usize>> {
    let mut count = HashMap::new();
    for map in copies {
        if map.len() != tree.len() || !injective_into(map, n) {
            return None;
        }
        for &(u, v) in tree.edges() {
            *count.entry(edge(map[u], map[v])).or_insert(0) += 1;
        }
    }
    Some(count)
}

/// The copies use every edge of `K_n` exactly once.
pub fn is_decomposition(n: usize, tree: &Tree, copies: &[Vec<VertexId>]) -> bool {
    match edge_multiplicities(n, tree, copies) {
        Some(count) => count.len() == n * (n - 1) / 2 && count.values().all(|&c| c == 1),
        None => false,
    }
}

/// Every edge in at most two copies, every two copies share at most one edge.
pub fn is_relaxed_double_cover(n: usize, tree: &Tree, copies: &[Vec<VertexId>]) -> bool {
    let Some(count) = edge_multiplicities(n, tree, copies) else {
        return false;
    };
    if count.values().any(|&c| c > 2) {
        return false;
    }
    let sets: Vec<HashSet<(usize, usize)>> = copies
        .iter()
        .map(|map| tree.edges().iter().map(|&(u, v)| edge(map[u], map[v])).collect())
        .collect();
    (0..sets.len()).all(|i| (i + 1..sets.len()).all(|j| sets[i].intersection(&sets[j]).count() <= 1))
}

/// Injective labels in `Z_m` with pairwise distinct edge sums.
pub fn is_cyclic_harmonious(tree: &Tree, m: usize, labels: &[usize]) -> bool {
    if labels.len() != tree.len() || !injective_into(labels, m) {
        return false;
    }
    let sums: HashSet<_> = tree.edges().iter().map(|&(u, v)| (labels[u] + labels[v]) % m).collect();
    sums.len() == tree.edges().len()
}

/// Maximum rainbow matching between `sources` and `targets` using colours
/// from `allowed`, by trying every choice for every source in turn.
pub fn max_rainbow_matching(
    colouring: &EdgeColouring,
    sources: &[usize],
    targets: &[usize],
    allowed: &HashSet<usize>,
) -> usize {
    fn go(
        colouring: &EdgeColouring,
        sources: &[usize],
        targets: &[usize],
        allowed: &HashSet<usize>,
        used_targets: &mut Vec<usize>,
        used_colours: &mut Vec<usize>,
    ) -> usize {
        let Some((&first, rest)) = sources.split_first() else {
            return 0;
        };
        let mut best = go(colouring, rest, targets, allowed, used_targets, used_colours);
        for &x in targets {
            let c = colouring.colour(first, x);
            if used_targets.contains(&x) || used_colours.contains(&c) || !allowed.contains(&c) {
                continue;
            }
            used_targets.push(x);
            used_colours.push(c);
            best = best.max(1 + go(colouring, rest, targets, allowed, used_targets, used_colours));
            used_targets.pop();
            used_colours.pop();
            if best == sources.len() {
                break;
            }
        }
        best
    }
    go(colouring, sources, targets, allowed, &mut Vec::new(), &mut Vec::new())
}

/// Unrooted isomorphism class of a tree via centre-rooted AHU strings.
pub fn tree_class(tree: &Tree) -> String {
    let n = tree.len();
    let mut degree: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in tree.neighbours(v) {
                degree[u] -= 1;
                if degree[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    fn encode(tree: &Tree, v: usize, parent: Option<usize>) -> String {
        let mut kids: Vec<String> =
            tree.neighbours(v).iter().filter(|&&u| Some(u) != parent).map(|&u| encode(tree, u, Some(v))).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    layer.iter().map(|&c| encode(tree, c, None)).min().expect("a tree has a centre")
}

/// Edges added by each layer, rebuilt from the layer attachments alone.
pub fn layer_edges(layer: &rainbow_core::tree::Layer) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for s in &layer.stars {
        out.extend(s.leaves.iter().map(|&l| edge(s.root, l)));
    }
    for p in &layer.paths {
        out.extend([edge(p.ends.0, p.interior.0), edge(p.interior.0, p.interior.1), edge(p.interior.1, p.ends.1)]);
    }
    out.extend(layer.leaves.iter().map(|&(p, l)| edge(p, l)));
    out
}

pub fn induced_edges(tree: &Tree, keep: &[bool]) -> HashSet<(usize, usize)> {
    tree.edges().iter().filter(|&&(u, v)| keep[u] && keep[v]).map(|&(u, v)| edge(u, v)).collect()
}
