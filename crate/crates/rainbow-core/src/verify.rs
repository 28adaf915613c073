//! Exact validators. Each returns [`Verdict::Pass`] or the first violation
//! found, as a concrete witness.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::colouring::{ColourId, EdgeColouring, VertexId};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::tree::Tree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two tree vertices share a host in one copy.
    NonInjective { copy: usize, tree_vertices: (usize, usize), host: VertexId },
    /// Two tree edges received the same colour.
    RepeatedColour { tree_edges: [(usize, usize); 2], colour: ColourId },
    /// Two copies share edges; for a packing one shared edge is a violation,
    /// for a double cover two are.
    SharedEdges { copies: (usize, usize), edges: Vec<(VertexId, VertexId)> },
    /// A host edge lies in more copies than allowed.
    OverCovered { edge: (VertexId, VertexId), copies: Vec<usize> },
    /// A host edge is missing from an exact decomposition.
    Uncovered { edge: (VertexId, VertexId) },
    DuplicateLabel { tree_vertices: (usize, usize), label: usize },
    DuplicateSum { tree_edges: [(usize, usize); 2], sum: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { witness: Witness },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail { witness } => Some(witness),
        }
    }

    fn fail(witness: Witness) -> Self {
        Verdict::Fail { witness }
    }
}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_map_shape(tree: &Tree, map: &[VertexId], n: usize) -> Result<()> {
    if map.len() != tree.len() {
        return Err(Error::schema(format!("map has {} entries for a tree on {} vertices", map.len(), tree.len())));
    }
    if let Some(&h) = map.iter().find(|&&h| h >= n) {
        return Err(Error::schema(format!("host vertex {h} out of range for {n} vertices")));
    }
    Ok(())
}

fn injectivity(copy: usize, map: &[VertexId]) -> Option<Witness> {
    let mut seen: HashMap<VertexId, usize> = HashMap::new();
    for (v, &h) in map.iter().enumerate() {
        if let Some(&u) = seen.get(&h) {
            return Some(Witness::NonInjective { copy, tree_vertices: (u, v), host: h });
        }
        seen.insert(h, v);
    }
    None
}

/// Injectivity of `map` and distinct colours on the images of tree edges.
pub fn check_rainbow_embedding(colouring: &EdgeColouring, tree: &Tree, map: &[VertexId]) -> Result<Verdict> {
    check_map_shape(tree, map, colouring.n())?;
    if let Some(w) = injectivity(0, map) {
        return Ok(Verdict::fail(w));
    }
    let mut seen: HashMap<ColourId, (usize, usize)> = HashMap::new();
    for &(u, v) in tree.edges() {
        let c = colouring.colour(map[u], map[v]);
        if let Some(&first) = seen.get(&c) {
            return Ok(Verdict::fail(Witness::RepeatedColour { tree_edges: [first, (u, v)], colour: c }));
        }
        seen.insert(c, (u, v));
    }
    Ok(Verdict::Pass)
}

fn copy_edges<'a>(tree: &'a Tree, map: &'a [VertexId]) -> impl Iterator<Item = (VertexId, VertexId)> + 'a {
    tree.edges().iter().map(move |&(u, v)| ordered(map[u], map[v]))
}

/// Pairwise edge-disjointness of tree copies in `K_n`; with `exact`, also
/// that every edge of `K_n` is covered.
pub fn check_packing(n: usize, tree: &Tree, copies: &[Vec<VertexId>], exact: bool) -> Result<Verdict> {
    let mut owner: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    for (i, map) in copies.iter().enumerate() {
        check_map_shape(tree, map, n)?;
        if let Some(w) = injectivity(i, map) {
            return Ok(Verdict::fail(w));
        }
        for e in copy_edges(tree, map) {
            if let Some(&j) = owner.get(&e) {
                return Ok(Verdict::fail(Witness::SharedEdges { copies: (j, i), edges: vec![e] }));
            }
            owner.insert(e, i);
        }
    }
    if exact {
        for u in 0..n {
            for v in u + 1..n {
                if !owner.contains_key(&(u, v)) {
                    return Ok(Verdict::fail(Witness::Uncovered { edge: (u, v) }));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Every edge of `K_n` in at most two copies and any two copies sharing at
/// most one edge.
pub fn check_odc(n: usize, tree: &Tree, copies: &[Vec<VertexId>]) -> Result<Verdict> {
    let mut holders: HashMap<(VertexId, VertexId), Vec<usize>> = HashMap::new();
    for (i, map) in copies.iter().enumerate() {
        check_map_shape(tree, map, n)?;
        if let Some(w) = injectivity(i, map) {
            return Ok(Verdict::fail(w));
        }
        for e in copy_edges(tree, map) {
            holders.entry(e).or_default().push(i);
        }
    }
    let mut edges: Vec<_> = holders.into_iter().collect();
    edges.sort();
    let mut shared: HashMap<(usize, usize), Vec<(VertexId, VertexId)>> = HashMap::new();
    for (e, copies) in &edges {
        if copies.len() > 2 {
            return Ok(Verdict::fail(Witness::OverCovered { edge: *e, copies: copies.clone() }));
        }
        if let [a, b] = copies[..] {
            let list = shared.entry((a, b)).or_default();
            list.push(*e);
            if list.len() > 1 {
                return Ok(Verdict::fail(Witness::SharedEdges { copies: (a, b), edges: list.clone() }));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Labels injective and in range, and edge sums pairwise distinct.
pub fn check_harmonious(tree: &Tree, group: &Group, labels: &[usize]) -> Result<Verdict> {
    check_map_shape(tree, labels, group.order())?;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (v, &l) in labels.iter().enumerate() {
        if let Some(&u) = seen.get(&l) {
            return Ok(Verdict::fail(Witness::DuplicateLabel { tree_vertices: (u, v), label: l }));
        }
        seen.insert(l, v);
    }
    let mut sums: HashMap<usize, (usize, usize)> = HashMap::new();
    for &(u, v) in tree.edges() {
        let s = group.add(labels[u], labels[v]);
        if let Some(&first) = sums.get(&s) {
            return Ok(Verdict::fail(Witness::DuplicateSum { tree_edges: [first, (u, v)], sum: s }));
        }
        sums.insert(s, (u, v));
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{group_sum_colouring, nd_colouring};
    use crate::GroupSpec;

    #[test]
    fn rainbow_examples() {
        let nd = nd_colouring(2).unwrap();
        let path = Tree::path(3);
        assert_eq!(check_rainbow_embedding(&nd, &path, &[0, 1, 3]).unwrap(), Verdict::Pass);
        let mono = EdgeColouring::explicit_from_fn(3, 2, |_, _| 0).unwrap();
        let v = check_rainbow_embedding(&mono, &path, &[0, 1, 2]).unwrap();
        assert_eq!(v.witness(), Some(&Witness::RepeatedColour { tree_edges: [(0, 1), (1, 2)], colour: 0 }));
        assert!(matches!(
            check_rainbow_embedding(&nd, &path, &[0, 1, 0]).unwrap().witness(),
            Some(Witness::NonInjective { .. })
        ));
        assert!(matches!(check_rainbow_embedding(&nd, &path, &[0, 1]), Err(Error::Schema { .. })));
        assert!(check_rainbow_embedding(&nd, &path, &[0, 1, 9]).is_err());
    }

    #[test]
    fn packing_and_odc() {
        let path = Tree::path(3);
        let copies: Vec<Vec<usize>> = (0..5).map(|s| [0, 1, 3].iter().map(|v| (v + s) % 5).collect()).collect();
        assert!(check_packing(5, &path, &copies, true).unwrap().passed());
        assert!(matches!(
            check_packing(5, &path, &copies[..4], true).unwrap().witness(),
            Some(Witness::Uncovered { .. })
        ));
        let twice = vec![vec![0, 1, 2], vec![0, 1, 2]];
        assert!(matches!(check_packing(5, &path, &twice, false).unwrap().witness(), Some(Witness::SharedEdges { .. })));
        match check_odc(4, &path, &twice).unwrap().witness() {
            Some(Witness::SharedEdges { copies, edges }) => {
                assert_eq!(*copies, (0, 1));
                assert_eq!(edges.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        let edge = Tree::path(2);
        assert!(check_odc(2, &edge, &[vec![0, 1], vec![1, 0]]).unwrap().passed());
        let thrice = vec![vec![0, 1], vec![1, 0], vec![0, 1]];
        assert!(matches!(check_odc(2, &edge, &thrice).unwrap().witness(), Some(Witness::OverCovered { .. })));
    }

    #[test]
    fn harmonious() {
        let z4 = Group::new(GroupSpec::cyclic(4)).unwrap();
        let path = Tree::path(4);
        assert!(check_harmonious(&path, &z4, &[0, 2, 1, 3]).unwrap().passed());
        assert!(matches!(
            check_harmonious(&path, &z4, &[0, 1, 2, 3]).unwrap().witness(),
            Some(Witness::DuplicateSum { .. })
        ));
        assert!(matches!(
            check_harmonious(&path, &z4, &[0, 0, 2, 3]).unwrap().witness(),
            Some(Witness::DuplicateLabel { .. })
        ));
        let zsum = group_sum_colouring(&GroupSpec::cyclic(4)).unwrap();
        assert!(check_rainbow_embedding(&zsum, &path, &[0, 2, 1, 3]).unwrap().passed());
    }
}
