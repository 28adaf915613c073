//! Trees: construction, parsing, random generation, enumeration and splitting.

mod bare_paths;
mod enumerate;
mod split;

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bare_paths::{extract_bare_subpaths, find_maximal_bare_paths, BarePath};
pub use enumerate::{canonical_form, enumerate_trees, MAX_ENUMERATION};
pub use split::{
    default_star_threshold, split_tree, split_tree_with, validate_decomposition, Layer, LayerKind,
    LayeredDecomposition, PathAttachment, SplitParams, StarAttachment,
};

/// A tree on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeDoc", into = "TreeDoc")]
pub struct Tree {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<TreeDoc> for Tree {
    type Error = Error;
    fn try_from(doc: TreeDoc) -> Result<Self> {
        Tree::new(doc.n, doc.edges)
    }
}

impl From<Tree> for TreeDoc {
    fn from(t: Tree) -> Self {
        TreeDoc { n: t.n, edges: t.edges }
    }
}

impl Tree {
    /// Validates connectivity, edge count, loops and ranges.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("a tree needs at least one vertex".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::Parameter(format!(
                "a tree on {n} vertices has {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidEdge(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let tree = Tree { n, edges, adj };
        if tree.bfs_order(0).len() != n {
            return Err(Error::Parameter("edge list is not connected".into()));
        }
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; trees have at least one vertex.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn max_degree_vertex(&self) -> usize {
        (0..self.n).max_by_key(|&v| (self.degree(v), std::cmp::Reverse(v))).unwrap_or(0)
    }

    /// Vertices in breadth-first order from `root`.
    pub fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        order
    }

    /// Parent of each vertex when rooted at `root` (`None` for the root).
    pub fn parents(&self, root: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[root] = true;
        for v in self.bfs_order(root) {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                }
            }
        }
        parent
    }

    pub fn path(n: usize) -> Self {
        Tree::new(n, (1..n).map(|v| (v - 1, v)).collect()).expect("path is a tree")
    }

    pub fn star(leaves: usize) -> Self {
        Tree::new(leaves + 1, (1..=leaves).map(|v| (0, v)).collect()).expect("star is a tree")
    }

    /// Centre `0` with `legs.len()` paths hanging off it.
    pub fn spider(legs: &[usize]) -> Self {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::new(next, edges).expect("spider is a tree")
    }

    /// A path on `handle` vertices with `bristles` leaves on its last vertex.
    pub fn broom(handle: usize, bristles: usize) -> Self {
        let handle = handle.max(1);
        let mut edges: Vec<_> = (1..handle).map(|v| (v - 1, v)).collect();
        edges.extend((0..bristles).map(|i| (handle - 1, handle + i)));
        Tree::new(handle + bristles, edges).expect("broom is a tree")
    }

    /// Spine path with `legs[i]` leaves on spine vertex `i`.
    pub fn caterpillar(legs: &[usize]) -> Self {
        let spine = legs.len().max(1);
        let mut edges: Vec<_> = (1..spine).map(|v| (v - 1, v)).collect();
        let mut next = spine;
        for (i, &l) in legs.iter().enumerate() {
            for _ in 0..l {
                edges.push((i, next));
                next += 1;
            }
        }
        Tree::new(next, edges).expect("caterpillar is a tree")
    }

    /// Two adjacent centres carrying `a` and `b` leaves.
    pub fn double_star(a: usize, b: usize) -> Self {
        let mut edges = vec![(0, 1)];
        edges.extend((0..a).map(|i| (0, 2 + i)));
        edges.extend((0..b).map(|i| (1, 2 + a + i)));
        Tree::new(a + b + 2, edges).expect("double star is a tree")
    }

    /// Decodes a Prüfer sequence over `0..seq.len()+2`.
    pub fn from_prufer(seq: &[usize]) -> Result<Self> {
        let n = seq.len() + 2;
        if let Some(&bad) = seq.iter().find(|&&x| x >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        let mut degree = vec![1usize; n];
        for &x in seq {
            degree[x] += 1;
        }
        let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
            (0..n).filter(|&v| degree[v] == 1).map(std::cmp::Reverse).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &x in seq {
            let std::cmp::Reverse(leaf) = heap.pop().expect("a leaf always exists");
            edges.push((leaf, x));
            degree[x] -= 1;
            if degree[x] == 1 {
                heap.push(std::cmp::Reverse(x));
            }
        }
        let std::cmp::Reverse(a) = heap.pop().expect("two vertices remain");
        let std::cmp::Reverse(b) = heap.pop().expect("two vertices remain");
        edges.push((a, b));
        Tree::new(n, edges)
    }

    /// Uniform random labelled tree, decoded from a seeded Prüfer sequence.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        match n {
            0 => Err(Error::Parameter("a tree needs at least one vertex".into())),
            1 => Tree::new(1, vec![]),
            2 => Tree::new(2, vec![(0, 1)]),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
                Tree::from_prufer(&seq)
            }
        }
    }

    /// Parses the text format: `n` on the first line, then one `u v` per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, first) = lines.next().ok_or_else(|| Error::schema("empty tree file"))?;
        let n: usize = first
            .parse()
            .map_err(|_| Error::schema_at(line, format!("expected vertex count, got {first:?}")))?;
        let mut edges = Vec::new();
        for (line, text) in lines {
            let parts: Vec<_> = text.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::schema_at(line, format!("expected vertex index, got {s:?}")))
            };
            match parts.as_slice() {
                [u, v] => edges.push((parse(u)?, parse(v)?)),
                _ => return Err(Error::schema_at(line, "expected two vertex indices")),
            }
        }
        Tree::new(n, edges).map_err(|e| Error::schema(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Edges with both endpoints kept.
    pub fn induced_forest_edges(&self, keep: &[bool]) -> Vec<(usize, usize)> {
        self.edges.iter().copied().filter(|&(u, v)| keep[u] && keep[v]).collect()
    }
}

/// Random tree on `n` vertices, deterministic in `seed`.
pub fn random_tree(n: usize, seed: u64) -> Result<Tree> {
    Tree::random(n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edge_lists() {
        assert!(Tree::new(3, vec![(0, 1)]).is_err());
        assert!(Tree::new(3, vec![(0, 1), (0, 1)]).is_err());
        assert!(Tree::new(3, vec![(0, 0), (1, 2)]).is_err());
        assert!(Tree::new(3, vec![(0, 1), (1, 3)]).is_err());
        assert!(Tree::new(4, vec![(0, 1), (1, 0), (2, 3)]).is_err());
        assert!(Tree::new(1, vec![]).is_ok());
    }

    #[test]
    fn prufer_round_trip_small() {
        let t = Tree::from_prufer(&[3, 3, 3]).unwrap();
        assert_eq!(t.degree(3), 4);
        let t = Tree::from_prufer(&[1, 2]).unwrap();
        assert_eq!(canonical_form(&t), canonical_form(&Tree::path(4)));
    }

    #[test]
    fn random_tree_is_deterministic() {
        let a = random_tree(5, 42).unwrap();
        let b = random_tree(5, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(random_tree(1, 0).unwrap().len(), 1);
        for n in 1..60 {
            assert_eq!(random_tree(n, n as u64).unwrap().len(), n);
        }
    }

    #[test]
    fn text_format_round_trip() {
        let t = Tree::spider(&[2, 3, 1]);
        let parsed = Tree::parse(&t.to_text()).unwrap();
        assert_eq!(parsed, t);
        let err = Tree::parse("3\n0 1\n1 x\n").unwrap_err();
        assert_eq!(err, Error::Schema { line: Some(3), message: "expected vertex index, got \"x\"".into() });
        assert!(Tree::parse("").is_err());
    }

    #[test]
    fn family_shapes() {
        assert_eq!(Tree::broom(5, 3).len(), 8);
        assert_eq!(Tree::broom(5, 3).degree(4), 4);
        assert_eq!(Tree::caterpillar(&[1, 0, 3]).len(), 7);
        assert_eq!(Tree::double_star(3, 4).len(), 9);
        assert_eq!(Tree::spider(&[2, 2, 2]).degree(0), 3);
    }

    #[test]
    fn json_round_trip() {
        let t = Tree::caterpillar(&[2, 1]);
        let s = serde_json::to_string(&t).unwrap();
        let back: Tree = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<Tree>(r#"{"n":3,"edges":[[0,1]]}"#).is_err());
    }
}
