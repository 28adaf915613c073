use serde::{Deserialize, Serialize};

use super::Tree;
use crate::error::{Error, Result};

/// A path in a tree whose interior vertices all have tree-degree 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarePath(pub Vec<usize>);

impl BarePath {
    /// Number of edges.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn interior(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }
}

/// The maximal bare paths of `tree`; together they partition its edges.
pub fn find_maximal_bare_paths(tree: &Tree) -> Vec<BarePath> {
    let n = tree.len();
    if n < 2 {
        return Vec::new();
    }
    let is_branch = |v: usize| tree.degree(v) != 2;
    let mut paths = Vec::new();
    let mut walked = std::collections::HashSet::new();
    for start in (0..n).filter(|&v| is_branch(v)) {
        for &first in tree.neighbours(start) {
            if walked.contains(&(start.min(first), start.max(first))) {
                continue;
            }
            let mut seq = vec![start];
            let (mut prev, mut cur) = (start, first);
            loop {
                walked.insert((prev.min(cur), prev.max(cur)));
                seq.push(cur);
                if is_branch(cur) {
                    break;
                }
                let next = *tree.neighbours(cur).iter().find(|&&u| u != prev).expect("degree 2");
                prev = cur;
                cur = next;
            }
            paths.push(BarePath(seq));
        }
    }
    paths
}

/// Vertex-disjoint length-`m` bare subpaths that avoid the endpoints of the
/// maximal bare paths; a maximal path on `q` vertices yields
/// `(q - 2) / (m + 1)` of them, packed from its first interior vertex.
pub fn extract_bare_subpaths(tree: &Tree, m: usize) -> Result<Vec<BarePath>> {
    if m < 2 {
        return Err(Error::Parameter(format!("bare subpath length must be at least 2, got {m}")));
    }
    let mut out = Vec::new();
    for path in find_maximal_bare_paths(tree) {
        let q = path.0.len();
        let count = q.saturating_sub(2) / (m + 1);
        for j in 0..count {
            let start = 1 + j * (m + 1);
            out.push(BarePath(path.0[start..=start + m].to_vec()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lengths(paths: &[BarePath]) -> Vec<usize> {
        let mut l: Vec<_> = paths.iter().map(BarePath::length).collect();
        l.sort_unstable();
        l
    }

    #[test]
    fn maximal_path_examples() {
        assert_eq!(find_maximal_bare_paths(&Tree::path(5)), vec![BarePath(vec![0, 1, 2, 3, 4])]);
        assert_eq!(lengths(&find_maximal_bare_paths(&Tree::star(3))), vec![1, 1, 1]);
        let spider = find_maximal_bare_paths(&Tree::spider(&[2, 2, 2]));
        assert_eq!(lengths(&spider), vec![2, 2, 2]);
        assert!(spider.iter().all(|p| p.0[0] == 0));
        assert!(find_maximal_bare_paths(&Tree::new(1, vec![]).unwrap()).is_empty());
    }

    #[test]
    fn maximal_paths_partition_edges() {
        for seed in 0..40 {
            let t = Tree::random(30, seed).unwrap();
            let paths = find_maximal_bare_paths(&t);
            let mut edges: Vec<_> = paths
                .iter()
                .flat_map(|p| p.0.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))))
                .collect();
            edges.sort_unstable();
            let mut expected: Vec<_> = t.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
            expected.sort_unstable();
            assert_eq!(edges, expected);
            for p in &paths {
                assert!(p.interior().iter().all(|&v| t.degree(v) == 2));
                assert!(t.degree(p.0[0]) != 2 && t.degree(*p.0.last().unwrap()) != 2);
            }
        }
    }

    #[test]
    fn subpath_examples() {
        assert_eq!(extract_bare_subpaths(&Tree::path(10), 3).unwrap().len(), 2);
        assert_eq!(extract_bare_subpaths(&Tree::path(6), 3).unwrap().len(), 1);
        assert!(extract_bare_subpaths(&Tree::star(5), 3).unwrap().is_empty());
        assert!(extract_bare_subpaths(&Tree::path(6), 1).is_err());
    }

    #[test]
    fn subpaths_are_disjoint_and_avoid_branch_vertices() {
        let t = Tree::spider(&[12, 9, 4]);
        let subs = extract_bare_subpaths(&t, 3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for s in &subs {
            assert_eq!(s.length(), 3);
            for &v in &s.0 {
                assert!(seen.insert(v));
                assert!(t.degree(v) == 2);
            }
        }
    }
}
