use std::collections::BTreeMap;

use super::Tree;
use crate::error::{Error, Result};

/// Largest vertex count accepted by [`enumerate_trees`].
pub const MAX_ENUMERATION: usize = 10;

/// Isomorphism-invariant string for a tree: the parenthesis encoding rooted
/// at its centre (or the smaller of the two encodings for a bicentral tree).
pub fn canonical_form(tree: &Tree) -> String {
    let centres = centres(tree);
    match centres.as_slice() {
        [c] => rooted_code(tree, *c, None),
        [a, b] => {
            let ca = rooted_code(tree, *a, Some(*b));
            let cb = rooted_code(tree, *b, Some(*a));
            let (lo, hi) = if ca <= cb { (ca, cb) } else { (cb, ca) };
            format!("[{lo}{hi}]")
        }
        _ => unreachable!("a tree has one or two centres"),
    }
}

fn centres(tree: &Tree) -> Vec<usize> {
    let n = tree.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
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
    layer.sort_unstable();
    layer
}

/// Parenthesis code of the subtree at `root`, ignoring the neighbour `skip`.
fn rooted_code(tree: &Tree, root: usize, skip: Option<usize>) -> String {
    let mut parent = vec![usize::MAX; tree.len()];
    parent[root] = skip.unwrap_or(usize::MAX);
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &u in tree.neighbours(v) {
            if u != parent[v] {
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    let mut codes: Vec<String> = vec![String::new(); tree.len()];
    for &v in order.iter().rev() {
        let mut children: Vec<String> = tree
            .neighbours(v)
            .iter()
            .filter(|&&u| u != parent[v])
            .map(|&u| std::mem::take(&mut codes[u]))
            .collect();
        children.sort_unstable();
        codes[v] = format!("({})", children.concat());
    }
    std::mem::take(&mut codes[root])
}

/// One representative per isomorphism class of trees on `n` vertices,
/// sorted by canonical form. Grown by attaching a leaf to every vertex of
/// every class on `n - 1` vertices and deduplicating.
pub fn enumerate_trees(n: usize) -> Result<Vec<Tree>> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(Error::SizeLimit(format!(
            "tree enumeration supports 1..={MAX_ENUMERATION} vertices, got {n}"
        )));
    }
    let mut current: BTreeMap<String, Tree> = BTreeMap::new();
    let single = Tree::new(1, vec![])?;
    current.insert(canonical_form(&single), single);
    for size in 2..=n {
        let mut next = BTreeMap::new();
        for tree in current.values() {
            for v in 0..tree.len() {
                let mut edges = tree.edges().to_vec();
                edges.push((v, size - 1));
                let grown = Tree::new(size, edges)?;
                next.entry(canonical_form(&grown)).or_insert(grown);
            }
        }
        current = next;
    }
    Ok(current.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force isomorphism test by trying every bijection.
    fn isomorphic(a: &Tree, b: &Tree) -> bool {
        fn extend(a: &Tree, b: &Tree, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let v = map.len();
            if v == a.len() {
                return true;
            }
            for w in 0..b.len() {
                if used[w] || a.degree(v) != b.degree(w) {
                    continue;
                }
                let ok = (0..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u], w));
                if ok {
                    map.push(w);
                    used[w] = true;
                    if extend(a, b, map, used) {
                        return true;
                    }
                    used[w] = false;
                    map.pop();
                }
            }
            false
        }
        a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; b.len()])
    }

    #[test]
    fn known_class_counts() {
        let expected = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106];
        for (i, &count) in expected.iter().enumerate() {
            assert_eq!(enumerate_trees(i + 1).unwrap().len(), count, "n = {}", i + 1);
        }
        assert!(enumerate_trees(11).is_err());
        assert!(enumerate_trees(0).is_err());
    }

    #[test]
    fn four_vertices_are_path_and_star() {
        let trees = enumerate_trees(4).unwrap();
        let mut max_degrees: Vec<_> = trees.iter().map(|t| t.degree(t.max_degree_vertex())).collect();
        max_degrees.sort_unstable();
        assert_eq!(max_degrees, vec![2, 3]);
    }

    #[test]
    fn canonical_form_agrees_with_brute_force_isomorphism() {
        for n in 1usize..=7 {
            let seqs: Vec<Vec<usize>> = if n < 3 {
                vec![vec![]]
            } else {
                (0..n.pow((n - 2) as u32))
                    .map(|mut code| {
                        (0..n - 2)
                            .map(|_| {
                                let d = code % n;
                                code /= n;
                                d
                            })
                            .collect()
                    })
                    .collect()
            };
            let labelled: Vec<Tree> = if n == 1 {
                vec![Tree::new(1, vec![]).unwrap()]
            } else {
                seqs.iter().map(|s| Tree::from_prufer(s).unwrap()).collect()
            };
            let mut reps: Vec<Tree> = Vec::new();
            for t in labelled.iter().step_by(if n == 7 { 7 } else { 1 }) {
                if !reps.iter().any(|r| isomorphic(r, t)) {
                    reps.push(t.clone());
                }
            }
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    assert_ne!(canonical_form(a), canonical_form(b));
                }
            }
            for t in labelled.iter().take(400) {
                let rep = reps.iter().find(|r| isomorphic(r, t));
                if let Some(r) = rep {
                    assert_eq!(canonical_form(r), canonical_form(t));
                }
            }
            if n <= 6 {
                assert_eq!(reps.len(), enumerate_trees(n).unwrap().len());
            }
        }
    }

    #[test]
    fn prufer_oracle_counts_seven_vertex_classes() {
        let n: usize = 7;
        let mut forms = std::collections::HashSet::new();
        for mut code in 0..n.pow(5) {
            let seq: Vec<usize> = (0..5)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect();
            forms.insert(canonical_form(&Tree::from_prufer(&seq).unwrap()));
        }
        assert_eq!(forms.len(), 11);
    }
}
