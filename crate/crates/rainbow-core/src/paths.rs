//! Collectively rainbow, vertex-disjoint paths of length three between
//! prescribed endpoint pairs, with interiors drawn from a reserve set.

use serde::{Deserialize, Serialize};

use crate::colouring::{ColourSet, EdgeColouring, VertexId, VertexSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRequest {
    pub endpoints: (VertexId, VertexId),
}

impl PathRequest {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        PathRequest { endpoints: (u, v) }
    }
}

/// A path `u – x – y – v`.
pub type Path3 = [VertexId; 4];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowPathSystem {
    pub paths: Vec<Path3>,
}

impl RainbowPathSystem {
    /// All `3·#paths` colours distinct, interiors distinct, outside every
    /// endpoint and inside `reserve`.
    pub fn validate(&self, colouring: &EdgeColouring, reserve: &VertexSet) -> Result<()> {
        let mut colours = std::collections::HashSet::new();
        let mut interior = std::collections::HashSet::new();
        let ends: std::collections::HashSet<_> = self.paths.iter().flat_map(|p| [p[0], p[3]]).collect();
        for p in &self.paths {
            for w in p.windows(2) {
                if !colours.insert(colouring.colour_of(w[0], w[1])?) {
                    return Err(Error::Violation(format!("colour of {}-{} repeats", w[0], w[1])));
                }
            }
            for &x in &p[1..3] {
                if !reserve.contains(x) || ends.contains(&x) || !interior.insert(x) {
                    return Err(Error::Violation(format!("interior vertex {x} reused or outside the reserve")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathOutcome {
    /// Path per request, `None` where the request could not be connected.
    pub paths: Vec<Option<Path3>>,
    pub backtracks: usize,
}

impl PathOutcome {
    pub fn unconnected(&self) -> Vec<usize> {
        self.paths.iter().enumerate().filter(|(_, p)| p.is_none()).map(|(i, _)| i).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.paths.iter().all(Option::is_some)
    }

    pub fn system(&self) -> RainbowPathSystem {
        RainbowPathSystem { paths: self.paths.iter().flatten().copied().collect() }
    }
}

/// Scanner over `(x, y)` interior pairs in lexicographic order.
struct PairScan<'a> {
    colouring: &'a EdgeColouring,
    reserve: Vec<VertexId>,
    allowed: &'a ColourSet,
}

impl PairScan<'_> {
    /// First rainbow path at linear position `>= from`, skipping used
    /// vertices and colours. Returns the path and its position.
    fn first(
        &self,
        (u, v): (VertexId, VertexId),
        from: usize,
        used_v: &[bool],
        used_c: &[bool],
        budget: &mut usize,
    ) -> Option<(Path3, usize)> {
        let len = self.reserve.len();
        if len < 2 {
            return None;
        }
        let ok = |c: usize| self.allowed.contains(c) && !used_c[c];
        for xi in from / len..len {
            let x = self.reserve[xi];
            if used_v[x] {
                continue;
            }
            let c1 = self.colouring.colour(u, x);
            if !ok(c1) {
                continue;
            }
            let start = if xi == from / len { from % len } else { 0 };
            for yi in start..len {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                let y = self.reserve[yi];
                if y == x || used_v[y] {
                    continue;
                }
                let c2 = self.colouring.colour(x, y);
                let c3 = self.colouring.colour(y, v);
                if ok(c2) && ok(c3) && c1 != c2 && c2 != c3 && c1 != c3 {
                    return Some(([u, x, y, v], xi * len + yi));
                }
            }
        }
        None
    }
}

fn check_outside(reserve: &VertexSet, vertices: impl IntoIterator<Item = VertexId>) -> Result<()> {
    for v in vertices {
        if reserve.contains(v) {
            return Err(Error::Parameter(format!("endpoint {v} lies in the interior reserve")));
        }
    }
    Ok(())
}

/// Up to `limit` internally disjoint rainbow `u–x–y–v` paths with
/// `x, y` in `reserve` and colours in `allowed`, taken greedily in
/// lexicographic `(x, y)` order.
pub fn enumerate_rainbow_3paths(
    colouring: &EdgeColouring,
    u: VertexId,
    v: VertexId,
    reserve: &VertexSet,
    allowed: &ColourSet,
    limit: usize,
) -> Result<Vec<Path3>> {
    colouring.colour_of(u, v)?;
    check_outside(reserve, [u, v])?;
    let scan = PairScan { colouring, reserve: reserve.ones().collect(), allowed };
    let mut used_v = vec![false; colouring.n()];
    let used_c = vec![false; colouring.num_colours()];
    let mut out = Vec::new();
    let mut budget = usize::MAX;
    let mut from = 0;
    while out.len() < limit {
        let Some((path, _)) = scan.first((u, v), from, &used_v, &used_c, &mut budget) else { break };
        used_v[path[1]] = true;
        used_v[path[2]] = true;
        out.push(path);
        let xi = scan.reserve.iter().position(|&w| w == path[1]).expect("x is in the reserve");
        from = (xi + 1) * scan.reserve.len();
    }
    Ok(out)
}

/// One rainbow path per request, mutually vertex-disjoint and collectively
/// rainbow. Requests are served in order; when one is blocked the previous
/// path is moved to its next candidate, at most `2·#requests` times in
/// total. `budget` caps the number of pair inspections.
pub fn connect_pairs_disjointly(
    colouring: &EdgeColouring,
    requests: &[PathRequest],
    reserve: &VertexSet,
    allowed: &ColourSet,
    budget: usize,
) -> Result<PathOutcome> {
    let mut ends = std::collections::HashSet::new();
    for r in requests {
        let (u, v) = r.endpoints;
        colouring.colour_of(u, v)?;
        if !ends.insert(u) || !ends.insert(v) {
            return Err(Error::Parameter(format!("path endpoints {u}, {v} repeat across requests")));
        }
    }
    check_outside(reserve, ends.iter().copied())?;
    let scan = PairScan { colouring, reserve: reserve.ones().collect(), allowed };
    let mut used_v = vec![false; colouring.n()];
    let mut used_c = vec![false; colouring.num_colours()];
    let mark = |p: &Path3, used_v: &mut [bool], used_c: &mut [bool], on: bool| {
        used_v[p[1]] = on;
        used_v[p[2]] = on;
        for w in p.windows(2) {
            used_c[colouring.colour(w[0], w[1])] = on;
        }
    };
    let m = requests.len();
    let mut paths: Vec<Option<Path3>> = vec![None; m];
    let mut cursor = vec![0usize; m];
    let mut skipped = vec![false; m];
    let max_backtracks = 2 * m;
    let mut backtracks = 0;
    let mut remaining = budget;
    let mut i = 0;
    while i < m {
        match scan.first(requests[i].endpoints, cursor[i], &used_v, &used_c, &mut remaining) {
            Some((path, pos)) => {
                mark(&path, &mut used_v, &mut used_c, true);
                paths[i] = Some(path);
                cursor[i] = pos + 1;
                i += 1;
                if i < m {
                    cursor[i] = 0;
                }
            }
            None => {
                let prev = (0..i).rev().find(|&t| !skipped[t]);
                match prev {
                    Some(t) if backtracks < max_backtracks && remaining > 0 => {
                        backtracks += 1;
                        skipped[t + 1..i].fill(false);
                        let old = paths[t].take().expect("earlier request connected");
                        mark(&old, &mut used_v, &mut used_c, false);
                        i = t;
                    }
                    _ => {
                        skipped[i] = true;
                        i += 1;
                        if i < m {
                            cursor[i] = 0;
                        }
                    }
                }
            }
        }
    }
    let outcome = PathOutcome { paths, backtracks };
    outcome.system().validate(colouring, reserve).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{full_set, set_of};
    use crate::generators::group_sum_colouring;
    use crate::GroupSpec;

    fn is_rainbow_path(c: &EdgeColouring, p: &Path3) -> bool {
        let cols: Vec<_> = p.windows(2).map(|w| c.colour(w[0], w[1])).collect();
        cols[0] != cols[1] && cols[1] != cols[2] && cols[0] != cols[2]
    }

    #[test]
    fn z7_enumeration() {
        let z7 = group_sum_colouring(&GroupSpec::cyclic(7)).unwrap();
        let y = set_of(7, 2..7);
        let paths = enumerate_rainbow_3paths(&z7, 0, 1, &y, &full_set(7), 10).unwrap();
        assert_eq!(paths, vec![[0, 2, 3, 1], [0, 4, 5, 1]]);
        assert!(paths.iter().all(|p| is_rainbow_path(&z7, p)));
        let target = [0, 2, 5, 1];
        assert!(is_rainbow_path(&z7, &target));
        let cols: Vec<_> = target.windows(2).map(|w| z7.colour(w[0], w[1])).collect();
        assert_eq!(cols, vec![2, 0, 6]);
        assert!(enumerate_rainbow_3paths(&z7, 0, 1, &y, &ColourSet::with_capacity(7), 10).unwrap().is_empty());
        assert!(enumerate_rainbow_3paths(&z7, 0, 1, &VertexSet::with_capacity(7), &full_set(7), 10).unwrap().is_empty());
        assert!(enumerate_rainbow_3paths(&z7, 0, 2, &y, &full_set(7), 10).is_err());
    }

    #[test]
    fn connect_examples() {
        let z7 = group_sum_colouring(&GroupSpec::cyclic(7)).unwrap();
        let y = set_of(7, 2..7);
        let one = connect_pairs_disjointly(&z7, &[PathRequest::new(0, 1)], &y, &full_set(7), 1_000_000).unwrap();
        assert!(one.is_complete());
        assert_eq!(one.system().paths.len(), 1);
        let none = connect_pairs_disjointly(&z7, &[], &y, &full_set(7), 1_000_000).unwrap();
        assert!(none.system().paths.is_empty());

        let z11 = group_sum_colouring(&GroupSpec::cyclic(11)).unwrap();
        let y = set_of(11, 4..11);
        let reqs = [PathRequest::new(0, 1), PathRequest::new(2, 3)];
        for r in &reqs {
            let (u, v) = r.endpoints;
            assert!(!enumerate_rainbow_3paths(&z11, u, v, &y, &full_set(11), 100).unwrap().is_empty());
        }
        let two = connect_pairs_disjointly(&z11, &reqs, &y, &full_set(11), 1_000_000).unwrap();
        assert!(two.is_complete());
        let system = two.system();
        system.validate(&z11, &y).unwrap();
        let colours: std::collections::HashSet<_> =
            system.paths.iter().flat_map(|p| p.windows(2).map(|w| z11.colour(w[0], w[1])).collect::<Vec<_>>()).collect();
        assert_eq!(colours.len(), 6);
    }

    #[test]
    fn validator_catches_shared_interior() {
        let z11 = group_sum_colouring(&GroupSpec::cyclic(11)).unwrap();
        let sys = RainbowPathSystem { paths: vec![[0, 4, 5, 1], [2, 4, 7, 3]] };
        assert!(sys.validate(&z11, &set_of(11, 4..11)).is_err());
    }

    #[test]
    fn repeated_endpoints_rejected() {
        let z11 = group_sum_colouring(&GroupSpec::cyclic(11)).unwrap();
        let reqs = [PathRequest::new(0, 1), PathRequest::new(1, 2)];
        assert!(connect_pairs_disjointly(&z11, &reqs, &set_of(11, 4..11), &full_set(11), 100).is_err());
    }
}
