//! Rainbow matchings from a vertex set `A` into a disjoint set `X` using
//! colours from `C`: greedy seeding, layered switching, an exact oracle and
//! greedy completion from a reserve.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::colouring::{ColourId, ColourSet, EdgeColouring, VertexId, VertexSet};
use crate::error::{Error, Result};

/// Vertex-disjoint edges with pairwise distinct colours. Each edge is stored
/// as `(a, x)` with `a` on the source side.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowMatching {
    edges: Vec<(VertexId, VertexId)>,
    colours: Vec<ColourId>,
}

impl RainbowMatching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds and validates a matching from its edges.
    pub fn from_edges(colouring: &EdgeColouring, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let colours = edges
            .iter()
            .map(|&(u, v)| colouring.colour_of(u, v))
            .collect::<Result<Vec<_>>>()?;
        let m = RainbowMatching { edges, colours };
        m.validate(colouring)?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn colours(&self) -> &[ColourId] {
        &self.colours
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId, ColourId)> + '_ {
        self.edges.iter().zip(&self.colours).map(|(&(a, x), &c)| (a, x, c))
    }

    fn push(&mut self, a: VertexId, x: VertexId, c: ColourId) {
        self.edges.push((a, x));
        self.colours.push(c);
    }

    /// Checks recorded colours, vertex-disjointness and colour-distinctness.
    pub fn validate(&self, colouring: &EdgeColouring) -> Result<()> {
        let mut seen_v = std::collections::HashSet::new();
        let mut seen_c = std::collections::HashSet::new();
        for (a, x, c) in self.iter() {
            if colouring.colour_of(a, x)? != c {
                return Err(Error::Violation(format!("edge {a}-{x} recorded with wrong colour {c}")));
            }
            if !seen_v.insert(a) || !seen_v.insert(x) {
                return Err(Error::Violation(format!("edge {a}-{x} shares a vertex with another edge")));
            }
            if !seen_c.insert(c) {
                return Err(Error::Violation(format!("colour {c} used twice")));
            }
        }
        Ok(())
    }

    pub fn covers(&self, v: VertexId) -> bool {
        self.edges.iter().any(|&(a, x)| a == v || x == v)
    }
}

fn check_disjoint(a: &VertexSet, x: &VertexSet) -> Result<()> {
    if let Some(v) = a.intersection(x).next() {
        return Err(Error::Parameter(format!("source and target sets share vertex {v}")));
    }
    Ok(())
}

fn check_ranges(colouring: &EdgeColouring, a: &VertexSet, x: &VertexSet, c: &ColourSet) -> Result<()> {
    let n = colouring.n();
    if let Some(v) = a.ones().chain(x.ones()).find(|&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if let Some(col) = c.ones().find(|&col| col >= colouring.num_colours()) {
        return Err(Error::ColourOutOfRange { colour: col, count: colouring.num_colours() });
    }
    check_disjoint(a, x)
}

/// Greedy maximal rainbow matching scanning `A` and then `X` in index order.
pub fn greedy_rainbow_matching(
    colouring: &EdgeColouring,
    a: &VertexSet,
    x: &VertexSet,
    c: &ColourSet,
) -> Result<RainbowMatching> {
    check_ranges(colouring, a, x, c)?;
    let mut used_v = VertexSet::with_capacity(colouring.n());
    let mut used_c = ColourSet::with_capacity(colouring.num_colours());
    let mut out = RainbowMatching::new();
    let targets: Vec<VertexId> = x.ones().collect();
    for u in a.ones() {
        for &v in &targets {
            if used_v.contains(v) {
                continue;
            }
            let col = colouring.colour(u, v);
            if c.contains(col) && !used_c.contains(col) {
                used_v.insert(v);
                used_c.insert(col);
                out.push(u, v, col);
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchingParams {
    /// Maximum depth of the layered search.
    pub max_layers: usize,
    /// Starting number of disjoint same-colour edges that makes a colour
    /// plentiful; halved after a failed round down to 1.
    pub disjoint_edge_threshold: usize,
    /// Pair inspections allowed per augmentation attempt.
    pub node_budget: usize,
}

impl Default for SwitchingParams {
    fn default() -> Self {
        SwitchingParams { max_layers: 6, disjoint_edge_threshold: 4, node_budget: 1_000_000 }
    }
}

impl SwitchingParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_layers == 0 || self.disjoint_edge_threshold == 0 || self.node_budget == 0 {
            return Err(Error::Parameter("switching parameters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SwitchingOutcome {
    pub matching: RainbowMatching,
    /// Size of the greedy seed.
    pub seed_size: usize,
    pub augmentations: usize,
    /// Some attempt stopped because it ran out of pair inspections.
    pub budget_exhausted: bool,
}

/// Greedy seed followed by switching augmentations.
///
/// Each round grows layers `A_i ⊆ A`, `B_i ⊆ X` from the uncovered vertices:
/// a colour becomes plentiful once it has `s` disjoint edges between the
/// current layers, and the matched edge of a plentiful colour joins the next
/// layer. An edge between layers whose colour is missing from the matching
/// gives an augmentation once the matched edges in its way are relocated to
/// same-coloured edges deeper in the layering.
pub fn switching_rainbow_matching(
    colouring: &EdgeColouring,
    a: &VertexSet,
    x: &VertexSet,
    c: &ColourSet,
    params: &SwitchingParams,
) -> Result<SwitchingOutcome> {
    params.validate()?;
    let seed = greedy_rainbow_matching(colouring, a, x, c)?;
    let seed_size = seed.len();
    let mut state = Switcher::new(colouring, a, x, c, &seed);
    let mut threshold = params.disjoint_edge_threshold;
    let mut augmentations = 0;
    let mut budget_exhausted = false;
    loop {
        match state.attempt(threshold, params) {
            Attempt::Found(aug) => {
                state.apply(aug)?;
                augmentations += 1;
            }
            Attempt::Exhausted => {
                budget_exhausted = true;
                if threshold == 1 {
                    break;
                }
                threshold = (threshold / 2).max(1);
            }
            Attempt::None => {
                if threshold == 1 {
                    break;
                }
                threshold = (threshold / 2).max(1);
            }
        }
    }
    let matching = state.into_matching();
    matching.validate(colouring).map_err(|e| Error::Internal(e.to_string()))?;
    if matching.len() < seed_size {
        return Err(Error::Internal("switching shrank the greedy seed".into()));
    }
    Ok(SwitchingOutcome { matching, seed_size, augmentations, budget_exhausted })
}

const NONE: usize = usize::MAX;
const UNREACHED: u32 = u32::MAX;
/// Disjoint same-colour edges remembered per colour.
const LIST_CAP: usize = 16;

struct Augmentation {
    moves: Vec<(ColourId, (VertexId, VertexId))>,
    edge: (VertexId, VertexId, ColourId),
}

enum Attempt {
    Found(Augmentation),
    None,
    Exhausted,
}

struct Switcher<'a> {
    colouring: &'a EdgeColouring,
    sources: Vec<VertexId>,
    targets: Vec<VertexId>,
    allowed: &'a ColourSet,
    mate: Vec<VertexId>,
    edge_of_colour: HashMap<ColourId, (VertexId, VertexId)>,
    level: Vec<u32>,
}

/// Per-attempt record of disjoint same-colour edges, tagged with the layer
/// at which both endpoints were present.
#[derive(Default)]
struct ColourLists {
    lists: HashMap<ColourId, Vec<(VertexId, VertexId, u32)>>,
    joined: HashMap<ColourId, u32>,
}

impl<'a> Switcher<'a> {
    fn new(
        colouring: &'a EdgeColouring,
        a: &VertexSet,
        x: &VertexSet,
        allowed: &'a ColourSet,
        seed: &RainbowMatching,
    ) -> Self {
        let n = colouring.n();
        let mut mate = vec![NONE; n];
        let mut edge_of_colour = HashMap::new();
        for (u, v, c) in seed.iter() {
            mate[u] = v;
            mate[v] = u;
            edge_of_colour.insert(c, (u, v));
        }
        Switcher {
            colouring,
            sources: a.ones().collect(),
            targets: x.ones().collect(),
            allowed,
            mate,
            edge_of_colour,
            level: vec![UNREACHED; n],
        }
    }

    fn into_matching(self) -> RainbowMatching {
        let mut edges: Vec<_> = self.edge_of_colour.into_iter().map(|(c, (a, x))| (a, x, c)).collect();
        edges.sort_unstable();
        let mut m = RainbowMatching::new();
        for (a, x, c) in edges {
            m.push(a, x, c);
        }
        m
    }

    fn attempt(&mut self, threshold: usize, params: &SwitchingParams) -> Attempt {
        self.level.iter_mut().for_each(|l| *l = UNREACHED);
        let mut new_a: Vec<VertexId> = self.sources.iter().copied().filter(|&v| self.mate[v] == NONE).collect();
        let mut new_b: Vec<VertexId> = self.targets.iter().copied().filter(|&v| self.mate[v] == NONE).collect();
        if new_a.is_empty() || new_b.is_empty() {
            return Attempt::None;
        }
        for &v in new_a.iter().chain(&new_b) {
            self.level[v] = 0;
        }
        let mut all_a: Vec<VertexId> = Vec::new();
        let mut all_b: Vec<VertexId> = Vec::new();
        let mut lists = ColourLists::default();
        let mut inspected = 0usize;
        for i in 0..=params.max_layers as u32 {
            let old_a = all_a.len();
            all_a.extend_from_slice(&new_a);
            all_b.extend_from_slice(&new_b);
            let mut plentiful = Vec::new();
            let pairs = new_a
                .iter()
                .flat_map(|&u| all_b.iter().map(move |&v| (u, v)))
                .chain(all_a[..old_a].iter().flat_map(|&u| new_b.iter().map(move |&v| (u, v))));
            for (u, v) in pairs {
                inspected += 1;
                if inspected > params.node_budget {
                    return Attempt::Exhausted;
                }
                let c = self.colouring.colour(u, v);
                if !self.allowed.contains(c) {
                    continue;
                }
                if !self.edge_of_colour.contains_key(&c) {
                    if let Some(moves) = self.relocate(i, vec![u, v], &lists) {
                        return Attempt::Found(Augmentation { moves, edge: (u, v, c) });
                    }
                    continue;
                }
                let list = lists.lists.entry(c).or_default();
                if list.len() < LIST_CAP && list.iter().all(|&(p, q, _)| p != u && q != v && p != v && q != u) {
                    list.push((u, v, i));
                    if list.len() >= threshold && !lists.joined.contains_key(&c) {
                        lists.joined.insert(c, i);
                        plentiful.push(c);
                    }
                }
            }
            if i as usize == params.max_layers {
                break;
            }
            new_a.clear();
            new_b.clear();
            for c in plentiful {
                let (p, q) = self.edge_of_colour[&c];
                if self.level[p] == UNREACHED {
                    self.level[p] = i + 1;
                    self.level[q] = i + 1;
                    new_a.push(p);
                    new_b.push(q);
                }
            }
            if new_a.is_empty() {
                break;
            }
        }
        Attempt::None
    }

    /// Moves that free every vertex of `avoid` (all at layer `<= i`) while
    /// keeping the set of matched colours, or `None` if no disjoint
    /// replacements are available.
    fn relocate(&self, i: u32, avoid: Vec<VertexId>, lists: &ColourLists) -> Option<Vec<(ColourId, (VertexId, VertexId))>> {
        if i == 0 {
            return Some(Vec::new());
        }
        let (lower, upper): (Vec<VertexId>, Vec<VertexId>) = avoid.into_iter().partition(|&v| self.level[v] < i);
        let mut blocked: Vec<VertexId> = lower.clone();
        let mut displaced: Vec<ColourId> = Vec::new();
        for &v in &upper {
            let w = self.mate[v];
            let c = self.colouring.colour(v, w);
            if !displaced.contains(&c) {
                displaced.push(c);
            }
        }
        let mut chosen = Vec::with_capacity(displaced.len());
        for c in displaced {
            let list = lists.lists.get(&c)?;
            let &(p, q, _) = list
                .iter()
                .find(|&&(p, q, tag)| tag < i && !blocked.contains(&p) && !blocked.contains(&q))?;
            blocked.push(p);
            blocked.push(q);
            chosen.push((c, (p, q)));
        }
        let mut moves = self.relocate(i - 1, blocked, lists)?;
        moves.extend(chosen);
        Some(moves)
    }

    fn apply(&mut self, aug: Augmentation) -> Result<()> {
        let before = self.edge_of_colour.len();
        for &(c, _) in &aug.moves {
            let (p, q) = self.edge_of_colour[&c];
            self.mate[p] = NONE;
            self.mate[q] = NONE;
        }
        let (u, v, c) = aug.edge;
        let inserts = aug.moves.iter().map(|&(col, e)| (col, e)).chain(std::iter::once((c, (u, v))));
        for (col, (p, q)) in inserts {
            if self.mate[p] != NONE || self.mate[q] != NONE {
                return Err(Error::Internal(format!("switching placed two edges at {p} or {q}")));
            }
            if self.colouring.colour(p, q) != col {
                return Err(Error::Internal("relocated edge changed colour".into()));
            }
            self.mate[p] = q;
            self.mate[q] = p;
            self.edge_of_colour.insert(col, (p, q));
        }
        if self.edge_of_colour.len() != before + 1 {
            return Err(Error::Internal("augmentation did not add exactly one colour".into()));
        }
        Ok(())
    }
}

/// Largest `|A|` accepted by [`brute_force_rainbow_matching`].
pub const BRUTE_FORCE_MAX_SOURCES: usize = 10;
/// Largest `|X|` accepted by [`brute_force_rainbow_matching`].
pub const BRUTE_FORCE_MAX_TARGETS: usize = 16;

/// Maximum rainbow matching by branch and bound.
pub fn brute_force_rainbow_matching(
    colouring: &EdgeColouring,
    a: &VertexSet,
    x: &VertexSet,
    c: &ColourSet,
) -> Result<RainbowMatching> {
    check_ranges(colouring, a, x, c)?;
    let sources: Vec<VertexId> = a.ones().collect();
    let targets: Vec<VertexId> = x.ones().collect();
    if sources.len() > BRUTE_FORCE_MAX_SOURCES || targets.len() > BRUTE_FORCE_MAX_TARGETS {
        return Err(Error::SizeLimit(format!(
            "brute-force matching handles |A| <= {BRUTE_FORCE_MAX_SOURCES} and |X| <= {BRUTE_FORCE_MAX_TARGETS}, got {} and {}",
            sources.len(),
            targets.len()
        )));
    }
    struct Search<'s> {
        colouring: &'s EdgeColouring,
        allowed: &'s ColourSet,
        sources: Vec<VertexId>,
        targets: Vec<VertexId>,
        used_target: Vec<bool>,
        used_colours: Vec<ColourId>,
        current: Vec<(VertexId, VertexId, ColourId)>,
        best: Vec<(VertexId, VertexId, ColourId)>,
    }
    impl Search<'_> {
        fn run(&mut self, idx: usize) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if idx == self.sources.len()
                || self.current.len() + (self.sources.len() - idx) <= self.best.len()
                || self.best.len() == self.sources.len().min(self.targets.len())
            {
                return;
            }
            let u = self.sources[idx];
            for t in 0..self.targets.len() {
                if self.used_target[t] {
                    continue;
                }
                let v = self.targets[t];
                let col = self.colouring.colour(u, v);
                if !self.allowed.contains(col) || self.used_colours.contains(&col) {
                    continue;
                }
                self.used_target[t] = true;
                self.used_colours.push(col);
                self.current.push((u, v, col));
                self.run(idx + 1);
                self.current.pop();
                self.used_colours.pop();
                self.used_target[t] = false;
            }
            self.run(idx + 1);
        }
    }
    let mut search = Search {
        colouring,
        allowed: c,
        used_target: vec![false; targets.len()],
        sources,
        targets,
        used_colours: Vec::new(),
        current: Vec::new(),
        best: Vec::new(),
    };
    search.run(0);
    let mut out = RainbowMatching::new();
    for (u, v, col) in search.best {
        out.push(u, v, col);
    }
    Ok(out)
}

/// Extends `partial` so that every vertex of `uncovered` is matched into `z`
/// with a fresh colour from `reserve`, scanning both in index order.
pub fn complete_matching_greedy(
    colouring: &EdgeColouring,
    partial: &RainbowMatching,
    uncovered: &VertexSet,
    z: &VertexSet,
    reserve: &ColourSet,
) -> Result<RainbowMatching> {
    let mut used_v = VertexSet::with_capacity(colouring.n());
    let mut used_c = ColourSet::with_capacity(colouring.num_colours());
    for (a, x, c) in partial.iter() {
        used_v.insert(a);
        used_v.insert(x);
        used_c.insert(c);
    }
    let mut out = partial.clone();
    let targets: Vec<VertexId> = z.ones().collect();
    for u in uncovered.ones() {
        if used_v.contains(u) {
            continue;
        }
        let found = targets.iter().copied().find(|&v| {
            v != u && !used_v.contains(v) && !uncovered.contains(v) && {
                let col = colouring.colour(u, v);
                reserve.contains(col) && !used_c.contains(col)
            }
        });
        let Some(v) = found else {
            return Err(Error::CompletionStuck { vertex: u });
        };
        let col = colouring.colour(u, v);
        used_v.insert(u);
        used_v.insert(v);
        used_c.insert(col);
        out.push(u, v, col);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{full_set, set_of};
    use crate::generators::{group_sum_colouring, random_locally_k_bounded};
    use crate::GroupSpec;

    /// `K_{2r}` with sides `0..r` and `r..2r`; across edges coloured
    /// `(i + j) mod r`, inside edges coloured with labels above `r`.
    fn latin(r: usize) -> EdgeColouring {
        EdgeColouring::explicit_from_fn(2 * r, r, |u, v| {
            if u < r && v >= r {
                ((u + v - r) % r) as u64
            } else {
                (r + u * 2 * r + v) as u64
            }
        })
        .unwrap()
    }

    fn latin_instance(r: usize) -> (EdgeColouring, VertexSet, VertexSet, ColourSet) {
        let c = latin(r);
        let a = set_of(2 * r, 0..r);
        let x = set_of(2 * r, r..2 * r);
        let cols = set_of(c.num_colours(), 0..r);
        (c, a, x, cols)
    }

    #[test]
    fn parity_and_latin_known_values() {
        let (c, a, x, cols) = latin_instance(2);
        assert_eq!(brute_force_rainbow_matching(&c, &a, &x, &cols).unwrap().len(), 1);
        let out = switching_rainbow_matching(&c, &a, &x, &cols, &SwitchingParams::default()).unwrap();
        assert_eq!(out.matching.len(), 1);

        let (c, a, x, cols) = latin_instance(4);
        assert_eq!(brute_force_rainbow_matching(&c, &a, &x, &cols).unwrap().len(), 3);
        let out = switching_rainbow_matching(&c, &a, &x, &cols, &SwitchingParams::default()).unwrap();
        assert_eq!(out.matching.len(), 3);

        let (c, a, x, cols) = latin_instance(3);
        assert_eq!(brute_force_rainbow_matching(&c, &a, &x, &cols).unwrap().len(), 3);
    }

    #[test]
    fn greedy_examples() {
        let z4 = group_sum_colouring(&GroupSpec::cyclic(4)).unwrap();
        let all = full_set(4);
        let m = greedy_rainbow_matching(&z4, &set_of(4, [0, 1]), &set_of(4, [2, 3]), &all).unwrap();
        assert_eq!(m.edges(), &[(0, 2), (1, 3)]);
        assert_eq!(m.colours(), &[2, 0]);

        let none = ColourSet::with_capacity(4);
        assert!(greedy_rainbow_matching(&z4, &set_of(4, [0]), &set_of(4, [1]), &none).unwrap().is_empty());
        let one = greedy_rainbow_matching(&z4, &set_of(4, [0]), &set_of(4, [1]), &all).unwrap();
        assert_eq!(one.len(), 1);
        assert!(greedy_rainbow_matching(&z4, &set_of(4, [0, 1]), &set_of(4, [1]), &all).is_err());
    }

    #[test]
    fn brute_force_limits_and_empty() {
        let z = group_sum_colouring(&GroupSpec::cyclic(30)).unwrap();
        let all = full_set(30);
        let empty = VertexSet::with_capacity(30);
        assert!(brute_force_rainbow_matching(&z, &empty, &set_of(30, 0..5), &all).unwrap().is_empty());
        let err = brute_force_rainbow_matching(&z, &set_of(30, 0..11), &set_of(30, 11..20), &all);
        assert!(matches!(err, Err(Error::SizeLimit(_))));
    }

    #[test]
    fn switching_never_loses_to_greedy_on_random_instances() {
        for seed in 0..60u64 {
            let c = random_locally_k_bounded(24, 2, seed).unwrap();
            let a = set_of(24, (0..8).map(|i| (i * 3 + seed as usize) % 24));
            let x = set_of(24, (0..24).filter(|v| !a.contains(*v)).take(12));
            let cols = full_set(c.num_colours());
            let greedy = greedy_rainbow_matching(&c, &a, &x, &cols).unwrap();
            let out = switching_rainbow_matching(&c, &a, &x, &cols, &SwitchingParams::default()).unwrap();
            out.matching.validate(&c).unwrap();
            assert!(out.matching.len() >= greedy.len());
            let best = brute_force_rainbow_matching(&c, &a, &x, &cols).unwrap();
            assert!(out.matching.len() <= best.len());
        }
    }

    #[test]
    fn switching_augments_beyond_greedy_on_large_instance() {
        let c = group_sum_colouring(&GroupSpec::cyclic(401)).unwrap();
        let a = set_of(401, 0..100);
        let x = set_of(401, 100..220);
        let cols = set_of(401, (0..401).filter(|k| k % 3 != 0));
        let greedy = greedy_rainbow_matching(&c, &a, &x, &cols).unwrap();
        let out = switching_rainbow_matching(&c, &a, &x, &cols, &SwitchingParams::default()).unwrap();
        assert!(out.matching.len() >= greedy.len());
        assert_eq!(out.seed_size, greedy.len());
        out.matching.validate(&c).unwrap();
    }

    #[test]
    fn completion_examples() {
        let z7 = group_sum_colouring(&GroupSpec::cyclic(7)).unwrap();
        let all = full_set(7);
        let empty = RainbowMatching::new();
        let done = complete_matching_greedy(&z7, &empty, &VertexSet::with_capacity(7), &set_of(7, 1..7), &all).unwrap();
        assert!(done.is_empty());
        let m = complete_matching_greedy(&z7, &empty, &set_of(7, [0]), &set_of(7, 1..7), &all).unwrap();
        let (a, z, col) = m.iter().next().unwrap();
        assert_eq!((a, col), (0, z));

        let partial = RainbowMatching::from_edges(&z7, vec![(2, 3)]).unwrap();
        let grown = complete_matching_greedy(&z7, &partial, &set_of(7, [0]), &set_of(7, 1..7), &all).unwrap();
        assert_eq!(grown.len(), 2);
        grown.validate(&z7).unwrap();

        let stuck = complete_matching_greedy(&z7, &empty, &set_of(7, [0]), &set_of(7, [1]), &set_of(7, [2]));
        assert_eq!(stuck, Err(Error::CompletionStuck { vertex: 0 }));
    }

    #[test]
    fn validation_rejects_repeated_colours() {
        let z7 = group_sum_colouring(&GroupSpec::cyclic(7)).unwrap();
        assert!(RainbowMatching::from_edges(&z7, vec![(0, 3), (1, 2)]).is_err());
        assert!(RainbowMatching::from_edges(&z7, vec![(0, 3), (0, 2)]).is_err());
        assert!(RainbowMatching::from_edges(&z7, vec![(0, 3), (1, 4)]).is_ok());
    }
}
