//! Vertex-disjoint stars at prescribed roots whose edges are collectively
//! rainbow, or carry each colour at most `k` times.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::colouring::{ColourId, ColourSet, EdgeColouring, VertexId, VertexSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarRequest {
    pub root: VertexId,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub root: VertexId,
    pub leaves: Vec<VertexId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarFamily {
    pub stars: Vec<Star>,
}

impl StarFamily {
    pub fn total_leaves(&self) -> usize {
        self.stars.iter().map(|s| s.leaves.len()).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.stars.iter().flat_map(|s| s.leaves.iter().map(move |&l| (s.root, l)))
    }

    /// Checks distinct roots, leaves disjoint from each other and from the
    /// roots, and at most `max_multiplicity` edges of each colour.
    pub fn validate(&self, colouring: &EdgeColouring, max_multiplicity: usize) -> Result<()> {
        let roots: std::collections::HashSet<_> = self.stars.iter().map(|s| s.root).collect();
        if roots.len() != self.stars.len() {
            return Err(Error::Violation("two stars share a root".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let mut counts: HashMap<ColourId, usize> = HashMap::new();
        for (root, leaf) in self.edges() {
            if roots.contains(&leaf) {
                return Err(Error::Violation(format!("leaf {leaf} is also a root")));
            }
            if !seen.insert(leaf) {
                return Err(Error::Violation(format!("leaf {leaf} used twice")));
            }
            let c = colouring.colour_of(root, leaf)?;
            let count = counts.entry(c).or_default();
            *count += 1;
            if *count > max_multiplicity {
                return Err(Error::Violation(format!("colour {c} used more than {max_multiplicity} times")));
            }
        }
        Ok(())
    }
}

/// Result of a star search: the family found plus any unmet demand.
#[derive(Clone, Debug, PartialEq)]
pub struct StarOutcome {
    pub family: StarFamily,
    /// `(request index, missing leaves)` for every short star.
    pub deficiency: Vec<(usize, usize)>,
    pub augmentations: usize,
    pub used_exhaustive: bool,
}

impl StarOutcome {
    pub fn is_complete(&self) -> bool {
        self.deficiency.is_empty()
    }
}

/// Extra leaves a star may temporarily hold during switching.
pub const OVERFILL_CAP: usize = 8;
/// Largest host on which the exhaustive fallback runs.
pub const EXHAUSTIVE_MAX_N: usize = 40;
/// Default search budget in chain steps.
pub const DEFAULT_STAR_BUDGET: usize = 20_000_000;

const NONE: usize = usize::MAX;

fn check_requests(colouring: &EdgeColouring, requests: &[StarRequest]) -> Result<()> {
    let mut roots = std::collections::HashSet::new();
    for r in requests {
        if r.root >= colouring.n() {
            return Err(Error::VertexOutOfRange { vertex: r.root, n: colouring.n() });
        }
        if r.degree == 0 {
            return Err(Error::Parameter(format!("star at {} requests zero leaves", r.root)));
        }
        if !roots.insert(r.root) {
            return Err(Error::Parameter(format!("root {} requested twice", r.root)));
        }
    }
    Ok(())
}

/// Search state in which the edges at each root are recoloured so that the
/// `r`-th colour-`c` edge at that root gets sub-colour `(c, r)`; a family
/// that is rainbow in sub-colours has at most `k` edges of each colour.
struct StarSearch<'a> {
    colouring: &'a EdgeColouring,
    requests: &'a [StarRequest],
    forbidden_vertices: &'a VertexSet,
    forbidden_colours: &'a ColourSet,
    is_root: Vec<bool>,
    /// Per root, rank of each vertex among the root's same-coloured neighbours.
    ranks: Vec<Vec<u32>>,
    owner: Vec<usize>,
    leaves: Vec<Vec<VertexId>>,
    used: HashMap<usize, (usize, VertexId)>,
    steps: usize,
}

impl<'a> StarSearch<'a> {
    fn new(
        colouring: &'a EdgeColouring,
        requests: &'a [StarRequest],
        forbidden_vertices: &'a VertexSet,
        forbidden_colours: &'a ColourSet,
    ) -> Self {
        let n = colouring.n();
        let mut is_root = vec![false; n];
        for r in requests {
            is_root[r.root] = true;
        }
        let ranks = if colouring.k() > 1 {
            requests
                .iter()
                .map(|r| {
                    let mut seen: HashMap<ColourId, u32> = HashMap::new();
                    (0..n)
                        .map(|u| {
                            if u == r.root {
                                return 0;
                            }
                            let slot = seen.entry(colouring.colour(r.root, u)).or_default();
                            *slot += 1;
                            *slot - 1
                        })
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        StarSearch {
            colouring,
            requests,
            forbidden_vertices,
            forbidden_colours,
            is_root,
            ranks,
            owner: vec![NONE; n],
            leaves: vec![Vec::new(); requests.len()],
            used: HashMap::new(),
            steps: 0,
        }
    }

    fn admissible(&self, star: usize, u: VertexId) -> bool {
        let root = self.requests[star].root;
        u != root
            && !self.is_root[u]
            && !self.forbidden_vertices.contains(u)
            && !self.forbidden_colours.contains(self.colouring.colour(root, u))
    }

    fn sub_colour(&self, star: usize, u: VertexId) -> usize {
        let c = self.colouring.colour(self.requests[star].root, u);
        if self.ranks.is_empty() {
            c
        } else {
            c * self.colouring.k() + self.ranks[star][u] as usize
        }
    }

    fn attach(&mut self, star: usize, u: VertexId) {
        let sc = self.sub_colour(star, u);
        debug_assert!(!self.used.contains_key(&sc) && self.owner[u] == NONE);
        self.used.insert(sc, (star, u));
        self.owner[u] = star;
        self.leaves[star].push(u);
    }

    fn detach(&mut self, star: usize, u: VertexId) {
        let sc = self.sub_colour(star, u);
        self.used.remove(&sc);
        self.owner[u] = NONE;
        self.leaves[star].retain(|&w| w != u);
    }

    fn greedy_fill(&mut self) {
        let n = self.colouring.n();
        for star in 0..self.requests.len() {
            for u in 0..n {
                if self.leaves[star].len() >= self.requests[star].degree {
                    break;
                }
                if self.owner[u] == NONE && self.admissible(star, u) && !self.used.contains_key(&self.sub_colour(star, u)) {
                    self.attach(star, u);
                }
            }
        }
    }

    /// Exchange chain `u_1, …, u_j` for `star` starting at free vertex `u1`:
    /// each `u_{t+1}` is the leaf whose edge carries the sub-colour of
    /// `root–u_t`, and the chain ends at a sub-colour unused by the family.
    fn chain_from(&mut self, star: usize, u1: VertexId) -> Option<Vec<VertexId>> {
        let room = self.requests[star].degree + OVERFILL_CAP - self.leaves[star].len();
        let mut chain = vec![u1];
        let mut u = u1;
        loop {
            self.steps += 1;
            if !self.admissible(star, u) {
                return None;
            }
            match self.used.get(&self.sub_colour(star, u)) {
                None => return Some(chain),
                Some(&(other, w)) => {
                    if other == star || chain.contains(&w) || chain.len() >= room.min(OVERFILL_CAP + 1) {
                        return None;
                    }
                    chain.push(w);
                    u = w;
                }
            }
        }
    }

    fn augment(&mut self, star: usize, budget: usize) -> Option<bool> {
        let n = self.colouring.n();
        for u1 in 0..n {
            if self.steps > budget {
                return None;
            }
            if self.owner[u1] != NONE || !self.admissible(star, u1) {
                continue;
            }
            if let Some(chain) = self.chain_from(star, u1) {
                let before: usize = self.leaves.iter().map(Vec::len).sum();
                for &w in &chain[1..] {
                    let from = self.owner[w];
                    self.detach(from, w);
                }
                for &w in &chain {
                    self.attach(star, w);
                }
                let after: usize = self.leaves.iter().map(Vec::len).sum();
                assert_eq!(after, before + 1, "switching must add exactly one leaf");
                return Some(true);
            }
        }
        Some(false)
    }

    fn run(&mut self, budget: usize) -> usize {
        self.greedy_fill();
        let mut augmentations = 0;
        let mut stuck = vec![false; self.requests.len()];
        loop {
            let next = (0..self.requests.len())
                .find(|&s| !stuck[s] && self.leaves[s].len() < self.requests[s].degree);
            let Some(star) = next else { break };
            match self.augment(star, budget) {
                Some(true) => {
                    augmentations += 1;
                    stuck.iter_mut().for_each(|f| *f = false);
                }
                Some(false) => stuck[star] = true,
                None => break,
            }
        }
        for star in 0..self.requests.len() {
            while self.leaves[star].len() > self.requests[star].degree {
                let last = *self.leaves[star].last().unwrap();
                self.detach(star, last);
            }
        }
        augmentations
    }

    fn outcome(self, augmentations: usize) -> StarOutcome {
        let deficiency = self
            .requests
            .iter()
            .enumerate()
            .filter(|(i, r)| self.leaves[*i].len() < r.degree)
            .map(|(i, r)| (i, r.degree - self.leaves[i].len()))
            .collect();
        let stars = self
            .requests
            .iter()
            .zip(self.leaves)
            .map(|(r, mut leaves)| {
                leaves.sort_unstable();
                Star { root: r.root, leaves }
            })
            .collect();
        StarOutcome { family: StarFamily { stars }, deficiency, augmentations, used_exhaustive: false }
    }
}

/// Stars at the requested roots and degrees with at most `k` edges of any
/// colour, avoiding the forbidden vertices and colours. Greedy filling is
/// followed by exchange-chain switching for short stars; root–root edges are
/// never used.
pub fn find_k_bounded_stars(
    colouring: &EdgeColouring,
    requests: &[StarRequest],
    forbidden_vertices: &VertexSet,
    forbidden_colours: &ColourSet,
    budget: usize,
) -> Result<StarOutcome> {
    check_requests(colouring, requests)?;
    let mut search = StarSearch::new(colouring, requests, forbidden_vertices, forbidden_colours);
    let augmentations = search.run(budget);
    let outcome = search.outcome(augmentations);
    outcome
        .family
        .validate(colouring, colouring.k())
        .map_err(|e| Error::Internal(e.to_string()))?;
    Ok(outcome)
}

/// Picks `targets[i]` leaves of star `i` so that the whole selection is
/// rainbow, by a capacitated bipartite matching between stars and colours.
pub fn hall_select_rainbow_substars(
    colouring: &EdgeColouring,
    family: &StarFamily,
    targets: &[usize],
) -> Result<StarFamily> {
    if targets.len() != family.stars.len() {
        return Err(Error::Parameter("one target per star is required".into()));
    }
    let mut colour_leaf: Vec<Vec<(ColourId, VertexId)>> = Vec::with_capacity(family.stars.len());
    for (star, &target) in family.stars.iter().zip(targets) {
        if star.leaves.len() < target {
            return Err(Error::Parameter(format!(
                "star at {} has {} leaves, fewer than the target {target}",
                star.root,
                star.leaves.len()
            )));
        }
        let mut options: Vec<(ColourId, VertexId)> = Vec::new();
        for &leaf in &star.leaves {
            let c = colouring.colour_of(star.root, leaf)?;
            if !options.iter().any(|&(d, _)| d == c) {
                options.push((c, leaf));
            }
        }
        colour_leaf.push(options);
    }

    fn assign(
        star: usize,
        options: &[Vec<(ColourId, VertexId)>],
        holder: &mut HashMap<ColourId, usize>,
        visited: &mut std::collections::HashSet<ColourId>,
    ) -> bool {
        for &(c, _) in &options[star] {
            if holder.get(&c) == Some(&star) || !visited.insert(c) {
                continue;
            }
            let free = match holder.get(&c) {
                None => true,
                Some(&other) => assign(other, options, holder, visited),
            };
            if free {
                holder.insert(c, star);
                return true;
            }
        }
        false
    }

    let mut holder: HashMap<ColourId, usize> = HashMap::new();
    for (star, &target) in targets.iter().enumerate() {
        for _ in 0..target {
            let mut visited = std::collections::HashSet::new();
            if !assign(star, &colour_leaf, &mut holder, &mut visited) {
                return Err(Error::Internal(format!(
                    "generalised Hall condition fails at star {star}"
                )));
            }
        }
    }
    let mut stars: Vec<Star> = family.stars.iter().map(|s| Star { root: s.root, leaves: Vec::new() }).collect();
    for (c, star) in holder {
        let leaf = colour_leaf[star].iter().find(|&&(d, _)| d == c).expect("held colour is an option").1;
        stars[star].leaves.push(leaf);
    }
    for s in &mut stars {
        s.leaves.sort_unstable();
    }
    let out = StarFamily { stars };
    out.validate(colouring, 1).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(out)
}

/// Collectively rainbow stars: `k·d_i`-leaf stars with at most `k` edges per
/// colour, thinned to `d_i` leaves by [`hall_select_rainbow_substars`]. Hosts
/// with at most [`EXHAUSTIVE_MAX_N`] vertices fall back to exhaustive search
/// when the degree bound fails or switching leaves a deficiency.
pub fn find_disjoint_rainbow_stars(
    colouring: &EdgeColouring,
    requests: &[StarRequest],
    forbidden_vertices: &VertexSet,
    forbidden_colours: &ColourSet,
    epsilon: f64,
    budget: usize,
) -> Result<StarOutcome> {
    check_requests(colouring, requests)?;
    if !(epsilon > 0.0 && epsilon < 1.0 / 3.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1/3), got {epsilon}")));
    }
    let n = colouring.n();
    let k = colouring.k();
    let available = (0..n).filter(|&v| !forbidden_vertices.contains(v)).count();
    let demand: usize = requests.iter().map(|r| r.degree).sum();
    let small = n <= EXHAUSTIVE_MAX_N;
    let exhaustive = |budget| -> Result<StarOutcome> {
        match exhaustive_rainbow_stars(colouring, requests, forbidden_vertices, forbidden_colours, budget)? {
            Some(family) => Ok(StarOutcome { family, deficiency: Vec::new(), augmentations: 0, used_exhaustive: true }),
            None => Ok(StarOutcome {
                family: StarFamily {
                    stars: requests.iter().map(|r| Star { root: r.root, leaves: Vec::new() }).collect(),
                },
                deficiency: requests.iter().enumerate().map(|(i, r)| (i, r.degree)).collect(),
                augmentations: 0,
                used_exhaustive: true,
            }),
        }
    };
    if demand as f64 > (1.0 - 3.0 * epsilon) * available as f64 / k as f64 {
        if small {
            return exhaustive(budget);
        }
        return Err(Error::Infeasible(format!(
            "total star degree {demand} exceeds (1 - 3 eps) * {available} / {k}"
        )));
    }
    let scaled: Vec<StarRequest> = requests.iter().map(|r| StarRequest { root: r.root, degree: r.degree * k }).collect();
    let bounded = find_k_bounded_stars(colouring, &scaled, forbidden_vertices, forbidden_colours, budget)?;
    if !bounded.is_complete() {
        if small {
            return exhaustive(budget);
        }
        return Ok(rainbow_part(colouring, requests, bounded));
    }
    let targets: Vec<usize> = requests.iter().map(|r| r.degree).collect();
    let family = if k == 1 {
        bounded.family
    } else {
        hall_select_rainbow_substars(colouring, &bounded.family, &targets)?
    };
    Ok(StarOutcome { family, deficiency: Vec::new(), augmentations: bounded.augmentations, used_exhaustive: false })
}

/// Greedy rainbow thinning of an incomplete k-bounded family.
fn rainbow_part(colouring: &EdgeColouring, requests: &[StarRequest], bounded: StarOutcome) -> StarOutcome {
    let mut used = std::collections::HashSet::new();
    let mut deficiency = Vec::new();
    let mut stars = Vec::new();
    for (i, (req, star)) in requests.iter().zip(&bounded.family.stars).enumerate() {
        let mut leaves = Vec::new();
        for &l in &star.leaves {
            if leaves.len() < req.degree && used.insert(colouring.colour(star.root, l)) {
                leaves.push(l);
            }
        }
        if leaves.len() < req.degree {
            deficiency.push((i, req.degree - leaves.len()));
        }
        stars.push(Star { root: star.root, leaves });
    }
    StarOutcome { family: StarFamily { stars }, deficiency, augmentations: bounded.augmentations, used_exhaustive: false }
}

/// Backtracking search for collectively rainbow stars on small hosts.
/// `Ok(None)` means the search space was exhausted without a solution.
pub fn exhaustive_rainbow_stars(
    colouring: &EdgeColouring,
    requests: &[StarRequest],
    forbidden_vertices: &VertexSet,
    forbidden_colours: &ColourSet,
    budget: usize,
) -> Result<Option<StarFamily>> {
    check_requests(colouring, requests)?;
    let n = colouring.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::SizeLimit(format!("exhaustive star search handles n <= {EXHAUSTIVE_MAX_N}, got {n}")));
    }
    let roots: Vec<bool> = (0..n).map(|v| requests.iter().any(|r| r.root == v)).collect();
    struct Bt<'b> {
        colouring: &'b EdgeColouring,
        requests: &'b [StarRequest],
        candidates: Vec<Vec<VertexId>>,
        used_v: Vec<bool>,
        used_c: Vec<bool>,
        leaves: Vec<Vec<VertexId>>,
        nodes: usize,
        budget: usize,
    }
    impl Bt<'_> {
        fn go(&mut self, star: usize, from: usize) -> Option<bool> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if star == self.requests.len() {
                return Some(true);
            }
            if self.leaves[star].len() == self.requests[star].degree {
                return self.go(star + 1, 0);
            }
            let need = self.requests[star].degree - self.leaves[star].len();
            let root = self.requests[star].root;
            for idx in from..self.candidates[star].len() {
                if self.candidates[star].len() - idx < need {
                    break;
                }
                let u = self.candidates[star][idx];
                let c = self.colouring.colour(root, u);
                if self.used_v[u] || self.used_c[c] {
                    continue;
                }
                self.used_v[u] = true;
                self.used_c[c] = true;
                self.leaves[star].push(u);
                match self.go(star, idx + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                self.leaves[star].pop();
                self.used_c[c] = false;
                self.used_v[u] = false;
            }
            Some(false)
        }
    }
    let candidates = requests
        .iter()
        .map(|r| {
            (0..n)
                .filter(|&u| {
                    u != r.root
                        && !roots[u]
                        && !forbidden_vertices.contains(u)
                        && !forbidden_colours.contains(colouring.colour(r.root, u))
                })
                .collect()
        })
        .collect();
    let mut bt = Bt {
        colouring,
        requests,
        candidates,
        used_v: vec![false; n],
        used_c: vec![false; colouring.num_colours()],
        leaves: vec![Vec::new(); requests.len()],
        nodes: 0,
        budget,
    };
    match bt.go(0, 0) {
        Some(true) => Ok(Some(StarFamily {
            stars: requests.iter().zip(bt.leaves).map(|(r, leaves)| Star { root: r.root, leaves }).collect(),
        })),
        Some(false) => Ok(None),
        None => Err(Error::Infeasible("exhaustive star search ran out of budget".into())),
    }
}
