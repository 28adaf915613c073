//! Edge-coloured complete graphs, stored explicitly or given by a closed-form rule.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::Group;

pub type VertexId = usize;
pub type ColourId = usize;

/// Membership bitset over vertex ids.
pub type VertexSet = FixedBitSet;
/// Membership bitset over colour ids.
pub type ColourSet = FixedBitSet;

/// Default vertex count above which explicit colourings refuse an exhaustive scan.
pub const DEFAULT_SCAN_LIMIT: usize = 5000;

/// Builds a bitset of the given length holding `members`.
pub fn set_of(len: usize, members: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(len);
    for m in members {
        s.insert(m);
    }
    s
}

/// Bitset of the given length with every member present.
pub fn full_set(len: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(len);
    s.insert_range(..);
    s
}

#[derive(Clone, Debug)]
pub(crate) enum Rule {
    /// Lower-triangular table indexed by `v*(v-1)/2 + u` for `u < v`.
    Explicit { table: Vec<u32>, labels: Vec<u64> },
    NearDistance { m: usize },
    GroupSum { group: Group },
    RoundRobin,
    MergedRoundRobin(MergedClasses),
}

/// A round-robin one-factorisation whose classes are merged into groups.
#[derive(Clone, Debug)]
pub(crate) struct MergedClasses {
    /// Even vertex count of the underlying factorisation (`n` or `n + 1`).
    pub base_n: usize,
    pub class_colour: Vec<u32>,
    pub colour_classes: Vec<Vec<u32>>,
    pub seed: u64,
}

/// Which construction produced a colouring; used for serialisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColouringKind {
    Explicit,
    NearDistance { m: usize },
    GroupSum(crate::group::GroupSpec),
    RoundRobin,
    RandomKBounded { k: usize, seed: u64 },
}

/// A colouring of the edges of `K_n` in which each vertex meets at most `k`
/// edges of any one colour. Colour ids are dense in `[0, num_colours)`.
#[derive(Clone, Debug)]
pub struct EdgeColouring {
    n: usize,
    k: usize,
    num_colours: usize,
    rule: Rule,
}

#[inline]
fn tri_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

#[inline]
pub(crate) fn rr_class(u: usize, v: usize, base_n: usize) -> usize {
    let pivot = base_n - 1;
    if u == pivot {
        v
    } else if v == pivot {
        u
    } else {
        let q = base_n - 1;
        ((u + v) % q) * (base_n / 2) % q
    }
}

#[inline]
pub(crate) fn rr_partner(v: usize, class: usize, base_n: usize) -> usize {
    let pivot = base_n - 1;
    if v == pivot {
        class
    } else if v == class {
        pivot
    } else {
        let q = base_n - 1;
        (2 * class + q - v) % q
    }
}

impl EdgeColouring {
    pub(crate) fn from_rule(n: usize, k: usize, num_colours: usize, rule: Rule) -> Self {
        EdgeColouring { n, k, num_colours, rule }
    }

    /// Builds an explicit colouring from a colour function on pairs `u < v`.
    /// Colour labels are renumbered densely in increasing label order.
    pub fn explicit_from_fn(n: usize, k: usize, mut f: impl FnMut(usize, usize) -> u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter("explicit colouring needs n >= 2".into()));
        }
        let mut raw = vec![0u64; n * (n - 1) / 2];
        for v in 1..n {
            for u in 0..v {
                raw[tri_index(u, v)] = f(u, v);
            }
        }
        let mut labels: Vec<u64> = raw.clone();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() > u32::MAX as usize {
            return Err(Error::SizeLimit("too many colours".into()));
        }
        let table = raw
            .iter()
            .map(|l| labels.binary_search(l).expect("label present") as u32)
            .collect();
        Ok(EdgeColouring { n, k, num_colours: labels.len(), rule: Rule::Explicit { table, labels } })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Declared local bound.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_colours(&self) -> usize {
        self.num_colours
    }

    pub fn kind(&self) -> ColouringKind {
        match &self.rule {
            Rule::Explicit { .. } => ColouringKind::Explicit,
            Rule::NearDistance { m } => ColouringKind::NearDistance { m: *m },
            Rule::GroupSum { group } => ColouringKind::GroupSum(group.spec().clone()),
            Rule::RoundRobin => ColouringKind::RoundRobin,
            Rule::MergedRoundRobin(mc) => ColouringKind::RandomKBounded { k: self.k, seed: mc.seed },
        }
    }

    pub fn is_implicit(&self) -> bool {
        !matches!(self.rule, Rule::Explicit { .. })
    }

    /// The group behind a group-sum colouring.
    pub fn group(&self) -> Option<&Group> {
        match &self.rule {
            Rule::GroupSum { group } => Some(group),
            _ => None,
        }
    }

    /// Offset between a group element and the colour id it induces.
    pub(crate) fn group_colour_offset(&self) -> usize {
        match &self.rule {
            Rule::GroupSum { group } if group.is_elementary_two() => 1,
            _ => 0,
        }
    }

    /// Human-facing label of a colour id: the cyclic distance for near-distance
    /// colourings, the group element for group sums, the original label for
    /// explicit colourings, and the id itself otherwise.
    pub fn colour_label(&self, c: ColourId) -> u64 {
        match &self.rule {
            Rule::Explicit { labels, .. } => labels[c],
            Rule::NearDistance { .. } => c as u64 + 1,
            Rule::GroupSum { .. } => (c + self.group_colour_offset()) as u64,
            _ => c as u64,
        }
    }

    /// Colour id of a label as produced by [`colour_label`](Self::colour_label).
    pub fn colour_from_label(&self, label: u64) -> Option<ColourId> {
        let c = match &self.rule {
            Rule::Explicit { labels, .. } => labels.binary_search(&label).ok()?,
            Rule::NearDistance { .. } => (label as usize).checked_sub(1)?,
            Rule::GroupSum { .. } => (label as usize).checked_sub(self.group_colour_offset())?,
            _ => label as usize,
        };
        (c < self.num_colours).then_some(c)
    }

    /// Colour of the edge `uv`. Callers guarantee `u != v` and both in range.
    #[inline]
    pub fn colour(&self, u: VertexId, v: VertexId) -> ColourId {
        debug_assert!(u != v && u < self.n && v < self.n);
        match &self.rule {
            Rule::Explicit { table, .. } => table[tri_index(u, v)] as usize,
            Rule::NearDistance { m } => {
                let n = 2 * m + 1;
                let d = u.abs_diff(v);
                d.min(n - d) - 1
            }
            Rule::GroupSum { group } => group.add(u, v) - self.group_colour_offset(),
            Rule::RoundRobin => rr_class(u, v, self.n),
            Rule::MergedRoundRobin(mc) => mc.class_colour[rr_class(u, v, mc.base_n)] as usize,
        }
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    fn check_colour(&self, c: ColourId) -> Result<()> {
        if c >= self.num_colours {
            Err(Error::ColourOutOfRange { colour: c, count: self.num_colours })
        } else {
            Ok(())
        }
    }

    /// Checked colour lookup.
    pub fn colour_of(&self, u: VertexId, v: VertexId) -> Result<ColourId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidEdge(u));
        }
        Ok(self.colour(u, v))
    }

    /// All `u` with `colour(v, u) == c`, in increasing order.
    pub fn colour_neighbours(&self, v: VertexId, c: ColourId) -> Vec<VertexId> {
        let n = self.n;
        let mut out = match &self.rule {
            Rule::NearDistance { .. } => {
                let d = c + 1;
                let a = (v + d) % n;
                let b = (v + n - d) % n;
                if a == b {
                    vec![a]
                } else {
                    vec![a, b]
                }
            }
            Rule::GroupSum { group } => {
                let s = c + self.group_colour_offset();
                let u = group.sub(s, v);
                if u != v {
                    vec![u]
                } else {
                    vec![]
                }
            }
            Rule::RoundRobin => {
                let u = rr_partner(v, c, n);
                if u != v {
                    vec![u]
                } else {
                    vec![]
                }
            }
            Rule::MergedRoundRobin(mc) => mc.colour_classes[c]
                .iter()
                .map(|&cls| rr_partner(v, cls as usize, mc.base_n))
                .filter(|&u| u != v && u < n)
                .collect(),
            Rule::Explicit { .. } => (0..n).filter(|&u| u != v && self.colour(u, v) == c).collect(),
        };
        out.sort_unstable();
        out
    }

    /// Number of edges at `v` with colour `c`.
    pub fn colour_degree(&self, v: VertexId, c: ColourId) -> Result<usize> {
        self.check_vertex(v)?;
        self.check_colour(c)?;
        Ok(self.colour_neighbours(v, c).len())
    }

    /// `{u in X : u != v, colour(u, v) in C}`.
    pub fn neighbours_in(&self, v: VertexId, colours: &ColourSet, within: &VertexSet) -> Result<VertexSet> {
        self.check_vertex(v)?;
        if let Some(c) = colours.ones().find(|&c| c >= self.num_colours) {
            return Err(Error::ColourOutOfRange { colour: c, count: self.num_colours });
        }
        if let Some(u) = within.ones().find(|&u| u >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: u, n: self.n });
        }
        let mut out = VertexSet::with_capacity(self.n);
        for u in within.ones() {
            if u != v && colours.contains(self.colour(u, v)) {
                out.insert(u);
            }
        }
        Ok(out)
    }

    /// Maximum number of same-coloured edges at a vertex.
    ///
    /// Scans exhaustively when `n <= scan_limit`. Above the limit implicit
    /// colourings answer from their rule and explicit ones refuse.
    pub fn verify_locally_k_bounded(&self, scan_limit: usize) -> Result<usize> {
        if self.n > scan_limit {
            return match &self.rule {
                Rule::Explicit { .. } => Err(Error::SizeLimit(format!(
                    "explicit colouring on {} vertices exceeds scan limit {scan_limit}",
                    self.n
                ))),
                Rule::NearDistance { .. } => Ok(2),
                Rule::GroupSum { .. } | Rule::RoundRobin => Ok(1),
                Rule::MergedRoundRobin(mc) => {
                    Ok(mc.colour_classes.iter().map(Vec::len).max().unwrap_or(0))
                }
            };
        }
        let mut counts = vec![0usize; self.num_colours];
        let mut best = 0;
        for v in 0..self.n {
            for u in (0..self.n).filter(|&u| u != v) {
                let c = self.colour(u, v);
                counts[c] += 1;
                best = best.max(counts[c]);
            }
            for u in (0..self.n).filter(|&u| u != v) {
                counts[self.colour(u, v)] = 0;
            }
        }
        Ok(best)
    }

    /// Every colour id occurs on at least one edge (exhaustive; small n only).
    pub fn colours_are_dense(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.num_colours);
        for v in 1..self.n {
            for u in 0..v {
                seen.insert(self.colour(u, v));
            }
        }
        seen.count_ones(..) == self.num_colours
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{group_sum_colouring, nd_colouring, round_robin_proper};
    use crate::group::GroupSpec;

    fn monochromatic(n: usize) -> EdgeColouring {
        EdgeColouring::explicit_from_fn(n, n - 1, |_, _| 0).unwrap()
    }

    #[test]
    fn nd_colour_labels_are_cyclic_distances() {
        let c = nd_colouring(2).unwrap();
        assert_eq!(c.colour_label(c.colour_of(0, 1).unwrap()), 1);
        assert_eq!(c.colour_label(c.colour_of(1, 4).unwrap()), 2);
        assert_eq!(c.colour_of(0, 1).unwrap(), 0);
    }

    #[test]
    fn group_sum_example() {
        let c = group_sum_colouring(&GroupSpec::cyclic(3)).unwrap();
        assert_eq!(c.colour_of(1, 2).unwrap(), 0);
    }

    #[test]
    fn colour_of_rejects_loops_and_range() {
        let c = nd_colouring(2).unwrap();
        assert_eq!(c.colour_of(3, 3), Err(Error::InvalidEdge(3)));
        assert!(matches!(c.colour_of(0, 5), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn colour_degree_examples() {
        let c = nd_colouring(2).unwrap();
        let one = c.colour_from_label(1).unwrap();
        assert_eq!(c.colour_degree(0, one).unwrap(), 2);
        assert_eq!(c.colour_neighbours(0, one), vec![1, 4]);
        let z5 = group_sum_colouring(&GroupSpec::cyclic(5)).unwrap();
        for col in 0..5 {
            assert!(z5.colour_degree(0, col).unwrap() <= 1);
        }
        assert_eq!(monochromatic(4).colour_degree(0, 0).unwrap(), 3);
        assert!(c.colour_degree(0, 9).is_err());
    }

    #[test]
    fn neighbours_in_examples() {
        let c = nd_colouring(2).unwrap();
        let all_c = full_set(c.num_colours());
        let all_v = full_set(5);
        let got = c.neighbours_in(0, &all_c, &all_v).unwrap();
        assert_eq!(got.ones().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        let none = c.neighbours_in(0, &ColourSet::with_capacity(2), &all_v).unwrap();
        assert_eq!(none.count_ones(..), 0);
        let one = set_of(2, [c.colour_from_label(1).unwrap()]);
        let got = c.neighbours_in(0, &one, &set_of(5, [1, 2, 3, 4])).unwrap();
        assert_eq!(got.ones().collect::<Vec<_>>(), vec![1, 4]);
    }

    #[test]
    fn verify_examples() {
        assert_eq!(nd_colouring(2).unwrap().verify_locally_k_bounded(DEFAULT_SCAN_LIMIT).unwrap(), 2);
        let z7 = group_sum_colouring(&GroupSpec::cyclic(7)).unwrap();
        assert_eq!(z7.verify_locally_k_bounded(DEFAULT_SCAN_LIMIT).unwrap(), 1);
        assert_eq!(monochromatic(4).verify_locally_k_bounded(DEFAULT_SCAN_LIMIT).unwrap(), 3);
        assert!(monochromatic(6).verify_locally_k_bounded(5).is_err());
        assert_eq!(nd_colouring(200).unwrap().verify_locally_k_bounded(10).unwrap(), 2);
    }

    #[test]
    fn explicit_labels_are_densified() {
        let c = EdgeColouring::explicit_from_fn(3, 1, |u, v| (10 * (u + v)) as u64).unwrap();
        assert_eq!(c.num_colours(), 3);
        assert_eq!(c.colour_label(c.colour(1, 2)), 30);
        assert!(c.colours_are_dense());
    }

    #[test]
    fn colour_neighbours_agree_with_scan() {
        let cols = [
            nd_colouring(6).unwrap(),
            group_sum_colouring(&GroupSpec::cyclic(10)).unwrap(),
            group_sum_colouring(&GroupSpec::elementary_two(3)).unwrap(),
            group_sum_colouring(&GroupSpec::product(vec![2, 3])).unwrap(),
            round_robin_proper(8).unwrap(),
            crate::generators::random_locally_k_bounded(9, 2, 4).unwrap(),
        ];
        for col in &cols {
            for v in 0..col.n() {
                for c in 0..col.num_colours() {
                    let scan: Vec<_> = (0..col.n()).filter(|&u| u != v && col.colour(u, v) == c).collect();
                    assert_eq!(col.colour_neighbours(v, c), scan, "{:?} v={v} c={c}", col.kind());
                }
            }
        }
    }
}
