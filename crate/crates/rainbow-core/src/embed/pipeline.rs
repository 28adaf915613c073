//! The layered randomized pipeline: reserve, base forest, star reservoirs,
//! coupled classes, leaf layers by switching, and length-3 paths.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use super::partition::{layer_probabilities, sample_given_reserve, sample_reserve, PartitionPlan, STAR_CLASS};
use super::small::{forest_order, greedy_extend, Placement};
use super::{AttemptTrace, BlockTrace, EmbedOutcome, Failure, Method, PipelineConfig, RainbowEmbedding, Stage};
use crate::colouring::{set_of, ColourSet, EdgeColouring, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::matching::{complete_matching_greedy, switching_rainbow_matching, RainbowMatching};
use crate::paths::{connect_pairs_disjointly, enumerate_rainbow_3paths, PathRequest};
use crate::rng::derive_seed;
use crate::stars::{find_disjoint_rainbow_stars, find_k_bounded_stars, StarFamily, StarRequest};
use crate::tree::{default_star_threshold, split_tree_with, SplitParams, LayerKind, LayeredDecomposition, StarAttachment, Tree};

const NONE: usize = usize::MAX;

enum Block {
    Group { class: usize, layers: (usize, usize), size: usize, waves: Vec<Vec<(usize, usize)>> },
    Paths { layer: usize },
}

/// The seed-independent part of a run: decomposition, classes and waves.
struct Blueprint {
    split: LayeredDecomposition,
    base: Vec<bool>,
    stars: Vec<StarAttachment>,
    blocks: Vec<Block>,
    class_sizes: Vec<usize>,
}

impl Blueprint {
    fn new(tree: &Tree, split: LayeredDecomposition, n: usize, k: usize, config: &PipelineConfig) -> Self {
        let base = split.prefix_membership(tree.len(), 0);
        let stars = split.layers[1].stars.clone();
        let mut class_sizes = Vec::new();
        if split.layers[1].size() > 0 {
            class_sizes.push(split.layers[1].size());
        }
        let min_group = config.min_group_size.unwrap_or((2.0 * (n as f64).sqrt()).ceil() as usize).max(1);
        let j = split.path_layer;
        let mut blocks = Vec::new();
        for segment in [2..j, j + 1..split.layers.len()] {
            for group in group_layers(&split, segment.clone(), min_group, n, k) {
                let size = group.iter().map(|&i| split.layers[i].size()).sum();
                class_sizes.push(size);
                blocks.push(Block::Group {
                    class: class_sizes.len(),
                    layers: (group[0], *group.last().expect("groups are non-empty")),
                    size,
                    waves: waves(&split, &group),
                });
            }
            if segment.start == 2 && split.layers[j].size() > 0 {
                blocks.push(Block::Paths { layer: j });
            }
        }
        Blueprint { split, base, stars, blocks, class_sizes }
    }
}

/// Consecutive non-empty leaf layers merged until a group holds at least
/// `min_group` leaves and no parent takes more than `k·m²/(2n)` of its `m`
/// leaves. A short final group joins its predecessor.
fn group_layers(
    split: &LayeredDecomposition,
    segment: std::ops::Range<usize>,
    min_group: usize,
    n: usize,
    k: usize,
) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    let mut size = 0usize;
    let mut busiest = 0usize;
    for i in segment {
        let layer = &split.layers[i];
        if layer.size() == 0 {
            continue;
        }
        debug_assert_eq!(layer.kind, LayerKind::Leaves);
        current.push(i);
        size += layer.size();
        for &(p, _) in &layer.leaves {
            let c = counts.entry(p).or_default();
            *c += 1;
            busiest = busiest.max(*c);
        }
        if size >= min_group && 2 * n * busiest <= k * size * size {
            groups.push(std::mem::take(&mut current));
            counts.clear();
            size = 0;
            busiest = 0;
        }
    }
    if !current.is_empty() {
        match groups.last_mut() {
            Some(last) if size < min_group => last.extend(current),
            _ => groups.push(current),
        }
    }
    groups
}

/// Splits a group into waves: a leaf whose parent is new in the group goes
/// one wave after its parent.
fn waves(split: &LayeredDecomposition, group: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut wave_of: HashMap<usize, usize> = HashMap::new();
    let mut out: Vec<Vec<(usize, usize)>> = Vec::new();
    for &i in group {
        for &(p, c) in &split.layers[i].leaves {
            let w = wave_of.get(&p).map_or(0, |w| w + 1);
            wave_of.insert(c, w);
            if out.len() <= w {
                out.resize_with(w + 1, Vec::new);
            }
            out[w].push((p, c));
        }
    }
    for wave in &mut out {
        wave.sort_unstable();
    }
    out
}

enum Halt {
    Fail(Failure),
    Error(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Error(e)
    }
}

fn fail(stage: Stage, detail: impl Into<String>) -> Halt {
    Halt::Fail(Failure { stage, detail: detail.into() })
}

type Step<T = ()> = std::result::Result<T, Halt>;

struct Attempt<'a> {
    colouring: &'a EdgeColouring,
    tree: &'a Tree,
    config: &'a PipelineConfig,
    blueprint: &'a Blueprint,
    probabilities: &'a [f64],
    n: usize,
    k: usize,
    placement: Placement,
    /// Class of every vertex and colour; `0` is the reserve.
    vertex_class: Vec<usize>,
    colour_class: Vec<usize>,
    trace: AttemptTrace,
}

impl<'a> Attempt<'a> {
    fn pool_vertices(&self, classes: RangeInclusive<usize>) -> VertexSet {
        set_of(
            self.n,
            (0..self.n).filter(|&x| !self.placement.used_v[x] && classes.contains(&self.vertex_class[x])),
        )
    }

    fn pool_colours(&self, classes: RangeInclusive<usize>) -> ColourSet {
        let count = self.colouring.num_colours();
        set_of(count, (0..count).filter(|&c| !self.placement.used_c[c] && classes.contains(&self.colour_class[c])))
    }

    fn host(&self, v: usize) -> VertexId {
        self.placement.host[v]
    }

    fn assign(&mut self, v: usize, parent: usize, x: VertexId) {
        self.placement.place(self.colouring, v, Some(parent), x);
    }

    fn run(&mut self, seed: u64) -> Step {
        let p0 = self.probabilities[0];
        let (x0, c0) = sample_reserve(self.colouring, p0, seed);
        self.vertex_class = x0.iter().map(|&r| if r { 0 } else { NONE }).collect();
        self.colour_class = c0.iter().map(|&r| if r { 0 } else { NONE }).collect();
        self.check_colour_degrees(&c0)?;
        self.embed_base(&x0, &c0)?;
        let reservoirs = self.find_reservoirs()?;
        if self.probabilities.len() > 1 {
            let colouring = self.colouring;
            let pairing: Vec<(VertexId, usize)> = reservoirs
                .stars
                .iter()
                .flat_map(|s| s.leaves.iter().map(move |&y| (y, colouring.colour(s.root, y))))
                .collect();
            let mut plan = sample_given_reserve(self.colouring, self.probabilities, &pairing, &x0, &c0, seed)?;
            self.attach_stars(&reservoirs, &mut plan)?;
        }
        for block in &self.blueprint.blocks {
            match block {
                Block::Group { class, layers, size, waves } => self.embed_group(*class, *layers, *size, waves)?,
                Block::Paths { layer } => self.embed_paths(*layer)?,
            }
        }
        self.check_reserve_usage(&x0, &c0)
    }

    /// Every vertex keeps most of its edges outside the reserve colours.
    fn check_colour_degrees(&self, c0: &[bool]) -> Step {
        let n = self.n;
        let eps = self.config.epsilon;
        let p0 = self.probabilities[0];
        let outside = (1.0 - 2.0 * p0 - eps / 10.0) * (n - 1) as f64;
        for v in 0..n {
            let deg = (0..n).filter(|&u| u != v && !c0[self.colouring.colour(u, v)]).count();
            if (deg as f64) < outside {
                return Err(fail(Stage::R3, format!("vertex {v} has {deg} edges outside the reserve colours")));
            }
        }
        Ok(())
    }

    fn embed_base(&mut self, x0: &[bool], c0: &[bool]) -> Step {
        let order = forest_order(self.tree, &self.blueprint.base);
        let within: Vec<usize> = (0..self.n).filter(|&x| x0[x]).collect();
        let allowed = set_of(c0.len(), (0..c0.len()).filter(|&c| c0[c]));
        greedy_extend(self.colouring, &order, &mut self.placement, &within, &allowed)
            .map_err(|v| fail(Stage::R1, format!("base forest blocked at tree vertex {v}")))?;
        self.trace.blocks.push(BlockTrace {
            kind: "base".into(),
            layers: (0, 0),
            class: 0,
            size: order.len(),
            reserve: order.len(),
            ..BlockTrace::default()
        });
        Ok(())
    }

    /// Collectively rainbow reservoirs `Y_i` at the star roots, outside the reserve.
    fn find_reservoirs(&mut self) -> Step<StarFamily> {
        let stars = &self.blueprint.stars;
        if stars.is_empty() {
            return Ok(StarFamily { stars: Vec::new() });
        }
        let eps = self.config.epsilon;
        let avail_v = (0..self.n).filter(|&x| self.vertex_class[x] != 0).count();
        let avail_c = self.colour_class.iter().filter(|&&c| c != 0).count();
        let degrees: Vec<usize> = stars.iter().map(|s| s.leaves.len()).collect();
        let total: usize = degrees.iter().sum();
        let kf = self.k as f64;
        let mut sizes: Vec<usize> = degrees
            .iter()
            .map(|&d| ((1.0 - eps / 8.0) * avail_v as f64 * d as f64 / (kf * total as f64)).ceil() as usize)
            .collect();
        let cap = (0.9 * avail_v.min(avail_c) as f64 / kf).floor();
        let wanted: usize = sizes.iter().sum();
        if wanted as f64 > cap {
            for (s, &d) in sizes.iter_mut().zip(&degrees) {
                *s = ((*s as f64 * cap / wanted as f64).floor() as usize).max(d);
            }
        }
        let demand: usize = sizes.iter().sum();
        let star_eps = ((1.0 - demand as f64 * kf / avail_v as f64) / 3.0 * 0.99).min(0.3);
        if star_eps <= 0.0 {
            return Err(fail(Stage::Star, format!("reservoirs of total size {demand} exceed the available vertices")));
        }
        let requests: Vec<StarRequest> = stars
            .iter()
            .zip(&sizes)
            .map(|(s, &degree)| StarRequest { root: self.host(s.root), degree })
            .collect();
        let forbidden_v = set_of(self.n, (0..self.n).filter(|&x| self.vertex_class[x] == 0));
        let count = self.colouring.num_colours();
        let forbidden_c = set_of(count, (0..count).filter(|&c| self.colour_class[c] == 0));
        let found = match find_disjoint_rainbow_stars(
            self.colouring,
            &requests,
            &forbidden_v,
            &forbidden_c,
            star_eps,
            self.config.star_budget,
        ) {
            Ok(found) => found,
            Err(Error::Infeasible(msg)) => return Err(fail(Stage::Star, msg)),
            Err(e) => return Err(e.into()),
        };
        for (i, (star, &d)) in found.family.stars.iter().zip(&degrees).enumerate() {
            if star.leaves.len() < d {
                return Err(fail(
                    Stage::Q0,
                    format!("reservoir {i} has {} vertices for {d} leaves", star.leaves.len()),
                ));
            }
        }
        Ok(found.family)
    }

    /// Tops up `X_1 ∩ Y_i` to `d_i` by moving paired vertices and colours
    /// into the star class, then hangs each star's leaves there.
    fn attach_stars(&mut self, reservoirs: &StarFamily, plan: &mut PartitionPlan) -> Step {
        let mut repairs = 0;
        for (att, res) in self.blueprint.stars.iter().zip(&reservoirs.stars) {
            let d = att.leaves.len();
            let mut inside = res.leaves.iter().filter(|&&y| plan.vertex_class[y] == STAR_CLASS).count();
            for &y in &res.leaves {
                if inside >= d {
                    break;
                }
                if plan.vertex_class[y] != STAR_CLASS {
                    plan.move_pair_to_star_class(y, self.colouring.colour(res.root, y));
                    inside += 1;
                    repairs += 1;
                }
            }
        }
        plan.check_coupling().map_err(|e| Error::Internal(e.to_string()))?;
        self.trace.q0_repairs = repairs;
        self.vertex_class = plan.vertex_class.clone();
        self.colour_class = plan.colour_class.clone();
        let mut size = 0;
        for (att, res) in self.blueprint.stars.iter().zip(&reservoirs.stars) {
            let chosen: Vec<usize> =
                res.leaves.iter().copied().filter(|&y| self.vertex_class[y] == STAR_CLASS).take(att.leaves.len()).collect();
            for (&leaf, &y) in att.leaves.iter().zip(&chosen) {
                self.assign(leaf, att.root, y);
            }
            size += chosen.len();
        }
        if !self.blueprint.stars.is_empty() {
            self.trace.blocks.push(BlockTrace {
                kind: "stars".into(),
                layers: (1, 1),
                class: STAR_CLASS,
                size,
                waves: 1,
                own: size,
                ..BlockTrace::default()
            });
        }
        Ok(())
    }

    fn embed_group(&mut self, class: usize, layers: (usize, usize), size: usize, waves: &[Vec<(usize, usize)>]) -> Step {
        let mut trace =
            BlockTrace { kind: "leaves".into(), layers, class, size, waves: waves.len(), ..BlockTrace::default() };
        for wave in waves {
            let mut by_parent: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &(p, c) in wave {
                by_parent.entry(p).or_default().push(c);
            }
            if by_parent.values().all(|c| c.len() == 1) {
                self.matching_wave(class, &by_parent, &mut trace)?;
            } else {
                self.star_wave(class, by_parent, &mut trace)?;
            }
        }
        self.check_prefix(layers.1, class)?;
        self.trace.blocks.push(trace);
        Ok(())
    }

    fn matching_wave(&mut self, class: usize, by_parent: &BTreeMap<usize, Vec<usize>>, trace: &mut BlockTrace) -> Step {
        let mut pending: Vec<(usize, usize)> = by_parent.iter().map(|(&p, c)| (p, c[0])).collect();
        for (own, classes) in [(true, class..=class), (false, 1..=class)] {
            if pending.is_empty() {
                break;
            }
            let of_host: HashMap<VertexId, usize> = pending.iter().map(|&(p, c)| (self.host(p), c)).collect();
            let sources = set_of(self.n, of_host.keys().copied());
            let targets = self.pool_vertices(classes.clone());
            let colours = self.pool_colours(classes);
            let out = switching_rainbow_matching(self.colouring, &sources, &targets, &colours, &self.config.switching)?;
            trace.augmentations += out.augmentations;
            for (a, x, _) in out.matching.iter() {
                let child = of_host[&a];
                let parent = self.tree_parent(child, a);
                self.assign(child, parent, x);
            }
            let placed = out.matching.len();
            if own {
                trace.own += placed;
            } else {
                trace.carried += placed;
            }
            pending.retain(|&(_, c)| !self.placement.is_placed(c));
        }
        if pending.is_empty() {
            return Ok(());
        }
        let of_host: HashMap<VertexId, (usize, usize)> = pending.iter().map(|&(p, c)| (self.host(p), (p, c))).collect();
        let uncovered = set_of(self.n, of_host.keys().copied());
        let reserve_v = self.pool_vertices(0..=0);
        let reserve_c = self.pool_colours(0..=0);
        match complete_matching_greedy(self.colouring, &RainbowMatching::new(), &uncovered, &reserve_v, &reserve_c) {
            Ok(done) => {
                for (a, x, _) in done.iter() {
                    let (p, c) = of_host[&a];
                    self.assign(c, p, x);
                }
                trace.reserve += done.len();
                Ok(())
            }
            Err(Error::CompletionStuck { vertex }) => {
                Err(fail(Stage::Q1, format!("no reserve edge left for host {vertex} in class {class}")))
            }
            Err(e) => Err(e.into()),
        }
    }

    /// The parent of `child` placed at host `a`.
    fn tree_parent(&self, child: usize, a: VertexId) -> usize {
        self.tree
            .neighbours(child)
            .iter()
            .copied()
            .find(|&p| self.placement.host[p] == a)
            .expect("matched source hosts the parent")
    }

    fn star_wave(&mut self, class: usize, mut by_parent: BTreeMap<usize, Vec<usize>>, trace: &mut BlockTrace) -> Step {
        for (own, classes) in [(true, class..=class), (false, 1..=class)] {
            by_parent.retain(|_, c| !c.is_empty());
            if by_parent.is_empty() {
                return Ok(());
            }
            let pool_v = self.pool_vertices(classes.clone());
            let pool_c = self.pool_colours(classes);
            let placed = self.fill_stars(&mut by_parent, &pool_v, &pool_c)?;
            trace.augmentations += placed.1;
            if own {
                trace.own += placed.0;
            } else {
                trace.carried += placed.0;
            }
        }
        by_parent.retain(|_, c| !c.is_empty());
        let reserve_v: Vec<usize> = self.pool_vertices(0..=0).ones().collect();
        let reserve_c = self.pool_colours(0..=0);
        for (&p, children) in &by_parent {
            for &child in children {
                let h = self.host(p);
                let found = reserve_v.iter().copied().find(|&x| {
                    !self.placement.used_v[x] && {
                        let c = self.colouring.colour(h, x);
                        reserve_c.contains(c) && !self.placement.used_c[c]
                    }
                });
                match found {
                    Some(x) => {
                        self.assign(child, p, x);
                        trace.reserve += 1;
                    }
                    None => return Err(fail(Stage::Q1, format!("no reserve edge left at host {h} in class {class}"))),
                }
            }
        }
        Ok(())
    }

    /// Places as many pending star leaves as possible inside the pools.
    /// Returns the number placed and the switching augmentations used.
    fn fill_stars(
        &mut self,
        by_parent: &mut BTreeMap<usize, Vec<usize>>,
        pool_v: &VertexSet,
        pool_c: &ColourSet,
    ) -> Step<(usize, usize)> {
        let parents: Vec<usize> = by_parent.keys().copied().collect();
        let requests: Vec<StarRequest> =
            parents.iter().map(|&p| StarRequest { root: self.host(p), degree: by_parent[&p].len() }).collect();
        let mut forbidden_v = pool_v.clone();
        forbidden_v.toggle_range(..);
        let mut forbidden_c = pool_c.clone();
        forbidden_c.toggle_range(..);
        let (family, augmentations) = if self.k == 1 {
            let out = find_k_bounded_stars(self.colouring, &requests, &forbidden_v, &forbidden_c, self.config.star_budget)?;
            (out.family, out.augmentations)
        } else {
            let demand: usize = requests.iter().map(|r| r.degree).sum();
            let avail = pool_v.count_ones(..).max(1);
            let eps = ((1.0 - (demand * self.k) as f64 / avail as f64) / 3.0 * 0.99).min(0.3);
            let found = if eps > 0.0 {
                match find_disjoint_rainbow_stars(
                    self.colouring,
                    &requests,
                    &forbidden_v,
                    &forbidden_c,
                    eps,
                    self.config.star_budget,
                ) {
                    Ok(out) => Some((out.family, out.augmentations)),
                    Err(Error::Infeasible(_)) => None,
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            match found {
                Some(f) => f,
                None => (self.greedy_stars(&requests, pool_v, pool_c), 0),
            }
        };
        let mut placed = 0;
        for (p, star) in parents.iter().zip(&family.stars) {
            let children = by_parent.get_mut(p).expect("parent present");
            for &y in &star.leaves {
                let child = children.pop().expect("no more leaves than requested");
                self.assign(child, *p, y);
                placed += 1;
            }
        }
        Ok((placed, augmentations))
    }

    /// Greedy collectively rainbow stars inside the pools.
    fn greedy_stars(&self, requests: &[StarRequest], pool_v: &VertexSet, pool_c: &ColourSet) -> StarFamily {
        let mut used_v = VertexSet::with_capacity(self.n);
        let mut used_c = ColourSet::with_capacity(self.colouring.num_colours());
        let candidates: Vec<usize> = pool_v.ones().collect();
        let stars = requests
            .iter()
            .map(|r| {
                let mut leaves = Vec::new();
                for &x in &candidates {
                    if leaves.len() == r.degree {
                        break;
                    }
                    let c = self.colouring.colour(r.root, x);
                    if !used_v.contains(x) && pool_c.contains(c) && !used_c.contains(c) {
                        used_v.insert(x);
                        used_c.insert(c);
                        leaves.push(x);
                    }
                }
                crate::stars::Star { root: r.root, leaves }
            })
            .collect();
        StarFamily { stars }
    }

    fn embed_paths(&mut self, layer: usize) -> Step {
        let attachments = &self.blueprint.split.layers[layer].paths;
        let requests: Vec<PathRequest> =
            attachments.iter().map(|a| PathRequest::new(self.host(a.ends.0), self.host(a.ends.1))).collect();
        let reserve_v = self.pool_vertices(0..=0);
        let reserve_c = self.pool_colours(0..=0);
        for r in &requests {
            let (u, v) = r.endpoints;
            if enumerate_rainbow_3paths(self.colouring, u, v, &reserve_v, &reserve_c, 1)?.is_empty() {
                return Err(fail(Stage::R2, format!("no reserve path between hosts {u} and {v}")));
            }
        }
        let out = connect_pairs_disjointly(self.colouring, &requests, &reserve_v, &reserve_c, self.config.path_budget)?;
        if !out.is_complete() {
            return Err(fail(Stage::Path, format!("{} of {} path requests unconnected", out.unconnected().len(), requests.len())));
        }
        for (a, path) in attachments.iter().zip(out.paths.iter().flatten()) {
            self.assign(a.interior.0, a.ends.0, path[1]);
            self.assign(a.interior.1, a.interior.0, path[2]);
            self.placement.used_c[self.colouring.colour(path[2], path[3])] = true;
        }
        self.check_prefix(layer, 0)?;
        self.trace.blocks.push(BlockTrace {
            kind: "paths".into(),
            layers: (layer, layer),
            class: 0,
            size: 2 * attachments.len(),
            waves: 1,
            reserve: 2 * attachments.len(),
            augmentations: out.backtracks,
            ..BlockTrace::default()
        });
        Ok(())
    }

    /// After layer `last`, exactly the prefix `T_0 ∪ … ∪ T_last` is placed,
    /// rainbow, and its new vertices and colours lie in classes `0..=class`
    /// (classes `1..=class` only for a leaf group).
    fn check_prefix(&self, last: usize, class: usize) -> Step {
        let keep = self.blueprint.split.prefix_membership(self.tree.len(), last);
        for (v, &inside) in keep.iter().enumerate() {
            if inside != self.placement.is_placed(v) {
                return Err(Error::Internal(format!("tree vertex {v} placement disagrees with prefix {last}")).into());
            }
        }
        let mut seen = vec![false; self.colouring.num_colours()];
        for &(u, v) in self.tree.edges() {
            if !(keep[u] && keep[v]) {
                continue;
            }
            let c = self.colouring.colour(self.host(u), self.host(v));
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::Internal(format!("colour {c} repeats within prefix {last}")).into());
            }
            if self.colour_class[c] != NONE && self.colour_class[c] > class.max(STAR_CLASS) && class > 0 {
                return Err(Error::Internal(format!("colour {c} from a later class within prefix {last}")).into());
            }
        }
        Ok(())
    }

    fn check_reserve_usage(&mut self, x0: &[bool], c0: &[bool]) -> Step {
        let mu_n = self.config.mu * self.n as f64;
        let rest = mu_n * (1.0 - self.probabilities[0]);
        let vertices = self.placement.host.iter().filter(|&&h| x0[h]).count();
        let colours =
            self.tree.edges().iter().filter(|&&(u, v)| c0[self.colouring.colour(self.host(u), self.host(v))]).count();
        let usage = &mut self.trace.reserve;
        usage.vertices = vertices;
        usage.colours = colours;
        usage.vertex_budget = 3.0 * mu_n + rest;
        usage.colour_budget = 4.0 * mu_n + rest;
        if vertices as f64 > usage.vertex_budget || colours as f64 > usage.colour_budget {
            return Err(fail(
                Stage::Reserve,
                format!(
                    "reserve use {vertices} vertices / {colours} colours over budget {:.1} / {:.1}",
                    usage.vertex_budget, usage.colour_budget
                ),
            ));
        }
        Ok(())
    }
}

pub(crate) fn run(colouring: &EdgeColouring, tree: &Tree, config: &PipelineConfig) -> Result<EmbedOutcome> {
    let n = colouring.n();
    let k = colouring.k();
    let threshold = config.star_threshold.unwrap_or_else(|| default_star_threshold(n));
    let params = SplitParams {
        bare_path_len: config.bare_path_len,
        leaf_batch: config.leaf_batch,
        ..SplitParams::new(threshold, config.mu, n)
    };
    let split = match split_tree_with(tree, &params) {
        Ok(split) => split,
        Err(e) => {
            let failure = Failure { stage: Stage::Split, detail: e.to_string() };
            return Ok(EmbedOutcome {
                embedding: None,
                method: Method::Pipeline,
                attempts: vec![AttemptTrace { failure: Some(failure), ..AttemptTrace::default() }],
            });
        }
    };
    let blueprint = Blueprint::new(tree, split, n, k, config);
    let p0 = config.p0_for(k);
    let mut probabilities = vec![p0];
    if !blueprint.class_sizes.is_empty() {
        probabilities.extend(layer_probabilities(&blueprint.class_sizes, n, k, config.epsilon, p0)?);
    }
    let mut attempts = Vec::new();
    for attempt in 0..config.retries {
        let seed = derive_seed(config.seed, "attempt", attempt as u64);
        let mut state = Attempt {
            colouring,
            tree,
            config,
            blueprint: &blueprint,
            probabilities: &probabilities,
            n,
            k,
            placement: Placement::new(tree.len(), n, colouring.num_colours()),
            vertex_class: Vec::new(),
            colour_class: Vec::new(),
            trace: AttemptTrace { attempt, seed, ..AttemptTrace::default() },
        };
        match state.run(seed) {
            Ok(()) => {
                let embedding = RainbowEmbedding::from_map(colouring, tree, state.placement.host)
                    .map_err(|e| Error::Internal(format!("pipeline produced an invalid embedding: {e}")))?;
                attempts.push(state.trace);
                return Ok(EmbedOutcome { embedding: Some(embedding), method: Method::Pipeline, attempts });
            }
            Err(Halt::Fail(failure)) => {
                state.trace.failure = Some(failure);
                attempts.push(state.trace);
            }
            Err(Halt::Error(e)) => return Err(e),
        }
    }
    Ok(EmbedOutcome { embedding: None, method: Method::Pipeline, attempts })
}
