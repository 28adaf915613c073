//! Monte-Carlo checks of the pseudorandom properties of random vertex and
//! colour sets. Every trial draws from its own substream, so summaries are
//! identical on rerun regardless of thread count.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colouring::{EdgeColouring, VertexId};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    EdgeDensity,
    Multiplicity,
    Diversity,
    Neighbourhood,
}

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::EdgeDensity => "edge_density",
            Lemma::Multiplicity => "multiplicity",
            Lemma::Diversity => "diversity",
            Lemma::Neighbourhood => "neighbourhood",
        }
    }
}

/// How the test sets `A` and `B` are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetShape {
    #[default]
    Random,
    /// Consecutive vertex ids from a random start, wrapping around.
    Interval,
}

/// Dependence between the random vertex set `X` and colour set `C`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    #[default]
    Independent,
    /// Vertex `c` and colour `c` share one uniform draw, so with `p = q`
    /// colour `c` is in `C` exactly when vertex `c` is in `X`. Colours
    /// without a partner vertex are drawn independently.
    Paired,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatConfig {
    pub trials: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub shape: SetShape,
    pub coupling: Coupling,
}

impl Default for StatConfig {
    fn default() -> Self {
        StatConfig { trials: 30, seed: 0, epsilon: 0.1, shape: SetShape::Random, coupling: Coupling::Independent }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: Option<f64>,
    pub a_size: Option<usize>,
    pub b_size: Option<usize>,
    pub epsilon: f64,
    pub shape: SetShape,
    pub coupling: Coupling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    /// Whether the trial met the bound; two-sided for edge density, one-sided otherwise.
    pub passed: bool,
    /// `(measured - target) / target`, or `measured - target` when the target is 0.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q05: f64,
    pub median: f64,
    pub q95: f64,
    pub max: f64,
}

impl Quantiles {
    /// Nearest-rank quantiles.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let at = |q: f64| sorted[((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1];
        Some(Quantiles { min: sorted[0], q05: at(0.05), median: at(0.5), q95: at(0.95), max: sorted[sorted.len() - 1] })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub lemma: Lemma,
    pub params: StatParams,
    pub trials: usize,
    pub pass_rate: f64,
    pub deviation: Quantiles,
    pub reports: Vec<TrialReport>,
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must lie in [0, 1], got {p}")))
    }
}

fn check_config(config: &StatConfig) -> Result<()> {
    if config.trials == 0 {
        return Err(Error::Parameter("at least one trial is required".into()));
    }
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {}", config.epsilon)));
    }
    Ok(())
}

fn check_regime(name: &str, size: usize, n: usize) -> Result<()> {
    let floor = (n as f64).sqrt();
    if (size as f64) < floor {
        return Err(Error::Parameter(format!("|{name}| = {size} is below sqrt(n) = {floor:.1}")));
    }
    Ok(())
}

fn bernoulli(rng: &mut ChaCha8Rng, len: usize, p: f64) -> Vec<bool> {
    (0..len).map(|_| rng.gen::<f64>() < p).collect()
}

/// Vertex set `X` and colour set `C`, each with the given marginals.
fn sample_pair(colouring: &EdgeColouring, rng: &mut ChaCha8Rng, p: f64, q: f64, coupling: Coupling) -> (Vec<bool>, Vec<bool>) {
    let draws: Vec<f64> = (0..colouring.n()).map(|_| rng.gen()).collect();
    let x = draws.iter().map(|&u| u < p).collect();
    let c = match coupling {
        Coupling::Independent => bernoulli(rng, colouring.num_colours(), q),
        Coupling::Paired => (0..colouring.num_colours())
            .map(|c| draws.get(c).copied().unwrap_or_else(|| rng.gen()) < q)
            .collect(),
    };
    (x, c)
}

/// `size` vertices from `pool`: a uniform subset, or a cyclic run of the pool.
fn pick(rng: &mut ChaCha8Rng, pool: &[VertexId], size: usize, shape: SetShape) -> Vec<VertexId> {
    let size = size.min(pool.len());
    match shape {
        SetShape::Random => sample(rng, pool.len(), size).into_iter().map(|i| pool[i]).collect(),
        SetShape::Interval => {
            let start = if pool.is_empty() { 0 } else { rng.gen_range(0..pool.len()) };
            (0..size).map(|i| pool[(start + i) % pool.len()]).collect()
        }
    }
}

fn deviation(measured: f64, target: f64) -> f64 {
    if target > 0.0 {
        (measured - target) / target
    } else {
        measured - target
    }
}

fn summarise(
    lemma: Lemma,
    params: StatParams,
    config: &StatConfig,
    trial: impl Fn(usize, &mut ChaCha8Rng) -> TrialReport + Sync,
) -> StatSummary {
    let reports: Vec<TrialReport> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, lemma.name(), i as u64);
            let mut rng = substream(seed, "trial", 0);
            let mut report = trial(i, &mut rng);
            report.trial = i;
            report.seed = seed;
            report
        })
        .collect();
    let passes = reports.iter().filter(|r| r.passed).count();
    let deviations: Vec<f64> = reports.iter().map(|r| r.deviation).collect();
    StatSummary {
        lemma,
        params,
        trials: reports.len(),
        pass_rate: passes as f64 / reports.len() as f64,
        deviation: Quantiles::of(&deviations).expect("at least one trial"),
        reports,
    }
}

fn report(measured: f64, target: f64, tolerance: f64, passed: bool) -> TrialReport {
    TrialReport { trial: 0, seed: 0, measured, target, tolerance, passed, deviation: deviation(measured, target) }
}

/// Edges with a colour from a `p`-random colour set between random disjoint
/// `A` and `B`, against `p|A||B|` within `ε·p|A||B|`.
pub fn stat_edge_density(
    colouring: &EdgeColouring,
    p: f64,
    a_size: usize,
    b_size: usize,
    config: &StatConfig,
) -> Result<StatSummary> {
    check_probability("p", p)?;
    check_config(config)?;
    let n = colouring.n();
    if a_size + b_size > n {
        return Err(Error::Parameter(format!("|A| + |B| = {} exceeds n = {n}", a_size + b_size)));
    }
    check_regime("A", a_size, n)?;
    check_regime("B", b_size, n)?;
    let params = StatParams {
        n,
        k: colouring.k(),
        p,
        q: None,
        a_size: Some(a_size),
        b_size: Some(b_size),
        epsilon: config.epsilon,
        shape: config.shape,
        coupling: config.coupling,
    };
    let all: Vec<VertexId> = (0..n).collect();
    Ok(summarise(Lemma::EdgeDensity, params, config, |_, rng| {
        let colours = bernoulli(rng, colouring.num_colours(), p);
        let both = pick(rng, &all, a_size + b_size, config.shape);
        let (a, b) = both.split_at(a_size);
        let edges = a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v))).filter(|&(u, v)| colours[colouring.colour(u, v)]).count();
        let target = p * (a_size * b_size) as f64;
        let tolerance = config.epsilon * target;
        report(edges as f64, target, tolerance, (edges as f64 - target).abs() <= tolerance)
    }))
}

/// Fraction of colours (relative to `n`) with more than `(1+ε)pk|A|` edges
/// between a `p`-random set `X` and a set `A` outside it; at most `ε` passes.
pub fn stat_colour_multiplicity(
    colouring: &EdgeColouring,
    p: f64,
    a_size: usize,
    config: &StatConfig,
) -> Result<StatSummary> {
    check_probability("p", p)?;
    check_config(config)?;
    let n = colouring.n();
    if a_size == 0 || a_size > n {
        return Err(Error::Parameter(format!("|A| must lie in 1..={n}, got {a_size}")));
    }
    let k = colouring.k();
    let params = StatParams {
        n,
        k,
        p,
        q: None,
        a_size: Some(a_size),
        b_size: None,
        epsilon: config.epsilon,
        shape: config.shape,
        coupling: config.coupling,
    };
    let threshold = (1.0 + config.epsilon) * p * (k * a_size) as f64;
    Ok(summarise(Lemma::Multiplicity, params, config, |_, rng| {
        let x = bernoulli(rng, n, p);
        let outside: Vec<VertexId> = (0..n).filter(|&v| !x[v]).collect();
        let a = pick(rng, &outside, a_size, config.shape);
        let mut count = vec![0usize; colouring.num_colours()];
        for &u in &a {
            for v in (0..n).filter(|&v| x[v]) {
                count[colouring.colour(u, v)] += 1;
            }
        }
        let exceptional = count.iter().filter(|&&c| c as f64 > threshold).count();
        let fraction = exceptional as f64 / n as f64;
        report(fraction, 0.0, config.epsilon, fraction <= config.epsilon)
    }))
}

/// Distinct colours of a `p`-random colour set `C` between `A` outside a
/// `p`-random vertex set `X` and `B ⊆ X` (all of `X` when `b_size` is
/// `None`), against `(1-ε)|B|/k`.
pub fn stat_colour_diversity(
    colouring: &EdgeColouring,
    p: f64,
    a_size: usize,
    b_size: Option<usize>,
    config: &StatConfig,
) -> Result<StatSummary> {
    check_probability("p", p)?;
    check_config(config)?;
    let n = colouring.n();
    check_regime("A", a_size, n)?;
    if a_size > n {
        return Err(Error::Parameter(format!("|A| = {a_size} exceeds n = {n}")));
    }
    let k = colouring.k();
    let params = StatParams {
        n,
        k,
        p,
        q: Some(p),
        a_size: Some(a_size),
        b_size,
        epsilon: config.epsilon,
        shape: config.shape,
        coupling: config.coupling,
    };
    Ok(summarise(Lemma::Diversity, params, config, |_, rng| {
        let (x, c) = sample_pair(colouring, rng, p, p, config.coupling);
        let inside: Vec<VertexId> = (0..n).filter(|&v| x[v]).collect();
        let outside: Vec<VertexId> = (0..n).filter(|&v| !x[v]).collect();
        let b = match b_size {
            Some(size) => pick(rng, &inside, size, config.shape),
            None => inside,
        };
        let a = pick(rng, &outside, a_size, config.shape);
        let mut seen = vec![false; colouring.num_colours()];
        for &u in &a {
            for &v in &b {
                let col = colouring.colour(u, v);
                if c[col] {
                    seen[col] = true;
                }
            }
        }
        let distinct = seen.iter().filter(|&&s| s).count() as f64;
        let target = (1.0 - config.epsilon) * b.len() as f64 / k as f64;
        report(distinct, target, 0.0, distinct >= target)
    }))
}

/// Minimum over all vertices of the number of colour-`C` neighbours in `X`,
/// for `P(x ∈ X) = p` and `P(c ∈ C) = q`, against `pqn/2`.
pub fn stat_colour_neighbourhood(colouring: &EdgeColouring, p: f64, q: f64, config: &StatConfig) -> Result<StatSummary> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    check_config(config)?;
    let n = colouring.n();
    let params = StatParams {
        n,
        k: colouring.k(),
        p,
        q: Some(q),
        a_size: None,
        b_size: None,
        epsilon: config.epsilon,
        shape: config.shape,
        coupling: config.coupling,
    };
    let target = p * q * n as f64 / 2.0;
    Ok(summarise(Lemma::Neighbourhood, params, config, |_, rng| {
        let (x, c) = sample_pair(colouring, rng, p, q, config.coupling);
        let inside: Vec<VertexId> = (0..n).filter(|&v| x[v]).collect();
        let least = (0..n)
            .map(|u| inside.iter().filter(|&&v| v != u && c[colouring.colour(u, v)]).count())
            .min()
            .unwrap_or(0) as f64;
        report(least, target, 0.0, least >= target)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{group_sum_colouring, nd_colouring};
    use crate::GroupSpec;

    fn zsum(n: usize) -> EdgeColouring {
        group_sum_colouring(&GroupSpec::cyclic(n)).unwrap()
    }

    #[test]
    fn edge_density_extremes() {
        let z = zsum(200);
        let cfg = StatConfig { trials: 4, ..StatConfig::default() };
        let full = stat_edge_density(&z, 1.0, 20, 30, &cfg).unwrap();
        assert!(full.reports.iter().all(|r| r.measured == 600.0 && r.deviation == 0.0));
        let none = stat_edge_density(&z, 0.0, 20, 30, &cfg).unwrap();
        assert!(none.reports.iter().all(|r| r.measured == 0.0 && r.passed));
        assert!(stat_edge_density(&z, 0.5, 5, 30, &cfg).is_err());
        assert!(stat_edge_density(&z, 0.5, 150, 60, &cfg).is_err());
    }

    #[test]
    fn deterministic_across_reruns() {
        let z = zsum(300);
        let cfg = StatConfig { trials: 8, seed: 11, shape: SetShape::Interval, ..StatConfig::default() };
        let first = stat_edge_density(&z, 0.3, 40, 40, &cfg).unwrap();
        let again = stat_edge_density(&z, 0.3, 40, 40, &cfg).unwrap();
        assert_eq!(first, again);
    }

    #[test]
    fn multiplicity_extremes() {
        let nd = nd_colouring(50).unwrap();
        let cfg = StatConfig { trials: 5, ..StatConfig::default() };
        let full = stat_colour_multiplicity(&nd, 1.0, 10, &cfg).unwrap();
        assert!(full.reports.iter().all(|r| r.measured == 0.0));
        assert!(stat_colour_multiplicity(&nd, 1.0, 0, &cfg).is_err());
    }

    #[test]
    fn diversity_and_neighbourhood_extremes() {
        let z = zsum(101);
        let cfg = StatConfig { trials: 3, ..StatConfig::default() };
        let one = stat_colour_diversity(&z, 0.5, 11, Some(1), &cfg).unwrap();
        assert!(one.reports.iter().all(|r| r.measured <= 11.0 && r.target == 0.9));
        assert!(matches!(stat_colour_diversity(&z, 0.3, 3, None, &cfg), Err(Error::Parameter(_))));
        let zero = stat_colour_neighbourhood(&z, 0.0, 0.5, &cfg).unwrap();
        assert!(zero.reports.iter().all(|r| r.measured == 0.0));
        let all = stat_colour_neighbourhood(&z, 1.0, 1.0, &cfg).unwrap();
        assert!(all.reports.iter().all(|r| r.measured == 100.0));
        let paired = StatConfig { coupling: Coupling::Paired, ..cfg };
        assert!(stat_colour_neighbourhood(&z, 0.5, 0.5, &paired).unwrap().trials == 3);
    }

    #[test]
    fn quantiles_nearest_rank() {
        let q = Quantiles::of(&[3.0, 1.0, 2.0, 5.0, 4.0]).unwrap();
        assert_eq!((q.min, q.median, q.max), (1.0, 3.0, 5.0));
        assert_eq!(q.q05, 1.0);
        assert_eq!(q.q95, 5.0);
        assert!(Quantiles::of(&[]).is_none());
    }
}
