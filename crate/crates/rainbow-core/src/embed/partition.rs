//! Class probabilities and the coupled random partition of vertices and colours.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::colouring::{ColourId, ColourSet, EdgeColouring, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::rng::substream;

/// Tolerance on `Σ p_i = 1`.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// The class holding star leaves, whose colours are coupled to its vertices.
pub const STAR_CLASS: usize = 1;

/// Probabilities `p_1..p_ℓ` for classes of sizes `m_1..m_ℓ`:
/// `p_i = (1 + ε/4)·k·m_i/n + ε/(4ℓ)` for `i < ℓ` and `p_ℓ` the complement
/// of `p_0 + p_1 + … + p_{ℓ-1}`.
pub fn layer_probabilities(sizes: &[usize], n: usize, k: usize, epsilon: f64, p0: f64) -> Result<Vec<f64>> {
    if sizes.is_empty() {
        return Err(Error::Parameter("at least one layer is required".into()));
    }
    if n == 0 || k == 0 {
        return Err(Error::Parameter("n and k must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::Parameter(format!("p0 must lie in (0, 1), got {p0}")));
    }
    let ell = sizes.len();
    let mut probs: Vec<f64> = sizes[..ell - 1]
        .iter()
        .map(|&m| (1.0 + epsilon / 4.0) * k as f64 * m as f64 / n as f64 + epsilon / (4.0 * ell as f64))
        .collect();
    let last = 1.0 - p0 - probs.iter().sum::<f64>();
    if last <= 0.0 {
        return Err(Error::Infeasible(format!(
            "last class probability {last:.4} is not positive; the tree is too large for epsilon"
        )));
    }
    probs.push(last);
    let total = p0 + probs.iter().sum::<f64>();
    if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(Error::Internal(format!("class probabilities sum to {total}")));
    }
    Ok(probs)
}

/// Vertex and colour classes `0..=ℓ` with the pairing they were sampled under.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    /// `p_0..p_ℓ`.
    pub probabilities: Vec<f64>,
    pub vertex_class: Vec<usize>,
    pub colour_class: Vec<usize>,
    pub pairing: Vec<(VertexId, ColourId)>,
}

impl PartitionPlan {
    pub fn num_classes(&self) -> usize {
        self.probabilities.len()
    }

    pub fn vertices(&self, class: usize) -> VertexSet {
        class_set(&self.vertex_class, class)
    }

    pub fn colours(&self, class: usize) -> ColourSet {
        class_set(&self.colour_class, class)
    }

    /// Checks that a paired vertex is in the star class exactly when its
    /// colour is.
    pub fn check_coupling(&self) -> Result<()> {
        for &(x, c) in &self.pairing {
            if (self.vertex_class[x] == STAR_CLASS) != (self.colour_class[c] == STAR_CLASS) {
                return Err(Error::Violation(format!("pair ({x}, {c}) split across the star class")));
            }
        }
        Ok(())
    }

    /// Moves a pair into the star class together.
    pub(crate) fn move_pair_to_star_class(&mut self, x: VertexId, c: ColourId) {
        self.vertex_class[x] = STAR_CLASS;
        self.colour_class[c] = STAR_CLASS;
    }
}

fn class_set(classes: &[usize], class: usize) -> VertexSet {
    let mut s = VertexSet::with_capacity(classes.len());
    for (i, &c) in classes.iter().enumerate() {
        if c == class {
            s.insert(i);
        }
    }
    s
}

fn check_probabilities(probabilities: &[f64]) -> Result<()> {
    if probabilities.len() < 2 {
        return Err(Error::Parameter("need p_0 and at least one further class".into()));
    }
    if probabilities.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
        return Err(Error::Parameter("every class probability must lie in (0, 1]".into()));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(Error::Parameter(format!("class probabilities sum to {total}, not 1")));
    }
    Ok(())
}

fn check_pairing(colouring: &EdgeColouring, pairing: &[(VertexId, ColourId)]) -> Result<()> {
    let mut vs = vec![false; colouring.n()];
    let mut cs = vec![false; colouring.num_colours()];
    for &(x, c) in pairing {
        if x >= colouring.n() {
            return Err(Error::VertexOutOfRange { vertex: x, n: colouring.n() });
        }
        if c >= colouring.num_colours() {
            return Err(Error::ColourOutOfRange { colour: c, count: colouring.num_colours() });
        }
        if std::mem::replace(&mut vs[x], true) || std::mem::replace(&mut cs[c], true) {
            return Err(Error::Parameter(format!("pair ({x}, {c}) repeats a vertex or colour")));
        }
    }
    Ok(())
}

/// Index drawn from `weights` restricted to `allowed` classes.
fn draw(rng: &mut ChaCha8Rng, weights: &[f64], allowed: impl Fn(usize) -> bool) -> usize {
    let total: f64 = weights.iter().enumerate().filter(|&(i, _)| allowed(i)).map(|(_, w)| w).sum();
    let mut r = rng.gen::<f64>() * total;
    let mut last = usize::MAX;
    for (i, &w) in weights.iter().enumerate() {
        if !allowed(i) {
            continue;
        }
        last = i;
        if r < w {
            return i;
        }
        r -= w;
    }
    last
}

/// The reserve `X_0`, `C_0`: every vertex and every colour independently
/// with probability `p0`.
pub fn sample_reserve(colouring: &EdgeColouring, p0: f64, seed: u64) -> (Vec<bool>, Vec<bool>) {
    let mut rng = substream(seed, "reserve", 0);
    let x0 = (0..colouring.n()).map(|_| rng.gen::<f64>() < p0).collect();
    let c0 = (0..colouring.num_colours()).map(|_| rng.gen::<f64>() < p0).collect();
    (x0, c0)
}

/// Samples every class independently per vertex and per colour with the
/// given marginals, except that a paired colour lies in the star class
/// exactly when its vertex does. Paired colours of vertices outside the star
/// class draw from the remaining classes, which keeps every marginal exact.
pub fn sample_partitions(
    colouring: &EdgeColouring,
    probabilities: &[f64],
    pairing: &[(VertexId, ColourId)],
    seed: u64,
) -> Result<PartitionPlan> {
    check_probabilities(probabilities)?;
    check_pairing(colouring, pairing)?;
    let mut rng = substream(seed, "partition", 0);
    let vertex_class: Vec<usize> = (0..colouring.n()).map(|_| draw(&mut rng, probabilities, |_| true)).collect();
    let mut partner = vec![usize::MAX; colouring.num_colours()];
    for &(x, c) in pairing {
        partner[c] = x;
    }
    let colour_class = partner
        .iter()
        .map(|&x| {
            if x == usize::MAX {
                draw(&mut rng, probabilities, |_| true)
            } else if vertex_class[x] == STAR_CLASS {
                STAR_CLASS
            } else {
                draw(&mut rng, probabilities, |i| i != STAR_CLASS)
            }
        })
        .collect();
    let plan = PartitionPlan { probabilities: probabilities.to_vec(), vertex_class, colour_class, pairing: pairing.to_vec() };
    plan.check_coupling().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(plan)
}

/// Samples classes `1..=ℓ` for everything outside a fixed reserve. Outside
/// the reserve, class `i` has probability `p_i/(1 - p_0)`; a paired colour
/// follows its vertex into the star class and otherwise draws from classes
/// `2..=ℓ`.
pub fn sample_given_reserve(
    colouring: &EdgeColouring,
    probabilities: &[f64],
    pairing: &[(VertexId, ColourId)],
    x0: &[bool],
    c0: &[bool],
    seed: u64,
) -> Result<PartitionPlan> {
    check_probabilities(probabilities)?;
    check_pairing(colouring, pairing)?;
    let mut rng = substream(seed, "classes", 0);
    let vertex_class: Vec<usize> = x0
        .iter()
        .map(|&reserved| if reserved { 0 } else { draw(&mut rng, probabilities, |i| i > 0) })
        .collect();
    let mut partner = vec![usize::MAX; colouring.num_colours()];
    for &(x, c) in pairing {
        partner[c] = x;
        if c0[c] && vertex_class[x] == STAR_CLASS {
            return Err(Error::Parameter(format!("paired colour {c} lies in the reserve but vertex {x} does not")));
        }
    }
    let others_exist = probabilities.len() > 2;
    let mut colour_class = Vec::with_capacity(c0.len());
    for (c, &reserved) in c0.iter().enumerate() {
        let class = if reserved {
            0
        } else if partner[c] == usize::MAX {
            draw(&mut rng, probabilities, |i| i > 0)
        } else if vertex_class[partner[c]] == STAR_CLASS {
            STAR_CLASS
        } else if others_exist {
            draw(&mut rng, probabilities, |i| i > STAR_CLASS)
        } else {
            return Err(Error::Parameter(format!(
                "paired vertex {} is outside the star class and no other class exists",
                partner[c]
            )));
        };
        colour_class.push(class);
    }
    let plan = PartitionPlan { probabilities: probabilities.to_vec(), vertex_class, colour_class, pairing: pairing.to_vec() };
    plan.check_coupling().map_err(|e| Error::Internal(e.to_string()))?;
    Ok(plan)
}
