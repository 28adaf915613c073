//! Text and JSON formats for colourings, plus the inline spec shorthand
//! (`nd:8`, `zsum:101`, `z2k:4`, `rr:12`, `rand:n:k:seed`).

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::colouring::{ColouringKind, EdgeColouring};
use crate::error::{Error, Result};
use crate::generators::{group_sum_colouring, nd_colouring, random_locally_k_bounded, round_robin_proper};
use crate::group::GroupSpec;

/// A closed-form colouring description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColouringSpec {
    Nd { m: usize },
    Zsum { n: usize },
    Z2k { k: u32 },
    Group { orders: Vec<usize> },
    RoundRobin { n: usize },
    RandomKBounded { n: usize, k: usize, seed: u64 },
}

impl ColouringSpec {
    pub fn build(&self) -> Result<EdgeColouring> {
        match self {
            ColouringSpec::Nd { m } => nd_colouring(*m),
            ColouringSpec::Zsum { n } => group_sum_colouring(&GroupSpec::cyclic(*n)),
            ColouringSpec::Z2k { k } => group_sum_colouring(&GroupSpec::elementary_two(*k)),
            ColouringSpec::Group { orders } => group_sum_colouring(&GroupSpec::product(orders.clone())),
            ColouringSpec::RoundRobin { n } => round_robin_proper(*n),
            ColouringSpec::RandomKBounded { n, k, seed } => random_locally_k_bounded(*n, *k, *seed),
        }
    }

    /// The spec that rebuilds `colouring`, if it is implicit.
    pub fn of(colouring: &EdgeColouring) -> Option<Self> {
        let n = colouring.n();
        Some(match colouring.kind() {
            ColouringKind::Explicit => return None,
            ColouringKind::NearDistance { m } => ColouringSpec::Nd { m },
            ColouringKind::GroupSum(GroupSpec::Cyclic { order }) => ColouringSpec::Zsum { n: order },
            ColouringKind::GroupSum(GroupSpec::ElementaryTwo { rank }) => ColouringSpec::Z2k { k: rank },
            ColouringKind::GroupSum(GroupSpec::Product { orders }) => ColouringSpec::Group { orders },
            ColouringKind::RoundRobin => ColouringSpec::RoundRobin { n },
            ColouringKind::RandomKBounded { k, seed } => ColouringSpec::RandomKBounded { n, k, seed },
        })
    }

    /// Parses the inline shorthand.
    pub fn parse_inline(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let num = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::schema(format!("expected an integer in colouring spec, got {s:?}")))
        };
        let spec = match parts.as_slice() {
            ["nd", m] => ColouringSpec::Nd { m: num(m)? as usize },
            ["zsum", n] => ColouringSpec::Zsum { n: num(n)? as usize },
            ["z2k", k] => ColouringSpec::Z2k { k: num(k)? as u32 },
            ["rr", n] => ColouringSpec::RoundRobin { n: num(n)? as usize },
            ["rand", n, k, seed] => {
                ColouringSpec::RandomKBounded { n: num(n)? as usize, k: num(k)? as usize, seed: num(seed)? }
            }
            ["group", orders] => ColouringSpec::Group {
                orders: orders.split('x').map(|o| num(o).map(|v| v as usize)).collect::<Result<_>>()?,
            },
            _ => return Err(Error::schema(format!("unrecognised colouring spec {text:?}"))),
        };
        Ok(spec)
    }
}

#[derive(Deserialize)]
struct ExplicitFile {
    n: usize,
    k: usize,
    edges: Vec<(usize, usize, u64)>,
}

fn json_error(e: serde_json::Error) -> Error {
    if e.line() > 0 {
        Error::schema_at(e.line(), e.to_string())
    } else {
        Error::schema(e.to_string())
    }
}

/// Reads colouring JSON in either the explicit or the implicit form.
/// Explicit colours are arbitrary integer labels, renumbered densely.
pub fn parse_colouring_json(text: &str) -> Result<EdgeColouring> {
    let value: Value = serde_json::from_str(text).map_err(json_error)?;
    if value.get("kind").is_some() {
        let spec: ColouringSpec = serde_json::from_value(value).map_err(json_error)?;
        return spec.build();
    }
    let file: ExplicitFile = serde_json::from_value(value).map_err(json_error)?;
    if file.n < 2 {
        return Err(Error::schema("explicit colouring needs n >= 2"));
    }
    let n = file.n;
    let mut table: Vec<Option<u64>> = vec![None; n * (n - 1) / 2];
    for (i, &(u, v, c)) in file.edges.iter().enumerate() {
        if u == v || u >= n || v >= n {
            return Err(Error::schema(format!("edge #{i} ({u}, {v}) is not a pair of distinct vertices below {n}")));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let slot = &mut table[b * (b - 1) / 2 + a];
        if slot.is_some() {
            return Err(Error::schema(format!("edge ({a}, {b}) listed twice")));
        }
        *slot = Some(c);
    }
    if let Some(missing) = table.iter().position(Option::is_none) {
        let b = (((8 * missing + 1) as f64).sqrt() as usize).div_ceil(2);
        let b = if b * (b - 1) / 2 > missing { b - 1 } else { b };
        let a = missing - b * (b - 1) / 2;
        return Err(Error::schema(format!("edge ({a}, {b}) missing")));
    }
    EdgeColouring::explicit_from_fn(n, file.k, |u, v| table[v * (v - 1) / 2 + u].expect("checked complete"))
}

/// Explicit or implicit JSON for a colouring. Explicit colourings list
/// their dense colour ids.
pub fn colouring_to_json(colouring: &EdgeColouring) -> Value {
    if let Some(spec) = ColouringSpec::of(colouring) {
        return serde_json::to_value(spec).expect("spec serialises");
    }
    let n = colouring.n();
    let edges: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|(u, v)| (u, v, colouring.colour(u, v))).collect();
    serde_json::json!({ "n": n, "k": colouring.k(), "edges": edges })
}

/// A matching given as a list of host edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeListFile {
    pub edges: Vec<(usize, usize)>,
}

pub fn parse_edge_list_json(text: &str) -> Result<EdgeListFile> {
    serde_json::from_str(text).map_err(json_error)
}
