//! Colouring, tree and group arguments: a file path or an inline spec.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rainbow_core::io::{parse_colouring_json, ColouringSpec};
use rainbow_core::{EdgeColouring, GroupSpec, Tree};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Where an input came from and the SHA-256 of its bytes.
#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub flag: String,
    pub source: String,
    pub sha256: String,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads `arg` as a file if one exists at that path.
fn read_arg(flag: &str, arg: &str) -> Result<(Option<String>, InputDigest)> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {flag} file {arg}"))?;
        let sha256 = digest(text.as_bytes());
        Ok((Some(text), InputDigest { flag: flag.into(), source: arg.into(), sha256 }))
    } else {
        Ok((None, InputDigest { flag: flag.into(), source: format!("inline:{arg}"), sha256: digest(arg.as_bytes()) }))
    }
}

pub fn load_colouring(arg: &str) -> Result<(EdgeColouring, InputDigest)> {
    let (text, source) = read_arg("--colouring", arg)?;
    let colouring = match text {
        Some(text) => parse_colouring_json(&text).with_context(|| format!("parsing colouring file {arg}"))?,
        None => ColouringSpec::parse_inline(arg)
            .and_then(|spec| spec.build())
            .with_context(|| format!("{arg:?} is neither a colouring file nor an inline spec"))?,
    };
    Ok((colouring, source))
}

/// Tree file, or a shape: `path:n`, `star:leaves`, `spider:a,b,..`,
/// `broom:handle:bristles`, `caterpillar:a,b,..`, `double-star:a:b`,
/// `random:n[:seed]`. A random shape without a seed uses `default_seed`.
pub fn load_tree(arg: &str, default_seed: u64) -> Result<(Tree, InputDigest)> {
    let (text, source) = read_arg("--tree", arg)?;
    let tree = match text {
        Some(text) => Tree::parse(&text).with_context(|| format!("parsing tree file {arg}"))?,
        None => tree_shape(arg, default_seed).with_context(|| format!("{arg:?} is neither a tree file nor a shape"))?,
    };
    Ok((tree, source))
}

fn number(s: &str) -> Result<usize> {
    s.parse().with_context(|| format!("expected a non-negative integer, got {s:?}"))
}

fn list(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(number).collect()
}

pub fn tree_shape(spec: &str, default_seed: u64) -> Result<Tree> {
    let parts: Vec<&str> = spec.split(':').collect();
    let tree = match parts.as_slice() {
        ["path", n] => match number(n)? {
            0 => bail!("tree shape {spec:?} has no vertices"),
            n => Tree::path(n),
        },
        ["star", leaves] => Tree::star(number(leaves)?),
        ["spider", legs] => Tree::spider(&list(legs)?),
        ["broom", handle, bristles] => Tree::broom(number(handle)?, number(bristles)?),
        ["caterpillar", legs] => Tree::caterpillar(&list(legs)?),
        ["double-star", a, b] => Tree::double_star(number(a)?, number(b)?),
        ["random", n] => Tree::random(number(n)?, default_seed)?,
        ["random", n, seed] => Tree::random(number(n)?, number(seed)? as u64)?,
        _ => bail!("unknown tree shape {spec:?}"),
    };
    Ok(tree)
}

/// `7` or `z7` for a cyclic group, `2^3` for an elementary 2-group,
/// `2x3x5` for a product of cyclic groups.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let body = text.strip_prefix('z').unwrap_or(text);
    let spec = if let Some(rank) = body.strip_prefix("2^") {
        GroupSpec::elementary_two(rank.parse().with_context(|| format!("bad rank in group {text:?}"))?)
    } else if body.contains('x') {
        GroupSpec::product(list(&body.replace('x', ","))?)
    } else {
        GroupSpec::cyclic(number(body)?)
    };
    spec.validate().with_context(|| format!("invalid group {text:?}"))?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(tree_shape("path:4", 0).unwrap().len(), 4);
        assert_eq!(tree_shape("spider:2,3", 0).unwrap().len(), 6);
        assert_eq!(tree_shape("double-star:2:3", 0).unwrap().len(), 7);
        assert_eq!(tree_shape("random:9", 4).unwrap(), tree_shape("random:9:4", 0).unwrap());
        assert!(tree_shape("blob:3", 0).is_err());
        assert!(tree_shape("path:0", 0).is_err());
    }

    #[test]
    fn groups() {
        assert_eq!(parse_group("z7").unwrap(), GroupSpec::cyclic(7));
        assert_eq!(parse_group("2^3").unwrap(), GroupSpec::elementary_two(3));
        assert_eq!(parse_group("2x3").unwrap(), GroupSpec::product(vec![2, 3]));
        assert!(parse_group("1").is_err());
    }
}
