//! Graphviz export.

use std::fmt::Write;

use rainbow_core::{EdgeColouring, Tree, VertexId};

const PALETTE: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

/// The image of `tree` under `map`, each host edge labelled with its colour.
pub fn embedding(colouring: &EdgeColouring, tree: &Tree, map: &[VertexId]) -> String {
    let mut out = String::from("graph embedding {\n  node [shape=circle];\n");
    for (v, &x) in map.iter().enumerate() {
        let _ = writeln!(out, "  {x} [xlabel=\"t{v}\"];");
    }
    for &(u, v) in tree.edges() {
        let c = colouring.colour(map[u], map[v]);
        let _ = writeln!(out, "  {} -- {} [label=\"{}\"];", map[u], map[v], colouring.colour_label(c));
    }
    out.push_str("}\n");
    out
}

/// All copies on `n` host vertices, one edge colour per copy.
pub fn copies(n: usize, tree: &Tree, copies: &[Vec<VertexId>]) -> String {
    let mut out = String::from("graph copies {\n  node [shape=circle];\n");
    for x in 0..n {
        let _ = writeln!(out, "  {x};");
    }
    for (i, map) in copies.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        for &(u, v) in tree.edges() {
            let _ = writeln!(out, "  {} -- {} [color=\"{colour}\", label=\"{i}\"];", map[u], map[v]);
        }
    }
    out.push_str("}\n");
    out
}
