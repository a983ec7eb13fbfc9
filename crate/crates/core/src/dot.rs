//! Graphviz export. Graphs become undirected graphs; posets and
//! semilattices become Hasse diagrams drawn bottom-up. Node order follows
//! the carrier.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::structure::{FiniteStructure, StructureClass};

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Pairs `(x, y)` with `x < y` and nothing strictly between them.
pub fn covering_pairs(s: &FiniteStructure) -> Vec<(usize, usize)> {
    let n = s.len();
    let lt = |i: usize, j: usize| i != j && s.le(i, j);
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if lt(x, y) && !(0..n).any(|z| lt(x, z) && lt(z, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

pub fn to_dot(s: &FiniteStructure) -> Result<String> {
    let mut out = String::new();
    let n = s.len();
    match s.class() {
        StructureClass::Graph => {
            out.push_str("graph G {\n");
            for i in 0..n {
                writeln!(out, "  {};", quote(s.name(i))).unwrap();
            }
            for i in 0..n {
                for j in i + 1..n {
                    if s.adjacent(i, j) {
                        writeln!(out, "  {} -- {};", quote(s.name(i)), quote(s.name(j))).unwrap();
                    }
                }
            }
        }
        StructureClass::Poset | StructureClass::Semilattice => {
            out.push_str("digraph G {\n  rankdir=BT;\n");
            for i in 0..n {
                writeln!(out, "  {};", quote(s.name(i))).unwrap();
            }
            for (x, y) in covering_pairs(s) {
                writeln!(out, "  {} -> {};", quote(s.name(x)), quote(s.name(y))).unwrap();
            }
        }
        StructureClass::Metric => {
            return Err(Error::Precondition(
                "DOT export is available for graph, poset and semilattice structures, not metric spaces".into(),
            ));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
