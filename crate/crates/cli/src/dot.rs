//! Graphviz export.

use std::fmt::Write as _;

use hcw_core::graph::LoopGraph;

/// Undirected DOT; loops become self-edges and `labels`, when given, name
/// the nodes.
pub fn to_dot(g: &LoopGraph, name: &str, labels: Option<&[String]>) -> String {
    let mut s = format!("graph {} {{\n", quote(name));
    for v in 0..g.vertex_count() {
        match labels.and_then(|l| l.get(v)) {
            Some(l) => {
                let _ = writeln!(s, "  {v} [label={}];", quote(l));
            }
            None => {
                let _ = writeln!(s, "  {v};");
            }
        }
    }
    for v in g.loops() {
        let _ = writeln!(s, "  {v} -- {v};");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
