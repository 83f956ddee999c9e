//! Graphviz DOT export for construction families and plain digraphs.

use std::fmt::Write;

use crate::construct::ConstructionFamily;
use crate::graph::DirectedGraph;

/// Renders the family with one comment block per part, construction-side
/// vertex names as node labels, and deterministic ordering throughout.
pub fn family_to_dot(fam: &ConstructionFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {}_n{} {{", fam.kind().as_str(), fam.n());
    let _ = writeln!(out, "  rankdir=LR;");
    for (label, name) in (1..=fam.n()).zip(fam.vertex_names()) {
        let _ = writeln!(out, "  {label} [label=\"{name}\"];");
    }
    for (part, name) in fam.parts().iter().zip(fam.part_names()) {
        let _ = writeln!(out, "  // part {name}");
        for (u, v) in part.edges() {
            let _ = writeln!(out, "  {u} -> {v};");
        }
    }
    out.push_str("}\n");
    out
}

/// Plain digraph export with numeric labels.
pub fn graph_to_dot(g: &DirectedGraph, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {name} {{");
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -> {v};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::thm2_h_family;

    #[test]
    fn dot_has_one_comment_block_per_part() {
        let fam = thm2_h_family(5).unwrap();
        let dot = family_to_dot(&fam);
        assert_eq!(dot.matches("// part").count(), fam.len());
        assert!(dot.contains("1 -> 4;"));
        assert!(dot.contains("[label=\"w1\"]"));
        assert!(dot.starts_with("digraph thm2h_n5 {"));
    }

    #[test]
    fn graph_dot_lists_edges_sorted() {
        let g = DirectedGraph::from_edge_list(3, &[(2, 3), (1, 2)]).unwrap();
        let dot = graph_to_dot(&g, "g");
        let i = dot.find("1 -> 2;").unwrap();
        let j = dot.find("2 -> 3;").unwrap();
        assert!(i < j);
    }
}
