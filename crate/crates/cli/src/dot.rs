//! DOT export of Hasse diagrams. Node order follows the input order, so
//! identical inputs render byte-identical files.

use lpa_core::graph::Graph;
use lpa_core::hss::{pair_leq, HssSet, PairLattice};
use lpa_core::spectrum::{SpecNode, SpecPoset};

fn hasse_dot(labels: &[String], leq: impl Fn(usize, usize) -> bool, doubled: &[bool]) -> String {
    let n = labels.len();
    let lt = |i: usize, j: usize| i != j && leq(i, j);
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, label) in labels.iter().enumerate() {
        let escaped = label.replace('"', "\\\"");
        let extra = if doubled.get(i).copied().unwrap_or(false) {
            ", peripheries=2"
        } else {
            ""
        };
        out.push_str(&format!("  n{i} [label=\"{escaped}\"{extra}];\n"));
    }
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                out.push_str(&format!("  n{i} -> n{j};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

fn set_label(g: &Graph, set: &lpa_core::graph::VertexSet) -> String {
    format!("{{{}}}", g.format_set(set).join(","))
}

pub fn hss_dot(g: &Graph, sets: &[HssSet]) -> String {
    let labels: Vec<String> = sets.iter().map(|h| set_label(g, h.verts())).collect();
    let doubled = vec![false; sets.len()];
    hasse_dot(
        &labels,
        |i, j| sets[i].verts().is_subset(sets[j].verts()),
        &doubled,
    )
}

pub fn pair_lattice_dot(g: &Graph, lat: &PairLattice) -> String {
    let labels: Vec<String> = lat
        .pairs()
        .iter()
        .map(|p| format!("({},{})", set_label(g, p.h()), set_label(g, p.s())))
        .collect();
    let doubled = vec![false; lat.len()];
    hasse_dot(&labels, |i, j| pair_leq(lat.pair(i), lat.pair(j)), &doubled)
}

pub fn spec_dot(g: &Graph, spec: &SpecPoset) -> String {
    let labels: Vec<String> = spec
        .nodes()
        .iter()
        .map(|n| match n {
            SpecNode::Graded { pair, case, .. } => format!(
                "I({},{}) [case {case}]",
                set_label(g, pair.h()),
                set_label(g, pair.s())
            ),
            SpecNode::Family { pair, cycle, .. } => format!(
                "I({},{}) + <f({})> [family]",
                set_label(g, pair.h()),
                set_label(g, pair.s()),
                g.format_set(&cycle.vertex_set()).join(",")
            ),
        })
        .collect();
    let doubled: Vec<bool> = spec.nodes().iter().map(SpecNode::is_family).collect();
    hasse_dot(&labels, |i, j| spec.leq(i, j), &doubled)
}
