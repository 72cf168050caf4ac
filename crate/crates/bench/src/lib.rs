//! Benchmark fixtures shared by the criterion targets.

use lpa_core::graph::{Graph, Mult};

/// Layered row-finite graph: `layers` levels of `width` vertices, every
/// vertex feeding the whole next layer. Its hereditary saturated sets grow
/// combinatorially with the width.
pub fn layered_graph(layers: usize, width: usize) -> Graph {
    let mut vertices = Vec::new();
    for l in 0..layers {
        for w in 0..width {
            vertices.push(format!("v{l}_{w}"));
        }
    }
    let mut edges = Vec::new();
    for l in 0..layers.saturating_sub(1) {
        for w in 0..width {
            for t in 0..width {
                edges.push((
                    format!("v{l}_{w}"),
                    format!("v{}_{t}", l + 1),
                    Mult::Finite(1),
                ));
            }
        }
    }
    Graph::new(vertices, edges).expect("layered graph is valid")
}

/// A breaking-vertex ladder: `n` infinite emitters, each with a loop and an
/// infinite family into a shared sink.
pub fn breaking_ladder(n: usize) -> Graph {
    let mut vertices = vec!["sink".to_owned()];
    let mut edges = Vec::new();
    for i in 0..n {
        let v = format!("w{i}");
        edges.push((v.clone(), v.clone(), Mult::Finite(1)));
        edges.push((v.clone(), "sink".to_owned(), Mult::Omega));
        vertices.push(v);
    }
    Graph::new(vertices, edges).expect("ladder is valid")
}
