//! Finite strict posets: greatest lower bounds, the order-theoretic
//! properties GLB / DC / DD / KAP evaluated literally over all downward
//! directed subsets, and realization of a poset as the prime spectrum of the
//! path algebra of a graph with infinite parallel-edge families.

use std::collections::BTreeSet;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Mult};
use crate::spectrum::{compute_spec, SpecNode};

/// Subsets are enumerated exhaustively, so property checks are bounded.
pub const DEFAULT_SUBSET_BOUND: usize = 12;

/// Elements sorted by name; `lt` strict, irreflexive, transitive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinPoset {
    elements: Vec<String>,
    lt: Vec<Vec<bool>>,
}

#[derive(Deserialize)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub lt: Vec<(String, String)>,
}

impl FinPoset {
    /// Build from generating relations; the transitive closure is applied and
    /// cycles (including a < a) are rejected.
    pub fn new(elements: Vec<String>, lt_pairs: &[(String, String)]) -> Result<FinPoset> {
        let mut names = elements;
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].clone()));
            }
        }
        let n = names.len();
        let index = |s: &str| -> Result<usize> {
            names
                .binary_search_by(|e| e.as_str().cmp(s))
                .map_err(|_| Error::UnknownElement(s.to_owned()))
        };
        let mut lt = vec![vec![false; n]; n];
        for (a, b) in lt_pairs {
            lt[index(a)?][index(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if lt[i][k] && lt[k][j] {
                        lt[i][j] = true;
                    }
                }
            }
        }
        for (i, name) in names.iter().enumerate() {
            if lt[i][i] {
                return Err(Error::RelationCycle(name.clone()));
            }
        }
        Ok(FinPoset {
            elements: names,
            lt,
        })
    }

    pub fn from_json(text: &str) -> Result<FinPoset> {
        let doc: PosetDoc =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        FinPoset::new(doc.elements, &doc.lt)
    }

    pub fn chain(n: usize) -> FinPoset {
        let elements: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let pairs: Vec<(String, String)> = (0..n.saturating_sub(1))
            .map(|i| (format!("p{i}"), format!("p{}", i + 1)))
            .collect();
        FinPoset::new(elements, &pairs).expect("a chain is a poset")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.lt[i][j]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.lt[i][j]
    }

    /// All nonempty downward directed subsets, as index sets.
    pub fn downward_directed_subsets(&self) -> Vec<BTreeSet<usize>> {
        let n = self.elements.len();
        let mut out = Vec::new();
        for mask in 1u64..(1 << n) {
            let subset: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if self.is_downward_directed(&subset) {
                out.push(subset);
            }
        }
        out
    }

    pub fn is_downward_directed(&self, s: &BTreeSet<usize>) -> bool {
        !s.is_empty()
            && s.iter().all(|&p| {
                s.iter()
                    .all(|&q| s.iter().any(|&r| self.leq(r, p) && self.leq(r, q)))
            })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut pairs = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.lt[i][j] {
                    pairs.push(serde_json::json!([self.elements[i], self.elements[j]]));
                }
            }
        }
        serde_json::json!({ "elements": self.elements, "lt": pairs })
    }
}

/// Greatest lower bound of a nonempty subset, if it exists.
pub fn glb(p: &FinPoset, s: &BTreeSet<usize>) -> Result<Option<usize>> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let lowers: Vec<usize> = (0..p.len())
        .filter(|&x| s.iter().all(|&e| p.leq(x, e)))
        .collect();
    Ok(lowers
        .iter()
        .copied()
        .find(|&x| lowers.iter().all(|&y| p.leq(y, x))))
}

/// Elements that are not the glb of any downward directed subset lacking a
/// least element. Finite downward directed sets always have least elements,
/// so this is the whole poset; the evaluation is literal anyway.
pub fn r_set(p: &FinPoset) -> BTreeSet<usize> {
    let directed = p.downward_directed_subsets();
    (0..p.len())
        .filter(|&x| {
            !directed.iter().any(|s| {
                let least = s.iter().any(|&m| s.iter().all(|&e| p.leq(m, e)));
                !least && glb(p, s).unwrap() == Some(x)
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub glb: bool,
    pub dc: bool,
    pub dd: bool,
    pub kap: bool,
    pub glb_witness: Option<BTreeSet<usize>>,
    pub dc_witness: Option<(BTreeSet<usize>, usize)>,
    pub dd_witness: Option<BTreeSet<usize>>,
    pub kap_witness: Option<(usize, usize)>,
}

impl PropertyReport {
    pub fn all(&self) -> bool {
        self.glb && self.dc && self.dd && self.kap
    }
}

pub fn check_properties(p: &FinPoset) -> Result<PropertyReport> {
    check_properties_bounded(p, DEFAULT_SUBSET_BOUND)
}

/// Literal evaluation of the four properties over every downward directed
/// subset. Failures come with the witness subset or pair.
pub fn check_properties_bounded(p: &FinPoset, bound: usize) -> Result<PropertyReport> {
    if p.len() > bound {
        return Err(Error::BoundExceeded { n: p.len(), bound });
    }
    let directed = p.downward_directed_subsets();
    let glbs: Vec<Option<usize>> = directed.iter().map(|s| glb(p, s).unwrap()).collect();
    let has_least: Vec<bool> = directed
        .iter()
        .map(|s| s.iter().any(|&m| s.iter().all(|&e| p.leq(m, e))))
        .collect();
    let r: BTreeSet<usize> = (0..p.len())
        .filter(|&x| {
            !directed
                .iter()
                .enumerate()
                .any(|(i, _)| !has_least[i] && glbs[i] == Some(x))
        })
        .collect();
    debug_assert_eq!(r, r_set(p));
    let in_r: Vec<bool> = directed
        .iter()
        .map(|s| s.iter().all(|e| r.contains(e)))
        .collect();

    let mut report = PropertyReport {
        glb: true,
        dc: true,
        dd: true,
        kap: true,
        glb_witness: None,
        dc_witness: None,
        dd_witness: None,
        kap_witness: None,
    };

    // GLB: every downward directed subset has a greatest lower bound.
    for (i, s) in directed.iter().enumerate() {
        if glbs[i].is_none() {
            report.glb = false;
            report.glb_witness = Some(s.clone());
            break;
        }
    }

    // DC: whenever x in R(P) sits above glb(S), it sits above some member.
    'dc: for (i, s) in directed.iter().enumerate() {
        if let Some(m) = glbs[i] {
            for &x in &r {
                if p.leq(m, x) && !s.iter().any(|&e| p.leq(e, x)) {
                    report.dc = false;
                    report.dc_witness = Some((s.clone(), x));
                    break 'dc;
                }
            }
        }
    }

    // DD: glb(S) is also the glb of some downward directed subset of R(P).
    for (i, s) in directed.iter().enumerate() {
        if let Some(m) = glbs[i] {
            let found = (0..directed.len()).any(|j| in_r[j] && glbs[j] == Some(m));
            if !found {
                report.dd = false;
                report.dd_witness = Some(s.clone());
                break;
            }
        }
    }

    // KAP: every strict pair bounds a cover pair.
    'kap: for a in 0..p.len() {
        for b in 0..p.len() {
            if p.lt(a, b) && kaplansky_pair_in(p, a, b).is_none() {
                report.kap = false;
                report.kap_witness = Some((a, b));
                break 'kap;
            }
        }
    }
    Ok(report)
}

/// The cover-pair construction: a minimal element strictly above `a` within
/// the interval, then a maximal element below it.
pub fn kaplansky_pair_in(p: &FinPoset, a: usize, b: usize) -> Option<(usize, usize)> {
    if !p.lt(a, b) {
        return None;
    }
    let above: Vec<usize> = (0..p.len())
        .filter(|&z| p.lt(a, z) && p.leq(z, b))
        .collect();
    let q = above
        .iter()
        .copied()
        .find(|&z| above.iter().all(|&w| !p.lt(w, z)))?;
    let below: Vec<usize> = (0..p.len())
        .filter(|&m| p.leq(a, m) && p.lt(m, q))
        .collect();
    let pr = below
        .iter()
        .copied()
        .find(|&m| below.iter().all(|&w| !p.lt(m, w)))?;
    // No element strictly between, or q's minimality is contradicted.
    debug_assert!(!(0..p.len()).any(|t| p.lt(pr, t) && p.lt(t, q)));
    Some((pr, q))
}

/// The realization graph: one vertex per element and a countably infinite
/// edge family from greater to strictly lesser.
pub fn realize(p: &FinPoset) -> Graph {
    let vertices: Vec<String> = p.elements().to_vec();
    let mut edges = Vec::new();
    for i in 0..p.len() {
        for j in 0..p.len() {
            if p.lt(j, i) {
                edges.push((
                    p.element(i).to_owned(),
                    p.element(j).to_owned(),
                    Mult::Omega,
                ));
            }
        }
    }
    Graph::new(vertices, edges).expect("elements are distinct and nonempty")
}

/// Realization round trip: the spectrum of the realization graph must be
/// order-isomorphic to the poset, via element -> graded prime whose H is the
/// set of elements not above it.
pub fn verify_realization(p: &FinPoset, cap: usize) -> Result<bool> {
    if p.is_empty() {
        return Ok(false);
    }
    let g = realize(p);
    let spec = compute_spec(&g, cap)?;
    if spec.len() != p.len() {
        return Ok(false);
    }
    // The graph is acyclic, so no families can occur.
    if spec.nodes().iter().any(SpecNode::is_family) {
        return Ok(false);
    }
    let mut image = Vec::with_capacity(p.len());
    for e in 0..p.len() {
        // H = elements q with q not >= e.
        let h: BTreeSet<usize> = (0..p.len()).filter(|&q| !p.leq(e, q)).collect();
        let hv: crate::graph::VertexSet = h
            .iter()
            .map(|&q| g.vertex(p.element(q)).expect("same names"))
            .collect();
        match spec
            .nodes()
            .iter()
            .position(|n| n.pair().h() == &hv && n.pair().s().is_empty())
        {
            Some(i) => image.push(i),
            None => return Ok(false),
        }
    }
    // Bijective and order-preserving both ways.
    let distinct: BTreeSet<usize> = image.iter().copied().collect();
    if distinct.len() != p.len() {
        return Ok(false);
    }
    for a in 0..p.len() {
        for b in 0..p.len() {
            if p.leq(a, b) != spec.leq(image[a], image[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
