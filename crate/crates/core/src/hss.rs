//! Hereditary saturated vertex sets, breaking vertices, admissible pairs, and
//! quotient graphs.
//!
//! An admissible pair (H, S), a hereditary saturated set H together with a
//! subset S of its breaking vertices, is the canonical name of a graded
//! ideal. The pairs of a finite graph form a complete lattice under
//! `pair_leq`; `PairLattice` enumerates it once and answers order queries,
//! joins, and meets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{Cycle, Graph, Mult, VertexClass, VertexId, VertexSet};

/// Default ceiling on enumerated pairs. Exceeding a cap is a hard error, not
/// a truncation: a truncated lattice would silently corrupt order queries.
pub const DEFAULT_CAP: usize = 4096;

/// A vertex set that is closed under reachability (hereditary) and contains
/// every regular vertex whose out-edges all land inside it (saturated).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct HssSet {
    verts: VertexSet,
}

impl HssSet {
    /// Validate an arbitrary set.
    pub fn new(g: &Graph, verts: VertexSet) -> Result<HssSet> {
        for &v in &verts {
            for (t, _) in g.out(v) {
                if !verts.contains(&t) {
                    return Err(Error::NotHereditary {
                        v: g.name(v).to_owned(),
                        w: g.name(t).to_owned(),
                    });
                }
            }
        }
        for v in g.vertices() {
            if verts.contains(&v) || g.class(v) != VertexClass::Regular {
                continue;
            }
            if g.out(v).all(|(t, _)| verts.contains(&t)) {
                return Err(Error::NotSaturated {
                    v: g.name(v).to_owned(),
                });
            }
        }
        Ok(HssSet { verts })
    }

    pub fn verts(&self) -> &VertexSet {
        &self.verts
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.verts.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn sort_key(&self) -> (usize, Vec<VertexId>) {
        (self.verts.len(), self.verts.iter().copied().collect())
    }
}

/// Smallest hereditary saturated set containing `seed`: the least fixpoint of
/// the two closure rules. Extensive, monotone, idempotent.
pub fn closure(g: &Graph, seed: &VertexSet) -> HssSet {
    let mut h = seed.clone();
    loop {
        let mut changed = false;
        for v in h.clone() {
            for t in g.tree(v) {
                changed |= h.insert(t);
            }
        }
        for v in g.vertices() {
            if h.contains(&v) || g.class(v) != VertexClass::Regular {
                continue;
            }
            if g.out(v).all(|(t, _)| h.contains(&t)) {
                h.insert(v);
                changed = true;
            }
        }
        if !changed {
            return HssSet { verts: h };
        }
    }
}

/// All hereditary saturated subsets, sorted by (size, elements). Walks the
/// closure lattice upward from the bottom, so the cost is proportional to the
/// output, and errors out past `cap`.
pub fn enumerate_hss(g: &Graph, cap: usize) -> Result<Vec<HssSet>> {
    let bottom = closure(g, &VertexSet::new());
    let mut seen: BTreeSet<VertexSet> = BTreeSet::from([bottom.verts.clone()]);
    if seen.len() > cap {
        return Err(Error::CapExceeded {
            what: "hereditary saturated set",
            cap,
        });
    }
    let mut queue = VecDeque::from([bottom.verts]);
    while let Some(h) = queue.pop_front() {
        for v in g.vertices() {
            if h.contains(&v) {
                continue;
            }
            let mut seed = h.clone();
            seed.insert(v);
            let bigger = closure(g, &seed).verts;
            if seen.insert(bigger.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "hereditary saturated set",
                        cap,
                    });
                }
                queue.push_back(bigger);
            }
        }
    }
    let mut out: Vec<HssSet> = seen.into_iter().map(|verts| HssSet { verts }).collect();
    out.sort_by_key(HssSet::sort_key);
    Ok(out)
}

/// B_H: infinite emitters outside H whose edge count into the complement of H
/// is finite and nonzero.
pub fn breaking_vertices(g: &Graph, h: &HssSet) -> VertexSet {
    let mut out = VertexSet::new();
    for w in g.vertices() {
        if h.contains(w) || g.class(w) != VertexClass::InfiniteEmitter {
            continue;
        }
        let mut total = Mult::ZERO;
        for (t, m) in g.out(w) {
            if !h.contains(t) {
                total = total.saturating_add(m);
            }
        }
        if total.is_positive() && !total.is_infinite() {
            out.insert(w);
        }
    }
    out
}

/// The canonical name (H, S) of a graded ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissiblePair {
    h: HssSet,
    s: VertexSet,
}

#[derive(Deserialize)]
pub struct PairDoc {
    #[serde(rename = "H")]
    pub h: Vec<String>,
    #[serde(rename = "S", default)]
    pub s: Vec<String>,
}

impl AdmissiblePair {
    pub fn new(g: &Graph, h: HssSet, s: VertexSet) -> Result<AdmissiblePair> {
        let breaking = breaking_vertices(g, &h);
        for &v in &s {
            if !breaking.contains(&v) {
                return Err(Error::NotBreaking(g.name(v).to_owned()));
            }
        }
        Ok(AdmissiblePair { h, s })
    }

    pub fn from_doc(g: &Graph, doc: &PairDoc) -> Result<AdmissiblePair> {
        let h = HssSet::new(g, g.resolve_set(&doc.h)?)?;
        let s = g.resolve_set(&doc.s)?;
        AdmissiblePair::new(g, h, s)
    }

    pub fn from_json(g: &Graph, text: &str) -> Result<AdmissiblePair> {
        let doc: PairDoc =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        AdmissiblePair::from_doc(g, &doc)
    }

    pub fn h(&self) -> &VertexSet {
        self.h.verts()
    }

    pub fn hss(&self) -> &HssSet {
        &self.h
    }

    pub fn s(&self) -> &VertexSet {
        &self.s
    }

    /// The pair (E^0, {}) names the improper ideal.
    pub fn is_improper(&self, g: &Graph) -> bool {
        self.h.len() == g.vertex_count()
    }

    pub fn sort_key(&self) -> ((usize, Vec<VertexId>), (usize, Vec<VertexId>)) {
        (
            self.h.sort_key(),
            (self.s.len(), self.s.iter().copied().collect()),
        )
    }

    pub fn to_json_value(&self, g: &Graph) -> serde_json::Value {
        serde_json::json!({
            "H": g.format_set(self.h.verts()),
            "S": g.format_set(&self.s),
        })
    }
}

/// Containment order on the named graded ideals:
/// H1 within H2, and S1 within H2 union S2.
pub fn pair_leq(a: &AdmissiblePair, b: &AdmissiblePair) -> bool {
    a.h().is_subset(b.h()) && a.s().iter().all(|v| b.h().contains(v) || b.s().contains(v))
}

/// All admissible pairs, sorted by (H key, S key); at most `cap` of them.
pub fn enumerate_admissible_pairs(g: &Graph, cap: usize) -> Result<Vec<AdmissiblePair>> {
    let mut out = Vec::new();
    for h in enumerate_hss(g, cap)? {
        let breaking: Vec<VertexId> = breaking_vertices(g, &h).into_iter().collect();
        for mask in 0u64..(1 << breaking.len()) {
            let s: VertexSet = breaking
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            out.push(AdmissiblePair { h: h.clone(), s });
            if out.len() > cap {
                return Err(Error::CapExceeded {
                    what: "admissible pair",
                    cap,
                });
            }
        }
    }
    out.sort_by_key(AdmissiblePair::sort_key);
    Ok(out)
}

/// Quotient graph of an admissible pair. `Empty` marks the quotient by the
/// improper ideal, which would otherwise be a graph with no vertices.
#[derive(Clone, Debug)]
pub enum Quotient {
    Empty,
    Graph(QuotientGraph),
}

impl Quotient {
    pub fn graph(&self) -> Option<&QuotientGraph> {
        match self {
            Quotient::Empty => None,
            Quotient::Graph(q) => Some(q),
        }
    }
}

/// A graph on (E^0 minus H) plus a primed sink v' for every breaking vertex
/// of H left out of S; an edge into such a v gets a primed copy into v'.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    graph: Graph,
    primed: VertexSet,
    ambient: Vec<VertexId>,
}

impl QuotientGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn primed(&self) -> &VertexSet {
        &self.primed
    }

    pub fn is_primed(&self, v: VertexId) -> bool {
        self.primed.contains(&v)
    }

    /// An edge of the quotient is a primed copy exactly when its target is a
    /// primed vertex.
    pub fn is_primed_edge(&self, _src: VertexId, dst: VertexId) -> bool {
        self.primed.contains(&dst)
    }

    /// The ambient vertex a quotient vertex came from (primed copies map to
    /// their base vertex).
    pub fn ambient_vertex(&self, v: VertexId) -> VertexId {
        self.ambient[v]
    }

    pub fn cycle_to_ambient(&self, c: &Cycle) -> Cycle {
        Cycle::new(c.verts().iter().map(|&v| self.ambient[v]).collect())
    }

    /// Cycles of the quotient with no exit, in ambient vertex ids. Primed
    /// vertices are sinks, so these only touch unprimed vertices.
    pub fn exit_free_cycles_ambient(&self) -> Vec<Cycle> {
        self.graph
            .simple_cycles()
            .into_iter()
            .filter(|c| !c.has_exit)
            .map(|c| self.cycle_to_ambient(&c.cycle))
            .collect()
    }
}

pub fn quotient(g: &Graph, pair: &AdmissiblePair) -> Quotient {
    if pair.is_improper(g) {
        return Quotient::Empty;
    }
    let kept: Vec<VertexId> = g.vertices().filter(|v| !pair.h.contains(*v)).collect();
    let bh = breaking_vertices(g, &pair.h);
    let unresolved: Vec<VertexId> = bh.difference(pair.s()).copied().collect();

    let mut names: Vec<String> = kept.iter().map(|&v| g.name(v).to_owned()).collect();
    let taken: BTreeSet<String> = names.iter().cloned().collect();
    let mut primed_name: BTreeMap<VertexId, String> = BTreeMap::new();
    for &v in &unresolved {
        let mut nm = format!("{}'", g.name(v));
        while taken.contains(&nm) || primed_name.values().any(|n| n == &nm) {
            nm.push('\'');
        }
        primed_name.insert(v, nm.clone());
        names.push(nm);
    }

    let mut edges: Vec<(String, String, Mult)> = Vec::new();
    for ((u, t), m) in g.edge_pairs() {
        if pair.h.contains(u) || pair.h.contains(t) {
            continue;
        }
        edges.push((g.name(u).to_owned(), g.name(t).to_owned(), m));
        if let Some(pn) = primed_name.get(&t) {
            edges.push((g.name(u).to_owned(), pn.clone(), m));
        }
    }

    let graph = Graph::new(names, edges).expect("quotient construction is valid");
    let mut ambient = vec![0usize; graph.vertex_count()];
    let mut primed = VertexSet::new();
    for &v in &kept {
        let q = graph.vertex(g.name(v)).unwrap();
        ambient[q] = v;
    }
    for (&v, nm) in &primed_name {
        let q = graph.vertex(nm).unwrap();
        ambient[q] = v;
        primed.insert(q);
    }
    Quotient::Graph(QuotientGraph {
        graph,
        primed,
        ambient,
    })
}

/// The finite lattice of admissible pairs of one graph, with order, join, and
/// meet answered from a precomputed matrix.
#[derive(Clone, Debug)]
pub struct PairLattice {
    pairs: Vec<AdmissiblePair>,
    leq: Vec<Vec<bool>>,
}

impl PairLattice {
    pub fn new(g: &Graph, cap: usize) -> Result<PairLattice> {
        let pairs = enumerate_admissible_pairs(g, cap)?;
        let n = pairs.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                leq[i][j] = pair_leq(&pairs[i], &pairs[j]);
            }
        }
        Ok(PairLattice { pairs, leq })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[AdmissiblePair] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> &AdmissiblePair {
        &self.pairs[i]
    }

    pub fn index_of(&self, p: &AdmissiblePair) -> Option<usize> {
        self.pairs.iter().position(|q| q == p)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Least pair above both. Exists because the named ideals are closed
    /// under sums.
    pub fn join(&self, i: usize, j: usize) -> usize {
        let uppers: Vec<usize> = (0..self.pairs.len())
            .filter(|&k| self.leq[i][k] && self.leq[j][k])
            .collect();
        self.least_of(&uppers)
            .expect("admissible pairs form a complete lattice")
    }

    /// Greatest pair below both. Exists because the named ideals are closed
    /// under intersections.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        let lowers: Vec<usize> = (0..self.pairs.len())
            .filter(|&k| self.leq[k][i] && self.leq[k][j])
            .collect();
        self.greatest_of(&lowers)
            .expect("admissible pairs form a complete lattice")
    }

    /// Least pair above `i` whose H-component contains `need`. Used to absorb
    /// cycle vertices once a polynomial part degenerates to a unit.
    pub fn least_above_with_h(&self, i: usize, need: &VertexSet) -> usize {
        let uppers: Vec<usize> = (0..self.pairs.len())
            .filter(|&k| self.leq[i][k] && need.is_subset(self.pairs[k].h()))
            .collect();
        self.least_of(&uppers)
            .expect("the improper pair is above everything")
    }

    fn least_of(&self, set: &[usize]) -> Option<usize> {
        set.iter()
            .copied()
            .find(|&c| set.iter().all(|&d| self.leq[c][d]))
    }

    fn greatest_of(&self, set: &[usize]) -> Option<usize> {
        set.iter()
            .copied()
            .find(|&c| set.iter().all(|&d| self.leq[d][c]))
    }
}
