//! The prime spectrum as a finite poset.
//!
//! Graded primes appear as ordinary nodes. The non-graded primes over a fixed
//! exit-free WK cycle form one infinite antichain, one prime per irreducible
//! polynomial; the poset stores a single symbolic Family node for the whole
//! antichain and can instantiate it at every irreducible of bounded degree
//! over a prime field.

use crate::error::{Error, Result};
use crate::graph::{Cycle, Graph, VertexId, VertexSet};
use crate::hss::{
    breaking_vertices, closure, pair_leq, quotient, AdmissiblePair, PairLattice, Quotient,
};
use crate::ideal::IdealRep;
use crate::poly::{irreducibles_up_to, FieldSpec, Poly};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SpecNode {
    Graded {
        pair: AdmissiblePair,
        case: u8,
        u: Option<VertexId>,
    },
    /// All primes I(H, B_H) + <f(c)> with f irreducible, as one node.
    Family {
        pair: AdmissiblePair,
        cycle: Cycle,
        u: VertexId,
    },
}

impl SpecNode {
    pub fn pair(&self) -> &AdmissiblePair {
        match self {
            SpecNode::Graded { pair, .. } | SpecNode::Family { pair, .. } => pair,
        }
    }

    pub fn case(&self) -> u8 {
        match self {
            SpecNode::Graded { case, .. } => *case,
            SpecNode::Family { .. } => 3,
        }
    }

    pub fn is_family(&self) -> bool {
        matches!(self, SpecNode::Family { .. })
    }

    fn sort_key(
        &self,
    ) -> (
        usize,
        Vec<VertexId>,
        usize,
        Vec<VertexId>,
        usize,
        Vec<VertexId>,
    ) {
        let pair = self.pair();
        let cyc = match self {
            SpecNode::Graded { .. } => Vec::new(),
            SpecNode::Family { cycle, .. } => cycle.verts().to_vec(),
        };
        (
            pair.h().len(),
            pair.h().iter().copied().collect(),
            pair.s().len(),
            pair.s().iter().copied().collect(),
            cyc.len(),
            cyc,
        )
    }

    pub fn to_json_value(&self, g: &Graph) -> serde_json::Value {
        match self {
            SpecNode::Graded { pair, case, u } => serde_json::json!({
                "kind": "graded",
                "H": g.format_set(pair.h()),
                "S": g.format_set(pair.s()),
                "case": case,
                "u": u.map(|u| g.name(u).to_owned()),
            }),
            SpecNode::Family { pair, cycle, u } => serde_json::json!({
                "kind": "family",
                "H": g.format_set(pair.h()),
                "S": g.format_set(pair.s()),
                "case": 3,
                "cycle": cycle.verts().iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                "u": g.name(*u),
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpecPoset {
    nodes: Vec<SpecNode>,
    leq: Vec<Vec<bool>>,
}

/// Classify every admissible pair and every WK cycle into spectrum nodes.
pub fn compute_spec(g: &Graph, cap: usize) -> Result<SpecPoset> {
    let lat = PairLattice::new(g, cap)?;
    compute_spec_with_lattice(g, &lat)
}

pub fn compute_spec_with_lattice(g: &Graph, lat: &PairLattice) -> Result<SpecPoset> {
    let mut nodes: Vec<SpecNode> = Vec::new();
    for pair in lat.pairs() {
        if pair.is_improper(g) {
            continue;
        }
        let bh = breaking_vertices(g, pair.hss());
        let missing: VertexSet = bh.difference(pair.s()).copied().collect();
        let complement: VertexSet = g.vertices().filter(|v| !pair.h().contains(v)).collect();
        if missing.is_empty() {
            if g.is_downward_directed(&complement) {
                nodes.push(SpecNode::Graded {
                    pair: pair.clone(),
                    case: 1,
                    u: None,
                });
            }
        } else if missing.len() == 1 {
            let u = *missing.iter().next().unwrap();
            if g.vertices()
                .all(|v| complement.contains(&v) == g.reaches(v, u))
            {
                nodes.push(SpecNode::Graded {
                    pair: pair.clone(),
                    case: 2,
                    u: Some(u),
                });
            }
        }
    }
    // Families: one per WK cycle whose base vertex has the whole complement
    // of some hereditary saturated set as its principal upset. That set is
    // forced: H = everything that does not reach the cycle.
    for info in g.simple_cycles() {
        if !info.is_wk {
            continue;
        }
        let u = info.cycle.base();
        let h_set: VertexSet = g.vertices().filter(|&v| !g.reaches(v, u)).collect();
        let h = closure(g, &h_set);
        debug_assert_eq!(
            h.verts(),
            &h_set,
            "complement of a principal upset is closed"
        );
        let s = breaking_vertices(g, &h);
        let pair = AdmissiblePair::new(g, h, s).expect("B_H is admissible");
        // The family's instances must be canonical summands: the cycle has
        // to be exit-free in the pair's quotient.
        let exit_free = match quotient(g, &pair) {
            Quotient::Empty => Vec::new(),
            Quotient::Graph(q) => q.exit_free_cycles_ambient(),
        };
        if exit_free.contains(&info.cycle) {
            nodes.push(SpecNode::Family {
                pair,
                cycle: info.cycle.clone(),
                u,
            });
        }
    }
    nodes.sort_by_key(SpecNode::sort_key);
    nodes.dedup();

    let n = nodes.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq[i][j] = node_leq(&nodes[i], &nodes[j]);
        }
    }
    let poset = SpecPoset { nodes, leq };
    debug_assert!(poset.is_partial_order());
    Ok(poset)
}

/// Order with set-inclusion semantics for families: a family sits below a
/// node exactly when every instance does, which means the node's H absorbs
/// the cycle; a node sits below a family exactly when it sits below every
/// instance's graded part.
fn node_leq(a: &SpecNode, b: &SpecNode) -> bool {
    if a == b {
        return true;
    }
    match (a, b) {
        (SpecNode::Family { pair, cycle, .. }, _) => {
            pair_leq(pair, b.pair()) && cycle.verts().iter().all(|v| b.pair().h().contains(v))
        }
        (SpecNode::Graded { pair, .. }, _) => pair_leq(pair, b.pair()),
    }
}

impl SpecPoset {
    pub fn nodes(&self) -> &[SpecNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    fn is_partial_order(&self) -> bool {
        let n = self.nodes.len();
        (0..n).all(|i| self.leq[i][i])
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    (!(self.leq[i][j] && self.leq[j][i]) || i == j)
                        && (0..n).all(|k| !(self.leq[i][j] && self.leq[j][k]) || self.leq[i][k])
                })
            })
    }

    /// Hasse cover pairs (lower, upper).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.nodes.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.lt(i, j) {
                    continue;
                }
                let between = (0..n).any(|k| self.lt(i, k) && self.lt(k, j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// A cover pair (P', Q') with a <= P' < Q' <= b: Q' is a minimal node
    /// strictly above a within the interval, P' a maximal node below Q'
    /// at or above a.
    pub fn kaplansky_pair(&self, a: usize, b: usize) -> Result<(usize, usize)> {
        if !self.lt(a, b) {
            return Err(Error::NotStrictlyBelow);
        }
        let n = self.nodes.len();
        let above: Vec<usize> = (0..n)
            .filter(|&z| self.lt(a, z) && self.leq[z][b])
            .collect();
        let q = above
            .iter()
            .copied()
            .find(|&z| above.iter().all(|&w| !self.lt(w, z)))
            .expect("a strictly below b leaves the interval nonempty");
        let below: Vec<usize> = (0..n)
            .filter(|&m| self.leq[a][m] && self.lt(m, q))
            .collect();
        let p = below
            .iter()
            .copied()
            .find(|&m| below.iter().all(|&w| !self.lt(m, w)))
            .expect("a itself qualifies");
        debug_assert!(self.covers().contains(&(p, q)));
        Ok((p, q))
    }

    /// Every chain of the finite poset has a maximum, and that maximum is a
    /// prime node, so no chain's union can fail to be prime. The scan still
    /// walks all maximal chains and reports the offenders it finds.
    pub fn union_prime_scan(&self) -> Vec<Vec<usize>> {
        let mut offenders = Vec::new();
        for chain in self.maximal_chains() {
            let &max = chain.last().expect("chains are nonempty");
            let union_is_node = chain.iter().all(|&c| self.leq[c][max]);
            if !union_is_node {
                offenders.push(chain);
            }
        }
        offenders
    }

    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let minimals: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| !self.lt(j, i))).collect();
        let mut chains = Vec::new();
        let mut stack: Vec<Vec<usize>> = minimals.into_iter().map(|i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            let &top = chain.last().unwrap();
            let nexts: Vec<usize> = (0..n)
                .filter(|&j| self.lt(top, j) && !(0..n).any(|k| self.lt(top, k) && self.lt(k, j)))
                .collect();
            if nexts.is_empty() {
                chains.push(chain);
            } else {
                for j in nexts {
                    let mut longer = chain.clone();
                    longer.push(j);
                    stack.push(longer);
                }
            }
        }
        chains.sort();
        chains
    }

    /// Distinct family nodes that the ordering rule makes incomparable both
    /// ways are reported explicitly rather than left implicit in the matrix.
    pub fn family_incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.nodes.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.nodes[i].is_family()
                    && self.nodes[j].is_family()
                    && !self.leq[i][j]
                    && !self.leq[j][i]
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Instantiate every family node at every irreducible polynomial with
    /// nonzero constant term up to the degree bound. Needs a prime field:
    /// over the rationals there are infinitely many irreducibles per degree.
    pub fn instantiate(
        &self,
        field: FieldSpec,
        max_degree: usize,
    ) -> Result<Vec<(usize, Vec<Poly>)>> {
        if field == FieldSpec::Rationals {
            return Err(Error::Unsupported(
                "family instantiation needs a prime field".into(),
            ));
        }
        let irreducibles: Vec<Poly> = irreducibles_up_to(field, max_degree)?
            .into_iter()
            .filter(|p| !field.is_zero(&p.constant_term()))
            .collect();
        let mut out = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.is_family() {
                out.push((i, irreducibles.clone()));
            }
        }
        Ok(out)
    }

    /// The ideal named by a graded node.
    pub fn node_ideal(&self, i: usize) -> Option<IdealRep> {
        match &self.nodes[i] {
            SpecNode::Graded { pair, .. } => Some(IdealRep::graded(pair.clone())),
            SpecNode::Family { .. } => None,
        }
    }

    /// The ideal named by one instance of a family node.
    pub fn instance_ideal(&self, i: usize, f: &Poly) -> Option<IdealRep> {
        match &self.nodes[i] {
            SpecNode::Family { pair, cycle, .. } => Some(IdealRep::from_canonical_parts(
                pair.clone(),
                vec![(cycle.clone(), f.monic())],
            )),
            SpecNode::Graded { .. } => None,
        }
    }

    pub fn to_json_value(&self, g: &Graph) -> serde_json::Value {
        serde_json::json!({
            "nodes": self.nodes.iter().map(|n| n.to_json_value(g)).collect::<Vec<_>>(),
            "leq": self.leq,
            "covers": self.covers(),
            "incomparable_family_pairs": self.family_incomparable_pairs(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub regular: bool,
    /// One witness per graded prime: its pair and whether the quotient graph
    /// at that pair is acyclic.
    pub witnesses: Vec<(AdmissiblePair, bool)>,
}

/// Von Neumann regularity: the algebra is regular exactly when the graph is
/// acyclic, and equivalently when every graded prime's quotient graph is
/// acyclic. The report carries both sides so the equivalence is checkable.
pub fn regularity_report(g: &Graph, cap: usize) -> Result<RegularityReport> {
    let spec = compute_spec(g, cap)?;
    let mut witnesses = Vec::new();
    for node in spec.nodes() {
        if let SpecNode::Graded { pair, .. } = node {
            let acyclic = match quotient(g, pair) {
                Quotient::Empty => true,
                Quotient::Graph(q) => q.graph().is_acyclic(),
            };
            witnesses.push((pair.clone(), acyclic));
        }
    }
    Ok(RegularityReport {
        regular: g.is_acyclic(),
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hss::DEFAULT_CAP;

    fn loop_graph() -> Graph {
        Graph::from_json(r#"{"vertices":["v"],"edges":[["v","v",1]]}"#).unwrap()
    }

    fn breaking_graph() -> Graph {
        Graph::from_json(r#"{"vertices":["w","h"],"edges":[["w","h","inf"],["w","w",1]]}"#).unwrap()
    }

    fn cases(s: &SpecPoset) -> Vec<u8> {
        s.nodes().iter().map(SpecNode::case).collect()
    }

    #[test]
    fn spec_loop() {
        let g = loop_graph();
        let s = compute_spec(&g, DEFAULT_CAP).unwrap();
        assert_eq!(cases(&s), vec![1, 3]);
        assert!(s.lt(0, 1));
        assert_eq!(s.covers(), vec![(0, 1)]);
    }

    // The 2-line's path algebra is the simple 2x2 matrix algebra: the zero
    // ideal is the whole spectrum.
    #[test]
    fn spec_line_is_a_single_point() {
        let g = Graph::from_json(r#"{"vertices":["u","v"],"edges":[["u","v",1]]}"#).unwrap();
        let s = compute_spec(&g, DEFAULT_CAP).unwrap();
        assert_eq!(cases(&s), vec![1]);
        assert!(s.nodes()[0].pair().h().is_empty());
        assert!(s.covers().is_empty());
    }

    #[test]
    fn spec_two_isolated_vertices_antichain() {
        let g = Graph::from_json(r#"{"vertices":["a","b"],"edges":[]}"#).unwrap();
        let s = compute_spec(&g, DEFAULT_CAP).unwrap();
        assert_eq!(cases(&s), vec![1, 1]);
        assert!(!s.lt(0, 1) && !s.lt(1, 0));
        assert!(s.covers().is_empty());
    }

    #[test]
    fn spec_breaking_chain() {
        let g = breaking_graph();
        let s = compute_spec(&g, DEFAULT_CAP).unwrap();
        assert_eq!(cases(&s), vec![1, 2, 1, 3]);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(s.leq(i, j), i <= j, "chain order at ({i},{j})");
            }
        }
        assert_eq!(s.covers().len(), 3);
        let shown: Vec<(Vec<String>, Vec<String>)> = s
            .nodes()
            .iter()
            .map(|n| (g.format_set(n.pair().h()), g.format_set(n.pair().s())))
            .collect();
        assert_eq!(
            shown,
            vec![
                (vec![], vec![]),
                (vec!["h".into()], vec![]),
                (vec!["h".into()], vec!["w".into()]),
                (vec!["h".into()], vec!["w".into()]),
            ]
        );
    }

    #[test]
    fn kaplansky_examples() {
        let g = breaking_graph();
        let s = compute_spec(&g, DEFAULT_CAP).unwrap();
        // ({0}, family) resolves to the first cover of the chain.
        assert_eq!(s.kaplansky_pair(0, 3).unwrap(), (0, 1));
        // A cover pair is its own answer.
        assert_eq!(s.kaplansky_pair(1, 2).unwrap(), (1, 2));
        assert!(matches!(
            s.kaplansky_pair(2, 1),
            Err(Error::NotStrictlyBelow)
        ));
    }

    #[test]
    fn union_prime_scan_empty() {
        for g in [
            loop_graph(),
            breaking_graph(),
            Graph::from_json(r#"{"vertices":["u","v"],"edges":[["u","v",1]]}"#).unwrap(),
        ] {
            let s = compute_spec(&g, DEFAULT_CAP).unwrap();
            assert!(s.union_prime_scan().is_empty());
        }
    }

    #[test]
    fn regularity_examples() {
        let r = regularity_report(&loop_graph(), DEFAULT_CAP).unwrap();
        assert!(!r.regular);
        assert!(r.witnesses.iter().any(|(_, acyclic)| !acyclic));
        assert_eq!(r.regular, r.witnesses.iter().all(|(_, a)| *a));

        let line = Graph::from_json(r#"{"vertices":["u","v"],"edges":[["u","v",1]]}"#).unwrap();
        let r = regularity_report(&line, DEFAULT_CAP).unwrap();
        assert!(r.regular);
        assert!(r.witnesses.iter().all(|(_, a)| *a));

        let r = regularity_report(&breaking_graph(), DEFAULT_CAP).unwrap();
        assert!(!r.regular);
        assert_eq!(r.regular, r.witnesses.iter().all(|(_, a)| *a));
    }

    #[test]
    fn instantiate_family_over_f2() {
        let g = loop_graph();
        let s = compute_spec(&g, DEFAULT_CAP).unwrap();
        let inst = s.instantiate(FieldSpec::Prime(2), 2).unwrap();
        assert_eq!(inst.len(), 1);
        let polys: Vec<String> = inst[0].1.iter().map(|p| p.to_string()).collect();
        assert_eq!(polys, vec!["x+1", "x^2+x+1"]);
        assert!(s.instantiate(FieldSpec::Rationals, 2).is_err());
    }

    #[test]
    fn two_loops_give_incomparable_families() {
        let g = Graph::from_json(r#"{"vertices":["a","b"],"edges":[["a","a",1],["b","b",1]]}"#)
            .unwrap();
        let s = compute_spec(&g, DEFAULT_CAP).unwrap();
        assert_eq!(s.family_incomparable_pairs().len(), 1);
    }
}
