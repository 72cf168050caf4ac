//! Finite directed multigraphs with possibly-infinite edge multiplicities.
//!
//! Parallel edges are stored as a multiplicity per ordered vertex pair; the
//! value `Mult::Omega` stands for a countably infinite family of parallel
//! edges and is what makes a vertex an infinite emitter. Everything here is
//! immutable after construction and safe to share across threads.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type VertexSet = BTreeSet<VertexId>;

/// Number of parallel edges between an ordered vertex pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Mult {
    Finite(u64),
    Omega,
}

impl Mult {
    pub const ZERO: Mult = Mult::Finite(0);
    pub const ONE: Mult = Mult::Finite(1);

    pub fn is_zero(self) -> bool {
        self == Mult::ZERO
    }

    pub fn is_positive(self) -> bool {
        !self.is_zero()
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Mult::Omega)
    }

    pub fn saturating_add(self, other: Mult) -> Mult {
        match (self, other) {
            (Mult::Finite(a), Mult::Finite(b)) => Mult::Finite(a.saturating_add(b)),
            _ => Mult::Omega,
        }
    }

    /// Clamp to {0, 1, 2}; enough to answer "none / unique / several".
    fn clamp2(self) -> u8 {
        match self {
            Mult::Finite(n) => n.min(2) as u8,
            Mult::Omega => 2,
        }
    }
}

impl fmt::Display for Mult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mult::Finite(n) => write!(f, "{n}"),
            Mult::Omega => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VertexClass {
    Sink,
    Regular,
    InfiniteEmitter,
}

/// A directed cycle through pairwise-distinct vertices, stored in canonical
/// rotation: the least vertex id comes first, so two shifts of the same cycle
/// compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cycle {
    verts: Vec<VertexId>,
}

impl Cycle {
    pub fn new(verts: Vec<VertexId>) -> Cycle {
        assert!(!verts.is_empty(), "cycle must have at least one vertex");
        let min_pos = verts
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
            .unwrap();
        let mut rotated = verts.clone();
        rotated.rotate_left(min_pos);
        Cycle { verts: rotated }
    }

    pub fn verts(&self) -> &[VertexId] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn base(&self) -> VertexId {
        self.verts[0]
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.verts.iter().copied().collect()
    }

    /// Consecutive pairs including the closing edge.
    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.verts.len();
        (0..n).map(move |i| (self.verts[i], self.verts[(i + 1) % n]))
    }

    pub fn sort_key(&self) -> (usize, Vec<VertexId>) {
        (self.verts.len(), self.verts.clone())
    }
}

/// A cycle together with the two per-cycle flags used throughout.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycleInfo {
    pub cycle: Cycle,
    /// Some cycle vertex emits an edge other than its cycle edge. A parallel
    /// edge on a cycle pair counts: the exit only has to differ from the
    /// cycle edge, not leave the cycle's vertex set.
    pub has_exit: bool,
    /// No cycle vertex lies on a different cycle (counting a parallel copy of
    /// a cycle edge as a different cycle).
    pub is_wk: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GraphReport {
    pub acyclic: bool,
    pub condition_l: bool,
    pub condition_k: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    names: Vec<String>,
    mult: BTreeMap<(VertexId, VertexId), Mult>,
}

#[derive(Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<(String, String, MultDoc)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MultDoc {
    Int(i64),
    Sym(String),
}

impl Graph {
    /// Build a graph from named parts. Vertex order is normalized to sorted.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, Mult)>) -> Result<Graph> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut names = vertices;
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let index: BTreeMap<&str, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut mult = BTreeMap::new();
        for (src, dst, m) in edges {
            let &u = index
                .get(src.as_str())
                .ok_or_else(|| Error::UndeclaredEndpoint(src.clone()))?;
            let &v = index
                .get(dst.as_str())
                .ok_or_else(|| Error::UndeclaredEndpoint(dst.clone()))?;
            if m.is_zero() {
                return Err(Error::BadMultiplicity { src, dst });
            }
            if mult.insert((u, v), m).is_some() {
                return Err(Error::DuplicateEdge { src, dst });
            }
        }
        Ok(Graph { names, mult })
    }

    /// Parse the JSON graph document `{"vertices": [...], "edges": [[src, dst, mult], ...]}`
    /// where `mult` is a positive integer or the string `"inf"`.
    pub fn from_json(text: &str) -> Result<Graph> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (src, dst, m) in doc.edges {
            let m = match m {
                MultDoc::Int(n) if n > 0 => Mult::Finite(n as u64),
                MultDoc::Sym(ref s) if s == "inf" => Mult::Omega,
                _ => return Err(Error::BadMultiplicity { src, dst }),
            };
            edges.push((src, dst, m));
        }
        Graph::new(doc.vertices, edges)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .mult
            .iter()
            .map(|(&(u, v), &m)| {
                let m = match m {
                    Mult::Finite(n) => serde_json::json!(n),
                    Mult::Omega => serde_json::json!("inf"),
                };
                serde_json::json!([self.names[u], self.names[v], m])
            })
            .collect();
        serde_json::json!({ "vertices": self.names, "edges": edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.names.len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        (0..self.names.len()).collect()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .map_err(|_| Error::UnknownVertex(name.to_owned()))
    }

    pub fn resolve_set(&self, names: &[String]) -> Result<VertexSet> {
        names.iter().map(|n| self.vertex(n)).collect()
    }

    pub fn format_set(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|&v| self.names[v].clone()).collect()
    }

    pub fn mult(&self, u: VertexId, v: VertexId) -> Mult {
        self.mult.get(&(u, v)).copied().unwrap_or(Mult::ZERO)
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = ((VertexId, VertexId), Mult)> + '_ {
        self.mult.iter().map(|(&k, &m)| (k, m))
    }

    pub fn out(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Mult)> + '_ {
        self.mult
            .range((v, 0)..=(v, usize::MAX))
            .map(|(&(_, t), &m)| (t, m))
    }

    pub fn out_total(&self, v: VertexId) -> Mult {
        self.out(v)
            .fold(Mult::ZERO, |acc, (_, m)| acc.saturating_add(m))
    }

    pub fn class(&self, v: VertexId) -> VertexClass {
        let mut any = false;
        for (_, m) in self.out(v) {
            if m.is_infinite() {
                return VertexClass::InfiniteEmitter;
            }
            any = true;
        }
        if any {
            VertexClass::Regular
        } else {
            VertexClass::Sink
        }
    }

    /// The relation u >= v: a directed path of length >= 0 from u to v.
    pub fn reaches(&self, u: VertexId, v: VertexId) -> bool {
        self.tree(u).contains(&v)
    }

    /// T(u): every vertex reachable from u, including u itself.
    pub fn tree(&self, u: VertexId) -> VertexSet {
        let mut seen = VertexSet::new();
        let mut queue = VecDeque::from([u]);
        seen.insert(u);
        while let Some(x) = queue.pop_front() {
            for (t, _) in self.out(x) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// A nonempty D is downward directed when every two members have a common
    /// lower bound inside D. The empty set is not downward directed.
    pub fn is_downward_directed(&self, d: &VertexSet) -> bool {
        if d.is_empty() {
            return false;
        }
        let trees: BTreeMap<VertexId, VertexSet> = d.iter().map(|&v| (v, self.tree(v))).collect();
        for &u in d {
            for &v in d {
                let found = d
                    .iter()
                    .any(|w| trees[&u].contains(w) && trees[&v].contains(w));
                if !found {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_acyclic(&self) -> bool {
        // 0 unvisited, 1 on stack, 2 done.
        let n = self.vertex_count();
        let mut state = vec![0u8; n];
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, self.out(start).collect::<Vec<_>>(), 0usize)];
            state[start] = 1;
            while let Some((v, outs, i)) = stack.last_mut() {
                if let Some(&(t, _)) = outs.get(*i) {
                    *i += 1;
                    match state[t] {
                        1 => return false,
                        0 => {
                            state[t] = 1;
                            let outs = self.out(t).collect::<Vec<_>>();
                            stack.push((t, outs, 0));
                        }
                        _ => {}
                    }
                } else {
                    state[*v] = 2;
                    stack.pop();
                }
            }
        }
        true
    }

    /// All cycles up to shift, sorted by (length, canonical vertex sequence),
    /// with their exit and WK flags.
    pub fn simple_cycles(&self) -> Vec<CycleInfo> {
        let mut cycles: Vec<Cycle> = Vec::new();
        let n = self.vertex_count();
        // Each cycle is found once, rooted at its least vertex.
        for s in 0..n {
            let mut path = vec![s];
            let mut on_path = vec![false; n];
            on_path[s] = true;
            self.cycle_dfs(s, s, &mut path, &mut on_path, &mut cycles);
        }
        cycles.sort_by_key(Cycle::sort_key);
        cycles
            .iter()
            .map(|c| {
                let has_exit = c.verts().iter().any(|&v| self.out_total(v) > Mult::ONE);
                let parallel = c.pairs().any(|(u, v)| self.mult(u, v) > Mult::ONE);
                let shares = cycles
                    .iter()
                    .any(|d| d != c && d.verts().iter().any(|v| c.verts().contains(v)));
                CycleInfo {
                    cycle: c.clone(),
                    has_exit,
                    is_wk: !parallel && !shares,
                }
            })
            .collect()
    }

    fn cycle_dfs(
        &self,
        root: VertexId,
        v: VertexId,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        out: &mut Vec<Cycle>,
    ) {
        for (t, _) in self.out(v) {
            if t == root {
                out.push(Cycle::new(path.clone()));
            } else if t > root && !on_path[t] {
                on_path[t] = true;
                path.push(t);
                self.cycle_dfs(root, t, path, on_path, out);
                path.pop();
                on_path[t] = false;
            }
        }
    }

    /// Number of closed paths based at `v` that avoid `v` internally, clamped
    /// to {0, 1, 2}. Intermediate vertices may repeat, so the true count can
    /// be infinite; 2 stands for "two or more".
    pub fn return_path_count(&self, v: VertexId) -> u8 {
        let n = self.vertex_count();
        // Forward sweep: vertices reachable from v without revisiting v.
        let mut fwd = vec![false; n];
        let mut queue: VecDeque<VertexId> = VecDeque::new();
        for (t, _) in self.out(v) {
            if t != v && !fwd[t] {
                fwd[t] = true;
                queue.push_back(t);
            }
        }
        while let Some(x) = queue.pop_front() {
            for (t, _) in self.out(x) {
                if t != v && !fwd[t] {
                    fwd[t] = true;
                    queue.push_back(t);
                }
            }
        }
        // Backward sweep: vertices that reach v without passing through v.
        let mut bwd = vec![false; n];
        let mut rev: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for &(u, t) in self.mult.keys() {
            rev[t].push(u);
        }
        for &u in &rev[v] {
            if u != v && !bwd[u] {
                bwd[u] = true;
                queue.push_back(u);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &u in &rev[x] {
                if u != v && !bwd[u] {
                    bwd[u] = true;
                    queue.push_back(u);
                }
            }
        }
        let relevant: Vec<VertexId> = (0..n).filter(|&u| u != v && fwd[u] && bwd[u]).collect();
        // Any cycle among relevant vertices can be pumped: infinitely many paths.
        if self.has_cycle_within(&relevant) {
            return 2;
        }
        // DAG count, saturating at 2: paths u -> v with internals relevant.
        let order = self.topo_order(&relevant);
        let mut count = vec![0u8; n];
        for &u in order.iter().rev() {
            let mut c = self.mult(u, v).clamp2();
            for &w in &relevant {
                if count[w] > 0 {
                    c = c.saturating_add(self.mult(u, w).clamp2() * count[w]);
                }
            }
            count[u] = c.min(2);
        }
        let mut total = self.mult(v, v).clamp2();
        for &t in &relevant {
            total = total.saturating_add(self.mult(v, t).clamp2() * count[t]);
        }
        total.min(2)
    }

    fn has_cycle_within(&self, verts: &[VertexId]) -> bool {
        let inside: VertexSet = verts.iter().copied().collect();
        let mut state: BTreeMap<VertexId, u8> = BTreeMap::new();
        fn dfs(
            g: &Graph,
            v: VertexId,
            inside: &VertexSet,
            state: &mut BTreeMap<VertexId, u8>,
        ) -> bool {
            state.insert(v, 1);
            for (t, _) in g.out(v) {
                if !inside.contains(&t) {
                    continue;
                }
                let mark = state.get(&t).copied();
                if mark == Some(1) {
                    return true;
                }
                if mark.is_none() && dfs(g, t, inside, state) {
                    return true;
                }
            }
            state.insert(v, 2);
            false
        }
        for &v in verts {
            if !state.contains_key(&v) && dfs(self, v, &inside, &mut state) {
                return true;
            }
        }
        false
    }

    fn topo_order(&self, verts: &[VertexId]) -> Vec<VertexId> {
        let inside: VertexSet = verts.iter().copied().collect();
        let mut order = Vec::with_capacity(verts.len());
        let mut done = VertexSet::new();
        fn visit(
            g: &Graph,
            v: VertexId,
            inside: &VertexSet,
            done: &mut VertexSet,
            order: &mut Vec<VertexId>,
        ) {
            if !done.insert(v) {
                return;
            }
            for (t, _) in g.out(v) {
                if inside.contains(&t) {
                    visit(g, t, inside, done, order);
                }
            }
            order.push(v);
        }
        for &v in verts {
            visit(self, v, &inside, &mut done, &mut order);
        }
        order.reverse();
        order
    }

    /// Acyclicity plus Conditions (L) and (K). Condition (K) is evaluated at
    /// the level of simple closed paths, so parallel edges count as distinct
    /// return paths.
    pub fn report(&self) -> GraphReport {
        let cycles = self.simple_cycles();
        let acyclic = cycles.is_empty();
        let condition_l = cycles.iter().all(|c| c.has_exit);
        let condition_k = self.vertices().all(|v| self.return_path_count(v) != 1);
        GraphReport {
            acyclic,
            condition_l,
            condition_k,
        }
    }
}
