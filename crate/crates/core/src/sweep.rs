//! Exhaustive corpora for equivalence sweeps: all small graphs over a fixed
//! multiplicity menu (deduplicated up to vertex relabeling), all small posets
//! up to isomorphism, and the per-graph equivalence checks the sweeps run.

use crate::error::Result;
use crate::graph::{Graph, Mult};
use crate::hss::{quotient, PairLattice, Quotient};
use crate::ideal::IdealRep;
use crate::poset::FinPoset;
use crate::spectrum::{compute_spec_with_lattice, regularity_report, SpecPoset};
use std::collections::BTreeSet;

pub const VERTEX_NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// Multiplicity menu encoded for canonical forms; `None` is omega.
fn mult_code(m: Option<u64>) -> Mult {
    match m {
        Some(n) => Mult::Finite(n),
        None => Mult::Omega,
    }
}

/// Parse a menu string like "0,1,2,inf".
pub fn parse_mult_menu(s: &str) -> Result<Vec<Option<u64>>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item == "inf" {
            out.push(None);
        } else {
            let n: u64 = item.parse().map_err(|_| {
                crate::error::Error::Document(format!("bad multiplicity menu entry {item:?}"))
            })?;
            out.push(Some(n));
        }
    }
    out.sort_by_key(|m| (m.is_none(), m.unwrap_or(0)));
    out.dedup();
    Ok(out)
}

/// All graphs with 1..=max_vertices vertices and pairwise multiplicities
/// drawn from the menu, one representative per relabeling class, in a
/// deterministic order.
pub fn enumerate_graphs(max_vertices: usize, menu: &[Option<u64>]) -> Vec<Graph> {
    assert!(max_vertices <= VERTEX_NAMES.len());
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let slots = n * n;
        let k = menu.len() as u64;
        let total = k.pow(slots as u32);
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        for idx in 0..total {
            let mut digits = Vec::with_capacity(slots);
            let mut rest = idx;
            for _ in 0..slots {
                digits.push((rest % k) as u8);
                rest /= k;
            }
            if !seen.insert(canonical_form(&digits, n)) {
                continue;
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    let m = mult_code(menu[digits[u * n + v] as usize]);
                    if m.is_positive() {
                        edges.push((VERTEX_NAMES[u].to_owned(), VERTEX_NAMES[v].to_owned(), m));
                    }
                }
            }
            let names = VERTEX_NAMES[..n].iter().map(|s| s.to_string()).collect();
            out.push(Graph::new(names, edges).expect("enumerated graphs are valid"));
        }
    }
    out
}

fn canonical_form(digits: &[u8], n: usize) -> Vec<u8> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u8>> = None;
    permute(&mut perm, 0, &mut |p| {
        let img: Vec<u8> = (0..n * n)
            .map(|slot| digits[p[slot / n] * n + p[slot % n]])
            .collect();
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    });
    best.unwrap()
}

fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// All posets on exactly `n` labeled elements, one per isomorphism class.
pub fn posets_up_to_iso(n: usize) -> Vec<FinPoset> {
    assert!((1..=6).contains(&n));
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << slots.len()) {
        let mut lt = vec![vec![false; n]; n];
        for (bit, &(i, j)) in slots.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                lt[i][j] = true;
            }
        }
        if !is_strict_order(&lt, n) {
            continue;
        }
        if seen.insert(canonical_relation(&lt, n)) {
            let elements: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let pairs: Vec<(String, String)> = slots
                .iter()
                .filter(|&&(i, j)| lt[i][j])
                .map(|&(i, j)| (format!("p{i}"), format!("p{j}")))
                .collect();
            out.push(FinPoset::new(elements, &pairs).expect("validated strict order"));
        }
    }
    out
}

fn is_strict_order(lt: &[Vec<bool>], n: usize) -> bool {
    for i in 0..n {
        if lt[i][i] {
            return false;
        }
        for j in 0..n {
            if lt[i][j] && lt[j][i] {
                return false;
            }
            for k in 0..n {
                if lt[i][j] && lt[j][k] && !lt[i][k] {
                    return false;
                }
            }
        }
    }
    true
}

fn canonical_relation(lt: &[Vec<bool>], n: usize) -> Vec<bool> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    permute(&mut perm, 0, &mut |p| {
        let img: Vec<bool> = (0..n * n)
            .map(|slot| lt[p[slot / n]][p[slot % n]])
            .collect();
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    });
    best.unwrap()
}

/// The two routes of the all-ideals-graded equivalence for one graph:
/// Condition (K) read off the graph, versus the absence of exit-free cycles
/// in every admissible pair's quotient.
pub fn condition_k_two_routes(g: &Graph, cap: usize) -> Result<(bool, bool)> {
    let graph_route = g.report().condition_k;
    let lat = PairLattice::new(g, cap)?;
    let quotient_route = lat.pairs().iter().all(|pair| match quotient(g, pair) {
        Quotient::Empty => true,
        Quotient::Graph(q) => q.exit_free_cycles_ambient().is_empty(),
    });
    Ok((graph_route, quotient_route))
}

/// Regularity equivalence for one graph: acyclicity of the graph versus
/// acyclicity of every graded-prime quotient witness.
pub fn regularity_two_routes(g: &Graph, cap: usize) -> Result<(bool, bool)> {
    let report = regularity_report(g, cap)?;
    let witnesses_route = report.witnesses.iter().all(|(_, acyclic)| *acyclic);
    Ok((report.regular, witnesses_route))
}

/// Check that the Kaplansky construction succeeds and really produces a
/// cover within the interval, for every strict pair of spectrum nodes.
pub fn kaplansky_all_pairs(spec: &SpecPoset) -> bool {
    let n = spec.len();
    for a in 0..n {
        for b in 0..n {
            if !spec.lt(a, b) {
                continue;
            }
            let Ok((p, q)) = spec.kaplansky_pair(a, b) else {
                return false;
            };
            let valid = spec.leq(a, p)
                && spec.lt(p, q)
                && spec.leq(q, b)
                && !(0..n).any(|t| spec.lt(p, t) && spec.lt(t, q));
            if !valid {
                return false;
            }
        }
    }
    true
}

/// Counts reported by the CLI sweep command.
#[derive(Clone, Copy, Debug, Default)]
pub struct SweepReport {
    pub classes: usize,
    pub condition_k_mismatches: usize,
    pub regularity_mismatches: usize,
    pub kaplansky_failures: usize,
}

pub fn run_sweep(max_vertices: usize, menu: &[Option<u64>], cap: usize) -> Result<SweepReport> {
    let graphs = enumerate_graphs(max_vertices, menu);
    let mut report = SweepReport {
        classes: graphs.len(),
        ..SweepReport::default()
    };
    for g in &graphs {
        let (k1, k2) = condition_k_two_routes(g, cap)?;
        if k1 != k2 {
            report.condition_k_mismatches += 1;
        }
        let (r1, r2) = regularity_two_routes(g, cap)?;
        if r1 != r2 {
            report.regularity_mismatches += 1;
        }
        let lat = PairLattice::new(g, cap)?;
        let spec = compute_spec_with_lattice(g, &lat)?;
        if !kaplansky_all_pairs(&spec) {
            report.kaplansky_failures += 1;
        }
    }
    Ok(report)
}

/// Primes among enumerated ideals, for corpus-level checks.
pub fn enumerated_primes(g: &Graph, ideals: &[IdealRep]) -> Result<Vec<IdealRep>> {
    let mut out = Vec::new();
    for i in ideals {
        if i.is_improper(g) {
            continue;
        }
        if crate::ideal::classify_prime(g, i)?.is_prime() {
            out.push(i.clone());
        }
    }
    Ok(out)
}
