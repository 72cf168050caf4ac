//! Canonical ideal representations and the decision procedures on them:
//! graded part, semiprimeness, the three-case primeness classification,
//! containment, sum, and a restricted intersection.
//!
//! An ideal is named by an admissible pair (its graded part) plus finitely
//! many (cycle, polynomial) summands, where each cycle has no exits in the
//! quotient graph of the pair and each polynomial is monic with a nonzero
//! constant term. Ideals are only ever manipulated through this generator
//! data; there is no element arithmetic anywhere.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{Cycle, Graph, VertexId, VertexSet};
use crate::hss::{
    breaking_vertices, pair_leq, quotient, AdmissiblePair, HssSet, PairLattice, Quotient,
};
use crate::poly::{FieldSpec, Poly};
use crate::spectrum;

/// Canonical form: pair (H, S) plus polynomial summands on pairwise disjoint
/// exit-free cycles of the pair's quotient, sorted by cycle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealRep {
    pair: AdmissiblePair,
    parts: Vec<(Cycle, Poly)>,
}

impl IdealRep {
    pub fn graded(pair: AdmissiblePair) -> IdealRep {
        IdealRep {
            pair,
            parts: Vec::new(),
        }
    }

    pub(crate) fn from_canonical_parts(
        pair: AdmissiblePair,
        parts: Vec<(Cycle, Poly)>,
    ) -> IdealRep {
        IdealRep { pair, parts }
    }

    pub fn pair(&self) -> &AdmissiblePair {
        &self.pair
    }

    pub fn parts(&self) -> &[(Cycle, Poly)] {
        &self.parts
    }

    pub fn is_graded(&self) -> bool {
        self.parts.is_empty()
    }

    /// gr(I): strip the polynomial summands, keep (H, S).
    pub fn graded_part(&self) -> IdealRep {
        IdealRep::graded(self.pair.clone())
    }

    pub fn is_improper(&self, g: &Graph) -> bool {
        self.pair.is_improper(g)
    }

    pub fn field(&self) -> Option<FieldSpec> {
        self.parts.first().map(|(_, f)| f.field())
    }

    /// Semiprime exactly when every polynomial summand is square-free;
    /// graded ideals are vacuously semiprime.
    pub fn is_semiprime(&self) -> bool {
        self.parts
            .iter()
            .all(|(_, f)| f.is_squarefree().expect("parts are nonzero"))
    }

    /// `ambient_field` labels the document when the ideal is graded and
    /// carries no polynomials of its own.
    pub fn to_json_value(&self, g: &Graph, ambient_field: FieldSpec) -> serde_json::Value {
        let parts: Vec<serde_json::Value> = self
            .parts
            .iter()
            .map(|(c, f)| {
                serde_json::json!({
                    "cycle": c.verts().iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
                    "f": f.to_string(),
                })
            })
            .collect();
        let field = match self.field().unwrap_or(ambient_field) {
            FieldSpec::Prime(p) => serde_json::json!({ "p": p }),
            FieldSpec::Rationals => serde_json::json!("Q"),
        };
        serde_json::json!({
            "H": g.format_set(self.pair.h()),
            "S": g.format_set(self.pair.s()),
            "polyparts": parts,
            "field": field,
        })
    }
}

#[derive(Deserialize)]
pub struct PolyPartDoc {
    pub cycle: Vec<String>,
    pub f: String,
}

#[derive(Deserialize)]
pub struct IdealDoc {
    #[serde(rename = "H", default)]
    pub h: Vec<String>,
    #[serde(rename = "S", default)]
    pub s: Vec<String>,
    #[serde(default)]
    pub polyparts: Vec<PolyPartDoc>,
    #[serde(default)]
    pub field: Option<FieldDoc>,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Name(String),
    Prime { p: u64 },
}

impl FieldDoc {
    pub fn to_field(&self) -> Result<FieldSpec> {
        match self {
            FieldDoc::Prime { p } => FieldSpec::prime(*p),
            FieldDoc::Name(s) => parse_field_name(s),
        }
    }
}

/// "Q" or "F<p>".
pub fn parse_field_name(s: &str) -> Result<FieldSpec> {
    if s == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(rest) = s.strip_prefix('F') {
        if let Ok(p) = rest.parse::<u64>() {
            return FieldSpec::prime(p);
        }
    }
    Err(Error::Document(format!(
        "unknown field {s:?}; expected \"Q\" or \"F<p>\""
    )))
}

/// A validated ideal plus what canonicalization had to say about the input.
#[derive(Clone, Debug)]
pub struct Validation {
    pub ideal: IdealRep,
    pub warnings: Vec<String>,
}

impl IdealDoc {
    pub fn from_json(text: &str) -> Result<IdealDoc> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }
}

/// Validate and canonicalize an ideal document: cycles rotated to canonical
/// form, polynomials made monic, summands absorbed by H dropped with a
/// warning, and constant summands promoted into the graded part.
pub fn validate(g: &Graph, lat: &PairLattice, doc: &IdealDoc) -> Result<Validation> {
    let field = match &doc.field {
        Some(fd) => fd.to_field()?,
        None => FieldSpec::Rationals,
    };
    let h = HssSet::new(g, g.resolve_set(&doc.h)?)?;
    let s = g.resolve_set(&doc.s)?;
    let pair = AdmissiblePair::new(g, h, s)?;
    let mut parts = Vec::new();
    for part in &doc.polyparts {
        let verts: Vec<VertexId> = part
            .cycle
            .iter()
            .map(|n| g.vertex(n))
            .collect::<Result<_>>()?;
        let f = Poly::parse(field, &part.f)?;
        parts.push((verts, f));
    }
    from_parts(g, lat, pair, parts)
}

/// Programmatic entry: raw cycles as vertex sequences, raw polynomials.
pub fn from_parts(
    g: &Graph,
    lat: &PairLattice,
    pair: AdmissiblePair,
    raw_parts: Vec<(Vec<VertexId>, Poly)>,
) -> Result<Validation> {
    let mut warnings = Vec::new();
    let mut parts: Vec<(Cycle, Poly)> = Vec::new();
    let exit_free: Vec<Cycle> = match quotient(g, &pair) {
        Quotient::Empty => Vec::new(),
        Quotient::Graph(q) => q.exit_free_cycles_ambient(),
    };
    for (verts, f) in raw_parts {
        if verts.is_empty() {
            return Err(Error::NotACycle("[]".into()));
        }
        let display = verts
            .iter()
            .map(|&v| g.name(v).to_owned())
            .collect::<Vec<_>>()
            .join(",");
        let distinct: VertexSet = verts.iter().copied().collect();
        if distinct.len() != verts.len() {
            return Err(Error::NotACycle(display));
        }
        let cycle = Cycle::new(verts.clone());
        if !cycle.pairs().all(|(u, v)| g.mult(u, v).is_positive()) {
            return Err(Error::NotACycle(display));
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.field().is_zero(&f.constant_term()) {
            return Err(Error::ZeroConstantTerm(f.to_string()));
        }
        // A summand whose cycle already lies inside H adds nothing.
        if cycle.verts().iter().all(|v| pair.h().contains(v)) {
            warnings.push(format!(
                "summand on cycle ({display}) dropped: its vertices lie in H"
            ));
            continue;
        }
        if !exit_free.contains(&cycle) {
            return Err(Error::CycleHasExit(display));
        }
        parts.push((cycle, f.monic()));
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (a, b) = (&parts[i].0, &parts[j].0);
            if a.verts().iter().any(|v| b.verts().contains(v)) {
                return Err(Error::OverlappingCycles(
                    g.format_set(&a.vertex_set()).join(","),
                    g.format_set(&b.vertex_set()).join(","),
                ));
            }
        }
    }
    let (ideal, mut canon_warnings) = canonicalize(g, lat, pair, parts)?;
    warnings.append(&mut canon_warnings);
    Ok(Validation { ideal, warnings })
}

/// Shared canonicalization: absorb summands whose cycles fell into H, and
/// promote constant summands by pushing their cycle vertices into the graded
/// part (a unit on the cycle's corner generates the corner's vertices).
fn canonicalize(
    g: &Graph,
    lat: &PairLattice,
    pair: AdmissiblePair,
    mut parts: Vec<(Cycle, Poly)>,
) -> Result<(IdealRep, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut idx = lat
        .index_of(&pair)
        .expect("pair belongs to the enumerated lattice");
    loop {
        let h = lat.pair(idx).h().clone();
        let before = parts.len();
        parts.retain(|(c, _)| {
            let absorbed = c.verts().iter().all(|v| h.contains(v));
            if absorbed {
                warnings.push(format!(
                    "summand on cycle ({}) absorbed by the graded part",
                    g.format_set(&c.vertex_set()).join(",")
                ));
            }
            !absorbed
        });
        if parts.len() != before {
            continue;
        }
        match parts.iter().position(|(_, f)| f.is_constant()) {
            Some(i) => {
                let (c, _) = parts.remove(i);
                warnings.push(format!(
                    "unit summand on cycle ({}) promoted into the graded part",
                    g.format_set(&c.vertex_set()).join(",")
                ));
                idx = lat.least_above_with_h(idx, &c.vertex_set());
            }
            None => break,
        }
    }
    parts.sort_by_key(|(c, _)| c.sort_key());
    debug_assert!(valid_parts(g, lat.pair(idx), &parts));
    Ok((
        IdealRep {
            pair: lat.pair(idx).clone(),
            parts,
        },
        warnings,
    ))
}

fn valid_parts(g: &Graph, pair: &AdmissiblePair, parts: &[(Cycle, Poly)]) -> bool {
    let exit_free = match quotient(g, pair) {
        Quotient::Empty => Vec::new(),
        Quotient::Graph(q) => q.exit_free_cycles_ambient(),
    };
    parts
        .iter()
        .all(|(c, f)| exit_free.contains(c) && f.is_monic() && !f.is_constant())
}

/// Classification verdict: a witness for the matched case, or the first
/// failed clause.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Classification {
    Prime(PrimeWitness),
    NotPrime(NotPrimeReason),
}

impl Classification {
    pub fn is_prime(&self) -> bool {
        matches!(self, Classification::Prime(_))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PrimeWitness {
    /// Case 1: graded with S = B_H and downward directed complement.
    GradedDirected { pair: AdmissiblePair },
    /// Case 2: graded with S = B_H minus one vertex u whose principal upset
    /// is the complement of H.
    BreakingMinusOne { pair: AdmissiblePair, u: VertexId },
    /// Case 3: one summand f(c) with f irreducible, c a WK cycle whose source
    /// u has the complement of H as its principal upset.
    WkPoly {
        pair: AdmissiblePair,
        cycle: Cycle,
        u: VertexId,
        f: Poly,
    },
}

impl PrimeWitness {
    pub fn case(&self) -> u8 {
        match self {
            PrimeWitness::GradedDirected { .. } => 1,
            PrimeWitness::BreakingMinusOne { .. } => 2,
            PrimeWitness::WkPoly { .. } => 3,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NotPrimeReason {
    ComplementNotDownwardDirected,
    /// Graded with at least two breaking vertices left out of S.
    SeveralMissingBreakingVertices(VertexSet),
    ComplementNotPrincipalUpset {
        u: VertexId,
    },
    SeveralPolynomialSummands,
    /// A polynomial summand is present but S omits breaking vertices.
    BreakingSetIncomplete(VertexSet),
    CycleNotWk(Cycle),
    ReduciblePolynomial(Poly),
}

impl NotPrimeReason {
    pub fn describe(&self, g: &Graph) -> String {
        match self {
            NotPrimeReason::ComplementNotDownwardDirected => {
                "the complement of H is not downward directed".into()
            }
            NotPrimeReason::SeveralMissingBreakingVertices(m) => format!(
                "S omits more than one breaking vertex: {}",
                g.format_set(m).join(",")
            ),
            NotPrimeReason::ComplementNotPrincipalUpset { u } => format!(
                "the complement of H is not exactly the vertices reaching {}",
                g.name(*u)
            ),
            NotPrimeReason::SeveralPolynomialSummands => "more than one polynomial summand".into(),
            NotPrimeReason::BreakingSetIncomplete(m) => format!(
                "a polynomial summand is present but S omits breaking vertices {}",
                g.format_set(m).join(",")
            ),
            NotPrimeReason::CycleNotWk(c) => format!(
                "cycle ({}) meets another cycle",
                g.format_set(&c.vertex_set()).join(",")
            ),
            NotPrimeReason::ReduciblePolynomial(f) => {
                format!("polynomial {f} is reducible")
            }
        }
    }
}

/// Decide primeness of a proper ideal by matching it against the three-case
/// classification. Undecidable irreducibility over the rationals surfaces as
/// an error, never as a verdict.
pub fn classify_prime(g: &Graph, ideal: &IdealRep) -> Result<Classification> {
    if ideal.is_improper(g) {
        return Err(Error::ImproperIdeal);
    }
    let pair = &ideal.pair;
    let bh = breaking_vertices(g, pair.hss());
    let missing: VertexSet = bh.difference(pair.s()).copied().collect();
    let complement: VertexSet = g.vertices().filter(|v| !pair.h().contains(v)).collect();
    match ideal.parts.len() {
        0 => {
            if missing.is_empty() {
                if g.is_downward_directed(&complement) {
                    Ok(Classification::Prime(PrimeWitness::GradedDirected {
                        pair: pair.clone(),
                    }))
                } else {
                    Ok(Classification::NotPrime(
                        NotPrimeReason::ComplementNotDownwardDirected,
                    ))
                }
            } else if missing.len() == 1 {
                let u = *missing.iter().next().unwrap();
                if complement_is_upset_of(g, &complement, u) {
                    Ok(Classification::Prime(PrimeWitness::BreakingMinusOne {
                        pair: pair.clone(),
                        u,
                    }))
                } else {
                    Ok(Classification::NotPrime(
                        NotPrimeReason::ComplementNotPrincipalUpset { u },
                    ))
                }
            } else {
                Ok(Classification::NotPrime(
                    NotPrimeReason::SeveralMissingBreakingVertices(missing),
                ))
            }
        }
        1 => {
            if !missing.is_empty() {
                return Ok(Classification::NotPrime(
                    NotPrimeReason::BreakingSetIncomplete(missing),
                ));
            }
            let (cycle, f) = &ideal.parts[0];
            let wk = g
                .simple_cycles()
                .into_iter()
                .find(|info| &info.cycle == cycle)
                .map(|info| info.is_wk)
                .unwrap_or(false);
            if !wk {
                return Ok(Classification::NotPrime(NotPrimeReason::CycleNotWk(
                    cycle.clone(),
                )));
            }
            let u = cycle.base();
            if !complement_is_upset_of(g, &complement, u) {
                return Ok(Classification::NotPrime(
                    NotPrimeReason::ComplementNotPrincipalUpset { u },
                ));
            }
            if !f.is_irreducible()? {
                return Ok(Classification::NotPrime(
                    NotPrimeReason::ReduciblePolynomial(f.clone()),
                ));
            }
            Ok(Classification::Prime(PrimeWitness::WkPoly {
                pair: pair.clone(),
                cycle: cycle.clone(),
                u,
                f: f.clone(),
            }))
        }
        _ => Ok(Classification::NotPrime(
            NotPrimeReason::SeveralPolynomialSummands,
        )),
    }
}

fn complement_is_upset_of(g: &Graph, complement: &VertexSet, u: VertexId) -> bool {
    g.vertices()
        .all(|v| complement.contains(&v) == g.reaches(v, u))
}

/// B within A. The graded parts compare in the pair order; each summand of B
/// is either absorbed by A's graded part or divisible by A's summand on the
/// same cycle.
pub fn contains(a: &IdealRep, b: &IdealRep) -> Result<bool> {
    check_fields(a, b)?;
    if !pair_leq(&b.pair, &a.pair) {
        return Ok(false);
    }
    for (c, gpoly) in &b.parts {
        if c.verts().iter().all(|v| a.pair.h().contains(v)) {
            continue;
        }
        let covered = a.parts.iter().any(|(d, f)| d == c && f.divides(gpoly));
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Canonical representation of A + B: graded parts joined in the pair
/// lattice, summands on a shared cycle combined by gcd, then absorbed or
/// promoted as canonicalization demands.
pub fn sum(g: &Graph, lat: &PairLattice, a: &IdealRep, b: &IdealRep) -> Result<IdealRep> {
    check_fields(a, b)?;
    let i = lat.index_of(&a.pair).expect("pair in lattice");
    let j = lat.index_of(&b.pair).expect("pair in lattice");
    let joined = lat.join(i, j);
    let mut by_cycle: BTreeMap<Cycle, Poly> = a.parts.iter().cloned().collect();
    for (c, gpoly) in &b.parts {
        match by_cycle.get_mut(c) {
            Some(f) => *f = Poly::gcd(f, gpoly)?,
            None => {
                by_cycle.insert(c.clone(), gpoly.clone());
            }
        }
    }
    let (ideal, _) = canonicalize(
        g,
        lat,
        lat.pair(joined).clone(),
        by_cycle.into_iter().collect(),
    )?;
    Ok(ideal)
}

/// Restricted intersection: both graded (meet in the pair lattice), or equal
/// graded parts with summands on identical cycle sets (pointwise lcm). There
/// is no general formula for mixed shapes, so those are refused.
pub fn intersect(g: &Graph, lat: &PairLattice, a: &IdealRep, b: &IdealRep) -> Result<IdealRep> {
    check_fields(a, b)?;
    if a.is_graded() && b.is_graded() {
        let i = lat.index_of(&a.pair).expect("pair in lattice");
        let j = lat.index_of(&b.pair).expect("pair in lattice");
        return Ok(IdealRep::graded(lat.pair(lat.meet(i, j)).clone()));
    }
    let cycles_a: Vec<&Cycle> = a.parts.iter().map(|(c, _)| c).collect();
    let cycles_b: Vec<&Cycle> = b.parts.iter().map(|(c, _)| c).collect();
    if a.pair == b.pair && cycles_a == cycles_b {
        let mut parts = Vec::with_capacity(a.parts.len());
        for ((c, f), (_, h)) in a.parts.iter().zip(&b.parts) {
            parts.push((c.clone(), Poly::lcm(f, h)?));
        }
        let (ideal, _) = canonicalize(g, lat, a.pair.clone(), parts)?;
        return Ok(ideal);
    }
    Err(Error::UnsupportedShape(
        "intersection needs two graded ideals, or equal graded parts with summands on identical cycles"
            .into(),
    ))
}

fn check_fields(a: &IdealRep, b: &IdealRep) -> Result<()> {
    if let (Some(fa), Some(fb)) = (a.field(), b.field()) {
        if fa != fb {
            return Err(Error::FieldMismatch);
        }
    }
    Ok(())
}

/// Independent semiprimeness check straight from the definition: collect the
/// primes containing the ideal, intersect them, compare. Needs a prime field
/// so that factorization is complete.
pub fn semiprime_oracle(
    g: &Graph,
    lat: &PairLattice,
    ideal: &IdealRep,
    degree_bound: usize,
) -> Result<bool> {
    match ideal.field() {
        Some(FieldSpec::Prime(_)) | None => {}
        Some(FieldSpec::Rationals) => {
            return Err(Error::Unsupported(
                "the semiprime oracle needs a prime field".into(),
            ))
        }
    }
    if let Some((_, f)) = ideal.parts.iter().find(|(_, f)| f.degree() > degree_bound) {
        return Err(Error::Unsupported(format!(
            "summand degree {} exceeds the oracle bound {degree_bound}",
            f.degree()
        )));
    }
    let spec = spectrum::compute_spec_with_lattice(g, lat)?;

    // Graded primes above the ideal.
    let mut graded_above: Vec<usize> = Vec::new();
    for node in spec.nodes() {
        if let spectrum::SpecNode::Graded { pair, .. } = node {
            let p = IdealRep::graded(pair.clone());
            if contains(&p, ideal)? {
                graded_above.push(lat.index_of(pair).expect("pair in lattice"));
            }
        }
    }
    // Case-3 primes above the ideal: instances of a symbolic family at the
    // irreducible factors of the matching summand. Families on other cycles
    // contribute nothing beyond their graded pair, which is itself a node.
    let mut instances: Vec<IdealRep> = Vec::new();
    for node in spec.nodes() {
        if let spectrum::SpecNode::Family { pair, cycle, .. } = node {
            if let Some((_, f)) = ideal.parts.iter().find(|(c, _)| c == cycle) {
                for (p, _) in f.irreducible_factors()? {
                    let inst = IdealRep {
                        pair: pair.clone(),
                        parts: vec![(cycle.clone(), p)],
                    };
                    if contains(&inst, ideal)? {
                        instances.push(inst);
                    }
                }
            }
        }
    }

    // Fold the intersection. Graded primes meet inside the lattice; family
    // instances on one cycle combine by lcm; mixed shapes fall back to
    // containment shortcuts before giving up.
    let mut acc: Option<IdealRep> = graded_above
        .into_iter()
        .reduce(|x, y| lat.meet(x, y))
        .map(|k| IdealRep::graded(lat.pair(k).clone()));
    for inst in instances {
        acc = Some(match acc {
            None => inst,
            Some(cur) => intersect_for_oracle(g, lat, &cur, &inst)?,
        });
    }
    match acc {
        // No prime contains the ideal: the empty intersection is the whole
        // algebra, which only the improper ideal matches.
        None => Ok(ideal.is_improper(g)),
        Some(meet) => Ok(&meet == ideal),
    }
}

fn intersect_for_oracle(
    g: &Graph,
    lat: &PairLattice,
    a: &IdealRep,
    b: &IdealRep,
) -> Result<IdealRep> {
    if contains(a, b)? {
        return Ok(b.clone());
    }
    if contains(b, a)? {
        return Ok(a.clone());
    }
    intersect(g, lat, a, b)
}

/// Every canonical ideal of the graph whose summand polynomials are monic,
/// nonconstant, of bounded degree, and with nonzero constant term over a
/// prime field. Includes all graded ideals (the improper one too).
pub fn enumerate_ideals(
    g: &Graph,
    lat: &PairLattice,
    field: FieldSpec,
    max_degree: usize,
) -> Result<Vec<IdealRep>> {
    let mut polys: Vec<Poly> = Vec::new();
    for d in 1..=max_degree {
        for p in crate::poly::monic_polys(field, d)? {
            if !field.is_zero(&p.constant_term()) {
                polys.push(p);
            }
        }
    }
    let mut out = Vec::new();
    for pair in lat.pairs() {
        let cycles = match quotient(g, pair) {
            Quotient::Empty => Vec::new(),
            Quotient::Graph(q) => q.exit_free_cycles_ambient(),
        };
        let mut stack: Vec<Vec<(Cycle, Poly)>> = vec![Vec::new()];
        for c in &cycles {
            let mut next = Vec::new();
            for partial in &stack {
                next.push(partial.clone());
                for p in &polys {
                    let mut with = partial.clone();
                    with.push((c.clone(), p.clone()));
                    next.push(with);
                }
            }
            stack = next;
        }
        for mut parts in stack {
            parts.sort_by_key(|(c, _)| c.sort_key());
            out.push(IdealRep {
                pair: pair.clone(),
                parts,
            });
        }
    }
    Ok(out)
}
