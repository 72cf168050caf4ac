//! Ideal-theoretic computations for Leavitt path algebras of finite directed
//! graphs: the graded-ideal lattice, semiprimeness and primeness of ideals
//! given by generator data, prime spectrum posets, the Kaplansky covering
//! property, and realization of finite posets as prime spectra.

pub mod error;
pub mod graph;
pub mod hss;
pub mod ideal;
pub mod poly;
pub mod poset;
pub mod spectrum;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{Cycle, CycleInfo, Graph, GraphReport, Mult, VertexClass, VertexId, VertexSet};
pub use hss::{
    breaking_vertices, closure, enumerate_admissible_pairs, enumerate_hss, pair_leq, quotient,
    AdmissiblePair, HssSet, PairLattice, Quotient, QuotientGraph, DEFAULT_CAP,
};
pub use ideal::{
    classify_prime, contains, enumerate_ideals, intersect, parse_field_name, semiprime_oracle, sum,
    validate, Classification, IdealDoc, IdealRep, NotPrimeReason, PrimeWitness, Validation,
};
pub use poly::{
    irreducibles_up_to, monic_polys, normalize_laurent, parse_laurent, Coef, FieldSpec,
    LaurentNormalForm, Poly,
};
pub use poset::{
    check_properties, check_properties_bounded, glb, r_set, realize, verify_realization, FinPoset,
    PropertyReport, DEFAULT_SUBSET_BOUND,
};
pub use spectrum::{compute_spec, regularity_report, RegularityReport, SpecNode, SpecPoset};
