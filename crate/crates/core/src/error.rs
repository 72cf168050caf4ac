use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when loading documents or running an
/// operation. Verdicts (a false answer to a yes/no question) are never
/// errors; only malformed input, violated preconditions, and blown caps are.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid document: {0}")]
    Document(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("edge endpoint {0:?} is not a declared vertex")]
    UndeclaredEndpoint(String),
    #[error("multiplicity of edge {src:?} -> {dst:?} must be a positive integer or \"inf\"")]
    BadMultiplicity { src: String, dst: String },
    #[error("edge {src:?} -> {dst:?} listed twice")]
    DuplicateEdge { src: String, dst: String },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate poset element {0:?}")]
    DuplicateElement(String),
    #[error("unknown poset element {0:?}")]
    UnknownElement(String),
    #[error("set is not hereditary: {v:?} reaches {w:?} which lies outside it")]
    NotHereditary { v: String, w: String },
    #[error("set is not saturated: all edges of regular vertex {v:?} land inside it")]
    NotSaturated { v: String },
    #[error("{0:?} is not a breaking vertex of H")]
    NotBreaking(String),
    #[error("{what} enumeration exceeded cap {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("field characteristic {0} is not a prime below 2^16")]
    BadCharacteristic(u64),
    #[error("cannot parse polynomial {input:?}: {reason}")]
    PolyParse { input: String, reason: String },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial {0:?} has zero constant term")]
    ZeroConstantTerm(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("irreducibility undecided over the rationals: unfactored part has degree {degree}")]
    UnsupportedFactorization { degree: usize },
    #[error("unsupported operand shape: {0}")]
    UnsupportedShape(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("ideal is improper")]
    ImproperIdeal,
    #[error("vertex sequence {0:?} is not a cycle of the graph")]
    NotACycle(String),
    #[error("cycle {0:?} is not an exit-free cycle of the quotient graph")]
    CycleHasExit(String),
    #[error("cycles {0:?} and {1:?} share vertices")]
    OverlappingCycles(String, String),
    #[error("relation has a cycle through {0:?}")]
    RelationCycle(String),
    #[error("poset size {n} exceeds the exhaustive-check bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("first node is not strictly below the second")]
    NotStrictlyBelow,
    #[error("empty subset has no greatest lower bound")]
    EmptySubset,
}
