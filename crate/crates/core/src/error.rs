use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("relation is void (no individuals or no attributes)")]
    VoidRelation,
    #[error("relation has blank rows or columns")]
    NotTight,
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("individual set is not inference-stable")]
    NotStable,
    #[error("{what} exceeded cap of {cap}")]
    CapExceeded { what: &'static str, cap: u64 },
    #[error("join requires disjoint vertex universes; `{0}` is shared")]
    UniverseOverlap(String),
    #[error("{what} too large (limit {limit}); consider a smaller max_dim")]
    TooLarge { what: &'static str, limit: u64 },
    #[error("chain is not maximal in the Galois lattice: {0}")]
    NotMaximal(String),
    #[error("release sequence is not informative at position {0}")]
    NotInformative(usize),
    #[error("not a morphism: {0} violating pairs")]
    InvalidMorphism(usize),
    #[error("morphism is not surjective on pairs")]
    NotSurjective,
    #[error("missing mapping for `{0}`")]
    MissingMapping(String),
    #[error("stochastic action `{0}` not supported without opting in")]
    StochasticUnsupported(String),
    #[error("graph is not fully controllable")]
    NotControllable,
    #[error("not a Hamiltonian cycle of deterministic actions: {0}")]
    NotHamiltonian(String),
    #[error("strategy is not complete for any single state")]
    NotComplete,
    #[error("unknown lattice element `{0}`")]
    UnknownElement(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("missing field `{0}`")]
    MissingField(String),
}

pub type Result<T> = std::result::Result<T, Error>;
