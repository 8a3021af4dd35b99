use thiserror::Error;

/// A single structural defect found while validating a category document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    /// A morphism or composition entry refers to an unknown id, or a
    /// composite is listed for a pair whose endpoints do not match.
    DanglingEndpoint(String),
    MissingIdentity(String),
    /// `compose(id, f) != f` or `compose(f, id) != f`.
    IdentityLaw(String),
    MissingComposite { g: String, f: String },
    NonAssociative { h: String, g: String, f: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate id {id}"),
            Violation::DanglingEndpoint(what) => write!(f, "dangling endpoint: {what}"),
            Violation::MissingIdentity(o) => write!(f, "missing identity on {o}"),
            Violation::IdentityLaw(m) => write!(f, "identity law fails for {m}"),
            Violation::MissingComposite { g, f: ff } => {
                write!(f, "composite {g} o {ff} is not listed")
            }
            Violation::NonAssociative { h, g, f: ff } => {
                write!(f, "({h} o {g}) o {ff} != {h} o ({g} o {ff})")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid category: {}", fmt_violations(.0))]
    InvalidCategory(Vec<Violation>),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("quiver has a cycle through {0}")]
    CyclicQuiver(String),
    #[error("not a group table: {0}")]
    NotAGroupTable(String),
    #[error("relation is not a partial order: {0}")]
    NotAPoset(String),
    #[error("size budget exceeded: {0}")]
    SizeBudgetExceeded(String),
    #[error("morphism {morphism} does not start at {expected}")]
    WrongDomain { morphism: String, expected: String },
    #[error("invalid sieve on {base}: {reason}")]
    InvalidSieve { base: String, reason: String },
    #[error("the atomic topology needs the Ore condition; it fails for {0}")]
    OreConditionFails(String),
    #[error("category is not directed and EI")]
    NotDirectedEI,
    #[error("objects {0:?} do not form an ideal")]
    NotAnIdeal(Vec<String>),
    #[error("rule is not a Grothendieck topology: {0}")]
    NotATopology(String),
    #[error("rule does not satisfy the stability axiom: {0}")]
    StabilityFails(String),
    #[error("topology is not rigid at {0}")]
    NotRigid(String),
    #[error("precondition fails: {0}")]
    PreconditionFails(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("operation needs a finite field")]
    InfiniteFieldUnsupported,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad scalar {0:?}")]
    BadScalar(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("functoriality fails for {g} o {f}")]
    FunctorialityViolation { g: String, f: String },
    #[error("action of the identity on {0} is not the identity matrix")]
    NonIdentityAtObject(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a natural transformation at {0}")]
    NotNatural(String),
    #[error("bad document: {0}")]
    Document(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
