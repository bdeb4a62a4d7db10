use alloc::string::String;
use core::fmt;

/// Everything that can go wrong in the core crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A carrier must have at least one element and respect the configured cap.
    CarrierSize {
        size: usize,
        cap: usize,
    },
    /// Two values were expected to live on the same carrier.
    CarrierMismatch {
        left: usize,
        right: usize,
    },
    /// An element index fell outside its carrier.
    ElementOutOfRange {
        element: usize,
        size: usize,
    },
    /// Relational powers start at 1.
    ZeroPower,
    /// A table does not have `size^arity` entries.
    TableShape {
        expected: usize,
        found: usize,
    },
    /// An operation was applied to the wrong number of arguments.
    Arity {
        expected: usize,
        found: usize,
    },
    /// The `U^ω` construction needs at least one argument.
    NullaryTable,
    EmptyBase,
    EmptyProduct,
    NotSemiuniformity,
    NotUniformity,
    /// The hypothesis `Ū∘ψ∘Ū ⊆ ψ∘U∘ψ` of the direct image formula failed.
    DirectImageHypothesis {
        witness: (usize, usize),
    },
    DuplicateSymbol(String),
    UnknownSymbol(String),
    UnboundVariable(usize),
    Parse(String),
    /// An exhaustive computation was refused because the input exceeds a cap.
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    InvalidCertificate(String),
    NotCongruence,
    /// Chain levels must refine each other.
    ChainShape(String),
    /// A coherent sequence failed `π_k(c_{k+1}) = c_k`.
    Incoherent {
        level: usize,
        upper: u64,
        lower: u64,
    },
    /// A Cauchy modulus did not certify the sequence.
    ModulusViolation {
        level: usize,
        i: usize,
        j: usize,
        class_i: u64,
        class_j: u64,
    },
    /// The coarse chain is not coarser than the fine one at some level.
    NotCoarser {
        level: usize,
    },
    NotHomomorphism {
        level: usize,
        detail: String,
    },
    Commutation {
        level: usize,
        element: u64,
    },
    NoLift {
        level: usize,
        element: u64,
    },
    Reindex(String),
    DepthExceeded {
        depth: usize,
        cap: usize,
    },
    /// A candidate lattice is missing the meet or join of two members.
    NotClosed(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CarrierSize { size, cap } => {
                write!(f, "carrier size {size} outside 1..={cap}")
            }
            Error::CarrierMismatch { left, right } => {
                write!(f, "carrier mismatch: {left} vs {right}")
            }
            Error::ElementOutOfRange { element, size } => {
                write!(f, "element {element} outside carrier of size {size}")
            }
            Error::ZeroPower => write!(f, "relational power must be at least 1"),
            Error::TableShape { expected, found } => {
                write!(f, "operation table has {found} entries, expected {expected}")
            }
            Error::Arity { expected, found } => {
                write!(f, "arity mismatch: expected {expected}, found {found}")
            }
            Error::NullaryTable => write!(f, "construction needs an operation of arity at least 1"),
            Error::EmptyBase => write!(f, "filter base is empty"),
            Error::EmptyProduct => write!(f, "product of an empty family"),
            Error::NotSemiuniformity => write!(f, "filter is not a semiuniformity"),
            Error::NotUniformity => write!(f, "filter is not a uniformity"),
            Error::DirectImageHypothesis { witness } => {
                write!(f, "direct image hypothesis fails: pair ({}, {}) of U∘ψ∘U is not in ψ∘U∘ψ", witness.0, witness.1)
            }
            Error::DuplicateSymbol(s) => write!(f, "duplicate operation symbol `{s}`"),
            Error::UnknownSymbol(s) => write!(f, "unknown operation symbol `{s}`"),
            Error::UnboundVariable(v) => write!(f, "variable x{v} is unbound"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::CapExceeded { what, size, cap } => {
                write!(f, "{what} of size {size} exceeds cap {cap}")
            }
            Error::InvalidCertificate(s) => write!(f, "invalid certificate: {s}"),
            Error::NotCongruence => write!(f, "relation is not a congruence"),
            Error::ChainShape(s) => write!(f, "malformed chain: {s}"),
            Error::Incoherent { level, upper, lower } => {
                write!(f, "incoherent sequence at level {level}: projection of {upper} is not {lower}")
            }
            Error::ModulusViolation { level, i, j, class_i, class_j } => {
                write!(f, "modulus violated at level {level}: terms {i} and {j} lie in classes {class_i} and {class_j}")
            }
            Error::NotCoarser { level } => {
                write!(f, "chain is not coarser than the base chain at level {level}")
            }
            Error::NotHomomorphism { level, detail } => {
                write!(f, "level map {level} is not a homomorphism: {detail}")
            }
            Error::Commutation { level, element } => {
                write!(f, "level maps do not commute with connecting maps at level {level} (element {element})")
            }
            Error::NoLift { level, element } => {
                write!(f, "no lift exists at level {level} for element {element}")
            }
            Error::Reindex(s) => write!(f, "invalid reindexing: {s}"),
            Error::DepthExceeded { depth, cap } => write!(f, "depth {depth} exceeds cap {cap}"),
            Error::NotClosed(op) => write!(f, "element set is not closed under {op}"),
        }
    }
}

impl core::error::Error for Error {}
