use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial is not divisible by h: constant term is {0}")]
    NotDivisible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a non-constant expression")]
    DivisionByNonConstant,
    #[error("expected a numeric constant, found {0}")]
    NotNumeric(String),
    #[error("Killing form is degenerate (algebra is not semisimple)")]
    SingularForm,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("regularity tests disagree at point {point}: characteristic coefficient nonzero but Jacobian rank {rank} < {expected}")]
    InconsistentRegularity {
        point: String,
        rank: usize,
        expected: usize,
    },
    #[error("point {0} is not regular")]
    NotRegular(String),
    #[error("polynomial {0} is not invariant")]
    NotInvariant(String),
    #[error("element {0} is not central")]
    NotCentral(String),
    #[error("orbit constant {index}: c({index})(0) = {found} but I_0 uses {expected}")]
    InconsistentConstants {
        index: usize,
        found: String,
        expected: String,
    },
    #[error("reduction did not lower the degree ({from} -> {to}); ideal data is inconsistent")]
    NonTermination { from: usize, to: usize },
    #[error("matrix does not define a Lie algebra automorphism")]
    NotAutomorphism,
    #[error("automorphism is not an involution")]
    NotInvolution,
    #[error("automorphism does not fix the Casimir {0}")]
    CasimirNotFixed(String),
    #[error("operator is not a scalar multiple of the identity")]
    NotScalar,
    #[error("leading coefficient {0} is not an invertible constant")]
    SymbolicPivot(String),
    #[error("symmetrizer degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Load(String),
}

pub type Result<T> = std::result::Result<T, Error>;
