use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant describes either malformed input or a violated mathematical
/// precondition. `InternalInconsistency` is the one exception: it signals an
/// arithmetic bug and is never expected in practice.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("field order {p}^{e} exceeds the supported maximum 2^31")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("prefix vectors are linearly dependent")]
    DependentPrefix,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("got {a} matrices for the left side and {b} for the right side")]
    LengthMismatch { a: usize, b: usize },
    #[error("empty list")]
    EmptyList,
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("exhaustive search needs {required} codewords, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("k = {k} must satisfy 1 <= k <= min(r, s) = {max}")]
    BadK { k: usize, max: usize },
    #[error("field too small: need at least {required} elements, have {actual}")]
    FieldTooSmall { required: u64, actual: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
