use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// Variants are grouped by the module that raises them; the CLI maps
/// "domain-negative" variants to exit code 1 and the rest to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // gf
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field parameters out of range: {0}")]
    BadField(String),
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("modulus degree {found} does not match extension degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("element index {index} out of range for field of order {q}")]
    ElementOutOfRange { index: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,

    // poly
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial degree too small: {0}")]
    DegreeTooSmall(String),

    // linalg
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension underflow: {0}")]
    DimensionUnderflow(String),

    // ca
    #[error("rule is not linear")]
    NonlinearRule,
    #[error("window length {0} is not odd and at least 3")]
    EvenWindow(usize),
    #[error("Wolfram number {number} out of range for radius {radius}")]
    NumberOutOfRange { number: u128, radius: usize },
    #[error("configuration of length {len} too short for radius {radius}")]
    ConfigTooShort { len: usize, radius: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid CA parameters: {0}")]
    BadCaSpec(String),
    #[error("rule table would have {0} entries, above the enumeration bound")]
    TableTooLarge(u128),

    // designs
    #[error("rule is not bipermutive")]
    NotBipermutive,
    #[error("block length {m} is not a positive multiple of 2r = {two_r}")]
    BadBlockLength { m: usize, two_r: usize },
    #[error("square order q^m = {0} exceeds the desk bound")]
    OrderTooLarge(u128),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("not a Latin square: {0}")]
    NotLatin(String),
    #[error("square orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("polynomials {0} and {1} are not coprime")]
    NotCoprime(usize, usize),
    #[error("squares are not mutually orthogonal")]
    NotMols,
    #[error("array is not an orthogonal array of strength {t} and index {lambda}")]
    NotOrthogonalArray { t: usize, lambda: usize },
    #[error("array shape invalid: {0}")]
    ShapeMismatch(String),
    #[error("search too large: {0}")]
    SearchTooLarge(String),
    #[error("constant terms must be nonzero")]
    ZeroConstant,

    // sss
    #[error("not enough qualifying polynomials: need {needed}, found {found}")]
    NotEnoughPolynomials { needed: usize, found: usize },
    #[error("bad scheme parameters: {0}")]
    BadParameters(String),
    #[error("both shares belong to player {0}")]
    SamePlayer(usize),
    #[error("secret symbol {0} out of range")]
    SecretOutOfRange(usize),
    #[error("no row matches the given shares")]
    NoRow,
    #[error("more than one row matches the given shares")]
    AmbiguousRow,
    #[error("audit would enumerate {0} configurations, above the bound")]
    AuditTooLarge(u128),
    #[error("share was issued for a different descriptor")]
    DescriptorHashMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
