use thiserror::Error;

/// Every failure the library reports. Empty solution sets are values, not errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("{a} has no inverse modulo {m}")]
    NotCoprime { a: i128, m: u128 },
    #[error("no integer solution: gcd {d} does not divide {c}")]
    NoSolution { d: i64, c: i64 },
    #[error("moduli at positions {i} and {j} share a factor")]
    ModuliNotCoprime { i: usize, j: usize },
    #[error("congruences at positions {i} and {j} are incompatible")]
    Incompatible { i: usize, j: usize },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("empty congruence system")]
    EmptySystem,
    #[error("result modulus overflows 64 bits")]
    Overflow,
    #[error("factorization budget exhausted while splitting {0}")]
    FactorBudgetExceeded(u64),
    #[error("{what} = {value} exceeds the limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Jacobi modulus {0} must be odd")]
    EvenModulus(i64),
    #[error("Jacobi modulus {0} must be positive")]
    NonPositiveModulus(i64),
    #[error("expected a > b, got a = {a}, b = {b}")]
    NotGreater { a: u64, b: u64 },
    #[error("leading coefficient vanishes modulo {0}")]
    LeadingCoeffZero(u64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant {0} has the wrong sign for this operation")]
    WrongSign(i64),
    #[error("{0} is a perfect square")]
    PerfectSquare(i64),
    #[error("q = {0} must be -1, 2 or an odd prime")]
    InvalidQ(i64),
    #[error("L-series truncation error {0:.3e} is too large to round safely")]
    TruncationTooCoarse(f64),
    #[error("tuple is not admissible: {0}")]
    NotAdmissible(String),
    #[error("square-free parts violate the density hypothesis: {0}")]
    DensityCondition(String),
    #[error("prime {0} is not congruent to 3 modulo 4")]
    NotThreeModFour(String),
    #[error("search window exhausted: {0}")]
    SearchExhausted(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
