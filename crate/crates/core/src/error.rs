use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("quadratic residue symbol requires odd characteristic")]
    OddCharacteristicRequired,
    #[error("polynomials belong to different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation requires a polynomial of positive degree")]
    ConstantInput,
    #[error("degree must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error("ensemble work requires odd q with q = 1 mod 4, got q = {0}")]
    BadFieldForEnsemble(u64),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("denominator must be a nonzero monic polynomial")]
    ZeroDenominator,
    #[error("character sum degree {n} is not below deg D = {deg}")]
    DegreeTooLarge { n: usize, deg: usize },
    #[error("discriminant {0} is not square-free")]
    NotSquareFree(String),
    #[error("discriminant {0} must be monic")]
    NotMonic(String),
    #[error("discriminant has even degree {0}")]
    EvenDegree(usize),
    #[error("point-count oracle unavailable for genus {0}")]
    UnsupportedGenus(usize),
    #[error("class number {0} is not an integer")]
    NonIntegralClassNumber(String),
    #[error("class number {0} is not positive")]
    NonPositive(String),
    #[error("zeta_A(s) has a pole at s = 1 (requested s = {0})")]
    PoleAtOne(i64),
    #[error("modulus must be a nonzero monic polynomial")]
    ZeroModulus,
    #[error("degree {d} is below deg l = {deg_l}")]
    DegreeTooSmall { d: usize, deg_l: usize },
    #[error("workload of {work} units exceeds budget {budget}")]
    BudgetExceeded { work: u128, budget: u128 },
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
}
