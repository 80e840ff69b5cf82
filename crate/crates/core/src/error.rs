use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} is not supported (modular-form operations need p >= 5)")]
    Unsupported(u32),
    #[error("denominator of {0} is divisible by {1}")]
    DenominatorDivisibleByP(String, u32),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial degree {degree} exceeds the bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("extension degree {0} is out of range")]
    InvalidDegree(usize),
    #[error("modulus is not a monic irreducible polynomial over F_{0}")]
    ReducibleModulus(u32),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("weight tags differ ({0} vs {1})")]
    WeightMismatch(u32, u32),
    #[error("invalid weight {0}")]
    InvalidWeight(u32),
    #[error("precision must be at least 1")]
    EmptySeries,
    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("E_(p-1) mod {0} is not the constant series 1")]
    HasseNotConstant(u32),
    #[error("the zero form has no filtration")]
    ZeroForm,
    #[error("q-series is not in M_{0} mod p")]
    NotAModularForm(u32),
    #[error("Hecke operator T_{0} requires l != p")]
    EllEqualsP(u32),
    #[error("no primes l != p below the bound {0}")]
    NoPrimes(u32),
    #[error("source is not an eigenform of T_{0}")]
    NotAnEigenform(u32),
    #[error("no cusp form of weight {w} or {shifted} carries the eigensystem")]
    TheoremViolation { w: u32, shifted: u32 },
    #[error(
        "source with zero constant term = {source_is_cuspidal} matched at weight {matched_weight} (filtration {w})"
    )]
    IffClauseViolation {
        w: u32,
        matched_weight: u32,
        source_is_cuspidal: bool,
    },
    #[error("eigensystem needs an extension field beyond the degree cap at weight {0}")]
    UnresolvedEigensystem(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("internal consistency failure: {0}")]
    Internal(&'static str),
}
