use std::fmt;

use thiserror::Error;

/// A named hypothesis of the lambda machinery that the input failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precondition {
    /// `p` must be an odd prime.
    NotOddPrime(u64),
    /// `p` divides the discriminant.
    PDividesD { p: u64, d: i64 },
    /// The real quadratic field does not have class number one.
    ClassNumberNotOne { d: i64, h: u64 },
    /// No prime congruent to 3 mod 4 divides the discriminant.
    NoPrimeThreeModFour(i64),
    /// The discriminant does not split into two negative prime discriminants.
    NoGenusSplit(i64),
    /// `p^2 | eps^r0 - 1`.
    AssumptionB { p: u64, r0: u64 },
    /// `ell` is not a prime congruent to 3 mod 4.
    NotEllThreeModFour(i64),
    /// `p` is not inert in `Q(sqrt(-ell))`.
    NotInertImaginary { p: u64, ell: i64 },
    /// Order of the unit mod `p` differs from the one the fast path needs.
    UnitOrder { p: u64, r: u64, expected: u64 },
    /// A user-supplied primitive root does not generate `(Z/p^2)^*`.
    NotPrimitiveRoot { g: u64, p: u64 },
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::NotOddPrime(p) => write!(f, "{p} is not an odd prime"),
            Precondition::PDividesD { p, d } => write!(f, "{p} divides the discriminant {d}"),
            Precondition::ClassNumberNotOne { d, h } => {
                write!(
                    f,
                    "Assumption A fails: class number of Q(sqrt({d})) is {h}, not 1"
                )
            }
            Precondition::NoPrimeThreeModFour(d) => {
                write!(f, "Assumption A fails: no prime = 3 mod 4 divides {d}")
            }
            Precondition::NoGenusSplit(d) => write!(
                f,
                "Assumption A fails: {d} is not a product of two negative field discriminants"
            ),
            Precondition::AssumptionB { p, r0 } => {
                write!(f, "Assumption B fails: {p}² | ε^{r0} − 1")
            }
            Precondition::NotEllThreeModFour(l) => {
                write!(f, "{l} is not a prime congruent to 3 mod 4")
            }
            Precondition::NotInertImaginary { p, ell } => {
                write!(f, "{p} is not inert in Q(sqrt(-{ell}))")
            }
            Precondition::UnitOrder { p, r, expected } => write!(
                f,
                "technical assumption fails: ε has order {r} mod {p}, need {expected}"
            ),
            Precondition::NotPrimitiveRoot { g, p } => {
                write!(f, "{g} is not a primitive root modulo {p}²")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not irrational: {0} is a perfect square")]
    NotIrrational(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("period overflow: no period within {0} steps")]
    PeriodOverflow(usize),
    #[error("empty expansion")]
    EmptyExpansion,
    #[error("unit construction failed: {0}")]
    UnitConstruction(String),
    #[error("assumption violation: {0}")]
    AssumptionViolation(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("not a unit")]
    NotAUnit,
    #[error("no generator found")]
    NoGenerator,
    #[error("level mismatch")]
    LevelMismatch,
    #[error("not an algebraic integer")]
    NotIntegral,
    #[error("not fundamental: {0}")]
    NotFundamental(i64),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("{0}")]
    Precondition(Precondition),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

impl From<Precondition> for Error {
    fn from(p: Precondition) -> Self {
        Error::Precondition(p)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
