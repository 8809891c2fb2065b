use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error classes; the CLI maps these onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or invalid input.
    Input,
    /// Valid input outside the supported scope (non-p-maximal primes, unsupported fields).
    Scope,
    /// A cross-check between independent computations failed.
    Internal,
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("leading coefficient {0} is not invertible modulo {1}")]
    NonInvertibleLeading(BigInt, BigInt),
    #[error("modulus {0} is not prime")]
    CompositeModulus(BigInt),
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial vanishes modulo {0}")]
    VanishesModP(BigInt),
    #[error("polynomial {poly} is reducible over Q (factor {witness})")]
    Reducible { poly: String, witness: String },
    #[error("could not certify irreducibility of {0} within the effort budget")]
    IrreducibilityInconclusive(String),
    #[error("Z[theta] is not {p}-maximal")]
    NotPMaximal { p: u64 },
    #[error("unsupported field or level: {0}")]
    UnsupportedField(String),
    #[error(
        "ray class count not saturated at level {level}: {at_bound} classes at bound {bound}, \
         {at_double} at bound {}",
        2 * bound
    )]
    SaturationFailure {
        level: u32,
        bound: u64,
        at_bound: u64,
        at_double: u64,
    },
    #[error("fingerprints have different bounds ({0} vs {1})")]
    MismatchedBounds(u64, u64),
    #[error("spectrum points belong to different universes or fibers")]
    CrossUniverse,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NotPMaximal { .. } | Error::UnsupportedField(_) => ErrorClass::Scope,
            Error::Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::DivisionByZero => "division_by_zero",
            Error::NonInvertibleLeading(..) => "non_invertible_leading",
            Error::CompositeModulus(_) => "composite_modulus",
            Error::NotMonic(_) => "not_monic",
            Error::VanishesModP(_) => "vanishes_mod_p",
            Error::Reducible { .. } => "reducible",
            Error::IrreducibilityInconclusive(_) => "irreducibility_inconclusive",
            Error::NotPMaximal { .. } => "not_p_maximal",
            Error::UnsupportedField(_) => "unsupported_field",
            Error::SaturationFailure { .. } => "saturation_failure",
            Error::MismatchedBounds(..) => "mismatched_bounds",
            Error::CrossUniverse => "cross_universe",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Internal(_) => "internal",
        }
    }
}
