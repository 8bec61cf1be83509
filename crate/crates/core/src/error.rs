use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("modulus {0} out of range (must be in 1..=2^31)")]
    InvalidModulus(u64),

    #[error("matrix is not invertible modulo {modulus} (determinant {det})")]
    NonInvertible { modulus: u32, det: u32 },

    #[error("{divisor} does not divide {modulus}")]
    NonDivisor { divisor: u32, modulus: u32 },

    #[error("the non-split Cartan normalizer is only constructed for odd primes (got {0})")]
    EvenPrimeUnsupported(u32),

    #[error("{0} is not a prime power of an odd prime")]
    NotOddPrimePower(u32),

    #[error("group enumeration exceeded the cap of {cap} elements")]
    TooLarge { cap: usize },

    #[error("coset orbit exceeded the cap of {cap} cosets")]
    OrbitTooLarge { cap: usize },

    #[error("subgroup does not have full determinant modulo {0}")]
    NotFullDeterminant(u32),

    #[error("generator {index} of the first group is not in the second group")]
    NotASubgroup { index: usize },

    #[error("{numerator} is not divisible by {denominator}")]
    NonIntegral { numerator: u64, denominator: u64 },

    #[error("invalid unit subgroup: {0}")]
    InvalidUnitSubgroup(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("catalog entry {label}: generator {row} is not invertible modulo {level}")]
    NonInvertibleGenerator {
        label: String,
        row: usize,
        level: u32,
    },

    #[error("duplicate catalog label {label} on line {line}")]
    DuplicateLabel { label: String, line: usize },

    #[error("unknown catalog label {0}")]
    UnknownLabel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for the typed failures raised when an enumeration or orbit cap is hit.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::OrbitTooLarge { .. })
    }

    /// True for failures in reading catalog or group input.
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::NonInvertibleGenerator { .. }
                | Error::DuplicateLabel { .. }
                | Error::UnknownLabel(_)
        )
    }
}
