use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("relation is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("ring is not Artinian within degree cap {cap}")]
    NotArtinian { cap: usize },

    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is prime but not compiled in; supported moduli: {1}")]
    UnsupportedModulus(u64, String),

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("module is not of G-dimension zero in the checked window: {0}")]
    NotTotallyReflexive(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("Betti number {rank} at index {index} exceeds the growth limit")]
    GrowthLimit { index: i32, rank: usize },

    #[error("internal consistency fault: {0}")]
    Fault(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::NotHomogeneous(_) => "not_homogeneous",
            Error::NotArtinian { .. } => "not_artinian",
            Error::NotPrime(_) => "not_prime",
            Error::UnsupportedModulus(..) => "unsupported_modulus",
            Error::Parse { .. } => "parse",
            Error::NotTotallyReflexive(_) => "not_totally_reflexive",
            Error::Precondition(_) => "precondition",
            Error::GrowthLimit { .. } => "growth_limit",
            Error::Fault(_) => "internal_fault",
            Error::Io(_) => "io",
        }
    }
}
