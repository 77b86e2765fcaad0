use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative count: c={c}, f={f}")]
    NegativeCount { c: i64, f: i64 },
    #[error("mistress list has length {found}, expected c={expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {value} outside [1, {max}]")]
    OutOfRange { value: i64, max: i64 },
    #[error("Mrs. {0} appears more than once in the mistress list")]
    NonInjective(u32),
    #[error("Mr. {man} is a cheater (c={c}); only Mr. c+1..c+f chase")]
    NotFaithful { man: u32, c: u32 },
    #[error("chase from Mr. {man} exceeded {bound} requests")]
    InternalCycle { man: u32, bound: usize },
    #[error("phi is not a bijection: {0}")]
    InvalidPhi(String),
    #[error("psi is invalid: {0}")]
    InvalidPsi(String),
    #[error("chase from {start} exceeded {bound} steps")]
    NoTermination { start: usize, bound: usize },
    #[error("distribution needs at least one faithful man (f=0)")]
    NoFaithful,
    #[error("{count} scenarios exceeds the enumeration limit {limit}")]
    TooLarge { count: String, limit: u64 },
    #[error("histogram value {0} has zero exact mass")]
    SupportMismatch(i64),
    #[error("a single cell remains after merging")]
    DegenerateSupport,
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable snake_case tag used in machine-readable error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NegativeCount { .. } => "negative_count",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::OutOfRange { .. } => "out_of_range",
            Error::NonInjective(_) => "non_injective",
            Error::NotFaithful { .. } => "not_faithful",
            Error::InternalCycle { .. } => "internal_cycle",
            Error::InvalidPhi(_) => "invalid_phi",
            Error::InvalidPsi(_) => "invalid_psi",
            Error::NoTermination { .. } => "no_termination",
            Error::NoFaithful => "no_faithful",
            Error::TooLarge { .. } => "too_large",
            Error::SupportMismatch(_) => "support_mismatch",
            Error::DegenerateSupport => "degenerate_support",
            Error::InvalidPmf(_) => "invalid_pmf",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}
