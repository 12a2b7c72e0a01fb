use thiserror::Error;

/// Errors shared across the whole crate.
///
/// The CLI maps these onto exit-code categories, so variants are grouped by
/// what went wrong rather than by which module raised them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension m={m} out of supported range {min}..={max}")]
    DimensionRange { m: usize, min: usize, max: usize },

    #[error("flat dimension mu={mu} out of range 0..={m}")]
    FlatDimension { mu: usize, m: usize },

    #[error("points come from different geometries")]
    MixedGeometry,

    #[error("seed set spans dimension {span_dim}, no {target_dim}-flat can contain it")]
    SeedTooLarge { span_dim: usize, target_dim: usize },

    #[error("enumeration of {count} flats exceeds the budget of {budget}")]
    EnumerationBudget { count: u64, budget: u64 },

    #[error("state length {len} does not match code length {expected}")]
    LengthMismatch { len: usize, expected: usize },

    #[error("state decodes to no message (zero syndrome)")]
    NoMessage,

    #[error("state is not a valid memory state for this code")]
    NotAWomState,

    #[error("write {write} cannot store message {message} from state {state}")]
    Unwritable {
        write: usize,
        message: String,
        state: String,
    },

    #[error("write budget of {budget} writes exhausted; erasure required")]
    EraseRequired { budget: usize },

    #[error("cell level {level} out of range for q={q}")]
    LevelOutOfRange { level: u8, q: u8 },

    #[error("outer code alphabet 2^{outer_bits} does not match inner message space 2^{inner_bits}")]
    AlphabetMismatch { outer_bits: usize, inner_bits: usize },

    #[error("repetition length {n} must be odd to take majority votes")]
    EvenRepetition { n: usize },

    #[error("more errors injected than the code can correct ({found} > {capability})")]
    CorruptedState { found: usize, capability: usize },

    #[error("state space of {states} states exceeds the exact-analysis budget of {budget}")]
    StateSpace { states: u64, budget: u64 },

    #[error("unknown code name: {0}")]
    UnknownCode(String),

    #[error("unknown strategy: {0}")]
    UnknownStrategy(String),

    #[error("invalid message label: {0}")]
    BadMessage(String),

    #[error("invalid state string: {0}")]
    BadState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
