use thiserror::Error;

/// Errors raised by graph construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown entity {0}")]
    UnknownEntity(usize),
    #[error("self-loop on entity {0}")]
    SelfLoop(usize),
    #[error("empty interval [{t1}, {t2})")]
    EmptyInterval { t1: u64, t2: u64 },
    #[error("interval [{t1}, {t2}) does not intersect lifetime [{start}, {end})")]
    OutsideLifetime { t1: u64, t2: u64, start: u64, end: u64 },
    #[error("time {t} outside lifetime [{start}, {end})")]
    OutOfDomain { t: u64, start: u64, end: u64 },
    #[error("window [{start}, {end}) not contained in lifetime [{lt_start}, {lt_end})")]
    WindowOutOfRange {
        start: u64,
        end: u64,
        lt_start: u64,
        lt_end: u64,
    },
    #[error("empty seed set")]
    EmptySeeds,
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
