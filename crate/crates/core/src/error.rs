use crate::geometry::Chord;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point count {0} must be even and at least 2")]
    BadSize(usize),
    #[error("point count {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },
    #[error("point index {index} out of range for {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("chord endpoints must differ (got {0}-{0})")]
    DegenerateChord(usize),
    #[error("not a plane perfect matching: {0}")]
    NotAMatching(MatchingViolation),
    #[error("matchings live on different point sets ({0} vs {1} points)")]
    ConfigMismatch(usize, usize),
    #[error("chord {0} is not an edge of the matching")]
    NotSubset(Chord),
    #[error("a semicycle needs at least two matching edges")]
    SemicycleTooSmall,
    #[error("edge set is not a semicycle of the matching")]
    InvalidSemicycle,
    #[error("semicycle is not an inside cycle")]
    NotInsideCycle,
    #[error("semicycles overlap")]
    OverlappingSemicycles,
    #[error("operation requires at least {min} points, got {size}")]
    SizeTooSmall { size: usize, min: usize },
    #[error("{size} points exceeds the configured bound {bound}")]
    AboveBound { size: usize, bound: usize },
    #[error("construction failed: {0}")]
    Construction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingViolation {
    #[error("point {0} is not covered")]
    Uncovered(usize),
    #[error("point {0} is covered twice")]
    Duplicate(usize),
    #[error("chords {0} and {1} cross")]
    Crossing(Chord, Chord),
}

pub type Result<T> = std::result::Result<T, Error>;
