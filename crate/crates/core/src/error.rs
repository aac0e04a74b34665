use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordError {
    #[error("pitch class {0} is outside 0..12")]
    PitchClassOutOfRange(i64),
    #[error("interval {0} is outside 0..12")]
    IntervalOutOfRange(i64),
    #[error("interval {0} appears twice in the chord type")]
    DuplicateInterval(u8),
    #[error("chord type must contain the unison interval 0")]
    MissingUnison,
    #[error("malformed chord string {0:?}, expected \"<root>:<i1>,<i2>,...\"")]
    Syntax(String),
    #[error("chord string {0:?} must list intervals in strictly ascending order")]
    NotAscending(String),
    #[error("a transition must connect two different chords")]
    SelfTransition,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Chord(#[from] ChordError),
    #[error("cannot parse chord {symbol:?} at sequence {sequence}, position {position}: {source}")]
    Parse {
        sequence: usize,
        position: usize,
        symbol: String,
        source: ChordError,
    },
    #[error("corpus contains no transition between two different chords")]
    EmptyCorpus,
    #[error("idiom needs at least one chord")]
    EmptyInventory,
    #[error("chord {0} is listed twice")]
    DuplicateChord(String),
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("probability at ({row}, {col}) is {value}, expected a value in [0, 1]")]
    ProbabilityOutOfRange { row: usize, col: usize, value: f64 },
    #[error("diagonal entry ({index}, {index}) is {value}, expected 0")]
    NonzeroDiagonal { index: usize, value: f64 },
    #[error("row {row} sums to {sum}, expected 1 or an all-zero row")]
    RowSum { row: usize, sum: f64 },
    #[error("self transition ({0}, {0}) is not allowed")]
    SelfTransition(usize),
    #[error("chord index {index} is out of range for {len} chords")]
    UnknownIndex { index: usize, len: usize },
    #[error("negative transition weight {value} at ({from}, {to})")]
    NegativeWeight { from: usize, to: usize, value: f64 },
    #[error("at least one argument is required for scoring")]
    NoArguments,
    #[error("idiom {0:?} has no transitions")]
    NoTransitions(String),
    #[error("pool capacity must be at least 1")]
    InvalidCapacity,
    #[error("bridge mass {0} must lie strictly between 0 and 1")]
    InvalidBridgeMass(f64),
    #[error("blend pool is empty after discarding sector-C and zero-rate entries")]
    EmptyPool,
    #[error("cell ({row}, {col}) joins two external chords but has probability {value}")]
    SectorCProbability { row: usize, col: usize, value: f64 },
    #[error("start chord {0} has no outgoing transitions")]
    DeadStart(usize),
    #[error("walk length {0} must be between 1 and {max}", max = crate::sampler::MAX_WALK_LENGTH)]
    InvalidLength(usize),
}
