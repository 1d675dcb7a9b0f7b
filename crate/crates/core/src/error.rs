use thiserror::Error;

use crate::event_log::Activity;

/// Errors raised while reading event logs.
#[derive(Debug, Error)]
pub enum LogError {
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row {row}: empty activity name")]
    EmptyActivity { row: usize },
    #[error("row {row}: cannot parse timestamp `{value}`")]
    Timestamp { row: usize, value: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed XML at byte {position}: {message}")]
    Xml { position: u64, message: String },
    #[error("trace {trace}: event without a concept:name attribute")]
    MissingConceptName { trace: usize },
}

/// Errors raised by Petri net operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("transition t{transition} is not enabled")]
    NotEnabled { transition: usize },
    #[error("state space exceeded {limit} markings")]
    StateSpaceExceeded { limit: usize },
    #[error("final markings must not contain one another")]
    NestedFinalMarkings,
    #[error("accepting net has no final marking")]
    NoFinalMarking,
    #[error("marking has {got} places, net has {expected}")]
    MarkingSize { expected: usize, got: usize },
    #[error("length bound must be positive")]
    ZeroBound,
}

/// Errors raised by segmentation and replay.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegmentError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("trace of length {len} exceeds the exhaustive search limit of {limit}")]
    TraceTooLong { len: usize, limit: usize },
    #[error("replay diverged at move {index}")]
    ReplayDivergence { index: usize },
}

/// Errors raised by evaluation and mining.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("activity `{0}` does not occur in the log")]
    UnknownActivity(Activity),
    #[error("the log contains no events")]
    EmptyLog,
    #[error("the log alphabet is empty")]
    EmptyAlphabet,
    #[error("invalid configuration: {0}")]
    Config(String),
}
