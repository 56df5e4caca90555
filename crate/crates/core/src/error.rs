use thiserror::Error;

use crate::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("letter for generator {generator} out of range (group has {count} generators)")]
    LetterOutOfRange { generator: usize, count: usize },
    #[error("cannot parse word `{0}`")]
    WordSyntax(String),
    #[error("index {0} is beyond the size of a finite group")]
    IndexOutOfRange(Vertex),
    #[error("vertex name overflow while ranking a word of length {0}")]
    IndexOverflow(usize),
    #[error("numbering enumeration passed {0} elements")]
    EnumerationLimit(usize),
    #[error("fuel exhausted after {spent} steps")]
    FuelExhausted { spent: u64 },
    #[error("graph is not connected")]
    Disconnected,
    #[error("endpoints must be distinct")]
    SameEndpoints,
    #[error("empty patch")]
    EmptyPatch,
    #[error("vertex {0} is not in the patch")]
    NotInPatch(Vertex),
    #[error("3-paths overlap at vertex {0}")]
    PathOverlap(Vertex),
    #[error("jump from {from} to {to} is longer than 3")]
    JumpTooLong { from: Vertex, to: Vertex },
    #[error("deleted set does not contain the ends certificate separator")]
    SeparatorMissing,
    #[error("two-ended mode requires an ends certificate")]
    MissingCertificate,
    #[error("both semideciders halted: the declared number of ends is wrong")]
    InconsistentEnds,
    #[error("the graph is declared with more than two ends; no transitive construction applies")]
    TooManyEnds,
    #[error("3-path {0}")]
    NotExtensible(&'static str),
    #[error("pattern coding is inconsistent at words {0} and {1}")]
    InconsistentCoding(String, String),
    #[error("patch domain is not a ball around the identity")]
    NotABall,
    #[error("arrow offset `{0}` is outside the ball of radius J")]
    LetterOutsideAlphabet(String),
    #[error("sequence covers [{have_min}, {have_max}] but positions [{need_min}, {need_max}] are required")]
    InsufficientRange { need_min: i64, need_max: i64, have_min: i64, have_max: i64 },
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("operation requires {0} mode")]
    WrongMode(&'static str),
    #[error("suite `{0}` produced no checks")]
    EmptySuite(String),
    #[error("configuration error: {0}")]
    Config(String),
}
