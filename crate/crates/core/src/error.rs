use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed PD text. `position` is a character offset into the input.
    #[error("syntax error at position {position}: {reason}")]
    Syntax { position: usize, reason: String },

    #[error("arc {arc} appears {count} times (expected exactly 2)")]
    ArcMultiplicity { arc: u32, count: usize },

    #[error("crossing {crossing}: {reason}")]
    Orientation { crossing: usize, reason: String },

    #[error("component starting at arc {arc}: {reason}")]
    Numbering { arc: u32, reason: String },

    #[error("not a planar diagram: split component {part} has V - E + F = {euler}")]
    NonPlanar { part: usize, euler: i64 },

    #[error("checkerboard coloring conflict at crossing {crossing}")]
    Coloring { crossing: usize },

    #[error("diagram has no components")]
    Empty,

    #[error("unknown arc {0}")]
    UnknownArc(u32),

    #[error("unknown crossing {0}")]
    UnknownCrossing(usize),

    /// The operation needs a connected (non-split) diagram with crossings.
    #[error("diagram must be non-split with at least one crossing ({0})")]
    NotConnected(String),

    /// Gradings are only defined for knots.
    #[error("diagram has {0} link components; Kauffman-state gradings need a knot")]
    NotAKnot(usize),

    #[error("state enumeration exceeded the cap of {0} states")]
    TooManyStates(u64),

    #[error("local grading table rejected: {0}")]
    GradingTable(String),

    /// An internal cross-check failed. Always a bug or a corrupted input table.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("catalog: {0}")]
    Catalog(String),
}
