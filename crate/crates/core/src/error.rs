use thiserror::Error;

use crate::geometry::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coincident points {a} and {b}")]
    Degenerate { a: Point, b: Point },

    #[error("vertex {first} and vertex {second} are the same point")]
    DuplicatePoint { first: usize, second: usize },

    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("cone count must be at least 4, got {0}")]
    InvalidConeCount(usize),

    #[error("tolerance must be finite and non-negative, got {0}")]
    InvalidTolerance(f64),

    #[error("vertex id {id} out of range for {n} vertices")]
    InvalidVertex { id: usize, n: usize },

    #[error("{operation} requires k = {required}, graph has k = {actual}")]
    UnsupportedConeCount {
        operation: &'static str,
        required: usize,
        actual: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no case applies: {0}")]
    CaseExhaustion(Box<CaseContext>),

    #[error("spanning path construction failed: {0}")]
    ConstructionFailure(String),

    #[error("graph integrity: {0}")]
    GraphIntegrity(String),

    #[error("placement step {step}: expected shortest path {expected:?}, found {found:?}")]
    CheckpointMismatch {
        step: usize,
        expected: Vec<usize>,
        found: Option<Vec<usize>>,
    },

    #[error("adversary cycle {cycle}: {reason}")]
    AdversaryValidation { cycle: usize, reason: String },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: point repeats the one on line {first_line}")]
    DuplicateLine { line: usize, first_line: usize },

    #[error("line {line}, column {column}: coordinate is not finite")]
    NonFiniteLine { line: usize, column: usize },

    #[error("unknown export format {0:?} (expected edge-list, dot or svg)")]
    UnknownFormat(String),

    #[error("graph file: {0}")]
    GraphFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Geometric state captured when the case analysis finds no applicable case.
#[derive(Debug, Clone)]
pub struct CaseContext {
    pub u: usize,
    pub w: usize,
    pub u_pos: Point,
    pub w_pos: Point,
    pub v_w: Option<(usize, Point)>,
    pub v_u: Option<(usize, Point)>,
    pub stage: &'static str,
    /// Cone label (canonical frame) that did not match any case.
    pub label: usize,
}

impl std::fmt::Display for CaseContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "u={} {} w={} {} at {} (canonical cone label {})",
            self.u, self.u_pos, self.w, self.w_pos, self.stage, self.label
        )?;
        if let Some((id, p)) = self.v_w {
            write!(f, ", v_w={id} {p}")?;
        }
        if let Some((id, p)) = self.v_u {
            write!(f, ", v_u={id} {p}")?;
        }
        Ok(())
    }
}
