use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid dimensions must be positive, got {m}x{n}")]
    EmptyGrid { m: usize, n: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("edge {edge} has face {face} on both sides; the dual tree bijection does not apply")]
    SameFaceOnBothSides { edge: usize, face: usize },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("edge set is not a spanning tree: {0}")]
    NotSpanningTree(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("enumeration oracle is capped at {cap} edges, graph has {edges}")]
    TooLargeToEnumerate { edges: usize, cap: usize },

    #[error("k = {k} does not divide the vertex count {n}")]
    NotDivisible { k: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge {0} is not in the tree")]
    EdgeNotInTree(usize),

    #[error("random walk from {start} exceeded the step budget of {budget} without absorption")]
    StepBudgetExceeded { start: usize, budget: u64 },

    #[error("phase {phase}: {reason}")]
    InvalidPlan { phase: usize, reason: String },

    #[error("dynamic forest: {0}")]
    ForestPrecondition(String),

    #[error("no sample accepted within {rounds} rounds ({detail})")]
    RoundCapExceeded { rounds: u64, detail: String },

    #[error("no boundary cycle within {delta} of the drawing's outer boundary (achieved {achieved})")]
    NoBoundaryCycle { delta: f64, achieved: f64 },

    #[error("{classes} classes cannot be matched to {faces} faces")]
    FaceCountMismatch { classes: usize, faces: usize },

    #[error("geometry input is empty")]
    EmptyGeometry,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
