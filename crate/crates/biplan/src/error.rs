//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("segment endpoints differ in both coordinates")]
    NotAxisParallel,
    #[error("ring has fewer than 4 vertices")]
    TooFewVertices,
    #[error("ring contains a zero-length edge")]
    DegenerateEdge,
    #[error("ring contains a dangling edge")]
    DanglingEdge,
    #[error("ring is self-intersecting or self-touching")]
    SelfIntersecting,
    #[error("rings touch or intersect each other")]
    RingsTouch,
    #[error("hole lies outside the outer ring")]
    HoleOutsideOuter,
    #[error("holes are nested")]
    HolesNested,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkspaceError {
    #[error("invalid workspace: {0}")]
    InvalidWorkspace(#[from] GeometryError),
    #[error("free space violates the gap property: blocked gap of length {gap} on {axis} line at {coord}")]
    GapPropertyViolated {
        axis: &'static str,
        coord: String,
        gap: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("start or goal configuration is not free")]
    StartOrGoalNotFree,
    #[error("start or goal is not a grid point; the grid was built without these terminals")]
    StartOrGoalNotOnGrid,
    #[error("point is not in the free space")]
    PointNotFree,
    #[error("plan is discontinuous at move {0}")]
    DiscontinuousPlan(usize),
    #[error("plan failed validation: {0}")]
    InvalidPlan(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("spacing must divide 1/2 and all instance coordinates; offending value {0}")]
    SpacingViolation(String),
    #[error("coupled lattice needs {needed} node pairs, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("random instance generation exhausted after {0} attempts")]
    GenerationExhausted(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("partition values must be positive")]
    NonPositiveValue,
    #[error("partition values must be nonempty")]
    EmptyInstance,
    #[error("index sets must disjointly cover 1..=m; offending index {0}")]
    InvalidPartition(usize),
    #[error("gadget geometry constraint violated: {0}")]
    GeometryConstraintViolated(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}
