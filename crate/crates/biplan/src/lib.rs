//! Exact optimal min-sum motion planning for two axis-aligned unit-square
//! robots translating in a rectilinear polygonal workspace with holes.
//!
//! The crate provides:
//! - an exact rational geometry kernel (closed rectilinear regions, boolean
//!   operations, square Minkowski dilation);
//! - free-space construction by erosion and the canonical grid over it;
//! - a Dijkstra planner over the implicit two-robot configuration graph that
//!   returns plans of exactly minimal total ℓ1 length;
//! - plan validation (decoupled and time-parameterized, all exact);
//! - brute-force optimality oracles and a seeded random instance generator;
//! - a Partition-based generator of min-makespan hardness instances.

pub mod cli;
pub mod error;
pub mod freespace;
pub mod geometry;
pub mod grid;
pub mod hardness;
pub mod io;
pub mod oracle;
pub mod plan;
pub mod planner;
pub mod region;
pub mod scalar;
pub mod svg;

pub use error::{GeometryError, HardnessError, OracleError, PlanError, WorkspaceError};
pub use freespace::{compute_free_space, Config, FreeSpace, Workspace};
pub use geometry::{l1_dist, linf_dist, AxisSegment, Point, Rect, RectilinearPolygon};
pub use grid::{build_grid_graph, compute_ilines, GridGraph, GridLines};
pub use plan::{DecoupledPlan, Move, Robot, TimedPlan, ValidationReport};
pub use planner::{shortest_plan, single_robot_shortest, SearchResult, SearchStatus};
pub use region::{BoolOp, IntervalSet, Region};
pub use scalar::Scalar;
