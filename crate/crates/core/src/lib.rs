//! Non-adaptive relaxation schedules for single-source shortest paths.
//!
//! A schedule is a fixed sequence of edges chosen from the graph alone. Its
//! cost on a weighting is the number of steps until every tentative distance
//! is exact. The crate builds schedules, executes them against an exact
//! oracle, and generates weightings on which they are provably slow.

pub mod adversary;
pub mod error;
pub mod graph;
pub mod harness;
pub mod network;
pub mod oracle;
pub mod relax;
pub mod schedule;
pub mod sparse;

pub use error::{Error, Result};
pub use graph::{Digraph, Dist, Instance, WeightAssignment};
pub use relax::{execute_schedule, ExecutionResult, ReducedCost};
pub use schedule::RelaxationSchedule;
