//! Exact and heuristic algorithms for temporal bin packing: items with fixed
//! time windows are packed into the fewest bins of capacity `W` such that no
//! bin is overloaded at any instant.
//!
//! The crate is organised bottom-up:
//!
//! * [`instance`], [`steps`], [`generator`], [`io`]: problem data, the
//!   reduction to non-dominated time steps, random instances, text format.
//! * [`subsolvers`]: subset sum, exact bin packing, the compact-model search.
//! * [`bounds`]: lower bounds from single steps, the continuous relaxation and
//!   lifted weights.
//! * [`heuristics`]: first-fit variants and the rolling horizon heuristic.
//! * [`simplex`], [`colgen`]: the pattern-based LP relaxation solved by column
//!   generation with temporal knapsack pricing.
//! * [`bnp`]: branch-and-price, token diving, and the staged overall solver.

pub mod bnp;
pub mod bounds;
pub mod colgen;
pub mod examples;
pub mod generator;
pub mod heuristics;
pub mod instance;
pub mod io;
pub mod simplex;
pub mod steps;
pub mod subsolvers;

pub use instance::{Instance, InstanceError, Item};
pub use steps::{reduce_time_steps, vpp_weights, TimeSteps};
pub use subsolvers::{CompactAssignment, SearchBudget};

/// Tolerance for every integrality and fractionality test.
pub const INTEGRALITY_TOL: f64 = 1e-6;
