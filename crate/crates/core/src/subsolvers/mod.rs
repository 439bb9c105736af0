//! Exact kernels shared by the bounds and heuristics.

mod bpp;
mod compact;
mod knapsack;
mod subset_sum;

pub use bpp::{bpp_lower_bound, bpp_min_bins, first_fit_decreasing, BppOutcome};
pub use compact::{
    compact_solve, compact_solve_window, CompactAssignment, CompactOutcome, CompactStatus,
};
pub use knapsack::fractional_knapsack_bound;
pub use subset_sum::{subset_sum_max, subset_sum_with_items};

/// Node budget at which a search gives up. Node counts stand in for wall
/// clock limits so runs are reproducible: roughly 200k nodes per second of a
/// generic solver's time limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchBudget {
    /// `None` means unlimited.
    pub max_nodes: Option<u64>,
    /// Value of an incumbent known from elsewhere, used as a pruning cutoff
    /// by searches that accept one.
    pub best_known: Option<u32>,
}

impl SearchBudget {
    pub const NODES_PER_SECOND: u64 = 200_000;

    pub const fn unlimited() -> Self {
        Self {
            max_nodes: None,
            best_known: None,
        }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        assert!(max_nodes >= 1, "a finite node budget must be positive");
        Self {
            max_nodes: Some(max_nodes),
            best_known: None,
        }
    }

    /// The node budget equivalent to `seconds` of solver time.
    pub fn seconds(seconds: u64) -> Self {
        Self::nodes(seconds.max(1) * Self::NODES_PER_SECOND)
    }

    pub fn with_best_known(mut self, value: u32) -> Self {
        self.best_known = Some(value);
        self
    }

    #[inline]
    pub(crate) fn exhausted(&self, nodes: u64) -> bool {
        self.max_nodes.is_some_and(|m| nodes >= m)
    }
}
