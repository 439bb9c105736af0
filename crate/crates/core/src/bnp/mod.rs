//! Exact search over the pattern relaxation: pair branching with
//! best-first node selection, the token-limited dive over pattern variables,
//! and the staged solver that runs bounds, heuristics, the dive and the tree
//! in turn.

mod dive;
mod solve;
mod tree;

use crate::colgen::{ColumnPool, Pattern};
use crate::subsolvers::CompactAssignment;
use crate::INTEGRALITY_TOL;

pub use dive::{dive, DiveConfig, DiveOutcome};
pub use solve::{solve, solve_with_steps, PhaseTiming, SolveReport, SolveStatus, SolverConfig};
pub use tree::{branch_and_price, select_branch_pair, BnpConfig, Node, TreeOutcome};

pub(crate) fn is_integral(x: f64) -> bool {
    (x - x.round()).abs() <= INTEGRALITY_TOL
}

/// Packing from fixed patterns plus master columns taken at value one. An
/// item covered more than once stays only in the first pattern holding it.
pub(crate) fn repair_packing(
    n: usize,
    fixed: &[Pattern],
    pool: &ColumnPool,
    solution: &[(usize, f64)],
) -> CompactAssignment {
    let mut taken = vec![false; n];
    let mut bins: Vec<Vec<usize>> = Vec::new();
    let chosen = solution
        .iter()
        .filter(|&&(_, x)| x > 0.5)
        .map(|&(i, _)| pool.get(i));
    for p in fixed.iter().chain(chosen) {
        let bin: Vec<usize> = p.items().iter().copied().filter(|&j| !taken[j]).collect();
        for &j in &bin {
            taken[j] = true;
        }
        bins.push(bin);
    }
    CompactAssignment::from_bins(n, &bins)
}
