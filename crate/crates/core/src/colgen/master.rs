//! The restricted master LP and the column generation loop.

use std::time::Instant;

use crate::bounds::BoundReport;
use crate::heuristics::greedy_best;
use crate::instance::Instance;
use crate::simplex::{LinearProgram, LpStatus, SimplexOptions, SimplexSolver};
use crate::steps::TimeSteps;
use crate::subsolvers::SearchBudget;
use crate::INTEGRALITY_TOL;

use super::pricing::{price, PricingProblem};
use super::{BranchState, ColumnPool, Pattern};

/// Pricing values at or below `1 + PRICING_TOL` end column generation.
const PRICING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterConfig {
    /// Node budget of each pricing call.
    pub pricing_budget: SearchBudget,
    /// Cap on LP solve / pricing rounds.
    pub max_rounds: usize,
    pub simplex: SimplexOptions,
    /// Stop as soon as the Lagrangian bound shows the node value is at least
    /// this (the incumbent, for pruning).
    pub cutoff: Option<u32>,
}

impl Default for MasterConfig {
    fn default() -> Self {
        Self {
            pricing_budget: SearchBudget::seconds(10),
            max_rounds: 20_000,
            simplex: SimplexOptions::default(),
            cutoff: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MasterStatus {
    /// Column generation converged; `value` is the LP optimum of the node.
    Optimal,
    /// No packing satisfies the branch.
    Infeasible,
    /// `lower_bound` reached the cutoff before convergence.
    Cutoff,
    /// A budget or iteration cap ended the loop; `value` is only an upper
    /// bound on the LP optimum.
    Unproven,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MasterOutcome {
    pub status: MasterStatus,
    /// Fixed patterns plus the last restricted master objective.
    pub value: f64,
    /// Valid lower bound on the node's LP value (Farley bound, or `value`
    /// once converged).
    pub lower_bound: f64,
    /// One dual per item; zero for items of fixed patterns.
    pub duals: Vec<f64>,
    /// Pool index and value of every positive master column.
    pub solution: Vec<(usize, f64)>,
    /// Total value on the penalized artificial columns; positive only while
    /// some item has no admissible column yet.
    pub artificial: f64,
    pub rounds: usize,
    pub columns_added: usize,
    pub pricing_nodes: u64,
    /// Restricted master objective after each LP solve.
    pub history: Vec<f64>,
}

impl MasterOutcome {
    fn terminal(status: MasterStatus, n: usize, value: f64) -> Self {
        Self {
            status,
            value,
            lower_bound: value,
            duals: vec![0.0; n],
            solution: Vec::new(),
            artificial: 0.0,
            rounds: 0,
            columns_added: 0,
            pricing_nodes: 0,
            history: Vec::new(),
        }
    }

    /// True if no artificial is used and every positive column value is
    /// integral.
    pub fn is_integral(&self) -> bool {
        self.artificial <= 1e-7
            && self
                .solution
            .iter()
            .all(|&(_, x)| (x - x.round()).abs() <= INTEGRALITY_TOL)
    }
}

/// Solves the master LP of the node described by `branch` by column
/// generation. Pool columns that violate the branch are ignored; every
/// merged group gets its own column, and new columns are added to `pool`.
pub fn solve_master(
    instance: &Instance,
    steps: &TimeSteps,
    branch: &BranchState,
    pool: &mut ColumnPool,
    config: &MasterConfig,
) -> MasterOutcome {
    let n = instance.len();
    let fixed = branch.fixed_mask(n);
    let fixed_count = branch.fixed_patterns.len() as f64;
    let roots = branch.group_roots(n);
    if branch.diff_pairs.iter().any(|&(a, b)| roots[a] == roots[b]) {
        return MasterOutcome::terminal(MasterStatus::Infeasible, n, f64::INFINITY);
    }
    for group in branch.groups(n) {
        if group.iter().any(|&j| fixed[j]) {
            continue;
        }
        let p = Pattern::new(group);
        if !p.is_feasible(instance, steps) {
            return MasterOutcome::terminal(MasterStatus::Infeasible, n, f64::INFINITY);
        }
        pool.insert(p);
    }

    let mut row_of = vec![usize::MAX; n];
    let mut m = 0;
    for j in 0..n {
        if !fixed[j] {
            row_of[j] = m;
            m += 1;
        }
    }
    if m == 0 {
        return MasterOutcome::terminal(MasterStatus::Optimal, n, fixed_count);
    }

    let rows_of = |p: &Pattern| p.items().iter().map(|&j| row_of[j]).collect::<Vec<_>>();
    let mut solver = SimplexSolver::with_options(LinearProgram::new(m), config.simplex);
    let mut column_pool: Vec<Option<usize>> = Vec::new();
    for (i, p) in pool.iter().enumerate() {
        if branch.admits(p, &fixed, &roots) {
            solver.add_unit_column(1.0, &rows_of(p));
            column_pool.push(Some(i));
        }
    }
    let penalty = (m + 1) as f64;
    for r in 0..m {
        solver.add_unit_column(penalty, &[r]);
        column_pool.push(None);
    }

    let mut out = MasterOutcome::terminal(MasterStatus::Unproven, n, f64::INFINITY);
    out.lower_bound = fixed_count;
    loop {
        if out.rounds >= config.max_rounds {
            out.status = MasterStatus::Unproven;
            break;
        }
        out.rounds += 1;
        let lp = solver.solve();
        if lp.status != LpStatus::Optimal {
            out.status = MasterStatus::Unproven;
            break;
        }
        out.value = fixed_count + lp.objective;
        out.history.push(lp.objective);
        out.duals = vec![0.0; n];
        for j in 0..n {
            if !fixed[j] {
                out.duals[j] = lp.duals[row_of[j]].max(0.0);
            }
        }
        out.solution.clear();
        out.artificial = 0.0;
        for (k, &x) in lp.primal.iter().enumerate() {
            if x > 1e-9 {
                match column_pool[k] {
                    Some(i) => out.solution.push((i, x)),
                    None => out.artificial += x,
                }
            }
        }

        let pp = PricingProblem::new(instance, steps, branch, &out.duals);
        let priced = price(&pp, config.pricing_budget);
        out.pricing_nodes += priced.nodes;
        if !priced.exact {
            out.status = MasterStatus::Unproven;
            break;
        }
        let z = priced.value.max(1.0);
        out.lower_bound = out.lower_bound.max(fixed_count + lp.objective / z);
        if priced.value <= 1.0 + PRICING_TOL {
            out.lower_bound = out.value;
            out.status = if out.artificial > 1e-7 {
                MasterStatus::Infeasible
            } else {
                MasterStatus::Optimal
            };
            break;
        }
        if let Some(c) = config.cutoff {
            if (out.lower_bound - INTEGRALITY_TOL).ceil() >= f64::from(c) {
                out.status = MasterStatus::Cutoff;
                break;
            }
        }
        let (index, new) = pool.insert(priced.pattern.clone());
        if !new && column_pool.contains(&Some(index)) {
            // numerically converged: the column is already in the master
            out.lower_bound = out.value;
            out.status = MasterStatus::Optimal;
            break;
        }
        solver.add_unit_column(1.0, &rows_of(&priced.pattern));
        column_pool.push(Some(index));
        out.columns_added += 1;
    }
    if out.status == MasterStatus::Infeasible {
        out.value = f64::INFINITY;
        out.lower_bound = f64::INFINITY;
    }
    out
}

/// Root relaxation together with the pool it produced, for reuse by later
/// searches.
#[derive(Debug, Clone)]
pub struct RootRelaxation {
    pub bound: BoundReport,
    pub master: MasterOutcome,
    pub pool: ColumnPool,
}

/// Column generation at the root, seeded with `initial` columns.
pub fn root_relaxation(
    instance: &Instance,
    steps: &TimeSteps,
    initial: &[Pattern],
    config: &MasterConfig,
) -> RootRelaxation {
    let clock = Instant::now();
    let mut pool = ColumnPool::new();
    for p in initial.iter().filter(|p| !p.is_empty()) {
        pool.insert(p.clone());
    }
    let master = solve_master(instance, steps, &BranchState::default(), &mut pool, config);
    let exact = master.status == MasterStatus::Optimal;
    let value = if master.value.is_finite() {
        (master.value - INTEGRALITY_TOL).ceil().max(0.0) as u32
    } else {
        0
    };
    RootRelaxation {
        bound: BoundReport {
            name: "LB3",
            value,
            witness_step: None,
            exact,
            elapsed: clock.elapsed(),
        },
        master,
        pool,
    }
}

/// Rounded-up pattern LP value, starting from the best greedy packing.
pub fn lb3(instance: &Instance, steps: &TimeSteps) -> BoundReport {
    let greedy = greedy_best(instance, steps);
    let initial: Vec<Pattern> = greedy.bins().into_iter().map(Pattern::new).collect();
    root_relaxation(instance, steps, &initial, &MasterConfig::default()).bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::instance::Item;
    use crate::steps::reduce_time_steps;

    fn root(inst: &Instance) -> MasterOutcome {
        let steps = reduce_time_steps(inst);
        root_relaxation(inst, &steps, &[], &MasterConfig::default()).master
    }

    #[test]
    fn root_values() {
        let out = root(&examples::two_steps());
        assert_eq!(out.status, MasterStatus::Optimal);
        assert!((out.value - 2.5).abs() < 1e-6);
        assert!((root(&examples::five_items()).value - 1.5).abs() < 1e-6);
        let one = Instance::new("one", 4, vec![Item::new(3, 0, 1)]).unwrap();
        assert!((root(&one).value - 1.0).abs() < 1e-6);
        for h in out.history.windows(2) {
            assert!(h[1] <= h[0] + 1e-9);
        }
    }

    #[test]
    fn lb3_examples() {
        for (inst, v) in [
            (examples::two_steps(), 3),
            (examples::five_items(), 2),
            (Instance::new("one", 4, vec![Item::new(3, 0, 1)]).unwrap(), 1),
        ] {
            let steps = reduce_time_steps(&inst);
            let b = lb3(&inst, &steps);
            assert_eq!(b.value, v, "{}", inst.name());
            assert!(b.exact);
        }
    }

    #[test]
    fn branch_restrictions() {
        let inst = examples::two_steps();
        let steps = reduce_time_steps(&inst);
        let mut pool = ColumnPool::new();
        let cfg = MasterConfig::default();
        // items 1 and 2 apart, plus 1 and 2 together: contradictory
        let bad = BranchState {
            same_pairs: vec![(1, 2)],
            diff_pairs: vec![(2, 1)],
            ..BranchState::default()
        };
        assert_eq!(solve_master(&inst, &steps, &bad, &mut pool, &cfg).status, MasterStatus::Infeasible);
        // items 0 and 1 cannot share a bin at the first step
        let heavy = BranchState {
            same_pairs: vec![(0, 1)],
            ..BranchState::default()
        };
        assert_eq!(solve_master(&inst, &steps, &heavy, &mut pool, &cfg).status, MasterStatus::Infeasible);
        let fixed = BranchState {
            fixed_patterns: vec![Pattern::new(vec![0, 4])],
            ..BranchState::default()
        };
        let out = solve_master(&inst, &steps, &fixed, &mut pool, &cfg);
        assert_eq!(out.status, MasterStatus::Optimal);
        assert!((out.value - 2.5).abs() < 1e-6, "{}", out.value);
        assert_eq!(out.duals[0], 0.0);
        // item 0 only fits alone or next to item 3 or item 4
        let forbid = BranchState {
            forbidden_patterns: vec![Pattern::new(vec![0]), Pattern::new(vec![0, 3])],
            diff_pairs: vec![(0, 4)],
            ..BranchState::default()
        };
        let out = solve_master(&inst, &steps, &forbid, &mut pool, &cfg);
        assert_eq!(out.status, MasterStatus::Infeasible);
    }
}
