//! Depth-first dive over pattern variables. The left child fixes the most
//! nearly integral fractional column to one; the right child forbids it and
//! costs a token. Tokens spent in a subtree come back on backtracking.

use crate::colgen::{solve_master, BranchState, ColumnPool, MasterConfig, MasterOutcome, MasterStatus, Pattern};
use crate::heuristics::Solution;
use crate::instance::Instance;
use crate::steps::TimeSteps;
use crate::subsolvers::SearchBudget;
use crate::INTEGRALITY_TOL;

use super::{is_integral, repair_packing};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiveConfig {
    /// Right branches allowed along any root-to-leaf path.
    pub tokens: u32,
    /// Budget on master solves over the whole dive.
    pub tree_budget: SearchBudget,
    pub master: MasterConfig,
    /// Stop once a packing with this many bins is found.
    pub target: u32,
}

impl Default for DiveConfig {
    fn default() -> Self {
        Self {
            tokens: 1,
            tree_budget: SearchBudget::nodes(2_000),
            master: MasterConfig::default(),
            target: 0,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DiveOutcome {
    pub best: Option<Solution>,
    pub nodes: u64,
    /// Leaves reached with an integral master solution.
    pub complete_dives: u64,
    pub budget_exhausted: bool,
}

struct Diver<'a> {
    instance: &'a Instance,
    steps: &'a TimeSteps,
    config: DiveConfig,
    pool: &'a mut ColumnPool,
    out: DiveOutcome,
    cutoff: u32,
}

impl Diver<'_> {
    fn done(&self) -> bool {
        self.out.budget_exhausted || self.out.best.as_ref().is_some_and(|s| s.value <= self.config.target)
    }

    fn visit(&mut self, branch: BranchState, tokens: u32, solved: Option<MasterOutcome>) {
        if self.done() {
            return;
        }
        let outcome = match solved {
            Some(o) => o,
            None => {
                if self.config.tree_budget.exhausted(self.out.nodes) {
                    self.out.budget_exhausted = true;
                    return;
                }
                self.out.nodes += 1;
                let mut cfg = self.config.master;
                cfg.cutoff = (self.cutoff != u32::MAX).then_some(self.cutoff);
                solve_master(self.instance, self.steps, &branch, self.pool, &cfg)
            }
        };
        match outcome.status {
            MasterStatus::Infeasible | MasterStatus::Cutoff => return,
            MasterStatus::Optimal | MasterStatus::Unproven => {}
        }
        if (outcome.lower_bound - INTEGRALITY_TOL).ceil() >= f64::from(self.cutoff) {
            return;
        }
        if outcome.is_integral() {
            let assignment = repair_packing(self.instance.len(), &branch.fixed_patterns, self.pool, &outcome.solution);
            debug_assert!(assignment.is_feasible(self.instance));
            self.out.complete_dives += 1;
            let value = assignment.bins_used() as u32;
            if value < self.cutoff {
                self.cutoff = value;
                self.out.best = Some(Solution::new(assignment, "dive"));
            }
            return;
        }
        let Some(pattern) = pick_column(self.pool, &outcome) else {
            return;
        };

        let mut left = branch.clone();
        left.fixed_patterns.push(pattern.clone());
        self.visit(left, tokens, None);
        if tokens > 0 {
            let mut right = branch;
            right.forbidden_patterns.push(pattern);
            self.visit(right, tokens - 1, None);
        }
    }
}

/// Fractional column closest to one; ties go to the larger pattern, then
/// the lexicographically smaller one.
fn pick_column(pool: &ColumnPool, outcome: &MasterOutcome) -> Option<Pattern> {
    outcome
        .solution
        .iter()
        .filter(|&&(_, x)| !is_integral(x))
        .map(|&(i, x)| (x, pool.get(i)))
        .max_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.len().cmp(&b.1.len()))
                .then(b.1.cmp(a.1))
        })
        .map(|(_, p)| p.clone())
}

/// Runs the dive from the root. `root` may carry the already solved root
/// master (over `pool`) so it is not solved again; `incumbent` prunes
/// subtrees that cannot beat it.
pub fn dive(
    instance: &Instance,
    steps: &TimeSteps,
    config: &DiveConfig,
    pool: &mut ColumnPool,
    root: Option<MasterOutcome>,
    incumbent: Option<u32>,
) -> DiveOutcome {
    let mut diver = Diver {
        instance,
        steps,
        config: *config,
        pool,
        out: DiveOutcome::default(),
        cutoff: incumbent.unwrap_or(u32::MAX),
    };
    if instance.is_empty() {
        diver.out.best = Some(Solution::new(crate::subsolvers::CompactAssignment::empty(0), "dive"));
        return diver.out;
    }
    diver.visit(BranchState::default(), config.tokens, root);
    diver.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::steps::reduce_time_steps;

    fn run(inst: &Instance, tokens: u32) -> DiveOutcome {
        let steps = reduce_time_steps(inst);
        let cfg = DiveConfig {
            tokens,
            ..DiveConfig::default()
        };
        dive(inst, &steps, &cfg, &mut ColumnPool::new(), None, None)
    }

    #[test]
    fn examples() {
        let out = run(&examples::five_items(), 1);
        assert_eq!(out.best.unwrap().value, 2);
        let out = run(&examples::two_steps(), 0);
        let best = out.best.unwrap();
        assert_eq!(best.value, 3);
        assert!(best.is_feasible(&examples::two_steps()));
        assert!(out.nodes <= 5);
    }

    #[test]
    fn incumbent_prunes() {
        let inst = examples::two_steps();
        let steps = reduce_time_steps(&inst);
        let out = dive(&inst, &steps, &DiveConfig::default(), &mut ColumnPool::new(), None, Some(3));
        assert!(out.best.is_none());
    }
}
