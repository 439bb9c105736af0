//! Branch-and-price with pair branching: a node either keeps two items
//! together (they merge into one pricing group) or apart (a pricing
//! conflict).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::colgen::{solve_master, BranchState, ColumnPool, MasterConfig, MasterOutcome, MasterStatus, Pattern};
use crate::heuristics::Solution;
use crate::instance::Instance;
use crate::steps::TimeSteps;
use crate::subsolvers::{CompactAssignment, SearchBudget};
use crate::INTEGRALITY_TOL;

use super::{is_integral, repair_packing};

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub branch: BranchState,
    /// Lower bound inherited from the parent's LP, raised once solved.
    pub lower_bound: f64,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnpConfig {
    /// Budget on the number of nodes whose master is solved.
    pub node_budget: SearchBudget,
    pub master: MasterConfig,
}

impl Default for BnpConfig {
    fn default() -> Self {
        Self {
            node_budget: SearchBudget::nodes(5_000),
            master: MasterConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeOutcome {
    pub best: Option<Solution>,
    /// Valid lower bound on the optimum.
    pub lower_bound: u32,
    /// True if the tree was fully explored, making `best` optimal.
    pub complete: bool,
    pub nodes: u64,
    pub root_lp: Option<f64>,
}

fn bound_of(lp: f64) -> u32 {
    if lp.is_finite() {
        (lp - INTEGRALITY_TOL).ceil().max(0.0) as u32
    } else {
        u32::MAX
    }
}

/// Pairwise co-occurrence `gamma[r][s]`: total value of the master columns
/// containing both `r` and `s`.
fn co_occurrence(n: usize, pool: &ColumnPool, solution: &[(usize, f64)]) -> Vec<Vec<f64>> {
    let mut gamma = vec![vec![0.0; n]; n];
    for &(i, x) in solution {
        let items = pool.get(i).items();
        for (a, &r) in items.iter().enumerate() {
            for &s in &items[a + 1..] {
                gamma[r][s] += x;
            }
        }
    }
    gamma
}

/// First pair `(r, s)`, `r < s`, in lexicographic order whose
/// co-occurrence in the master solution is fractional. Pairs already
/// merged or separated by `branch` are skipped.
pub fn select_branch_pair(
    n: usize,
    branch: &BranchState,
    pool: &ColumnPool,
    solution: &[(usize, f64)],
) -> Option<(usize, usize, f64)> {
    let gamma = co_occurrence(n, pool, solution);
    let roots = branch.group_roots(n);
    let free = |r: usize, s: usize| roots[r] != roots[s] && !is_separated(branch, r, s);
    (0..n)
        .flat_map(|r| (r + 1..n).map(move |s| (r, s)))
        .find(|&(r, s)| free(r, s) && !is_integral(gamma[r][s]))
        .map(|(r, s)| (r, s, gamma[r][s]))
}

fn is_separated(branch: &BranchState, r: usize, s: usize) -> bool {
    branch
        .diff_pairs
        .iter()
        .any(|&(a, b)| (a, b) == (r, s) || (b, a) == (r, s))
}

/// What to do with a solved node that has no fractional pair.
enum Resolution {
    Packing(CompactAssignment),
    Branch(usize, usize),
}

/// Handles a node whose pair values are all integral: items linked by a
/// pair of value at least one form components; if each component fits in
/// one bin those components are the node's optimal packing (one bin per
/// component is a lower bound on the LP). Otherwise the first free pair that
/// appears together in the master solution, or failing that the first free
/// pair at all, is branched on.
fn resolve_integral_pairs(
    instance: &Instance,
    steps: &TimeSteps,
    branch: &BranchState,
    pool: &ColumnPool,
    outcome: &MasterOutcome,
    proven: bool,
) -> Resolution {
    let n = instance.len();
    let fixed = branch.fixed_mask(n);
    let gamma = co_occurrence(n, pool, &outcome.solution);
    let roots = branch.group_roots(n);
    let free_pairs = || {
        (0..n)
            .flat_map(|r| (r + 1..n).map(move |s| (r, s)))
            .filter(|&(r, s)| !fixed[r] && !fixed[s] && roots[r] != roots[s] && !is_separated(branch, r, s))
    };

    if proven {
        let mut component: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while c[r] != r {
                r = c[r];
            }
            c[x] = r;
            r
        }
        for r in 0..n {
            for s in r + 1..n {
                if gamma[r][s] > 0.5 || roots[r] == roots[s] {
                    let (a, b) = (find(&mut component, r), find(&mut component, s));
                    component[a.max(b)] = a.min(b);
                }
            }
        }
        let mut bins: Vec<Vec<usize>> = vec![Vec::new(); n];
        for j in (0..n).filter(|&j| !fixed[j]) {
            let c = find(&mut component, j);
            bins[c].push(j);
        }
        let bins: Vec<Vec<usize>> = branch
            .fixed_patterns
            .iter()
            .map(|p| p.items().to_vec())
            .chain(bins.into_iter().filter(|b| !b.is_empty()))
            .collect();
        let feasible = bins.iter().all(|b| {
            let p = Pattern::new(b.clone());
            p.is_feasible(instance, steps) && branch.admits(&p, &vec![false; n], &roots)
                || branch.fixed_patterns.contains(&p)
        });
        if feasible {
            return Resolution::Packing(CompactAssignment::from_bins(n, &bins));
        }
    }
    let pick = free_pairs()
        .find(|&(r, s)| gamma[r][s] > INTEGRALITY_TOL)
        .or_else(|| free_pairs().next());
    match pick {
        Some((r, s)) => Resolution::Branch(r, s),
        None => {
            // every pair is decided: the groups are the only packing left
            let bins: Vec<Vec<usize>> = branch
                .fixed_patterns
                .iter()
                .map(|p| p.items().to_vec())
                .chain(branch.groups(n).into_iter().filter(|g| g.iter().all(|&j| !fixed[j])))
                .collect();
            Resolution::Packing(CompactAssignment::from_bins(n, &bins))
        }
    }
}

struct Queued {
    node: Node,
    seq: u64,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    /// Max-heap order: smaller bound, then deeper, then earlier first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .node
            .lower_bound
            .total_cmp(&self.node.lower_bound)
            .then(self.node.depth.cmp(&other.node.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Best-first branch-and-price from the root, starting from the columns in
/// `pool` and an optional incumbent.
pub fn branch_and_price(
    instance: &Instance,
    steps: &TimeSteps,
    config: &BnpConfig,
    pool: &mut ColumnPool,
    incumbent: Option<Solution>,
) -> TreeOutcome {
    let n = instance.len();
    let mut best = incumbent;
    let mut best_value = best.as_ref().map_or(u32::MAX, |s| s.value);
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Queued {
        node: Node {
            branch: BranchState::default(),
            lower_bound: 0.0,
            depth: 0,
        },
        seq,
    });
    let mut nodes = 0u64;
    let mut root_lp = None;
    let mut global_lb = 0u32;
    let mut complete = true;

    while let Some(Queued { node, .. }) = heap.pop() {
        // best-first: the popped bound is the smallest open one
        global_lb = global_lb.max(bound_of(node.lower_bound).min(best_value));
        if bound_of(node.lower_bound) >= best_value {
            continue;
        }
        if config.node_budget.exhausted(nodes) {
            heap.push(Queued { node, seq: 0 });
            complete = false;
            break;
        }
        nodes += 1;
        let mut master_cfg = config.master;
        master_cfg.cutoff = (best_value != u32::MAX).then_some(best_value);
        let outcome = solve_master(instance, steps, &node.branch, pool, &master_cfg);
        if node.depth == 0 && outcome.status == MasterStatus::Optimal {
            root_lp = Some(outcome.value);
        }
        let proven = outcome.status == MasterStatus::Optimal;
        let lb = match outcome.status {
            MasterStatus::Infeasible => continue,
            MasterStatus::Cutoff => continue,
            MasterStatus::Optimal => outcome.value,
            MasterStatus::Unproven => outcome.lower_bound,
        }
        .max(node.lower_bound);
        if bound_of(lb) >= best_value {
            continue;
        }

        if outcome.is_integral() {
            let assignment = repair_packing(n, &node.branch.fixed_patterns, pool, &outcome.solution);
            debug_assert!(assignment.is_feasible(instance));
            if (assignment.bins_used() as u32) < best_value {
                best_value = assignment.bins_used() as u32;
                best = Some(Solution::new(assignment, "branch-and-price"));
            }
            if proven {
                continue;
            }
        }

        let decision = match select_branch_pair(n, &node.branch, pool, &outcome.solution) {
            Some((r, s, _)) => Resolution::Branch(r, s),
            None => resolve_integral_pairs(instance, steps, &node.branch, pool, &outcome, proven),
        };
        match decision {
            Resolution::Packing(assignment) => {
                debug_assert!(assignment.is_feasible(instance));
                let sol = Solution::new(assignment, "branch-and-price");
                if sol.value < best_value {
                    best_value = sol.value;
                    best = Some(sol);
                }
            }
            Resolution::Branch(r, s) => {
                let mut same = node.branch.clone();
                same.same_pairs.push((r, s));
                let mut apart = node.branch.clone();
                apart.diff_pairs.push((r, s));
                for branch in [same, apart] {
                    seq += 1;
                    heap.push(Queued {
                        node: Node {
                            branch,
                            lower_bound: lb,
                            depth: node.depth + 1,
                        },
                        seq,
                    });
                }
            }
        }
    }
    let open_min = heap
        .iter()
        .map(|q| bound_of(q.node.lower_bound))
        .min()
        .unwrap_or(best_value);
    let lower_bound = if complete {
        best_value
    } else {
        global_lb.max(open_min.min(best_value))
    };
    TreeOutcome {
        best,
        lower_bound: if n == 0 { 0 } else { lower_bound },
        complete,
        nodes,
        root_lp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::steps::reduce_time_steps;

    fn run(inst: &Instance) -> TreeOutcome {
        let steps = reduce_time_steps(inst);
        branch_and_price(inst, &steps, &BnpConfig::default(), &mut ColumnPool::new(), None)
    }

    #[test]
    fn pair_selection() {
        let mut pool = ColumnPool::new();
        for p in [vec![1, 2], vec![1, 3], vec![0, 4], vec![2, 3]] {
            pool.insert(Pattern::new(p));
        }
        let sol = vec![(0, 0.5), (1, 0.5), (2, 1.0), (3, 0.5)];
        let got = select_branch_pair(5, &BranchState::default(), &pool, &sol);
        assert_eq!(got, Some((1, 2, 0.5)));
        assert_eq!(select_branch_pair(5, &BranchState::default(), &pool, &[(2, 1.0)]), None);

        let mut pool = ColumnPool::new();
        pool.insert(Pattern::new(vec![0, 1]));
        pool.insert(Pattern::new(vec![0, 1, 2]));
        let sol = vec![(0, 0.5), (1, 0.5)];
        // gamma(0,1) = 1 is integral, gamma(0,2) = 0.5 is the first fractional
        assert_eq!(select_branch_pair(3, &BranchState::default(), &pool, &sol), Some((0, 2, 0.5)));
    }

    #[test]
    fn examples_solved() {
        for (inst, v) in [
            (examples::two_steps(), 3),
            (examples::five_items(), 2),
            (examples::lb0_gap(), 11),
        ] {
            let out = run(&inst);
            assert!(out.complete);
            let best = out.best.unwrap();
            assert_eq!(best.value, v, "{}", inst.name());
            assert!(best.is_feasible(&inst));
            assert_eq!(out.lower_bound, v);
        }
    }

    #[test]
    fn budget_reports_bound() {
        let inst = examples::lb0_gap();
        let steps = reduce_time_steps(&inst);
        let cfg = BnpConfig {
            node_budget: SearchBudget::nodes(1),
            ..BnpConfig::default()
        };
        let out = branch_and_price(&inst, &steps, &cfg, &mut ColumnPool::new(), None);
        assert!(out.lower_bound <= 11);
        if !out.complete {
            assert!(out.lower_bound >= 9);
        }
    }
}
