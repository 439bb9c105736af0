//! Temporal knapsack pricing: choose item groups of maximum total dual value
//! such that every step's capacity holds, no two chosen groups conflict and
//! the chosen set is not a forbidden pattern.

use crate::instance::Instance;
use crate::steps::TimeSteps;
use crate::subsolvers::{fractional_knapsack_bound, SearchBudget};

use super::{BranchState, Pattern};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Group {
    members: Vec<usize>,
    profit: f64,
    /// First step with positive weight and the weights from there on.
    first_step: usize,
    weights: Vec<u32>,
}

impl Group {
    fn weight_at(&self, t: usize) -> u32 {
        t.checked_sub(self.first_step)
            .and_then(|k| self.weights.get(k).copied())
            .unwrap_or(0)
    }

    fn steps(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(k, &w)| (self.first_step + k, w))
    }
}

/// Pricing instance over merged item groups. Groups are stored in search
/// order: profit descending, then heaviest step weight descending, then
/// smallest member.
#[derive(Debug, Clone)]
pub struct PricingProblem {
    capacity: u32,
    step_count: usize,
    groups: Vec<Group>,
    conflicts: Vec<Vec<usize>>,
    /// Forbidden patterns as sorted group positions.
    forbidden: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PricingOutcome {
    pub pattern: Pattern,
    pub value: f64,
    /// False if the budget ran out; `value` is then only attained, not maximal.
    pub exact: bool,
    pub nodes: u64,
}

impl PricingProblem {
    /// Builds the problem for `branch`: fixed items are left out, same pairs
    /// become merged groups with per-step summed weights, different pairs
    /// become conflicts. `profits` holds one dual per item.
    pub fn new(instance: &Instance, steps: &TimeSteps, branch: &BranchState, profits: &[f64]) -> Self {
        let n = instance.len();
        assert_eq!(profits.len(), n);
        let fixed = branch.fixed_mask(n);
        let mut groups: Vec<Group> = branch
            .groups(n)
            .into_iter()
            .filter(|g| g.iter().all(|&j| !fixed[j]))
            .map(|members| {
                let lo = members.iter().map(|&j| steps.steps_of(j).start).min().unwrap();
                let hi = members.iter().map(|&j| steps.steps_of(j).end).max().unwrap();
                let mut weights = vec![0u32; hi.saturating_sub(lo)];
                for &j in &members {
                    for t in steps.steps_of(j) {
                        weights[t - lo] += instance.item(j).weight;
                    }
                }
                Group {
                    profit: members.iter().map(|&j| profits[j].max(0.0)).sum(),
                    members,
                    first_step: lo,
                    weights,
                }
            })
            .filter(|g| g.weights.iter().all(|&w| w <= instance.capacity()))
            .collect();
        groups.sort_by(|a, b| {
            b.profit
                .total_cmp(&a.profit)
                .then_with(|| {
                    let wa = a.weights.iter().max().unwrap_or(&0);
                    let wb = b.weights.iter().max().unwrap_or(&0);
                    wb.cmp(wa)
                })
                .then_with(|| a.members[0].cmp(&b.members[0]))
        });

        let mut position = vec![usize::MAX; n];
        for (g, group) in groups.iter().enumerate() {
            for &j in &group.members {
                position[j] = g;
            }
        }
        let mut conflicts = vec![Vec::new(); groups.len()];
        for &(a, b) in &branch.diff_pairs {
            let (ga, gb) = (position[a], position[b]);
            if ga != usize::MAX && gb != usize::MAX && ga != gb {
                conflicts[ga].push(gb);
                conflicts[gb].push(ga);
            }
        }
        let forbidden = branch
            .forbidden_patterns
            .iter()
            .filter_map(|p| {
                let mut gs: Vec<usize> = p.items().iter().map(|&j| position[j]).collect();
                if gs.contains(&usize::MAX) {
                    return None;
                }
                gs.sort_unstable();
                gs.dedup();
                let size: usize = gs.iter().map(|&g| groups[g].members.len()).sum();
                (size == p.len()).then_some(gs)
            })
            .collect();
        Self {
            capacity: instance.capacity(),
            step_count: steps.step_count(),
            groups,
            conflicts,
            forbidden,
        }
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }
}

struct Search<'a> {
    pp: &'a PricingProblem,
    residual: Vec<u32>,
    selected: Vec<usize>,
    blocked: Vec<u32>,
    profit: f64,
    best: f64,
    best_set: Vec<usize>,
    nodes: u64,
    budget: SearchBudget,
    out_of_budget: bool,
}

impl Search<'_> {
    fn fits(&self, g: usize) -> bool {
        self.blocked[g] == 0 && self.pp.groups[g].steps().all(|(t, w)| w <= self.residual[t])
    }

    fn record(&mut self) {
        if self.profit > self.best + EPS {
            let mut set = self.selected.clone();
            set.sort_unstable();
            if !self.pp.forbidden.contains(&set) {
                self.best = self.profit;
                self.best_set = set;
            }
        }
    }

    /// Current profit plus, for the tightest step, profits of candidates not
    /// using it and the fractional knapsack over those that do.
    fn upper_bound(&self, candidates: &[usize]) -> f64 {
        let total: f64 = candidates.iter().map(|&g| self.pp.groups[g].profit).sum();
        let mut best = total;
        let mut profits = Vec::new();
        let mut weights = Vec::new();
        for t in 0..self.pp.step_count {
            profits.clear();
            weights.clear();
            let mut outside = total;
            for &g in candidates {
                let w = self.pp.groups[g].weight_at(t);
                if w > 0 {
                    outside -= self.pp.groups[g].profit;
                    profits.push(self.pp.groups[g].profit);
                    weights.push(w);
                }
            }
            if profits.is_empty() {
                continue;
            }
            let bound = outside + fractional_knapsack_bound(&profits, &weights, self.residual[t]);
            best = best.min(bound);
        }
        self.profit + best
    }

    fn go(&mut self, k: usize) {
        if self.out_of_budget {
            return;
        }
        self.nodes += 1;
        if self.budget.exhausted(self.nodes) {
            self.out_of_budget = true;
            return;
        }
        let candidates: Vec<usize> = (k..self.pp.groups.len()).filter(|&g| self.fits(g)).collect();
        let Some(&g) = candidates.first() else {
            return;
        };
        if self.upper_bound(&candidates) <= self.best + EPS {
            return;
        }
        // include g
        for (t, w) in self.pp.groups[g].steps().collect::<Vec<_>>() {
            self.residual[t] -= w;
        }
        for &c in &self.pp.conflicts[g] {
            self.blocked[c] += 1;
        }
        self.selected.push(g);
        self.profit += self.pp.groups[g].profit;
        self.record();
        self.go(g + 1);
        self.profit -= self.pp.groups[g].profit;
        self.selected.pop();
        for &c in &self.pp.conflicts[g] {
            self.blocked[c] -= 1;
        }
        for (t, w) in self.pp.groups[g].steps().collect::<Vec<_>>() {
            self.residual[t] += w;
        }
        // exclude g
        self.go(g + 1);
    }
}

/// Maximum-profit pattern under the problem's side constraints. The first
/// optimum met in search order (include before exclude) is returned.
pub fn price(pp: &PricingProblem, budget: SearchBudget) -> PricingOutcome {
    let mut search = Search {
        pp,
        residual: vec![pp.capacity; pp.step_count],
        selected: Vec::new(),
        blocked: vec![0; pp.groups.len()],
        profit: 0.0,
        best: f64::NEG_INFINITY,
        best_set: Vec::new(),
        nodes: 0,
        budget,
        out_of_budget: false,
    };
    search.record();
    search.go(0);
    let mut items: Vec<usize> = search
        .best_set
        .iter()
        .flat_map(|&g| pp.groups[g].members.iter().copied())
        .collect();
    items.sort_unstable();
    PricingOutcome {
        pattern: Pattern::new(items),
        value: search.best.max(0.0),
        exact: !search.out_of_budget,
        nodes: search.nodes,
    }
}
