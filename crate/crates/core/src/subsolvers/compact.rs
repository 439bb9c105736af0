//! Exact branch-and-bound for the assignment (compact) model: every item goes
//! to one bin, every bin respects the capacity at every checked time step, and
//! the number of bins is minimized.
//!
//! Items are assigned in start order, each to an open bin or to one new bin.
//! Within a restricted window of steps the future only sees a bin through its
//! load vector on those steps, so open bins with equal load vectors are
//! interchangeable and only the first of them is tried.

use std::ops::Range;

use crate::instance::Instance;
use crate::steps::TimeSteps;

use super::SearchBudget;

/// Item-to-bin map of the compact model. Bins are numbered `0..bins_used`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactAssignment {
    bin_of: Vec<Option<usize>>,
    bins_used: usize,
    fixed: Vec<bool>,
}

impl CompactAssignment {
    pub fn empty(n: usize) -> Self {
        Self {
            bin_of: vec![None; n],
            bins_used: 0,
            fixed: vec![false; n],
        }
    }

    /// Builds an assignment from explicit bins (item lists); empty bins are
    /// dropped.
    pub fn from_bins(n: usize, bins: &[Vec<usize>]) -> Self {
        let mut out = Self::empty(n);
        for bin in bins.iter().filter(|b| !b.is_empty()) {
            let b = out.bins_used;
            out.bins_used += 1;
            for &j in bin {
                assert!(out.bin_of[j].is_none(), "item {j} assigned twice");
                out.bin_of[j] = Some(b);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bin_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bin_of.is_empty()
    }

    pub fn bin_of(&self, item: usize) -> Option<usize> {
        self.bin_of[item]
    }

    pub fn bins_used(&self) -> usize {
        self.bins_used
    }

    pub fn is_fixed(&self, item: usize) -> bool {
        self.fixed[item]
    }

    /// Places `item` in `bin`; `bin == bins_used` opens a new bin.
    pub fn assign(&mut self, item: usize, bin: usize) {
        assert!(!self.fixed[item], "item {item} is fixed");
        assert!(bin <= self.bins_used, "bins must stay contiguous");
        self.bin_of[item] = Some(bin);
        if bin == self.bins_used {
            self.bins_used += 1;
        }
    }

    /// Marks every currently assigned item as fixed.
    pub fn fix_assigned(&mut self) {
        for (f, b) in self.fixed.iter_mut().zip(&self.bin_of) {
            *f |= b.is_some();
        }
    }

    pub fn is_complete(&self) -> bool {
        self.bin_of.iter().all(Option::is_some)
    }

    pub fn bins(&self) -> Vec<Vec<usize>> {
        let mut bins = vec![Vec::new(); self.bins_used];
        for (j, b) in self.bin_of.iter().enumerate() {
            if let Some(b) = b {
                bins[*b].push(j);
            }
        }
        bins
    }

    /// Capacity holds at every time step for the assigned items.
    pub fn respects_steps(&self, instance: &Instance, steps: &TimeSteps) -> bool {
        let w = instance.capacity();
        steps.steps().iter().all(|members| {
            let mut load = vec![0u64; self.bins_used];
            for &j in members {
                if let Some(b) = self.bin_of[j] {
                    load[b] += u64::from(instance.item(j).weight);
                }
            }
            load.iter().all(|&l| l <= u64::from(w))
        })
    }

    /// Complete and feasible at every start instant of the original
    /// instance; independent of the step reduction.
    pub fn is_feasible(&self, instance: &Instance) -> bool {
        if !self.is_complete() || self.bin_of.len() != instance.len() {
            return false;
        }
        let items = instance.items();
        items.iter().all(|probe| {
            let mut load = vec![0u64; self.bins_used];
            for (j, item) in items.iter().enumerate() {
                if item.is_active_at(probe.start) {
                    load[self.bin_of[j].unwrap()] += u64::from(item.weight);
                }
            }
            load.iter().all(|&l| l <= u64::from(instance.capacity()))
        })
    }

    /// Number of bins holding at least one item.
    pub fn nonempty_bins(&self) -> usize {
        let mut used = vec![false; self.bins_used];
        for b in self.bin_of.iter().flatten() {
            used[*b] = true;
        }
        used.iter().filter(|&&u| u).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompactStatus {
    Optimal,
    /// Node budget exhausted; the assignment (if any) is the best found.
    Budget,
    /// The fixed part of the initial assignment violates a capacity.
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct CompactOutcome {
    pub assignment: Option<CompactAssignment>,
    pub lower_bound: u32,
    pub status: CompactStatus,
    pub nodes: u64,
}

impl CompactOutcome {
    pub fn value(&self) -> Option<u32> {
        self.assignment.as_ref().map(|a| a.bins_used() as u32)
    }
}

/// Solves the full compact model starting from `initial`, whose assigned items
/// are kept where they are.
pub fn compact_solve(
    instance: &Instance,
    steps: &TimeSteps,
    initial: &CompactAssignment,
    budget: SearchBudget,
) -> CompactOutcome {
    compact_solve_window(instance, steps, 0..steps.step_count(), initial, budget, 0)
}

/// Solves the compact model restricted to the steps in `window` and the
/// unassigned items active there. Items already assigned in `initial` keep
/// their bin and contribute their load. The search stops early once it finds
/// a solution using `target` bins or fewer; pass a proven lower bound (or 0).
pub fn compact_solve_window(
    instance: &Instance,
    steps: &TimeSteps,
    window: Range<usize>,
    initial: &CompactAssignment,
    budget: SearchBudget,
    target: u32,
) -> CompactOutcome {
    assert_eq!(initial.len(), instance.len());
    let window = window.start.min(steps.step_count())..window.end.min(steps.step_count());
    let m = window.len();
    let capacity = instance.capacity();

    let local = |j: usize| {
        let r = steps.steps_of(j);
        let lo = r.start.max(window.start);
        let hi = r.end.min(window.end);
        (lo < hi).then(|| (lo - window.start)..(hi - window.start))
    };

    let mut loads = vec![0u32; initial.bins_used() * m];
    for j in 0..instance.len() {
        if let (Some(b), Some(r)) = (initial.bin_of(j), local(j)) {
            for t in r {
                loads[b * m + t] += instance.item(j).weight;
            }
        }
    }
    if loads.iter().any(|&l| l > capacity) {
        return CompactOutcome {
            assignment: None,
            lower_bound: 0,
            status: CompactStatus::Infeasible,
            nodes: 0,
        };
    }

    let mut order = Vec::new();
    let mut ranges = Vec::new();
    for j in 0..instance.len() {
        if initial.bin_of(j).is_none() {
            if let Some(r) = local(j) {
                order.push(j);
                ranges.push(r);
            }
        }
    }

    let mut unassigned_load = vec![0u64; m];
    let mut by_weight: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, r) in ranges.iter().enumerate() {
        for t in r.clone() {
            unassigned_load[t] += u64::from(instance.item(order[k]).weight);
            by_weight[t].push(k);
        }
    }
    for list in &mut by_weight {
        list.sort_by_key(|&k| instance.item(order[k]).weight);
    }

    let mut root_bound = initial.bins_used() as u64;
    for t in 0..m {
        let fixed: u64 = (0..initial.bins_used())
            .map(|b| u64::from(loads[b * m + t]))
            .sum();
        root_bound = root_bound.max((fixed + unassigned_load[t]).div_ceil(u64::from(capacity)));
    }
    let root_bound = root_bound as u32;

    let mut search = Search {
        weights: order.iter().map(|&j| instance.item(j).weight).collect(),
        ranges,
        capacity,
        m,
        loads,
        bins: initial.bins_used(),
        unassigned_load,
        by_weight,
        placed: vec![false; order.len()],
        current: vec![0; order.len()],
        best: u32::MAX,
        best_bins: None,
        stop_at: root_bound.max(target),
        nodes: 0,
        budget,
        aborted: false,
    };
    search.dfs(0);

    let assignment = search.best_bins.as_ref().map(|bins| {
        let mut a = initial.clone();
        for (k, &b) in bins.iter().enumerate() {
            a.bin_of[order[k]] = Some(b);
        }
        a.bins_used = search.best as usize;
        a
    });
    let finished = !search.aborted;
    let reached = search.best <= search.stop_at;
    CompactOutcome {
        lower_bound: if finished || reached {
            search.best
        } else {
            root_bound
        },
        status: if finished || reached {
            CompactStatus::Optimal
        } else {
            CompactStatus::Budget
        },
        assignment,
        nodes: search.nodes,
    }
}

struct Search {
    weights: Vec<u32>,
    ranges: Vec<Range<usize>>,
    capacity: u32,
    m: usize,
    loads: Vec<u32>,
    bins: usize,
    unassigned_load: Vec<u64>,
    by_weight: Vec<Vec<usize>>,
    placed: Vec<bool>,
    current: Vec<usize>,
    best: u32,
    best_bins: Option<Vec<usize>>,
    stop_at: u32,
    nodes: u64,
    budget: SearchBudget,
    aborted: bool,
}

impl Search {
    fn done(&self) -> bool {
        self.aborted || self.best <= self.stop_at
    }

    /// Open bins plus the bins the unassigned load certainly needs beyond the
    /// residual space it can use.
    fn bound(&self) -> u32 {
        let cap = u64::from(self.capacity);
        let mut extra = 0u64;
        for t in 0..self.m {
            let need = self.unassigned_load[t];
            if need == 0 {
                continue;
            }
            let lightest = self.by_weight[t]
                .iter()
                .find(|&&k| !self.placed[k])
                .map(|&k| self.weights[k])
                .unwrap_or(0);
            let usable: u64 = (0..self.bins)
                .map(|b| self.capacity - self.loads[b * self.m + t])
                .filter(|&r| r >= lightest)
                .map(u64::from)
                .sum();
            if need > usable {
                extra = extra.max((need - usable).div_ceil(cap));
            }
        }
        self.bins as u32 + extra as u32
    }

    fn fits(&self, b: usize, k: usize) -> bool {
        let w = self.weights[k];
        self.ranges[k]
            .clone()
            .all(|t| self.loads[b * self.m + t] + w <= self.capacity)
    }

    fn same_profile(&self, a: usize, b: usize) -> bool {
        let m = self.m;
        self.loads[a * m..(a + 1) * m] == self.loads[b * m..(b + 1) * m]
    }

    fn place(&mut self, b: usize, k: usize, sign: bool) {
        let w = self.weights[k];
        for t in self.ranges[k].clone() {
            let slot = &mut self.loads[b * self.m + t];
            if sign {
                *slot += w;
                self.unassigned_load[t] -= u64::from(w);
            } else {
                *slot -= w;
                self.unassigned_load[t] += u64::from(w);
            }
        }
        self.placed[k] = sign;
    }

    fn dfs(&mut self, k: usize) {
        if self.done() {
            return;
        }
        self.nodes += 1;
        if self.budget.exhausted(self.nodes) {
            self.aborted = true;
            return;
        }
        if k == self.weights.len() {
            if (self.bins as u32) < self.best {
                self.best = self.bins as u32;
                self.best_bins = Some(self.current.clone());
            }
            return;
        }
        if self.bound() >= self.best {
            return;
        }

        let mut tried: Vec<usize> = Vec::new();
        let mut has_empty = false;
        for b in 0..self.bins {
            if !self.fits(b, k) || tried.iter().any(|&o| self.same_profile(o, b)) {
                continue;
            }
            tried.push(b);
            has_empty |= self.loads[b * self.m..(b + 1) * self.m].iter().all(|&l| l == 0);
            self.place(b, k, true);
            self.current[k] = b;
            self.dfs(k + 1);
            self.place(b, k, false);
            if self.done() {
                return;
            }
        }
        // an open bin that is empty on every window step is as good as a new one
        if !has_empty && (self.bins as u32) + 1 < self.best {
            let b = self.bins;
            self.bins += 1;
            self.loads.extend(std::iter::repeat_n(0, self.m));
            self.place(b, k, true);
            self.current[k] = b;
            self.dfs(k + 1);
            self.place(b, k, false);
            self.loads.truncate(b * self.m);
            self.bins -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::steps::reduce_time_steps;

    fn solve(inst: &Instance) -> CompactOutcome {
        let steps = reduce_time_steps(inst);
        compact_solve(
            inst,
            &steps,
            &CompactAssignment::empty(inst.len()),
            SearchBudget::unlimited(),
        )
    }

    #[test]
    fn worked_examples() {
        for (inst, opt) in [
            (examples::five_items(), 2),
            (examples::two_steps(), 3),
            (examples::lb0_gap(), 11),
        ] {
            let out = solve(&inst);
            assert_eq!(out.status, CompactStatus::Optimal, "{}", inst.name());
            assert_eq!(out.value(), Some(opt), "{}", inst.name());
            assert_eq!(out.lower_bound, opt);
            assert!(out.assignment.unwrap().is_feasible(&inst));
        }
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new("e", 5, vec![]).unwrap();
        let out = solve(&inst);
        assert_eq!(out.value(), Some(0));
        assert_eq!(out.status, CompactStatus::Optimal);
    }

    #[test]
    fn fixed_items_stay_and_infeasible_fix_is_reported() {
        let inst = examples::two_steps();
        let steps = reduce_time_steps(&inst);
        let mut init = CompactAssignment::empty(inst.len());
        init.assign(1, 0);
        init.assign(2, 0);
        init.fix_assigned();
        let out = compact_solve(&inst, &steps, &init, SearchBudget::unlimited());
        let a = out.assignment.unwrap();
        assert_eq!(a.bin_of(1), Some(0));
        assert_eq!(a.bin_of(2), Some(0));
        assert_eq!(a.bins_used(), 3);

        let mut bad = CompactAssignment::empty(inst.len());
        bad.assign(0, 0);
        bad.assign(1, 0);
        bad.fix_assigned();
        let out = compact_solve(&inst, &steps, &bad, SearchBudget::unlimited());
        assert_eq!(out.status, CompactStatus::Infeasible);
        assert!(out.assignment.is_none());
    }

    #[test]
    fn budget_keeps_first_dive_incumbent() {
        let inst = examples::lb0_gap();
        let steps = reduce_time_steps(&inst);
        let out = compact_solve(
            &inst,
            &steps,
            &CompactAssignment::empty(inst.len()),
            SearchBudget::nodes(30),
        );
        assert_eq!(out.status, CompactStatus::Budget);
        assert!(out.assignment.unwrap().is_feasible(&inst));
        assert_eq!(out.lower_bound, 9);
    }

    #[test]
    fn window_only_assigns_active_items() {
        let inst = examples::two_steps();
        let steps = reduce_time_steps(&inst);
        let out = compact_solve_window(
            &inst,
            &steps,
            0..1,
            &CompactAssignment::empty(inst.len()),
            SearchBudget::unlimited(),
            0,
        );
        let a = out.assignment.unwrap();
        assert_eq!(a.bins_used(), 2);
        assert!(a.bin_of(3).is_none() && a.bin_of(4).is_none());
        assert_ne!(a.bin_of(0), a.bin_of(1));
        assert_eq!(a.bin_of(1), a.bin_of(2));
    }
}
