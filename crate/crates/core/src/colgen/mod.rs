//! Column generation for the pattern relaxation: every column is a set of
//! items that fit together in one bin, the master LP covers every item, and
//! new columns come from an exact temporal knapsack over the LP duals.

mod master;
mod pricing;

use std::collections::HashMap;

use crate::instance::Instance;
use crate::steps::TimeSteps;

pub use master::{
    lb3, root_relaxation, solve_master, MasterConfig, MasterOutcome, MasterStatus,
    RootRelaxation,
};
pub use pricing::{price, PricingOutcome, PricingProblem};

/// A set of items packed into one bin, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    items: Vec<usize>,
}

impl Pattern {
    pub fn new(mut items: Vec<usize>) -> Self {
        items.sort_unstable();
        items.dedup();
        Self { items }
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.items.binary_search(&item).is_ok()
    }

    /// Capacity holds at every step.
    pub fn is_feasible(&self, instance: &Instance, steps: &TimeSteps) -> bool {
        steps.fits(&instance.weights(), instance.capacity(), &self.items)
    }
}

impl From<Vec<usize>> for Pattern {
    fn from(items: Vec<usize>) -> Self {
        Self::new(items)
    }
}

/// Restrictions accumulated along a branch.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BranchState {
    /// Pairs that must share a bin.
    pub same_pairs: Vec<(usize, usize)>,
    /// Pairs that must not share a bin.
    pub diff_pairs: Vec<(usize, usize)>,
    /// Patterns whose variable is fixed to zero.
    pub forbidden_patterns: Vec<Pattern>,
    /// Patterns whose variable is fixed to one; their items leave the master.
    pub fixed_patterns: Vec<Pattern>,
}

impl BranchState {
    pub fn is_root(&self) -> bool {
        *self == Self::default()
    }

    pub fn fixed_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for p in &self.fixed_patterns {
            for &j in p.items() {
                mask[j] = true;
            }
        }
        mask
    }

    /// Representative of each item under the transitive closure of the
    /// same pairs.
    pub fn group_roots(&self, n: usize) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for &(a, b) in &self.same_pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        (0..n).map(|j| find(&mut parent, j)).collect()
    }

    /// Items grouped by the same pairs, each group sorted, groups ordered by
    /// their smallest item.
    pub fn groups(&self, n: usize) -> Vec<Vec<usize>> {
        let roots = self.group_roots(n);
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for (j, &r) in roots.iter().enumerate() {
            by_root.entry(r).or_default().push(j);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
        groups.sort_unstable_by_key(|g| g[0]);
        groups
    }

    /// Whether `pattern` may carry a positive value in this branch.
    pub fn admits(&self, pattern: &Pattern, fixed: &[bool], roots: &[usize]) -> bool {
        if pattern.items().iter().any(|&j| fixed[j]) {
            return false;
        }
        if self
            .diff_pairs
            .iter()
            .any(|&(a, b)| pattern.contains(a) && pattern.contains(b))
        {
            return false;
        }
        // every group is either fully inside or fully outside
        let inside: Vec<usize> = pattern.items().iter().map(|&j| roots[j]).collect();
        let group_size_inside = |r: usize| inside.iter().filter(|&&x| x == r).count();
        let group_size = |r: usize| roots.iter().filter(|&&x| x == r).count();
        if !self.same_pairs.is_empty()
            && inside.iter().any(|&r| group_size_inside(r) != group_size(r))
        {
            return false;
        }
        !self.forbidden_patterns.contains(pattern)
    }
}

/// Every pattern ever generated, deduplicated; indices are stable.
#[derive(Debug, Clone, Default)]
pub struct ColumnPool {
    patterns: Vec<Pattern>,
    index: HashMap<Pattern, usize>,
}

impl ColumnPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `pattern` unless present; returns its index and whether it was new.
    pub fn insert(&mut self, pattern: Pattern) -> (usize, bool) {
        if let Some(&i) = self.index.get(&pattern) {
            return (i, false);
        }
        let i = self.patterns.len();
        self.index.insert(pattern.clone(), i);
        self.patterns.push(pattern);
        (i, true)
    }

    pub fn get(&self, i: usize) -> &Pattern {
        &self.patterns[i]
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pattern> {
        self.patterns.iter()
    }
}
