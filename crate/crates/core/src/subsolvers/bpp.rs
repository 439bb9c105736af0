//! Exact one-dimensional bin packing by depth-first branch-and-bound.

use super::SearchBudget;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BppOutcome {
    pub lower: u32,
    pub upper: u32,
    /// `lower == upper` was proven within the budget.
    pub exact: bool,
    pub nodes: u64,
}

impl BppOutcome {
    /// The optimum when proven, otherwise the best lower bound.
    pub fn bound(&self) -> u32 {
        if self.exact {
            self.upper
        } else {
            self.lower
        }
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Bin count of first-fit on items sorted by non-increasing weight.
pub fn first_fit_decreasing(weights: &[u32], capacity: u32) -> u32 {
    let mut sorted = weights.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut residual: Vec<u32> = Vec::new();
    for w in sorted {
        match residual.iter_mut().find(|r| **r >= w) {
            Some(r) => *r -= w,
            None => residual.push(capacity - w),
        }
    }
    residual.len() as u32
}

/// `max(L1, L2)`: the continuous bound and the Martello-Toth bound.
pub fn bpp_lower_bound(weights: &[u32], capacity: u32) -> u32 {
    let cap = u64::from(capacity);
    let total: u64 = weights.iter().map(|&w| u64::from(w)).sum();
    let l1 = ceil_div(total, cap);

    let mut alphas: Vec<u32> = weights
        .iter()
        .copied()
        .filter(|&w| 2 * u64::from(w) <= cap)
        .collect();
    alphas.push(0);
    alphas.sort_unstable();
    alphas.dedup();

    let mut l2 = 0u64;
    for alpha in alphas {
        let alpha = u64::from(alpha);
        let (mut n1, mut n2, mut s2, mut s3) = (0u64, 0u64, 0u64, 0u64);
        for &w in weights {
            let w = u64::from(w);
            if w > cap - alpha {
                n1 += 1;
            } else if 2 * w > cap {
                n2 += 1;
                s2 += w;
            } else if w >= alpha {
                s3 += w;
            }
        }
        let free = n2 * cap - s2;
        let extra = if s3 > free { ceil_div(s3 - free, cap) } else { 0 };
        l2 = l2.max(n1 + n2 + extra);
    }
    l1.max(l2) as u32
}

struct Search<'a> {
    weights: &'a [u32],
    capacity: u32,
    suffix: Vec<u64>,
    residual: Vec<u32>,
    best: u32,
    lower: u32,
    nodes: u64,
    budget: SearchBudget,
    aborted: bool,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize) {
        if self.aborted || self.best == self.lower {
            return;
        }
        self.nodes += 1;
        if self.budget.exhausted(self.nodes) {
            self.aborted = true;
            return;
        }
        if k == self.weights.len() {
            self.best = self.best.min(self.residual.len() as u32);
            return;
        }
        let open = self.residual.len() as u64;
        let free: u64 = self.residual.iter().map(|&r| u64::from(r)).sum();
        let remaining = self.suffix[k];
        let need = if remaining > free {
            ceil_div(remaining - free, u64::from(self.capacity))
        } else {
            0
        };
        if open + need >= u64::from(self.best) {
            return;
        }

        let w = self.weights[k];
        // an exact fit dominates every other placement
        if let Some(b) = self.residual.iter().position(|&r| r == w) {
            self.residual[b] = 0;
            self.dfs(k + 1);
            self.residual[b] = w;
            return;
        }
        let mut tried: Vec<u32> = Vec::new();
        for b in 0..self.residual.len() {
            let r = self.residual[b];
            if r < w || tried.contains(&r) {
                continue;
            }
            tried.push(r);
            self.residual[b] = r - w;
            self.dfs(k + 1);
            self.residual[b] = r;
            if self.aborted || self.best == self.lower {
                return;
            }
        }
        if open + 1 < u64::from(self.best) {
            self.residual.push(self.capacity - w);
            self.dfs(k + 1);
            self.residual.pop();
        }
    }
}

/// Minimum number of bins of `capacity` holding `weights`.
pub fn bpp_min_bins(weights: &[u32], capacity: u32, budget: SearchBudget) -> BppOutcome {
    assert!(weights.iter().all(|&w| w <= capacity), "item heavier than a bin");
    if weights.is_empty() {
        return BppOutcome {
            lower: 0,
            upper: 0,
            exact: true,
            nodes: 0,
        };
    }
    let mut sorted = weights.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let lower = bpp_lower_bound(&sorted, capacity);
    let upper = first_fit_decreasing(&sorted, capacity);
    if lower == upper {
        return BppOutcome {
            lower,
            upper,
            exact: true,
            nodes: 0,
        };
    }
    let mut suffix = vec![0u64; sorted.len() + 1];
    for k in (0..sorted.len()).rev() {
        suffix[k] = suffix[k + 1] + u64::from(sorted[k]);
    }
    let mut search = Search {
        weights: &sorted,
        capacity,
        suffix,
        residual: Vec::new(),
        best: upper,
        lower,
        nodes: 0,
        budget,
        aborted: false,
    };
    search.dfs(0);
    let exact = !search.aborted || search.best == lower;
    BppOutcome {
        lower: if exact { search.best } else { lower },
        upper: search.best,
        exact,
        nodes: search.nodes,
    }
}
