//! Reduction of the time horizon to the non-dominated sets of simultaneously
//! active items.
//!
//! The load of a bin can only increase at the start time of some item, so
//! capacity needs checking only at the distinct start times. The set active at
//! a start time is redundant when it is contained in another one; because item
//! windows are intervals, a set contained in any later set is also contained
//! in the set of the immediately following start time, so one forward sweep
//! comparing neighbours removes every dominated set.

use std::ops::Range;

use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeSteps {
    steps: Vec<Vec<usize>>,
    times: Vec<u32>,
    item_steps: Vec<Range<usize>>,
}

impl TimeSteps {
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Item indices (ascending) active in step `t`.
    pub fn step(&self, t: usize) -> &[usize] {
        &self.steps[t]
    }

    pub fn steps(&self) -> &[Vec<usize>] {
        &self.steps
    }

    /// Time instant (a start time of the original instance) represented by
    /// step `t`.
    pub fn time_of(&self, t: usize) -> u32 {
        self.times[t]
    }

    /// The steps containing `item`; always a non-empty contiguous range.
    pub fn steps_of(&self, item: usize) -> Range<usize> {
        self.item_steps[item].clone()
    }

    pub fn item_count(&self) -> usize {
        self.item_steps.len()
    }

    /// True when `a` and `b` share at least one step.
    pub fn share_step(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (&self.item_steps[a], &self.item_steps[b]);
        ra.start < rb.end && rb.start < ra.end
    }

    /// Total of `weights` over each step.
    pub fn step_loads(&self, weights: &[u32]) -> Vec<u64> {
        self.steps
            .iter()
            .map(|s| s.iter().map(|&j| u64::from(weights[j])).sum())
            .collect()
    }

    /// Whether `items` fit together in one bin of `capacity` at every step.
    pub fn fits(&self, weights: &[u32], capacity: u32, items: &[usize]) -> bool {
        if items.is_empty() {
            return true;
        }
        let lo = items.iter().map(|&j| self.item_steps[j].start).min().unwrap();
        let hi = items.iter().map(|&j| self.item_steps[j].end).max().unwrap();
        let mut load = vec![0u64; hi - lo];
        for &j in items {
            for t in self.steps_of(j) {
                load[t - lo] += u64::from(weights[j]);
            }
        }
        load.iter().all(|&l| l <= u64::from(capacity))
    }
}

/// Computes the renumbered non-dominated active sets of `instance`.
pub fn reduce_time_steps(instance: &Instance) -> TimeSteps {
    let items = instance.items();
    let n = items.len();

    let mut starts: Vec<u32> = items.iter().map(|i| i.start).collect();
    starts.dedup();

    let mut steps = Vec::new();
    let mut times = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut next = 0;
    for (k, &time) in starts.iter().enumerate() {
        active.retain(|&j| items[j].end > time);
        while next < n && items[next].start == time {
            active.push(next);
            next += 1;
        }
        let dominated = match starts.get(k + 1) {
            Some(&following) => active.iter().all(|&j| items[j].end > following),
            None => false,
        };
        if !dominated {
            steps.push(active.clone());
            times.push(time);
        }
    }

    let mut first_last = vec![(usize::MAX, 0); n];
    for (t, members) in steps.iter().enumerate() {
        for &j in members {
            let (first, last) = &mut first_last[j];
            *first = (*first).min(t);
            *last = (*last).max(t + 1);
        }
    }
    let item_steps: Vec<Range<usize>> = first_last.into_iter().map(|(a, b)| a..b).collect();
    debug_assert!(item_steps.iter().all(|r| r.start < r.end));

    TimeSteps {
        steps,
        times,
        item_steps,
    }
}

/// Weight matrix of the equivalent vector packing instance: row `j` holds the
/// weight of item `j` in each step, zero where the item is inactive.
pub fn vpp_weights(instance: &Instance, steps: &TimeSteps) -> Vec<Vec<u32>> {
    (0..instance.len())
        .map(|j| {
            let mut row = vec![0; steps.step_count()];
            for t in steps.steps_of(j) {
                row[t] = instance.item(j).weight;
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn one_based(steps: &TimeSteps) -> Vec<Vec<usize>> {
        steps
            .steps()
            .iter()
            .map(|s| s.iter().map(|j| j + 1).collect())
            .collect()
    }

    #[test]
    fn five_item_example_reduces_to_three_steps() {
        let steps = reduce_time_steps(&examples::five_items());
        assert_eq!(
            one_based(&steps),
            vec![vec![1, 2], vec![2, 3, 4], vec![2, 5]]
        );
        assert_eq!(steps.steps_of(1), 0..3);
        assert_eq!(steps.steps_of(2), 1..2);
    }

    #[test]
    fn two_step_example() {
        let steps = reduce_time_steps(&examples::two_steps());
        assert_eq!(one_based(&steps), vec![vec![1, 2, 3], vec![2, 3, 4, 5]]);
    }

    #[test]
    fn lb0_gap_example() {
        let steps = reduce_time_steps(&examples::lb0_gap());
        assert_eq!(steps.step_count(), 2);
        assert_eq!(one_based(&steps)[0], (1..=18).collect::<Vec<_>>());
        assert_eq!(one_based(&steps)[1], (10..=24).collect::<Vec<_>>());
    }

    #[test]
    fn single_item_and_empty() {
        let inst = Instance::new("s", 10, vec![crate::Item::new(5, 0, 3)]).unwrap();
        assert_eq!(reduce_time_steps(&inst).steps(), &[vec![0]]);
        let empty = Instance::new("e", 10, vec![]).unwrap();
        assert_eq!(reduce_time_steps(&empty).step_count(), 0);
        assert!(vpp_weights(&empty, &reduce_time_steps(&empty)).is_empty());
    }

    #[test]
    fn vpp_rows() {
        let inst = examples::five_items();
        let steps = reduce_time_steps(&inst);
        let w = vpp_weights(&inst, &steps);
        assert_eq!(w[2], vec![0, 1, 0]);
        assert_eq!(w[1], vec![2, 2, 2]);
    }

    #[test]
    fn fits_checks_every_step() {
        let inst = examples::five_items();
        let steps = reduce_time_steps(&inst);
        let w = inst.weights();
        assert!(steps.fits(&w, 4, &[0, 1, 3, 4]));
        assert!(!steps.fits(&w, 4, &[1, 2, 3]));
        assert!(steps.fits(&w, 4, &[]));
    }
}
