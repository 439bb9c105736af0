//! Upper bounds: First-Fit in two item orders on original and lifted weights
//! (`greedy_best`) and the rolling horizon over windows of the compact model.

use std::fmt;

use thiserror::Error;

use crate::bounds::{lift, LiftMethod};
use crate::instance::Instance;
use crate::steps::TimeSteps;
use crate::subsolvers::{compact_solve_window, CompactAssignment, CompactStatus, SearchBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FirstFitOrder {
    /// Items in index order, i.e. by start time.
    Natural,
    ByWeightNonDecreasing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignment: CompactAssignment,
    pub value: u32,
    pub source: String,
}

impl Solution {
    pub fn new(assignment: CompactAssignment, source: impl Into<String>) -> Self {
        Self {
            value: assignment.bins_used() as u32,
            assignment,
            source: source.into(),
        }
    }

    pub fn bins(&self) -> Vec<Vec<usize>> {
        self.assignment.bins()
    }

    /// Replays the packing against the original weights at every raw instant.
    pub fn is_feasible(&self, instance: &Instance) -> bool {
        self.assignment.is_complete() && self.assignment.is_feasible(instance)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bins ({})", self.value, self.source)
    }
}

/// First-Fit with fit tests on `fit_weights`, which must be at least the
/// original weights so the packing stays feasible for the original instance.
pub fn first_fit_with_weights(
    instance: &Instance,
    steps: &TimeSteps,
    order: FirstFitOrder,
    fit_weights: &[u32],
) -> CompactAssignment {
    let n = instance.len();
    let m = steps.step_count();
    let capacity = instance.capacity();
    let mut sequence: Vec<usize> = (0..n).collect();
    if order == FirstFitOrder::ByWeightNonDecreasing {
        sequence.sort_by_key(|&j| fit_weights[j]);
    }

    let mut assignment = CompactAssignment::empty(n);
    let mut loads: Vec<Vec<u32>> = Vec::new();
    for j in sequence {
        let range = steps.steps_of(j);
        let w = fit_weights[j];
        let bin = loads
            .iter()
            .position(|l| range.clone().all(|t| l[t] + w <= capacity))
            .unwrap_or_else(|| {
                loads.push(vec![0; m]);
                loads.len() - 1
            });
        for t in range {
            loads[bin][t] += w;
        }
        assignment.assign(j, bin);
    }
    assignment
}

pub fn first_fit(instance: &Instance, steps: &TimeSteps, order: FirstFitOrder) -> Solution {
    let assignment = first_fit_with_weights(instance, steps, order, &instance.weights());
    Solution::new(assignment, ff_label(order, false))
}

fn ff_label(order: FirstFitOrder, lifted: bool) -> &'static str {
    match (order, lifted) {
        (FirstFitOrder::Natural, false) => "first-fit-1",
        (FirstFitOrder::ByWeightNonDecreasing, false) => "first-fit-2",
        (FirstFitOrder::Natural, true) => "first-fit-1-lifted",
        (FirstFitOrder::ByWeightNonDecreasing, true) => "first-fit-2-lifted",
    }
}

/// The four First-Fit runs (both orders, original and Lift-1 weights).
pub fn greedy_variants(instance: &Instance, steps: &TimeSteps) -> Vec<Solution> {
    let lifted = lift(instance, steps, LiftMethod::Global, 1).lifted_weights;
    let original = instance.weights();
    let mut out = Vec::with_capacity(4);
    for (weights, is_lifted) in [(&original, false), (&lifted, true)] {
        for order in [FirstFitOrder::Natural, FirstFitOrder::ByWeightNonDecreasing] {
            let assignment = first_fit_with_weights(instance, steps, order, weights);
            out.push(Solution::new(assignment, ff_label(order, is_lifted)));
        }
    }
    out
}

/// Best of the four First-Fit runs; the first one wins ties.
pub fn greedy_best(instance: &Instance, steps: &TimeSteps) -> Solution {
    greedy_variants(instance, steps)
        .into_iter()
        .reduce(|best, s| if s.value < best.value { s } else { best })
        .expect("four variants")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RollingConfig {
    /// Number of steps per window.
    pub window: usize,
    pub window_budget: SearchBudget,
}

impl RollingConfig {
    pub const DEFAULT_WINDOW: usize = 30;

    /// Window of 30 steps; 10 s per window below 100 steps, 30 s otherwise.
    pub fn for_steps(step_count: usize) -> Self {
        let seconds = if step_count < 100 { 10 } else { 30 };
        Self {
            window: Self::DEFAULT_WINDOW,
            window_budget: SearchBudget::seconds(seconds),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RollingError {
    #[error("window size must be at least 1")]
    ZeroWindow,
    #[error("no TBPP solution: window {window} found no packing within its budget")]
    NoSolution { window: usize },
}

pub fn rolling_horizon(
    instance: &Instance,
    steps: &TimeSteps,
    config: &RollingConfig,
) -> Result<Solution, RollingError> {
    rolling_horizon_with_hint(instance, steps, config, 0)
}

/// Rolling horizon where `lower_bound` (a valid bound on the optimum) lets
/// the last window stop as soon as it is reached.
pub fn rolling_horizon_with_hint(
    instance: &Instance,
    steps: &TimeSteps,
    config: &RollingConfig,
    lower_bound: u32,
) -> Result<Solution, RollingError> {
    if config.window == 0 {
        return Err(RollingError::ZeroWindow);
    }
    let m = steps.step_count();
    let mut assignment = CompactAssignment::empty(instance.len());
    let windows = m.div_ceil(config.window);
    for k in 0..windows {
        let range = k * config.window..((k + 1) * config.window).min(m);
        let target = if k + 1 == windows { lower_bound } else { 0 };
        let out = compact_solve_window(
            instance,
            steps,
            range,
            &assignment,
            config.window_budget,
            target,
        );
        match (out.status, out.assignment) {
            (CompactStatus::Infeasible, _) | (_, None) => {
                return Err(RollingError::NoSolution { window: k })
            }
            (_, Some(mut next)) => {
                next.fix_assigned();
                assignment = next;
            }
        }
    }
    debug_assert!(assignment.is_complete());
    Ok(Solution::new(assignment, "rolling"))
}
