//! The staged solver: cheap bounds and heuristics first, then the pattern
//! relaxation, then a one-token dive, then branch-and-price. Each stage
//! stops the run as soon as the best packing matches the best bound.

use std::time::{Duration, Instant};

use crate::bounds::{lb0, lb1, lb2, BoundReport, LiftMethod};
use crate::colgen::{root_relaxation, MasterConfig, MasterStatus, Pattern};
use crate::heuristics::{greedy_best, rolling_horizon_with_hint, RollingConfig, Solution};
use crate::instance::Instance;
use crate::steps::{reduce_time_steps, TimeSteps};
use crate::subsolvers::SearchBudget;

use super::{branch_and_price, dive, BnpConfig, DiveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// A packing exists but optimality was not proven, without any budget
    /// running out (an unproven master somewhere).
    Feasible,
    Infeasible,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Per-step budget of the exact bin packing in `LB0`.
    pub lb0_budget: SearchBudget,
    /// Rolling horizon window; its budget is derived from the step count
    /// when `None`.
    pub rolling: Option<RollingConfig>,
    pub master: MasterConfig,
    pub dive: DiveConfig,
    pub tree: BnpConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let master = MasterConfig::default();
        Self {
            lb0_budget: SearchBudget::seconds(1),
            rolling: None,
            master,
            dive: DiveConfig {
                master,
                ..DiveConfig::default()
            },
            tree: BnpConfig {
                master,
                ..BnpConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTiming {
    pub phase: u8,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub value: Option<u32>,
    pub solution: Option<Solution>,
    pub lower_bound: u32,
    /// Phase (1 to 4) in which the run ended.
    pub closed_in_phase: u8,
    pub bounds: Vec<BoundReport>,
    /// Heuristic name, value if any, elapsed time.
    pub heuristics: Vec<(&'static str, Option<u32>, Duration)>,
    /// Master solves in the dive and the tree.
    pub nodes: u64,
    pub columns: usize,
    pub root_lp: Option<f64>,
    pub root_time: Option<Duration>,
    pub timings: Vec<PhaseTiming>,
}

impl SolveReport {
    pub fn bound(&self, name: &str) -> Option<&BoundReport> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn heuristic(&self, name: &str) -> Option<(Option<u32>, Duration)> {
        self.heuristics
            .iter()
            .find(|h| h.0 == name)
            .map(|h| (h.1, h.2))
    }
}

struct Progress {
    lower: u32,
    best: Option<Solution>,
}

impl Progress {
    fn upper(&self) -> u32 {
        self.best.as_ref().map_or(u32::MAX, |s| s.value)
    }

    fn closed(&self) -> bool {
        self.upper() <= self.lower
    }

    fn offer(&mut self, candidate: Option<Solution>) {
        if let Some(c) = candidate {
            if c.value < self.upper() {
                self.best = Some(c);
            }
        }
    }
}

/// Solves `instance` with the staged algorithm.
pub fn solve(instance: &Instance, config: &SolverConfig) -> SolveReport {
    let steps = reduce_time_steps(instance);
    solve_with_steps(instance, &steps, config)
}

pub fn solve_with_steps(instance: &Instance, steps: &TimeSteps, config: &SolverConfig) -> SolveReport {
    let mut report = SolveReport {
        status: SolveStatus::Optimal,
        value: None,
        solution: None,
        lower_bound: 0,
        closed_in_phase: 1,
        bounds: Vec::new(),
        heuristics: Vec::new(),
        nodes: 0,
        columns: 0,
        root_lp: None,
        root_time: None,
        timings: Vec::new(),
    };

    // phase 1: bounds and heuristics
    let clock = Instant::now();
    let b0 = lb0(instance, steps, config.lb0_budget);
    let b1 = lb1(instance, steps);
    let b2 = lb2(instance, steps, LiftMethod::Global);
    let mut progress = Progress {
        lower: b0.value.max(b1.value).max(b2.value),
        best: None,
    };
    report.bounds.extend([b0, b1, b2]);

    let t = Instant::now();
    let greedy = greedy_best(instance, steps);
    report.heuristics.push(("greedy", Some(greedy.value), t.elapsed()));
    let greedy_columns: Vec<Pattern> = greedy.bins().into_iter().map(Pattern::new).collect();
    progress.offer(Some(greedy));

    let t = Instant::now();
    let rolling_cfg = config.rolling.unwrap_or_else(|| RollingConfig::for_steps(steps.step_count()));
    let rolling = rolling_horizon_with_hint(instance, steps, &rolling_cfg, progress.lower).ok();
    report.heuristics.push(("rolling", rolling.as_ref().map(|s| s.value), t.elapsed()));
    let mut initial = greedy_columns;
    if let Some(r) = &rolling {
        initial.extend(r.bins().into_iter().map(Pattern::new));
    }
    progress.offer(rolling);
    report.timings.push(PhaseTiming {
        phase: 1,
        elapsed: clock.elapsed(),
    });

    if !progress.closed() {
        // phase 2: pattern relaxation
        report.closed_in_phase = 2;
        let clock = Instant::now();
        let mut root = root_relaxation(instance, steps, &initial, &config.master);
        report.root_time = Some(root.bound.elapsed);
        let proven = root.master.status == MasterStatus::Optimal;
        if proven {
            report.root_lp = Some(root.master.value);
            progress.lower = progress.lower.max(root.bound.value);
        } else if root.master.lower_bound.is_finite() {
            let valid = (root.master.lower_bound - crate::INTEGRALITY_TOL).ceil() as u32;
            progress.lower = progress.lower.max(valid);
        }
        report.bounds.push(root.bound.clone());
        report.timings.push(PhaseTiming {
            phase: 2,
            elapsed: clock.elapsed(),
        });

        if !progress.closed() {
            // phase 3: one-token dive from the root relaxation
            report.closed_in_phase = 3;
            let clock = Instant::now();
            let dive_cfg = DiveConfig {
                target: progress.lower,
                ..config.dive
            };
            let root_master = proven.then(|| root.master.clone());
            let out = dive(instance, steps, &dive_cfg, &mut root.pool, root_master, Some(progress.upper()));
            report.nodes += out.nodes;
            report.heuristics.push(("dive", out.best.as_ref().map(|s| s.value), clock.elapsed()));
            progress.offer(out.best);
            report.timings.push(PhaseTiming {
                phase: 3,
                elapsed: clock.elapsed(),
            });

            if !progress.closed() {
                // phase 4: branch-and-price
                report.closed_in_phase = 4;
                let clock = Instant::now();
                let tree = branch_and_price(instance, steps, &config.tree, &mut root.pool, progress.best.clone());
                report.nodes += tree.nodes;
                progress.offer(tree.best);
                progress.lower = progress.lower.max(tree.lower_bound.min(progress.upper()));
                if !tree.complete && !progress.closed() {
                    report.status = SolveStatus::BudgetExhausted;
                }
                report.timings.push(PhaseTiming {
                    phase: 4,
                    elapsed: clock.elapsed(),
                });
            }
        }
        report.columns = root.pool.len();
    }

    report.value = progress.best.as_ref().map(|s| s.value);
    report.lower_bound = progress.lower.min(progress.upper());
    if progress.closed() {
        report.status = SolveStatus::Optimal;
    } else if report.status == SolveStatus::Optimal {
        report.status = SolveStatus::Feasible;
    }
    report.solution = progress.best;
    report
}
