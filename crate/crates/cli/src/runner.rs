//! Runs one method on one instance and fills a [`RunRecord`].

use std::fmt;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use tbpp_core::bnp::{branch_and_price, dive, solve_with_steps, BnpConfig, DiveConfig, SolveStatus, SolverConfig};
use tbpp_core::bounds::{lb0, lb1, lb2, LiftMethod};
use tbpp_core::colgen::{root_relaxation, ColumnPool, MasterConfig, Pattern};
use tbpp_core::heuristics::{greedy_best, rolling_horizon, RollingConfig};
use tbpp_core::subsolvers::{compact_solve, CompactAssignment, CompactStatus};
use tbpp_core::{reduce_time_steps, Instance, SearchBudget, TimeSteps};

use crate::record::{InstanceMeta, RunRecord, RunStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum)]
pub enum Method {
    Lb0,
    Lb1,
    Lb2,
    Lb3,
    Greedy,
    Rolling,
    Dive,
    /// Exact search on the assignment model.
    Compact,
    /// Branch-and-price tree alone, from an empty pool.
    Bnp,
    /// The staged solver: bounds, heuristics, relaxation, dive, tree.
    Auto,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Lb0 => "lb0",
            Method::Lb1 => "lb1",
            Method::Lb2 => "lb2",
            Method::Lb3 => "lb3",
            Method::Greedy => "greedy",
            Method::Rolling => "rolling",
            Method::Dive => "dive",
            Method::Compact => "compact",
            Method::Bnp => "bnp",
            Method::Auto => "auto",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides the node budget of the method's main search.
    pub node_budget: Option<u64>,
    /// Rolling horizon window.
    pub delta: usize,
    /// Dive tokens.
    pub tokens: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            node_budget: None,
            delta: RollingConfig::DEFAULT_WINDOW,
            tokens: 1,
        }
    }
}

impl RunOptions {
    fn budget_or(&self, default: SearchBudget) -> SearchBudget {
        self.node_budget.map_or(default, SearchBudget::nodes)
    }

    fn rolling(&self, steps: &TimeSteps) -> RollingConfig {
        let default = RollingConfig::for_steps(steps.step_count());
        RollingConfig {
            window: self.delta,
            window_budget: self.budget_or(default.window_budget),
        }
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn greedy_columns(instance: &Instance, steps: &TimeSteps) -> Vec<Pattern> {
    greedy_best(instance, steps).bins().into_iter().map(Pattern::new).collect()
}

/// Runs `method` and records its results. Never fails: budget and
/// heuristic failures are part of the record's status.
pub fn run_method(instance: &Instance, method: Method, options: &RunOptions) -> RunRecord {
    let clock = Instant::now();
    let steps = reduce_time_steps(instance);
    let meta = InstanceMeta::from_name(instance.name());
    let mut rec = RunRecord {
        instance: instance.name().to_string(),
        class: meta.class.map(|c| c.to_string()),
        horizon: meta.horizon,
        steps: steps.step_count(),
        n: instance.len(),
        method: method.name().to_string(),
        ..RunRecord::default()
    };

    match method {
        Method::Lb0 => {
            let b = lb0(instance, &steps, options.budget_or(SearchBudget::seconds(1)));
            rec.lb0 = Some(b.value);
            rec.lb0_ms = Some(ms(b.elapsed));
            rec.lower_bound = Some(b.value);
            rec.status = Some(RunStatus::Bound);
        }
        Method::Lb1 => {
            let b = lb1(instance, &steps);
            rec.lb1 = Some(b.value);
            rec.lb1_ms = Some(ms(b.elapsed));
            rec.lower_bound = Some(b.value);
            rec.status = Some(RunStatus::Bound);
        }
        Method::Lb2 => {
            let b = lb2(instance, &steps, LiftMethod::Global);
            rec.lb2 = Some(b.value);
            rec.lb2_ms = Some(ms(b.elapsed));
            rec.lower_bound = Some(b.value);
            rec.status = Some(RunStatus::Bound);
        }
        Method::Lb3 => {
            let root = root_relaxation(instance, &steps, &greedy_columns(instance, &steps), &MasterConfig::default());
            rec.lb3 = Some(root.bound.value);
            rec.lb3_ms = Some(ms(root.bound.elapsed));
            rec.root_lp = root.bound.exact.then_some(root.master.value);
            rec.root_ms = rec.lb3_ms;
            rec.columns = Some(root.pool.len());
            rec.lower_bound = root.bound.exact.then_some(root.bound.value);
            rec.status = Some(if root.bound.exact { RunStatus::Bound } else { RunStatus::Budget });
        }
        Method::Greedy => {
            let t = Instant::now();
            let s = greedy_best(instance, &steps);
            rec.greedy = Some(s.value);
            rec.greedy_ms = Some(ms(t.elapsed()));
            rec.value = Some(s.value);
            rec.status = Some(RunStatus::Feasible);
        }
        Method::Rolling => {
            let t = Instant::now();
            let out = rolling_horizon(instance, &steps, &options.rolling(&steps));
            rec.rolling_ms = Some(ms(t.elapsed()));
            match out {
                Ok(s) => {
                    rec.rolling = Some(s.value);
                    rec.value = Some(s.value);
                    rec.status = Some(RunStatus::Feasible);
                }
                Err(_) => rec.status = Some(RunStatus::NoSolution),
            }
        }
        Method::Dive => {
            let t = Instant::now();
            let mut root = root_relaxation(instance, &steps, &greedy_columns(instance, &steps), &MasterConfig::default());
            rec.root_ms = Some(ms(root.bound.elapsed));
            rec.root_lp = root.bound.exact.then_some(root.master.value);
            let cfg = DiveConfig {
                tokens: options.tokens,
                tree_budget: options.budget_or(DiveConfig::default().tree_budget),
                ..DiveConfig::default()
            };
            let seed = root.bound.exact.then(|| root.master.clone());
            let out = dive(instance, &steps, &cfg, &mut root.pool, seed, None);
            rec.dive_ms = Some(ms(t.elapsed()));
            rec.nodes = Some(out.nodes);
            rec.columns = Some(root.pool.len());
            rec.dive = out.best.as_ref().map(|s| s.value);
            rec.value = rec.dive;
            rec.status = Some(if out.best.is_some() {
                RunStatus::Feasible
            } else {
                RunStatus::NoSolution
            });
        }
        Method::Compact => {
            let out = compact_solve(
                instance,
                &steps,
                &CompactAssignment::empty(instance.len()),
                options.budget_or(SearchBudget::seconds(10)),
            );
            rec.value = out.value();
            rec.lower_bound = Some(out.lower_bound);
            rec.nodes = Some(out.nodes);
            rec.status = Some(match out.status {
                CompactStatus::Optimal => RunStatus::Optimal,
                CompactStatus::Budget if out.assignment.is_some() => RunStatus::Budget,
                _ => RunStatus::NoSolution,
            });
        }
        Method::Bnp => {
            let cfg = BnpConfig {
                node_budget: options.budget_or(BnpConfig::default().node_budget),
                ..BnpConfig::default()
            };
            let out = branch_and_price(instance, &steps, &cfg, &mut ColumnPool::new(), None);
            rec.value = out.best.as_ref().map(|s| s.value);
            rec.lower_bound = Some(out.lower_bound);
            rec.nodes = Some(out.nodes);
            rec.root_lp = out.root_lp;
            rec.status = Some(if out.complete {
                RunStatus::Optimal
            } else {
                RunStatus::Budget
            });
        }
        Method::Auto => {
            let mut cfg = SolverConfig {
                rolling: Some(options.rolling(&steps)),
                ..SolverConfig::default()
            };
            cfg.dive.tokens = options.tokens;
            if let Some(n) = options.node_budget {
                cfg.tree.node_budget = SearchBudget::nodes(n);
            }
            let r = solve_with_steps(instance, &steps, &cfg);
            for b in &r.bounds {
                let (v, t) = (Some(b.value), Some(ms(b.elapsed)));
                match b.name {
                    "LB0" => (rec.lb0, rec.lb0_ms) = (v, t),
                    "LB1" => (rec.lb1, rec.lb1_ms) = (v, t),
                    "LB2-I" => (rec.lb2, rec.lb2_ms) = (v, t),
                    "LB3" if b.exact => (rec.lb3, rec.lb3_ms) = (v, t),
                    _ => {}
                }
            }
            for &(name, v, t) in &r.heuristics {
                let t = Some(ms(t));
                match name {
                    "greedy" => (rec.greedy, rec.greedy_ms) = (v, t),
                    "rolling" => (rec.rolling, rec.rolling_ms) = (v, t),
                    "dive" => (rec.dive, rec.dive_ms) = (v, t),
                    _ => {}
                }
            }
            rec.value = r.value;
            rec.lower_bound = Some(r.lower_bound);
            rec.nodes = Some(r.nodes);
            rec.columns = Some(r.columns);
            rec.root_lp = r.root_lp;
            rec.root_ms = r.root_time.map(ms);
            rec.status = Some(match r.status {
                SolveStatus::Optimal => RunStatus::Optimal,
                SolveStatus::Feasible => RunStatus::Feasible,
                SolveStatus::BudgetExhausted => RunStatus::Budget,
                SolveStatus::Infeasible => RunStatus::NoSolution,
            });
        }
    }
    rec.time_ms = ms(clock.elapsed());
    rec
}

#[cfg(test)]
mod tests {
    use super::*;
    use tbpp_core::examples;

    #[test]
    fn examples_by_method() {
        let opts = RunOptions::default();
        let r = run_method(&examples::five_items(), Method::Auto, &opts);
        assert_eq!(r.summary(), "optimal 2");
        let r = run_method(&examples::two_steps(), Method::Lb3, &opts);
        assert_eq!(r.summary(), "LB3 = 3");
        for m in Method::value_variants() {
            let r = run_method(&examples::lb0_gap(), *m, &opts);
            assert!(r.is_consistent(), "{m}: {r:?}");
            if matches!(m, Method::Compact | Method::Bnp | Method::Auto) {
                assert_eq!(r.value, Some(11), "{m}");
            }
        }
    }
}
