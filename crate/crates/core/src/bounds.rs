//! Lower bounds: per-step bin packing (`LB0`, `LB0(t~)`), the continuous
//! relaxation of the compact model (`LB1`) and `LB1` on lifted weights
//! (`LB2`). The pattern-model bound lives in [`crate::colgen::lb3`].

use std::time::{Duration, Instant};

use crate::instance::Instance;
use crate::steps::TimeSteps;
use crate::subsolvers::{bpp_lower_bound, bpp_min_bins, first_fit_decreasing, subset_sum_max, SearchBudget};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub value: u32,
    /// Step that produced the value, where meaningful.
    pub witness_step: Option<usize>,
    /// False when a budget ran out and `value` is only a weaker valid bound.
    pub exact: bool,
    pub elapsed: Duration,
}

/// Largest total weight simultaneously active, by one sweep over items in
/// start order with a second list in end order.
pub fn max_active_load(instance: &Instance) -> u64 {
    let items = instance.items();
    let mut by_end: Vec<usize> = (0..items.len()).collect();
    by_end.sort_by_key(|&j| items[j].end);
    let mut load = 0u64;
    let mut best = 0u64;
    let mut expired = 0;
    for item in items {
        load += u64::from(item.weight);
        while expired < by_end.len() && items[by_end[expired]].end <= item.start {
            load -= u64::from(items[by_end[expired]].weight);
            expired += 1;
        }
        best = best.max(load);
    }
    best
}

/// Optimal value of the continuous relaxation of the compact model,
/// `max_t load(S_t) / W`.
pub fn continuous_relaxation(instance: &Instance) -> f64 {
    if instance.is_empty() {
        return 0.0;
    }
    max_active_load(instance) as f64 / f64::from(instance.capacity())
}

fn lb1_with_weights(instance: &Instance, steps: &TimeSteps, weights: &[u32]) -> (u32, Option<usize>) {
    let loads = steps.step_loads(weights);
    let (mut best_t, mut best) = (None, 0u64);
    for (t, &l) in loads.iter().enumerate() {
        if best_t.is_none() || l > best {
            best = l;
            best_t = Some(t);
        }
    }
    (
        best.div_ceil(u64::from(instance.capacity())) as u32,
        best_t,
    )
}

/// `ceil(max_t load(S_t) / W)`; the witness is the first step of maximum load.
pub fn lb1(instance: &Instance, steps: &TimeSteps) -> BoundReport {
    let clock = Instant::now();
    let peak = max_active_load(instance);
    let witness = steps
        .step_loads(&instance.weights())
        .iter()
        .position(|&l| l == peak);
    BoundReport {
        name: "LB1",
        value: peak.div_ceil(u64::from(instance.capacity())) as u32,
        witness_step: witness,
        exact: true,
        elapsed: clock.elapsed(),
    }
}

fn step_weights(instance: &Instance, steps: &TimeSteps, t: usize) -> Vec<u32> {
    steps.step(t).iter().map(|&j| instance.item(j).weight).collect()
}

/// Bin packing optimum of the single step `t`.
pub fn lb0_single(
    instance: &Instance,
    steps: &TimeSteps,
    t: usize,
    budget: SearchBudget,
) -> BoundReport {
    let clock = Instant::now();
    let out = bpp_min_bins(&step_weights(instance, steps, t), instance.capacity(), budget);
    BoundReport {
        name: "LB0(t)",
        value: out.bound(),
        witness_step: Some(t),
        exact: out.exact,
        elapsed: clock.elapsed(),
    }
}

/// Maximum over all steps of the step's bin packing optimum. `budget` applies
/// to each step separately.
pub fn lb0(instance: &Instance, steps: &TimeSteps, budget: SearchBudget) -> BoundReport {
    let clock = Instant::now();
    let capacity = instance.capacity();
    let mut order: Vec<(u32, usize)> = (0..steps.step_count())
        .map(|t| (bpp_lower_bound(&step_weights(instance, steps, t), capacity), t))
        .collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut value = 0;
    let mut witness = None;
    let mut exact = true;
    for (_, t) in order {
        let weights = step_weights(instance, steps, t);
        // cannot raise the bound
        if first_fit_decreasing(&weights, capacity) <= value {
            continue;
        }
        let out = bpp_min_bins(&weights, capacity, budget);
        exact &= out.exact;
        if out.bound() > value || witness.is_none() {
            value = out.bound();
            witness = Some(t);
        }
        if !out.exact && out.upper > value {
            exact = false;
        }
    }
    BoundReport {
        name: "LB0",
        value,
        witness_step: witness,
        exact,
        elapsed: clock.elapsed(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiftMethod {
    /// One subset sum over every item sharing a step with the lifted item.
    Global,
    /// One subset sum per step containing the item; the smallest lift wins.
    PerStep,
}

#[derive(Debug, Clone)]
pub struct LiftedInstance {
    pub base: Instance,
    pub lifted_weights: Vec<u32>,
}

impl LiftedInstance {
    /// The base instance with its weights replaced by the lifted ones.
    pub fn to_instance(&self) -> Instance {
        self.base
            .with_weights(&self.lifted_weights)
            .expect("lifted weights never exceed the capacity")
    }
}

/// Lifted weight of `item` given the current `weights` of all items: the
/// capacity minus the largest load the other items can add next to it.
pub fn lifted_weight(
    instance: &Instance,
    steps: &TimeSteps,
    weights: &[u32],
    item: usize,
    method: LiftMethod,
) -> u32 {
    let capacity = instance.capacity();
    let room = capacity - weights[item];
    match method {
        LiftMethod::Global => {
            let neighbours: Vec<u32> = (0..instance.len())
                .filter(|&k| k != item && steps.share_step(item, k))
                .map(|k| weights[k])
                .collect();
            capacity - subset_sum_max(&neighbours, room)
        }
        LiftMethod::PerStep => steps
            .steps_of(item)
            .map(|t| {
                let others: Vec<u32> = steps
                    .step(t)
                    .iter()
                    .filter(|&&k| k != item)
                    .map(|&k| weights[k])
                    .collect();
                capacity - subset_sum_max(&others, room)
            })
            .min()
            .unwrap_or(weights[item]),
    }
}

/// Runs `iterations` lifting passes. Each pass visits items in index order and
/// updates weights in place, so later items see the already lifted ones.
pub fn lift(
    instance: &Instance,
    steps: &TimeSteps,
    method: LiftMethod,
    iterations: usize,
) -> LiftedInstance {
    assert!(iterations >= 1, "at least one lifting pass");
    let mut weights = instance.weights();
    for _ in 0..iterations {
        let mut changed = false;
        for j in 0..instance.len() {
            let w = lifted_weight(instance, steps, &weights, j, method);
            debug_assert!(w >= weights[j]);
            changed |= w != weights[j];
            weights[j] = w;
        }
        if !changed {
            break;
        }
    }
    LiftedInstance {
        base: instance.clone(),
        lifted_weights: weights,
    }
}

/// `LB1` evaluated on weights lifted by one pass of `method`.
pub fn lb2(instance: &Instance, steps: &TimeSteps, method: LiftMethod) -> BoundReport {
    let clock = Instant::now();
    let lifted = lift(instance, steps, method, 1);
    let (value, witness) = lb1_with_weights(instance, steps, &lifted.lifted_weights);
    BoundReport {
        name: match method {
            LiftMethod::Global => "LB2-I",
            LiftMethod::PerStep => "LB2-II",
        },
        value,
        witness_step: witness,
        exact: true,
        elapsed: clock.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::instance::Item;
    use crate::steps::reduce_time_steps;

    fn with_steps(inst: Instance) -> (Instance, TimeSteps) {
        let steps = reduce_time_steps(&inst);
        (inst, steps)
    }

    #[test]
    fn lb1_examples() {
        let (i, s) = with_steps(examples::two_steps());
        let r = lb1(&i, &s);
        assert_eq!((r.value, r.witness_step), (2, Some(1)));
        let (i, s) = with_steps(examples::lb0_gap());
        assert_eq!(lb1(&i, &s).value, 9);
        let (i, s) = with_steps(examples::five_items());
        assert_eq!(lb1(&i, &s).value, 2);
        assert_eq!(lb1(&i, &s).witness_step, Some(1));
    }

    #[test]
    fn lb0_examples() {
        let u = SearchBudget::unlimited();
        for (inst, v) in [
            (examples::two_steps(), 2),
            (examples::lb0_gap(), 9),
            (examples::five_items(), 2),
        ] {
            let (i, s) = with_steps(inst);
            let r = lb0(&i, &s, u);
            assert_eq!(r.value, v, "{}", i.name());
            assert!(r.exact);
            let single = lb0_single(&i, &s, lb1(&i, &s).witness_step.unwrap(), u);
            assert!(single.value <= r.value);
        }
    }

    #[test]
    fn lifting_examples() {
        let (i, s) = with_steps(Instance::new("a", 10, vec![Item::new(3, 0, 1)]).unwrap());
        assert_eq!(lift(&i, &s, LiftMethod::Global, 1).lifted_weights, vec![10]);
        assert_eq!(lb2(&i, &s, LiftMethod::Global).value, 1);

        let two = vec![Item::new(6, 0, 1), Item::new(6, 0, 1)];
        let (i, s) = with_steps(Instance::new("b", 10, two.clone()).unwrap());
        assert_eq!(lift(&i, &s, LiftMethod::Global, 1).lifted_weights, vec![10, 10]);
        assert_eq!(lb2(&i, &s, LiftMethod::Global).value, 2);
        let (i, s) = with_steps(Instance::new("c", 11, two).unwrap());
        assert_eq!(lb1(&i, &s).value, 2);
        assert_eq!(lb2(&i, &s, LiftMethod::Global).value, 2);

        let (i, s) = with_steps(examples::two_steps());
        let w = i.weights();
        assert_eq!(lifted_weight(&i, &s, &w, 1, LiftMethod::Global), 2);
        assert_eq!(lift(&i, &s, LiftMethod::Global, 1).lifted_weights, w);
        assert_eq!(lb2(&i, &s, LiftMethod::Global).value, 2);
    }

    #[test]
    fn sweep_matches_step_loads() {
        let (i, s) = with_steps(examples::five_items());
        assert_eq!(max_active_load(&i), 5);
        assert_eq!(*s.step_loads(&i.weights()).iter().max().unwrap(), 5);
        let empty = Instance::new("e", 3, vec![]).unwrap();
        assert_eq!(max_active_load(&empty), 0);
        assert_eq!(lb1(&empty, &reduce_time_steps(&empty)).value, 0);
    }
}
