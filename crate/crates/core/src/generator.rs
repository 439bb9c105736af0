//! Random instance generator.
//!
//! A raw instance is a sequence of active sets `S_1..S_H`. Set `S_t` has a
//! uniform size in `[a_min, a_max]`; for `t > 1` a uniform percentage `beta`
//! in `[b_min, b_max]` of the previous set is carried over (sampled without
//! replacement) and the remainder is filled with fresh items. An item lives
//! from the first set containing it up to (excluding) the set after the last
//! one containing it. Smaller instances are cut from a raw instance by keeping
//! every item that appears in the first `|T|` sets.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{Instance, Item};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub a_min: u32,
    pub a_max: u32,
    pub b_min: u32,
    pub b_max: u32,
    pub raw_step_count: u32,
    pub weight_min: u32,
    pub weight_max: u32,
    pub capacity: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("active set size range [{0}, {1}] is empty or zero")]
    SetSizeRange(u32, u32),
    #[error("carry-over range [{0}, {1}] must satisfy 0 <= min <= max <= 100")]
    CarryRange(u32, u32),
    #[error("weight range [{min}, {max}] invalid for capacity {capacity}")]
    WeightRange { min: u32, max: u32, capacity: u32 },
    #[error("requested {requested} steps but the raw horizon has {available}")]
    TooManySteps { requested: u32, available: u32 },
    #[error("at least one step is required")]
    NoSteps,
}

/// The ten parameter classes of the benchmark set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InstanceClass {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
}

impl InstanceClass {
    pub const ALL: [InstanceClass; 10] = [
        InstanceClass::I,
        InstanceClass::II,
        InstanceClass::III,
        InstanceClass::IV,
        InstanceClass::V,
        InstanceClass::VI,
        InstanceClass::VII,
        InstanceClass::VIII,
        InstanceClass::IX,
        InstanceClass::X,
    ];

    /// `(a_min, a_max, b_min, b_max)`.
    pub fn ranges(self) -> (u32, u32, u32, u32) {
        use InstanceClass::*;
        match self {
            I => (10, 10, 90, 95),
            II => (15, 15, 90, 95),
            III => (20, 20, 90, 95),
            IV => (25, 25, 90, 95),
            V => (30, 30, 90, 95),
            VI => (30, 30, 70, 90),
            VII => (30, 30, 90, 95),
            VIII => (25, 35, 90, 95),
            IX => (25, 35, 70, 90),
            X => (30, 40, 90, 95),
        }
    }

    /// Raw horizon of the `index`-th (1-based) instance of the class.
    pub fn raw_horizon(self, index: u32) -> u32 {
        let base = if self <= InstanceClass::IV { 2688 } else { 768 };
        base + 128 * index.saturating_sub(1)
    }

    pub fn params(self, index: u32, seed: u64) -> GeneratorParams {
        let (a_min, a_max, b_min, b_max) = self.ranges();
        GeneratorParams {
            a_min,
            a_max,
            b_min,
            b_max,
            raw_step_count: self.raw_horizon(index),
            weight_min: 10,
            weight_max: 100,
            capacity: 100,
            seed,
        }
    }
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InstanceClass::I => "I",
            InstanceClass::II => "II",
            InstanceClass::III => "III",
            InstanceClass::IV => "IV",
            InstanceClass::V => "V",
            InstanceClass::VI => "VI",
            InstanceClass::VII => "VII",
            InstanceClass::VIII => "VIII",
            InstanceClass::IX => "IX",
            InstanceClass::X => "X",
        };
        f.write_str(s)
    }
}

impl FromStr for InstanceClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InstanceClass::ALL
            .iter()
            .copied()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown instance class '{s}' (expected I..X)"))
    }
}

impl GeneratorParams {
    fn validate(&self) -> Result<(), GeneratorError> {
        if self.a_min == 0 || self.a_min > self.a_max {
            return Err(GeneratorError::SetSizeRange(self.a_min, self.a_max));
        }
        if self.b_min > self.b_max || self.b_max > 100 {
            return Err(GeneratorError::CarryRange(self.b_min, self.b_max));
        }
        if self.weight_min == 0
            || self.weight_min > self.weight_max
            || self.weight_max > self.capacity
        {
            return Err(GeneratorError::WeightRange {
                min: self.weight_min,
                max: self.weight_max,
                capacity: self.capacity,
            });
        }
        Ok(())
    }
}

/// Raw active sets as produced before truncation, kept for inspection.
#[derive(Debug, Clone)]
pub struct RawInstance {
    pub sets: Vec<Vec<usize>>,
    pub weights: Vec<u32>,
    pub capacity: u32,
}

impl RawInstance {
    pub fn generate(params: &GeneratorParams) -> Result<Self, GeneratorError> {
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut sets: Vec<Vec<usize>> = Vec::with_capacity(params.raw_step_count as usize);
        let mut weights: Vec<u32> = Vec::new();

        for t in 0..params.raw_step_count as usize {
            let size = rng.gen_range(params.a_min..=params.a_max) as usize;
            let mut set = Vec::with_capacity(size);
            if t > 0 {
                let prev = &sets[t - 1];
                let beta = rng.gen_range(params.b_min..=params.b_max) as usize;
                let carry = ((beta * prev.len() + 50) / 100).min(prev.len()).min(size);
                let mut picked: Vec<usize> = sample(&mut rng, prev.len(), carry)
                    .into_iter()
                    .map(|k| prev[k])
                    .collect();
                picked.sort_unstable();
                set.extend(picked);
            }
            while set.len() < size {
                set.push(weights.len());
                weights.push(rng.gen_range(params.weight_min..=params.weight_max));
            }
            sets.push(set);
        }

        Ok(Self {
            sets,
            weights,
            capacity: params.capacity,
        })
    }

    /// Keeps the items appearing in the first `steps` raw sets.
    pub fn truncate(&self, steps: u32, name: impl Into<String>) -> Result<Instance, GeneratorError> {
        if steps == 0 {
            return Err(GeneratorError::NoSteps);
        }
        if steps as usize > self.sets.len() {
            return Err(GeneratorError::TooManySteps {
                requested: steps,
                available: self.sets.len() as u32,
            });
        }
        let n = self.weights.len();
        let mut first = vec![u32::MAX; n];
        let mut last = vec![0u32; n];
        for (t, set) in self.sets.iter().enumerate() {
            for &j in set {
                first[j] = first[j].min(t as u32);
                last[j] = last[j].max(t as u32);
            }
        }
        let items = (0..n)
            .filter(|&j| first[j] < steps)
            .map(|j| Item::new(self.weights[j], first[j], last[j] + 1))
            .collect();
        Ok(Instance::new(name, self.capacity, items).expect("generated items are valid"))
    }
}

/// Generates the raw instance for `params` and truncates it to
/// `target_steps` raw sets.
pub fn generate_instance(
    params: &GeneratorParams,
    target_steps: u32,
) -> Result<Instance, GeneratorError> {
    if target_steps == 0 {
        return Err(GeneratorError::NoSteps);
    }
    if target_steps > params.raw_step_count {
        return Err(GeneratorError::TooManySteps {
            requested: target_steps,
            available: params.raw_step_count,
        });
    }
    RawInstance::generate(params)?.truncate(target_steps, format!("gen-{}", params.seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_one_sets_have_ten_items() {
        let raw = RawInstance::generate(&InstanceClass::I.params(1, 7)).unwrap();
        assert_eq!(raw.sets.len(), 2688);
        assert!(raw.sets.iter().take(5).all(|s| s.len() == 10));
    }

    #[test]
    fn class_ten_set_sizes_in_range() {
        let raw = RawInstance::generate(&InstanceClass::X.params(1, 3)).unwrap();
        assert!(raw.sets.iter().all(|s| (30..=40).contains(&s.len())));
    }

    #[test]
    fn horizons() {
        assert_eq!(InstanceClass::I.raw_horizon(1), 2688);
        assert_eq!(InstanceClass::IV.raw_horizon(10), 2688 + 128 * 9);
        assert_eq!(InstanceClass::V.raw_horizon(1), 768);
        assert_eq!(InstanceClass::X.raw_horizon(2), 896);
    }

    #[test]
    fn deterministic_for_seed() {
        let p = InstanceClass::VIII.params(1, 42);
        assert_eq!(generate_instance(&p, 10), generate_instance(&p, 10));
        let q = InstanceClass::VIII.params(1, 43);
        assert_ne!(generate_instance(&p, 10), generate_instance(&q, 10));
    }

    #[test]
    fn rejects_bad_requests() {
        let mut p = InstanceClass::I.params(1, 1);
        p.raw_step_count = 4;
        assert!(matches!(
            generate_instance(&p, 5),
            Err(GeneratorError::TooManySteps { .. })
        ));
        assert_eq!(generate_instance(&p, 0), Err(GeneratorError::NoSteps));
        p.b_max = 120;
        assert!(matches!(
            generate_instance(&p, 2),
            Err(GeneratorError::CarryRange(..))
        ));
    }

    #[test]
    fn carried_items_stay_contiguous() {
        let raw = RawInstance::generate(&InstanceClass::IX.params(1, 5)).unwrap();
        let inst = raw.truncate(10, "x").unwrap();
        for (t, set) in raw.sets.iter().take(10).enumerate() {
            let active = inst
                .items()
                .iter()
                .filter(|i| i.is_active_at(t as u32))
                .count();
            assert_eq!(active, set.len());
        }
    }

    #[test]
    fn class_names_round_trip() {
        for c in InstanceClass::ALL {
            assert_eq!(c.to_string().parse::<InstanceClass>().unwrap(), c);
        }
        assert!("XI".parse::<InstanceClass>().is_err());
    }
}
