//! Performance profiles: for each method, the fraction of instances it
//! solved within `tau` times the fastest solving method's time.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::record::RunRecord;

/// Times below this many milliseconds count as this value, so ratios stay
/// finite for instant runs.
pub const TIME_FLOOR_MS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub method: String,
    pub tau: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("a profile needs at least two methods, found {0}")]
    TooFewMethods(usize),
    #[error("instance sets differ between methods: {0}")]
    Mismatch(String),
    #[error("instance {instance} appears twice for method {method}")]
    Duplicate { instance: String, method: String },
}

/// Step-function points per method, in method name order. Each solved
/// instance adds one point at its ratio; the last point of a method is its
/// solved fraction. A method that solved nothing gets the single point
/// `(1, 0)`.
pub fn performance_profile(records: &[RunRecord]) -> Result<Vec<ProfilePoint>, ProfileError> {
    let mut by_method: BTreeMap<&str, BTreeMap<&str, &RunRecord>> = BTreeMap::new();
    for r in records {
        let runs = by_method.entry(&r.method).or_default();
        if runs.insert(&r.instance, r).is_some() {
            return Err(ProfileError::Duplicate {
                instance: r.instance.clone(),
                method: r.method.clone(),
            });
        }
    }
    if by_method.len() < 2 {
        return Err(ProfileError::TooFewMethods(by_method.len()));
    }
    let all: BTreeSet<&str> = by_method.values().flat_map(|m| m.keys().copied()).collect();
    let mut missing = Vec::new();
    for (method, runs) in &by_method {
        let lacking: Vec<&str> = all.iter().copied().filter(|i| !runs.contains_key(i)).collect();
        if !lacking.is_empty() {
            missing.push(format!("{method} lacks {}", lacking.join(" ")));
        }
    }
    if !missing.is_empty() {
        return Err(ProfileError::Mismatch(missing.join("; ")));
    }

    let time = |r: &RunRecord| r.time_ms.max(TIME_FLOOR_MS);
    let fastest: BTreeMap<&str, f64> = all
        .iter()
        .filter_map(|&i| {
            by_method
                .values()
                .map(|m| m[i])
                .filter(|r| r.is_optimal())
                .map(time)
                .min_by(f64::total_cmp)
                .map(|t| (i, t))
        })
        .collect();

    let total = all.len() as f64;
    let mut points = Vec::new();
    for (method, runs) in &by_method {
        let mut ratios: Vec<f64> = runs
            .iter()
            .filter(|(_, r)| r.is_optimal())
            .map(|(i, r)| time(r) / fastest[i])
            .collect();
        ratios.sort_by(f64::total_cmp);
        if ratios.is_empty() {
            points.push(ProfilePoint {
                method: method.to_string(),
                tau: 1.0,
                fraction: 0.0,
            });
        }
        for (k, tau) in ratios.iter().enumerate() {
            points.push(ProfilePoint {
                method: method.to_string(),
                tau: *tau,
                fraction: (k + 1) as f64 / total,
            });
        }
    }
    Ok(points)
}
