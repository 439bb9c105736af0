//! One CSV row per (instance, method) run.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tbpp_core::generator::InstanceClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Optimal,
    Feasible,
    /// A lower bound was computed; `value` is empty.
    Bound,
    /// A budget ran out before optimality was proven.
    Budget,
    /// The heuristic ended without a packing.
    NoSolution,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Optimal => "optimal",
            RunStatus::Feasible => "feasible",
            RunStatus::Bound => "bound",
            RunStatus::Budget => "budget",
            RunStatus::NoSolution => "no-solution",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub class: Option<String>,
    /// Raw step count the instance was truncated to, when known.
    pub horizon: Option<u32>,
    /// Non-dominated time steps after reduction.
    pub steps: usize,
    pub n: usize,
    pub method: String,
    pub status: Option<RunStatus>,
    pub value: Option<u32>,
    pub lower_bound: Option<u32>,
    pub lb0: Option<u32>,
    pub lb0_ms: Option<f64>,
    pub lb1: Option<u32>,
    pub lb1_ms: Option<f64>,
    pub lb2: Option<u32>,
    pub lb2_ms: Option<f64>,
    pub lb3: Option<u32>,
    pub lb3_ms: Option<f64>,
    pub greedy: Option<u32>,
    pub greedy_ms: Option<f64>,
    pub rolling: Option<u32>,
    pub rolling_ms: Option<f64>,
    pub dive: Option<u32>,
    pub dive_ms: Option<f64>,
    pub nodes: Option<u64>,
    pub columns: Option<usize>,
    pub root_lp: Option<f64>,
    pub root_ms: Option<f64>,
    pub time_ms: f64,
}

impl RunRecord {
    pub fn is_optimal(&self) -> bool {
        self.status == Some(RunStatus::Optimal)
    }

    /// Lower bound not above the value whenever both are present.
    pub fn is_consistent(&self) -> bool {
        let lbs = [self.lower_bound, self.lb0, self.lb1, self.lb2, self.lb3];
        let ubs = [self.value, self.greedy, self.rolling, self.dive];
        lbs.iter()
            .flatten()
            .all(|lb| ubs.iter().flatten().all(|ub| lb <= ub))
    }

    /// Human readable one-line summary.
    pub fn summary(&self) -> String {
        match (self.status, self.value) {
            (Some(RunStatus::Bound), _) => format!(
                "{} = {}",
                self.method.to_uppercase(),
                self.lower_bound.map_or("?".into(), |v| v.to_string())
            ),
            (Some(status), Some(v)) => match self.lower_bound {
                Some(lb) if lb < v => format!("{status} {v} (lower bound {lb})"),
                _ => format!("{status} {v}"),
            },
            (Some(status), None) => status.to_string(),
            (None, _) => "unknown".into(),
        }
    }
}

/// Instance label parsed from a file stem `<class>_<index>_<steps>`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceMeta {
    pub class: Option<InstanceClass>,
    pub index: Option<u32>,
    pub horizon: Option<u32>,
}

impl InstanceMeta {
    pub fn from_name(name: &str) -> Self {
        let parts: Vec<&str> = name.split('_').collect();
        if let [class, index, horizon] = parts[..] {
            if let (Ok(c), Ok(i), Ok(t)) = (InstanceClass::from_str(class), index.parse(), horizon.parse()) {
                return Self {
                    class: Some(c),
                    index: Some(i),
                    horizon: Some(t),
                };
            }
        }
        Self::default()
    }

    pub fn file_name(class: InstanceClass, index: u32, horizon: u32) -> String {
        format!("{class}_{index}_{horizon}.tbpp")
    }
}

pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<RunRecord>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let rec = RunRecord {
            instance: "I_1_5".into(),
            class: Some("I".into()),
            horizon: Some(5),
            steps: 4,
            n: 14,
            method: "auto".into(),
            status: Some(RunStatus::Optimal),
            value: Some(8),
            lower_bound: Some(8),
            root_lp: Some(7.5),
            time_ms: 1.25,
            ..RunRecord::default()
        };
        let mut buf = Vec::new();
        write_records(&mut buf, std::slice::from_ref(&rec)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("instance,class,horizon,steps,n,method,status,value,lower_bound,lb0,lb0_ms"));
        assert!(text.contains(",optimal,8,8,"));
        assert_eq!(read_records(&buf[..]).unwrap(), vec![rec]);
    }

    #[test]
    fn meta_from_name() {
        let m = InstanceMeta::from_name("VII_3_10");
        assert_eq!(m.class, Some(InstanceClass::VII));
        assert_eq!((m.index, m.horizon), (Some(3), Some(10)));
        assert_eq!(InstanceMeta::from_name("whatever"), InstanceMeta::default());
        assert_eq!(InstanceMeta::file_name(InstanceClass::II, 1, 5), "II_1_5.tbpp");
    }
}
