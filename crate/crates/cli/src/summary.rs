//! Grouped result tables: solved count, average gap and average time per
//! method and class, and per method and step count.

use std::collections::BTreeMap;
use std::fmt::Write;

use tbpp_core::generator::InstanceClass;

use crate::record::RunRecord;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupStats {
    pub runs: usize,
    pub optimal: usize,
    /// Mean of `(value - lower_bound) / lower_bound` in percent over runs
    /// with both values.
    pub avg_gap: Option<f64>,
    pub avg_time_ms: f64,
}

fn stats<'a>(records: impl Iterator<Item = &'a RunRecord>) -> GroupStats {
    let mut s = GroupStats::default();
    let (mut gap_sum, mut gap_n, mut time) = (0.0, 0usize, 0.0);
    for r in records {
        s.runs += 1;
        s.optimal += usize::from(r.is_optimal());
        time += r.time_ms;
        if let (Some(v), Some(lb)) = (r.value, r.lower_bound) {
            if lb > 0 {
                gap_sum += 100.0 * f64::from(v - lb.min(v)) / f64::from(lb);
                gap_n += 1;
            }
        }
    }
    if s.runs > 0 {
        s.avg_time_ms = time / s.runs as f64;
    }
    s.avg_gap = (gap_n > 0).then(|| gap_sum / gap_n as f64);
    s
}

/// Stats keyed by `(method, group)` where `key` extracts the group; groups
/// sort by the key's own order.
pub fn group_by<K, F>(records: &[RunRecord], key: F) -> BTreeMap<(String, K), GroupStats>
where
    K: Ord,
    F: Fn(&RunRecord) -> K,
{
    let mut groups: BTreeMap<(String, K), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.method.clone(), key(r))).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(k, v)| (k, stats(v.into_iter())))
        .collect()
}

/// Plain-text tables grouped by class and by step count.
pub fn render_tables(records: &[RunRecord]) -> String {
    let mut out = String::new();
    // unparsed labels sort after the known ones
    let by_class = group_by(records, |r| {
        let label = r.class.clone().unwrap_or_else(|| "-".into());
        (label.parse::<InstanceClass>().map_or(u32::MAX, |c| c as u32), label)
    });
    let by_steps = group_by(records, |r| match r.horizon {
        Some(h) => (h, h.to_string()),
        None => (u32::MAX, format!("{} steps", r.steps)),
    });
    for (title, table) in [("class", by_class), ("|T|", by_steps)] {
        let _ = writeln!(out, "{:<8} {:<8} {:>5} {:>5} {:>9} {:>11}", "method", title, "runs", "#opt", "avg gap%", "avg ms");
        for ((method, (_, group)), s) in &table {
            let gap = s.avg_gap.map_or("-".to_string(), |g| format!("{g:.2}"));
            let _ = writeln!(
                out,
                "{:<8} {:<8} {:>5} {:>5} {:>9} {:>11.2}",
                method, group, s.runs, s.optimal, gap, s.avg_time_ms
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::RunStatus;

    #[test]
    fn grouped_counts() {
        let recs: Vec<RunRecord> = (0..4)
            .map(|i| RunRecord {
                instance: format!("I_{i}_5"),
                class: Some(if i < 2 { "I" } else { "II" }.into()),
                horizon: Some(5),
                method: "auto".into(),
                status: Some(if i == 3 { RunStatus::Budget } else { RunStatus::Optimal }),
                value: Some(10),
                lower_bound: Some(if i == 3 { 8 } else { 10 }),
                time_ms: 2.0,
                ..RunRecord::default()
            })
            .collect();
        let g = group_by(&recs, |r| r.class.clone().unwrap());
        let two = &g[&("auto".into(), "II".into())];
        assert_eq!((two.runs, two.optimal), (2, 1));
        assert!((two.avg_gap.unwrap() - 12.5).abs() < 1e-12);
        assert!(render_tables(&recs).contains("auto"));
    }

    #[test]
    fn tables_use_natural_order() {
        let recs: Vec<RunRecord> = [("IX", 10), ("V", 5), ("X", 40), ("I", 20)]
            .into_iter()
            .map(|(c, t)| RunRecord {
                instance: format!("{c}_1_{t}"),
                class: Some(c.into()),
                horizon: Some(t),
                method: "auto".into(),
                ..RunRecord::default()
            })
            .collect();
        let text = render_tables(&recs);
        let column: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("auto"))
            .map(|l| l.split_whitespace().nth(1).unwrap())
            .collect();
        assert_eq!(column, ["I", "V", "IX", "X", "5", "10", "20", "40"]);
    }
}
