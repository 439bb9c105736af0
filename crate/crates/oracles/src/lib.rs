//! Slow, direct reference implementations for tests. Nothing here uses the
//! time-step reduction: feasibility is checked at every start instant of the
//! original items.

use rand::Rng;
use tbpp_core::{Instance, Item};

/// True if `items` fit together in one bin at every start instant.
pub fn fits_together(instance: &Instance, items: &[usize]) -> bool {
    items.iter().all(|&probe| {
        let at = instance.item(probe).start;
        let load: u64 = items
            .iter()
            .map(|&j| instance.item(j))
            .filter(|it| it.start <= at && at < it.end)
            .map(|it| u64::from(it.weight))
            .sum();
        load <= u64::from(instance.capacity())
    })
}

/// Minimum number of bins by enumerating set partitions (n up to about 12).
pub fn exhaustive_optimum(instance: &Instance) -> u32 {
    fn go(instance: &Instance, j: usize, bins: &mut Vec<Vec<usize>>, best: &mut usize) {
        if bins.len() >= *best {
            return;
        }
        if j == instance.len() {
            *best = bins.len();
            return;
        }
        for b in 0..bins.len() {
            bins[b].push(j);
            if fits_together(instance, &bins[b]) {
                go(instance, j + 1, bins, best);
            }
            bins[b].pop();
        }
        bins.push(vec![j]);
        go(instance, j + 1, bins, best);
        bins.pop();
    }
    let mut best = instance.len() + 1;
    if instance.is_empty() {
        return 0;
    }
    go(instance, 0, &mut Vec::new(), &mut best);
    best as u32
}

/// Every nonempty feasible pattern, as sorted item lists.
pub fn enumerate_patterns(instance: &Instance) -> Vec<Vec<usize>> {
    let n = instance.len();
    assert!(n <= 20, "enumeration is exponential");
    (1u32..(1 << n))
        .map(|mask| (0..n).filter(|&j| mask >> j & 1 == 1).collect::<Vec<_>>())
        .filter(|p| fits_together(instance, p))
        .collect()
}

/// Side constraints for brute-force pricing.
#[derive(Debug, Clone, Default)]
pub struct PricingRules {
    /// Pairs that must be both in or both out.
    pub same: Vec<(usize, usize)>,
    /// Pairs that may not be both in.
    pub different: Vec<(usize, usize)>,
    /// Exact item sets that may not be chosen.
    pub forbidden: Vec<Vec<usize>>,
}

/// Best pattern value over all subsets (including the empty one) that obey
/// `rules`.
pub fn best_pattern_value(instance: &Instance, profits: &[f64], rules: &PricingRules) -> f64 {
    let n = instance.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let has = |j: usize| mask >> j & 1 == 1;
        if rules.same.iter().any(|&(a, b)| has(a) != has(b))
            || rules.different.iter().any(|&(a, b)| has(a) && has(b))
        {
            continue;
        }
        let p: Vec<usize> = (0..n).filter(|&j| has(j)).collect();
        if rules.forbidden.iter().any(|f| {
            let mut f = f.clone();
            f.sort_unstable();
            f == p
        }) {
            continue;
        }
        if fits_together(instance, &p) {
            best = best.max(p.iter().map(|&j| profits[j]).sum());
        }
    }
    best
}

/// Minimum of `c x` s.t. `A x >= b`, `x >= 0` (with `b >= 0`), by a dense
/// two-phase tableau simplex under Bland's rule. `None` if infeasible or
/// unbounded.
pub fn tableau_lp_min(costs: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Option<f64> {
    let m = rows.len();
    let n = costs.len();
    // columns: x (n), surplus (m), artificial (m), rhs
    let width = n + 2 * m + 1;
    let mut t = vec![vec![0.0; width]; m];
    for i in 0..m {
        t[i][..n].copy_from_slice(&rows[i]);
        t[i][n + i] = -1.0;
        t[i][n + m + i] = 1.0;
        t[i][width - 1] = rhs[i];
    }
    let mut basis: Vec<usize> = (n + m..n + 2 * m).collect();

    let run = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, cost: &[f64], allowed: usize| -> bool {
        loop {
            let reduced = |j: usize, t: &Vec<Vec<f64>>| {
                cost[j] - (0..m).map(|i| cost[basis[i]] * t[i][j]).sum::<f64>()
            };
            let Some(q) = (0..allowed).find(|&j| !basis.contains(&j) && reduced(j, t) < -1e-10) else {
                return true;
            };
            let mut leave: Option<usize> = None;
            for i in 0..m {
                if t[i][q] > 1e-10 {
                    let r = t[i][width - 1] / t[i][q];
                    leave = match leave {
                        None => Some(i),
                        Some(l) => {
                            let rl = t[l][width - 1] / t[l][q];
                            if r < rl - 1e-12 || (r <= rl + 1e-12 && basis[i] < basis[l]) {
                                Some(i)
                            } else {
                                Some(l)
                            }
                        }
                    };
                }
            }
            let Some(l) = leave else {
                return false;
            };
            let p = t[l][q];
            for v in t[l].iter_mut() {
                *v /= p;
            }
            eliminate(t, l, q);
            basis[l] = q;
        }
    };

    let mut phase1 = vec![0.0; n + 2 * m];
    for c in phase1.iter_mut().skip(n + m) {
        *c = 1.0;
    }
    run(&mut t, &mut basis, &phase1, n + 2 * m);
    let infeas: f64 = (0..m).filter(|&i| basis[i] >= n + m).map(|i| t[i][width - 1]).sum();
    if infeas > 1e-8 {
        return None;
    }
    // pivot remaining zero artificials out where possible
    for i in 0..m {
        if basis[i] >= n + m {
            if let Some(q) = (0..n + m).find(|&j| t[i][j].abs() > 1e-9) {
                let p = t[i][q];
                for v in t[i].iter_mut() {
                    *v /= p;
                }
                eliminate(&mut t, i, q);
                basis[i] = q;
            }
        }
    }
    let mut phase2 = vec![0.0; n + 2 * m];
    phase2[..n].copy_from_slice(costs);
    if !run(&mut t, &mut basis, &phase2, n + m) {
        return None;
    }
    Some((0..m).map(|i| phase2[basis[i]] * t[i][width - 1]).sum())
}

/// Clears column `q` from every row but the (already normalized) row `l`.
fn eliminate(t: &mut [Vec<f64>], l: usize, q: usize) {
    let pivot = t[l].clone();
    for (i, row) in t.iter_mut().enumerate() {
        let f = row[q];
        if i != l && f != 0.0 {
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= f * p;
            }
        }
    }
}

/// Value of the pattern LP (one column per feasible pattern, every item
/// covered) by the tableau oracle.
pub fn pattern_lp_value(instance: &Instance) -> f64 {
    let patterns = enumerate_patterns(instance);
    let n = instance.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| patterns.iter().map(|p| f64::from(u8::from(p.contains(&i)))).collect())
        .collect();
    tableau_lp_min(&vec![1.0; patterns.len()], &rows, &vec![1.0; n]).expect("singletons cover every item")
}

/// Small random instance: `n` items with starts in `0..5`, windows of length
/// 1 to 4 and capacity in `5..=20`.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, name: &str) -> Instance {
    let capacity = rng.gen_range(5..=20);
    let items = (0..n)
        .map(|_| {
            let start = rng.gen_range(0..5);
            let len = rng.gen_range(1..=4);
            Item::new(rng.gen_range(1..=capacity), start, start + len)
        })
        .collect();
    Instance::new(name, capacity, items).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        let ex1 = tbpp_core::examples::five_items();
        assert_eq!(exhaustive_optimum(&ex1), 2);
        let ex2 = tbpp_core::examples::two_steps();
        assert_eq!(exhaustive_optimum(&ex2), 3);
        assert!((pattern_lp_value(&ex2) - 2.5).abs() < 1e-9);
        assert!((pattern_lp_value(&ex1) - 1.5).abs() < 1e-9, "{}", pattern_lp_value(&ex1));
        let ones = vec![1.0; 5];
        assert_eq!(best_pattern_value(&ex1, &ones, &PricingRules::default()), 4.0);
    }

    #[test]
    fn tableau_small() {
        // min x + y, x + 2y >= 2, 3x + y >= 3
        let v = tableau_lp_min(&[1.0, 1.0], &[vec![1.0, 2.0], vec![3.0, 1.0]], &[2.0, 3.0]).unwrap();
        assert!((v - 1.4).abs() < 1e-9);
        assert!(tableau_lp_min(&[1.0], &[vec![0.0]], &[1.0]).is_none());
    }
}
