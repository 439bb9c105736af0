//! Simplex, pricing, master LP and tree search against brute-force
//! references.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tbpp_core::bnp::{branch_and_price, dive, select_branch_pair, BnpConfig, DiveConfig};
use tbpp_core::colgen::{
    price, root_relaxation, BranchState, ColumnPool, MasterConfig, MasterStatus, Pattern, PricingProblem,
};
use tbpp_core::simplex::{solve_lp, LinearProgram, LpStatus};
use tbpp_core::{reduce_time_steps, Instance, SearchBudget};
use tbpp_oracles::{
    best_pattern_value, exhaustive_optimum, fits_together, pattern_lp_value, random_instance, tableau_lp_min,
    PricingRules,
};

fn instance(seed: u64, n: usize) -> Instance {
    random_instance(&mut ChaCha8Rng::seed_from_u64(seed), n, &format!("rand-{seed}"))
}

#[test]
fn simplex_matches_tableau_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..150 {
        let m = rng.gen_range(1..=15);
        let n = rng.gen_range(1..=40);
        let density = rng.gen_range(0.1..0.6);
        let mut rows = vec![vec![0.0; n]; m];
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                if rng.gen_bool(density) {
                    *v = 1.0;
                }
            }
        }
        let costs: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(1..=5))).collect();
        let rhs: Vec<f64> = (0..m).map(|_| f64::from(rng.gen_range(0..=2))).collect();
        let mut lp = LinearProgram::with_rhs(rhs.clone());
        for (j, &c) in costs.iter().enumerate() {
            let entries = (0..m).filter(|&i| rows[i][j] != 0.0).map(|i| (i, 1.0)).collect();
            lp.add_column(c, entries);
        }
        let got = solve_lp(&lp);
        match tableau_lp_min(&costs, &rows, &rhs) {
            None => assert_eq!(got.status, LpStatus::Infeasible, "case {case}"),
            Some(v) => {
                assert_eq!(got.status, LpStatus::Optimal, "case {case}");
                assert!((got.objective - v).abs() <= 1e-6, "case {case}: {} vs {v}", got.objective);
                let dual: f64 = got.duals.iter().zip(&rhs).map(|(y, b)| y * b).sum();
                assert!((dual - got.objective).abs() <= 1e-6, "duality gap in case {case}");
                assert!(got.duals.iter().all(|&y| y >= -1e-9));
                for j in 0..n {
                    let reduced = costs[j] - (0..m).map(|i| got.duals[i] * rows[i][j]).sum::<f64>();
                    assert!(reduced >= -1e-6, "dual infeasible column {j} in case {case}");
                    if got.primal[j] > 1e-7 {
                        assert!(reduced.abs() <= 1e-6, "complementary slackness in case {case}");
                    }
                }
            }
        }
    }
}

#[test]
fn root_lp_matches_enumerated_pattern_lp() {
    for seed in 0..50 {
        let inst = instance(seed, 4 + seed as usize % 7);
        let steps = reduce_time_steps(&inst);
        let root = root_relaxation(&inst, &steps, &[], &MasterConfig::default());
        assert_eq!(root.master.status, MasterStatus::Optimal);
        let want = pattern_lp_value(&inst);
        assert!((root.master.value - want).abs() <= 1e-6, "{inst}: {} vs {want}", root.master.value);
        for h in root.master.history.windows(2) {
            assert!(h[1] <= h[0] + 1e-9);
        }
        let lpc = *steps.step_loads(&inst.weights()).iter().max().unwrap_or(&0) as f64
            / f64::from(inst.capacity());
        assert!(root.master.value >= lpc - 1e-6);
    }
}

#[test]
fn pricing_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..100u64 {
        let n = rng.gen_range(3..=12);
        let inst = instance(1000 + case, n);
        let steps = reduce_time_steps(&inst);
        let profits: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1.0) })
            .collect();
        let mut rules = PricingRules::default();
        let mut branch = BranchState::default();
        let a = rng.gen_range(0..n);
        let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
        if fits_together(&inst, &[a, b]) {
            rules.same.push((a, b));
            branch.same_pairs.push((a, b));
        }
        let c = rng.gen_range(0..n);
        let d = (c + 1 + rng.gen_range(0..n - 1)) % n;
        let roots = branch.group_roots(n);
        if roots[c] != roots[d] {
            rules.different.push((c, d));
            branch.diff_pairs.push((c, d));
        }
        // forbid the unrestricted optimum so the search has to escape it
        let pp = PricingProblem::new(&inst, &steps, &branch, &profits);
        let first = price(&pp, SearchBudget::unlimited());
        if !first.pattern.is_empty() {
            rules.forbidden.push(first.pattern.items().to_vec());
            branch.forbidden_patterns.push(first.pattern.clone());
        }
        let pp = PricingProblem::new(&inst, &steps, &branch, &profits);
        let got = price(&pp, SearchBudget::unlimited());
        let want = best_pattern_value(&inst, &profits, &rules);
        assert!(got.exact);
        assert!((got.value - want).abs() <= 1e-9, "case {case}: {} vs {want}", got.value);
        let p = &got.pattern;
        assert!(fits_together(&inst, p.items()));
        assert!(!branch.forbidden_patterns.contains(p) || p.is_empty());
        assert!(rules.same.iter().all(|&(a, b)| p.contains(a) == p.contains(b)));
        assert!(rules.different.iter().all(|&(a, b)| !(p.contains(a) && p.contains(b))));
    }
}

#[test]
fn tree_search_alone_is_exact() {
    for seed in 0..80 {
        let inst = instance(500 + seed, 3 + seed as usize % 9);
        let steps = reduce_time_steps(&inst);
        let opt = exhaustive_optimum(&inst);
        let out = branch_and_price(&inst, &steps, &BnpConfig::default(), &mut ColumnPool::new(), None);
        assert!(out.complete);
        let best = out.best.unwrap();
        assert_eq!(best.value, opt, "{inst}");
        assert!(best.is_feasible(&inst));
        assert_eq!(out.lower_bound, opt);
    }
}

#[test]
fn dives_are_feasible_and_token_counts_hold() {
    for seed in 0..60 {
        let n = 3 + seed as usize % 9;
        let inst = instance(900 + seed, n);
        let steps = reduce_time_steps(&inst);
        let opt = exhaustive_optimum(&inst);
        for tokens in 0..=2u32 {
            let mut pool = ColumnPool::new();
            let root = root_relaxation(&inst, &steps, &[], &MasterConfig::default());
            pool.clone_from(&root.pool);
            let cfg = DiveConfig {
                tokens,
                tree_budget: SearchBudget::unlimited(),
                ..DiveConfig::default()
            };
            let out = dive(&inst, &steps, &cfg, &mut pool, Some(root.master), None);
            let best = out.best.expect("a dive always reaches a packing");
            assert!(best.is_feasible(&inst));
            assert!(best.value >= opt);
            if tokens == 0 {
                assert!(out.nodes <= n as u64, "{inst}: {} nodes", out.nodes);
                assert!(out.complete_dives <= 1);
            } else {
                let cap = n as u64 * (1u64 << (tokens - 1));
                assert!(out.complete_dives <= cap, "{inst}: {} dives with {tokens} tokens", out.complete_dives);
            }
        }
    }
}

#[test]
fn pair_selection_on_two_steps_root() {
    let inst = tbpp_core::examples::two_steps();
    let mut pool = ColumnPool::new();
    for p in [vec![1, 2], vec![1, 3], vec![0, 4], vec![2, 3]] {
        pool.insert(Pattern::new(p));
    }
    let sol = [(0, 0.5), (1, 0.5), (2, 1.0), (3, 0.5)];
    assert_eq!(select_branch_pair(inst.len(), &BranchState::default(), &pool, &sol), Some((1, 2, 0.5)));
}
