//! Fast self-check of the core invariants on small graphs.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

use crate::augment::{run_augmentation_round, RoundConfig, SlotStreams};
use crate::net::{grid_topology, is_matching, random_topology, ring_topology, Matching};
use crate::oracle::{enumerate_matchings, in_near_optimal_set, max_weight_matching, optimal_augmentation_set};
use crate::augment::apply_augmentations;

use super::config::ExperimentConfig;
use super::presets::preset;
use super::runner::run_all;
use super::output::summary_table;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, failures: usize, total: usize) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: failures == 0,
        detail: format!("{failures} failures in {total} cases"),
    }
}

fn round_validity() -> CheckOutcome {
    let graphs = [grid_topology(4, 4), ring_topology(6).expect("ring"), random_topology(12, 20, 4).expect("random")];
    let mut rng = Pcg64Mcg::seed_from_u64(11);
    let (mut bad, mut total) = (0, 0);
    for g in &graphs {
        for k in 2..=4 {
            let cfg = RoundConfig::new(0.2, k);
            let mut s = Matching::empty(g);
            for slot in 0..500 {
                let w: Vec<f64> = (0..g.link_count()).map(|_| rng.random::<f64>()).collect();
                let r = run_augmentation_round(g, &s, &w, &cfg, &mut SlotStreams::new(5, slot, g.node_count()));
                total += 1;
                let ok = is_matching(g, &r.schedule.to_vec()).unwrap_or(false)
                    && r.augmentations.iter().all(|a| a.validate(g, &s, k).is_ok())
                    && r.schedule.weight(&w) >= s.weight(&w) - 1e-9;
                if !ok {
                    bad += 1;
                }
                s = r.schedule;
            }
        }
    }
    outcome("augmentation rounds keep schedules valid and non-decreasing", bad, total)
}

fn decomposition_guarantee() -> CheckOutcome {
    let mut rng = Pcg64Mcg::seed_from_u64(12);
    let (mut bad, total) = (0, 100);
    for i in 0..total {
        let g = random_topology(7, 10, i).expect("random");
        let w: Vec<f64> = (0..10).map(|_| rng.random::<f64>()).collect();
        let all = enumerate_matchings(&g).expect("small");
        let prev = all[rng.random_range(0..all.len())].clone();
        let (best, r_star) = max_weight_matching(&g, &w);
        let k = rng.random_range(2..=4);
        let alpha = (k as f64 - 1.0) / (k as f64 + 1.0);
        let ok = optimal_augmentation_set(&g, &prev, &best, k, &w)
            .ok()
            .and_then(|augs| apply_augmentations(&g, &prev, &augs).ok())
            .is_some_and(|m| in_near_optimal_set(m.weight(&w), r_star, alpha));
        if !ok {
            bad += 1;
        }
    }
    outcome("size-k decomposition reaches the near-optimal set", bad, total as usize)
}

fn exact_oracle() -> CheckOutcome {
    let mut rng = Pcg64Mcg::seed_from_u64(13);
    let (mut bad, total) = (0, 100);
    for i in 0..total {
        let g = random_topology(8, 12, 100 + i).expect("random");
        let w: Vec<f64> = (0..12).map(|_| rng.random::<f64>()).collect();
        let best = enumerate_matchings(&g)
            .expect("small")
            .iter()
            .map(|m| m.weight(&w))
            .fold(0.0, f64::max);
        if (max_weight_matching(&g, &w).1 - best).abs() > 1e-9 {
            bad += 1;
        }
    }
    outcome("exact matching agrees with enumeration", bad, total as usize)
}

fn determinism() -> CheckOutcome {
    let base = preset("fig_ring_desk").expect("preset");
    let overrides = ["horizon=12000".to_string(), "runs=2".to_string()];
    let run = |threads| -> Option<String> {
        let cfg: ExperimentConfig = base.with_overrides(&overrides).ok()?;
        let prep = cfg.prepare().ok()?;
        let res = run_all(&cfg, &prep, threads).ok()?;
        Some(format!("{:?}\n{}", res, summary_table(&cfg, &prep, &res)))
    };
    let (a, b) = (run(1), run(4));
    CheckOutcome {
        name: "repeated runs are identical, serial or parallel",
        passed: a.is_some() && a == b,
        detail: if a.is_some() { "compared 2 executions".into() } else { "run failed".into() },
    }
}

pub fn run_checks() -> Vec<CheckOutcome> {
    vec![round_validity(), decomposition_guarantee(), exact_oracle(), determinism()]
}
