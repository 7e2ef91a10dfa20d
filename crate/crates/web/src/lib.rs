//! WebAssembly bindings for the demo page in `www/`. Every export returns a
//! JSON string; the plain functions behind them are usable natively.

use akucb_core::augment::{delta_lower_bound, run_augmentation_round, RoundConfig, SlotStreams};
use akucb_core::harness::{simulate_run, RunInput, Toggles};
use akucb_core::net::{grid_topology, LinkId, Matching};
use akucb_core::oracle::max_weight_matching;
use akucb_core::rng::{label, stream};
use akucb_core::sched::PolicyKind;
use akucb_core::traffic::make_ring_experiment_with_frame;
use rand::Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct AugmentationView {
    pub links: Vec<LinkId>,
    pub seed: usize,
    pub gain: f64,
    pub cycle: bool,
    pub applied: bool,
}

#[derive(Debug, Serialize)]
pub struct RoundView {
    pub rows: usize,
    pub cols: usize,
    pub links: Vec<(usize, usize)>,
    pub weights: Vec<f64>,
    pub prev: Vec<LinkId>,
    pub next: Vec<LinkId>,
    pub prev_weight: f64,
    pub next_weight: f64,
    pub optimum: f64,
    pub augmentations: Vec<AugmentationView>,
    pub trace: Vec<String>,
}

/// Link weights in `[0, 1)` rounded to two decimals.
pub fn grid_weights(n_links: usize, weight_seed: u64) -> Vec<f64> {
    let mut rng = stream(weight_seed, &[label::RATES]);
    (0..n_links).map(|_| (rng.random::<f64>() * 100.0).floor() / 100.0).collect()
}

/// One augmentation round on a `rows x cols` grid starting from `prev`.
pub fn grid_round(
    rows: usize,
    cols: usize,
    k: usize,
    p: f64,
    weight_seed: u64,
    round_seed: u64,
    prev: &[LinkId],
) -> Result<RoundView, String> {
    if !(1..=8).contains(&rows) || !(1..=8).contains(&cols) {
        return Err("grid sides must lie in 1..=8".into());
    }
    if k == 0 || !(p > 0.0 && p < 1.0) {
        return Err("need k >= 1 and 0 < p < 1".into());
    }
    let g = grid_topology(rows, cols);
    let w = grid_weights(g.link_count(), weight_seed);
    let s_prev = Matching::from_links(&g, prev.iter().copied()).map_err(|e| e.to_string())?;
    let mut cfg = RoundConfig::new(p, k);
    cfg.trace = true;
    let mut decider = SlotStreams::new(round_seed, 0, g.node_count());
    let round = run_augmentation_round(&g, &s_prev, &w, &cfg, &mut decider);
    let optimum = if g.link_count() <= 30 { max_weight_matching(&g, &w).1 } else { f64::NAN };
    Ok(RoundView {
        rows,
        cols,
        links: g.links().to_vec(),
        prev: s_prev.to_vec(),
        next: round.schedule.to_vec(),
        prev_weight: s_prev.weight(&w),
        next_weight: round.schedule.weight(&w),
        optimum,
        augmentations: round
            .augmentations
            .iter()
            .map(|a| AugmentationView {
                links: a.links.clone(),
                seed: a.seed,
                gain: a.gain,
                cycle: a.cycle,
                applied: a.gain > 0.0,
            })
            .collect(),
        trace: round.trace,
        weights: w,
    })
}

#[derive(Debug, Serialize)]
pub struct QueueSeries {
    pub policy: String,
    pub slots: Vec<u64>,
    pub totals: Vec<u64>,
}

/// Total-queue traces on the six-link ring for A^3-UCB, dA^3-UCB and UCB-GMM.
pub fn ring_traces(horizon: u64, frame_len: u64, eps: f64, seed: u64) -> Result<Vec<QueueSeries>, String> {
    if frame_len < 60 || horizon < frame_len || horizon > 2_000_000 {
        return Err("need 60 <= frame_len <= horizon <= 2e6".into());
    }
    let exp = make_ring_experiment_with_frame(eps, frame_len).map_err(|e| e.to_string())?;
    let policies = [
        PolicyKind::AkUcb { k: 3, p: 0.2 },
        PolicyKind::DistAkUcb { k: 3, p: 0.2 },
        PolicyKind::UcbGmm,
    ];
    policies
        .into_iter()
        .map(|policy| {
            let out = simulate_run(
                &RunInput {
                    graph: &exp.graph,
                    traffic: &exp.traffic,
                    initial_queues: exp.initial_queues.clone(),
                    frame_len,
                    horizon,
                    policy,
                    seed,
                    toggles: Toggles::default(),
                    regret_checkpoints: None,
                    allow_large_oracle: false,
                    trace_every: (horizon / 200).max(1),
                },
                None,
            )
            .map_err(|e| e.to_string())?;
            let (slots, totals) = out.trace.into_iter().unzip();
            Ok(QueueSeries {
                policy: policy.to_string(),
                slots,
                totals,
            })
        })
        .collect()
}

/// `(p, δ)` pairs of the one-round reachability bound for p on a grid of
/// `steps` interior points.
pub fn delta_curve(n_nodes: usize, max_degree: usize, k: usize, steps: usize) -> Result<Vec<(f64, f64)>, String> {
    let steps = steps.clamp(2, 1000);
    (1..steps)
        .map(|i| {
            let p = i as f64 / steps as f64;
            delta_lower_bound(n_nodes, max_degree, p, k).map(|d| (p, d)).map_err(|e| e.to_string())
        })
        .collect()
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = gridRound)]
pub fn grid_round_js(
    rows: usize,
    cols: usize,
    k: usize,
    p: f64,
    weight_seed: u32,
    round_seed: u32,
    prev: Vec<u32>,
) -> Result<String, JsError> {
    let prev: Vec<LinkId> = prev.into_iter().map(|l| l as LinkId).collect();
    to_json(grid_round(rows, cols, k, p, weight_seed.into(), round_seed.into(), &prev))
}

#[wasm_bindgen(js_name = ringTraces)]
pub fn ring_traces_js(horizon: u32, frame_len: u32, eps: f64, seed: u32) -> Result<String, JsError> {
    to_json(ring_traces(horizon.into(), frame_len.into(), eps, seed.into()))
}

#[wasm_bindgen(js_name = deltaCurve)]
pub fn delta_curve_js(n_nodes: usize, max_degree: usize, k: usize, steps: usize) -> Result<String, JsError> {
    to_json(delta_curve(n_nodes, max_degree, k, steps))
}
