//! Instrumentation counters for every quantity the cost accounting charges.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct IterationCounters {
    pub iteration: u32,
    pub vertices: u64,
    pub edge_slots: u64,
    /// Sum over negative vertices of |U_in| + |U_out|.
    pub ball_sum: u64,
    /// Sum of (|U_in| + |U_out|)^2.
    pub ball_sum_sq: u64,
    pub new_steiner: u64,
    pub new_heavy: u64,
    pub lambda: f64,
    pub b_param: f64,
    pub addedge_calls: u64,
    pub addedge_depth_max: u32,
    pub addedge_steps_max: u64,
    pub estimate_relaxations: u64,
    pub ball_relaxations: u64,
    pub deferred_in: u64,
    pub deferred_out: u64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunCounters {
    pub seed: u64,
    pub n_input: u64,
    pub n_initial: u64,
    pub eta: u64,
    pub iterations_planned: u32,
    pub gamma: u64,
    pub hop_budget: u32,
    /// Recursion depth of the sampled reduction; zero in exact-oracle mode.
    pub recursion_depth: u32,
    pub edge_insertions: u64,
    pub vertices_final: u64,
    pub base_case: bool,
    pub per_iteration: Vec<IterationCounters>,
}

impl RunCounters {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counters serialize")
    }
}
