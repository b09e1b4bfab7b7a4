//! Solver configuration and the pluggable betweenness-reduction hook.

use std::sync::Arc;

use crate::error::Error;
use crate::graph::{Weight, WeightedDigraph};

/// Contract for a sampled betweenness reduction: either a valid potential
/// whose reduced graph has low hop-betweenness everywhere, or a negative
/// cycle (reported through `Error::NegativeCycle`). Implementations are
/// expected to recurse into a shortest-path solver; none ships with this
/// crate.
pub trait SampledBetweenness: Send + Sync {
    fn reduce(&self, g: &WeightedDigraph, b: f64, h: usize) -> Result<Vec<Weight>, Error>;
}

#[derive(Clone)]
pub enum BetweennessMode {
    /// Bellman-Ford from a virtual super-source: the reduced graph has zero
    /// betweenness everywhere, trivially within any budget.
    ExactOracle,
    Sampled(Arc<dyn SampledBetweenness>),
}

impl std::fmt::Debug for BetweennessMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BetweennessMode::ExactOracle => write!(f, "ExactOracle"),
            BetweennessMode::Sampled(_) => write!(f, "Sampled"),
        }
    }
}

impl BetweennessMode {
    pub fn name(&self) -> &'static str {
        match self {
            BetweennessMode::ExactOracle => "exact-oracle",
            BetweennessMode::Sampled(_) => "sampled",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub seed: u64,
    pub mode: BetweennessMode,
    /// Multiplier on the gamma schedule (CLI-exposed).
    pub gamma_scale: f64,
    /// Estimate repetitions are ceil(reps_const * ln n).
    pub reps_const: f64,
    /// Hop budget of the small-instance base case.
    pub base_hop: usize,
    /// Record per-iteration debug payloads for invariant checking.
    pub instrument: bool,
    /// Abort when the live edge-slot count exceeds this bound.
    pub max_edge_slots: Option<u64>,
    /// Cooperative wall-clock cutoff, checked at coarse boundaries.
    pub deadline: Option<std::time::Instant>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            seed: 0,
            mode: BetweennessMode::ExactOracle,
            gamma_scale: 1.0,
            reps_const: 8.0,
            base_hop: 100,
            instrument: false,
            max_edge_slots: None,
            deadline: None,
        }
    }
}

impl SolveConfig {
    pub fn check_deadline(&self) -> Result<(), Error> {
        if let Some(d) = self.deadline {
            if std::time::Instant::now() >= d {
                return Err(Error::BudgetExceeded);
            }
        }
        Ok(())
    }
}

/// Number of shortcut iterations for an initial (well-behaved) vertex count:
/// the hop bound contracts by a factor of at most 2/3 per iteration from at
/// most `n0` down to the final budget of 2.
pub fn total_iterations(n0: usize) -> u32 {
    let n0 = n0.max(2) as f64;
    (n0.ln() / 1.5f64.ln()).ceil() as u32 + 2
}

/// The gamma schedule controlling the betweenness budget.
pub fn gamma(n0: usize, scale: f64) -> u64 {
    let lg = (n0.max(2) as f64).log2();
    let base = lg * 2f64.powf(lg.sqrt());
    ((scale * base).ceil() as u64).max(1)
}
