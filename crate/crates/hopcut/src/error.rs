use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexId, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegCycleEdge {
    pub from: VertexId,
    pub to: VertexId,
    pub weight: Weight,
}

/// A negative-cycle certificate: a closed edge sequence whose weights sum to
/// a negative total. `input_coordinates` is true when the edges refer to the
/// untransformed input graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegCycle {
    pub edges: Vec<NegCycleEdge>,
    pub total: Weight,
    pub input_coordinates: bool,
}

impl NegCycle {
    pub fn verify_against<'a>(
        &self,
        mut weight_of: impl FnMut(VertexId, VertexId) -> Option<Weight> + 'a,
    ) -> bool {
        if self.edges.is_empty() || self.total >= 0 {
            return false;
        }
        let mut sum = 0;
        for (i, e) in self.edges.iter().enumerate() {
            let next = &self.edges[(i + 1) % self.edges.len()];
            if e.to != next.from {
                return false;
            }
            match weight_of(e.from, e.to) {
                Some(w) if w <= e.weight => sum += e.weight,
                _ => return false,
            }
        }
        sum == self.total
    }
}

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("negative cycle of total weight {}", .0.total)]
    NegativeCycle(NegCycle),
    #[error("potential update would make edge ({from}, {to}) negative")]
    PotentialInvalid { from: VertexId, to: VertexId },
    #[error("edge insertion from a light in-Steiner vertex {0}")]
    LightInSteinerTail(VertexId),
    #[error("edge insertion into a light out-Steiner vertex {0}")]
    LightOutSteinerHead(VertexId),
    #[error("sampling produced an empty set {0} times in a row")]
    EmptySampleRetry(u32),
    #[error("hop residue after the final iteration: d2({0}) != d3({0})")]
    HopResidue(VertexId),
    #[error("vertex growth exceeded the hard bound: {actual} > {bound}")]
    VertexGrowth { actual: u64, bound: u64 },
    #[error("edge budget exceeded: {actual} > {bound}")]
    EdgeBudget { actual: u64, bound: u64 },
    #[error("wall-clock budget exceeded")]
    BudgetExceeded,
    #[error("sampled reduction mode requested but no implementation registered")]
    SampledModeUnavailable,
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{0}")]
    Internal(String),
}
