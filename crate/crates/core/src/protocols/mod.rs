//! Round-by-round allcast engines.
//!
//! Every engine follows the same schedule: in round 1 each node broadcasts
//! its own packet over the current graph; in each later round every node
//! broadcasts one packet built from what it has received. A node completes
//! at the first round after which it holds (or can decode) all `n` packets.

mod relay;
mod rlnc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::bounds::{ceil_tolerant, lower_bound_static, LowerBoundTracker};
use crate::graph::GraphProcess;

pub use relay::{run_relay, RelayEngine};
pub use rlnc::{inclusion_probability, run_rlnc, RlncEngine, RlncOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelayVariant {
    /// Relay uniformly among packets received in round 1.
    R1,
    /// Relay uniformly among all distinct packets received so far.
    R2,
}

/// Outcome of one allcast run. `None` round counts mean censored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub rounds_to_allcast: Option<u32>,
    pub per_node_completion: Vec<Option<u32>>,
    /// Minimum rounds any algorithm needs on the realized graphs; `None` if
    /// the graphs seen never deliver `n - 1` receptions to some node.
    pub lower_bound: Option<u32>,
    pub completed: bool,
    pub seed: u64,
    /// RLNC only, when payload checking is on: every decoded payload matched.
    pub payload_verified: Option<bool>,
}

impl TrialResult {
    pub fn is_censored(&self) -> bool {
        !self.completed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// `ceil(10 * 2 ln(n) / p^2)`, at least 1.
pub fn default_max_rounds(n: usize, p: f64) -> u32 {
    ceil_tolerant(10.0 * 2.0 * (n as f64).ln() / (p * p)).max(1)
}

/// What a round-based engine exposes to the shared driver loop.
pub(crate) trait Engine {
    fn step_round<R: Rng + ?Sized>(&mut self, graph: &crate::graph::DirectedGraph, rng: &mut R);
    fn all_complete(&self) -> bool;
    fn completion(&self) -> &[Option<u32>];
    fn payload_verified(&self) -> Option<bool> {
        None
    }
}

pub(crate) fn drive<E: Engine, R: Rng + ?Sized>(
    engine: &mut E,
    process: &mut GraphProcess,
    max_rounds: u32,
    rng: &mut R,
) -> TrialResult {
    let is_static = process.is_static();
    let mut tracker = LowerBoundTracker::new(process.n());
    let mut round = 0u32;
    while round < max_rounds.max(1) {
        if round > 0 {
            process.advance(rng);
        }
        round += 1;
        if !is_static && !tracker.is_settled() {
            tracker.observe(&process.current().in_degrees());
        }
        engine.step_round(process.current(), rng);
        if engine.all_complete() {
            break;
        }
    }

    let per_node_completion = engine.completion().to_vec();
    let completed = per_node_completion.iter().all(Option::is_some);
    let rounds_to_allcast = if completed {
        per_node_completion.iter().filter_map(|&c| c).max()
    } else {
        None
    };
    let lower_bound = if is_static {
        lower_bound_static(process.current())
    } else {
        tracker.value()
    };
    TrialResult {
        rounds_to_allcast,
        per_node_completion,
        lower_bound,
        completed,
        seed: 0,
        payload_verified: engine.payload_verified(),
    }
}
