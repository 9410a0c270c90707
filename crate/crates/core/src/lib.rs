//! Allcast (all-to-all broadcast) on directed Erdős–Rényi graphs.
//!
//! Every node starts with one packet and, in each synchronous round,
//! broadcasts one packet that reaches its current out-neighbours. The crate
//! provides:
//!
//! - [`gf2`]: bit-packed GF(2) vectors, matrices and an incremental decoder;
//! - [`graph`]: directed G(n, p) sampling and the On-Off edge process;
//! - [`protocols`]: random relaying (R1, R2) and sparse RLNC(beta) engines;
//! - [`analysis`]: tail bounds, round bounds and kernel probabilities;
//! - [`montecarlo`]: seeded parallel replicates and box-plot summaries;
//! - [`cli`]: the `allcast` command line (simulate, bounds, oracle, sweep).

pub mod analysis;
pub mod cli;
pub mod gf2;
pub mod graph;
pub mod montecarlo;
pub mod protocols;

pub use gf2::{DecoderState, Gf2Error, Gf2Matrix, Gf2Vector};
pub use graph::{evolve, generate_er, DirectedGraph, GraphError, GraphProcess, NodeSet};
pub use montecarlo::{
    run_experiment, summarize, Algorithm, ExperimentConfig, ExperimentRun, SummaryStats,
};
pub use protocols::{run_relay, run_rlnc, RelayVariant, RlncOptions, TrialResult};
