//! Closed-form quantities for allcast on G(n, p).
//!
//! [`bounds`] holds the relative-entropy tail bounds and the round-count
//! bounds for each algorithm; [`kernel`] holds the probability that a fixed
//! weight-`k` vector lies in the kernel of a sparse random coefficient block,
//! together with a brute-force dynamic program that checks it.
//!
//! All logarithms are natural.

pub mod bounds;
pub mod kernel;

use thiserror::Error;

pub use bounds::{
    binom_tail_bound, corollary_tail, lower_bound_sequence, lower_bound_static, rel_entropy,
    relay_bound, rlnc_bound, TailSide,
};
pub use kernel::{
    kernel_prob_bounds, kernel_prob_exact, kernel_prob_oracle, parity_prob, KernelBounds,
    KernelParams, ORACLE_MAX_K, ORACLE_MAX_M,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("probability {name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("upper tail requires q > p (q = {q}, p = {p})")]
    UpperSide { q: f64, p: f64 },
    #[error("lower tail requires q < p (q = {q}, p = {p})")]
    LowerSide { q: f64, p: f64 },
    #[error("oracle limit exceeded: {what} = {value} > {limit}")]
    OracleLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("kernel bounds require pi < 1/2, got {0}")]
    PiTooLarge(f64),
}
