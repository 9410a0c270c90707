//! Seeded replicate harness and box-plot summaries.
//!
//! Replicate `i` of an experiment draws all of its randomness from a
//! `ChaCha8Rng` (crate `rand_chacha` 0.9) seeded with
//! [`replicate_seed`]`(base_seed, i)`, which is the `i`-th output of a
//! SplitMix64 stream started at `base_seed`. Replicates share nothing, so
//! results do not depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphProcess;
use crate::protocols::{
    default_max_rounds, run_relay, run_rlnc, RelayVariant, RlncOptions, TrialResult,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonteCarloError {
    #[error("invalid experiment: {0}")]
    InvalidConfig(String),
    #[error("no completed replicates")]
    NoCompletedReplicates,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    R1,
    R2,
    Rlnc,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::R1 => "r1",
            Algorithm::R2 => "r2",
            Algorithm::Rlnc => "rlnc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r1" => Some(Algorithm::R1),
            "r2" => Some(Algorithm::R2),
            "rlnc" => Some(Algorithm::Rlnc),
            _ => None,
        }
    }

    pub fn is_rlnc(self) -> bool {
        self == Algorithm::Rlnc
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub const DEFAULT_BETA: f64 = 8.0;
pub const DEFAULT_REPLICATES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub n: usize,
    pub p: f64,
    /// Only used by RLNC.
    pub beta: f64,
    /// Edge resampling probability; 0 is a static graph.
    pub alpha: f64,
    pub replicates: usize,
    pub base_seed: u64,
    /// Defaults to [`default_max_rounds`] when unset.
    pub max_rounds: Option<u32>,
    pub strict_decoding: bool,
    pub payload_check: bool,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, n: usize, p: f64) -> Self {
        Self {
            algorithm,
            n,
            p,
            beta: DEFAULT_BETA,
            alpha: 0.0,
            replicates: DEFAULT_REPLICATES,
            base_seed: 0,
            max_rounds: None,
            strict_decoding: false,
            payload_check: false,
        }
    }

    pub fn rlnc(n: usize, p: f64, beta: f64) -> Self {
        Self {
            beta,
            ..Self::new(Algorithm::Rlnc, n, p)
        }
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_seed(mut self, base_seed: u64) -> Self {
        self.base_seed = base_seed;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_payload_check(mut self, on: bool) -> Self {
        self.payload_check = on;
        self
    }

    pub fn validate(&self) -> Result<(), MonteCarloError> {
        let bad = |msg: String| Err(MonteCarloError::InvalidConfig(msg));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return bad(format!("p must lie in (0, 1], got {}", self.p));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha must lie in [0, 1], got {}", self.alpha));
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if self.algorithm.is_rlnc() && !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if self.max_rounds == Some(0) {
            return bad("max_rounds must be at least 1".into());
        }
        Ok(())
    }

    pub fn effective_max_rounds(&self) -> u32 {
        self.max_rounds
            .unwrap_or_else(|| default_max_rounds(self.n, self.p))
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `index`: `mix64(base_seed + (index + 1) * GOLDEN_GAMMA)`.
pub fn replicate_seed(base_seed: u64, index: usize) -> u64 {
    mix64(base_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index as u64 + 1)))
}

/// Runs a single replicate. The config is assumed valid.
pub fn run_replicate(cfg: &ExperimentConfig, index: usize) -> TrialResult {
    let seed = replicate_seed(cfg.base_seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut process = GraphProcess::stationary(cfg.n, cfg.p, cfg.alpha, &mut rng)
        .expect("experiment config validated");
    let max_rounds = cfg.effective_max_rounds();
    let result = match cfg.algorithm {
        Algorithm::R1 => run_relay(RelayVariant::R1, &mut process, max_rounds, &mut rng),
        Algorithm::R2 => run_relay(RelayVariant::R2, &mut process, max_rounds, &mut rng),
        Algorithm::Rlnc => {
            let options = RlncOptions {
                beta: cfg.beta,
                strict: cfg.strict_decoding,
                payload_check: cfg.payload_check,
            };
            run_rlnc(options, &mut process, max_rounds, &mut rng)
        }
    };
    result.with_seed(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    /// Completed replicates the statistics are computed over.
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub censored_count: usize,
}

/// Linear interpolation between order statistics at position `(len-1) q`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Box-plot statistics over completed values; `None` entries are censored.
pub fn summarize(values: &[Option<u32>]) -> Result<SummaryStats, MonteCarloError> {
    let mut done: Vec<f64> = values.iter().filter_map(|v| v.map(f64::from)).collect();
    if done.is_empty() {
        return Err(MonteCarloError::NoCompletedReplicates);
    }
    done.sort_by(f64::total_cmp);
    Ok(SummaryStats {
        count: done.len(),
        min: done[0],
        q1: quantile(&done, 0.25),
        median: quantile(&done, 0.5),
        q3: quantile(&done, 0.75),
        max: done[done.len() - 1],
        mean: done.iter().sum::<f64>() / done.len() as f64,
        censored_count: values.len() - done.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRun {
    pub config: ExperimentConfig,
    /// One per replicate, in replicate order.
    pub records: Vec<TrialResult>,
    /// `None` when every replicate was censored.
    pub summary: Option<SummaryStats>,
}

impl ExperimentRun {
    pub fn rounds(&self) -> Vec<Option<u32>> {
        self.records.iter().map(|r| r.rounds_to_allcast).collect()
    }
}

/// Runs every replicate on the global rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRun, MonteCarloError> {
    cfg.validate()?;
    let records: Vec<TrialResult> = (0..cfg.replicates)
        .into_par_iter()
        .map(|i| run_replicate(cfg, i))
        .collect();
    let summary = summarize(
        &records
            .iter()
            .map(|r| r.rounds_to_allcast)
            .collect::<Vec<_>>(),
    )
    .ok();
    Ok(ExperimentRun {
        config: cfg.clone(),
        records,
        summary,
    })
}

/// [`run_experiment`] on a dedicated pool of `threads` workers
/// (machine parallelism when `None`).
pub fn run_experiment_with_threads(
    cfg: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<ExperimentRun, MonteCarloError> {
    match threads {
        None => run_experiment(cfg),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| MonteCarloError::ThreadPool(e.to_string()))?;
            pool.install(|| run_experiment(cfg))
        }
    }
}

/// Replicates run one after another on the calling thread.
pub fn run_experiment_serial(cfg: &ExperimentConfig) -> Result<ExperimentRun, MonteCarloError> {
    cfg.validate()?;
    let records: Vec<TrialResult> = (0..cfg.replicates).map(|i| run_replicate(cfg, i)).collect();
    let summary = summarize(
        &records
            .iter()
            .map(|r| r.rounds_to_allcast)
            .collect::<Vec<_>>(),
    )
    .ok();
    Ok(ExperimentRun {
        config: cfg.clone(),
        records,
        summary,
    })
}

/// Runs each config in order.
pub fn sweep(
    configs: &[ExperimentConfig],
    threads: Option<usize>,
) -> Result<Vec<ExperimentRun>, MonteCarloError> {
    configs
        .iter()
        .map(|cfg| run_experiment_with_threads(cfg, threads))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summarize_examples() {
        let s = summarize(&[1, 2, 3, 4, 5].map(Some)).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        assert_eq!(s.mean, 3.0);
        let s = summarize(&[Some(7)]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max, s.mean), (7.0, 7.0, 7.0, 7.0, 7.0, 7.0));
        let s = summarize(&[1, 2, 3, 4].map(Some)).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
    }

    #[test]
    fn summarize_censoring() {
        let s = summarize(&[Some(3), None, Some(5)]).unwrap();
        assert_eq!(s.count, 2);
        assert_eq!(s.censored_count, 1);
        assert_eq!(s.median, 4.0);
        let err = summarize(&[None, None]).unwrap_err();
        assert_eq!(err.to_string(), "no completed replicates");
    }

    #[test]
    fn replicate_seeds_are_distinct_and_stable() {
        assert_eq!(replicate_seed(0, 0), mix64(GOLDEN_GAMMA));
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| replicate_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(replicate_seed(1, 0), replicate_seed(0, 0));
    }

    #[test]
    fn complete_graph_experiment() {
        let cfg = ExperimentConfig::new(Algorithm::R1, 20, 1.0).with_replicates(1);
        let run = run_experiment(&cfg).unwrap();
        let s = run.summary.unwrap();
        assert_eq!((s.min, s.max), (1.0, 1.0));
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::new(Algorithm::R1, 1, 0.5).validate().is_err());
        assert!(ExperimentConfig::new(Algorithm::R1, 10, 0.0).validate().is_err());
        assert!(ExperimentConfig::new(Algorithm::R1, 10, 0.5).with_alpha(1.5).validate().is_err());
        assert!(ExperimentConfig::new(Algorithm::R1, 10, 0.5).with_replicates(0).validate().is_err());
        assert!(ExperimentConfig::rlnc(10, 0.5, 0.0).validate().is_err());
    }

    #[test]
    fn empty_sweep() {
        assert!(sweep(&[], None).unwrap().is_empty());
    }
}
