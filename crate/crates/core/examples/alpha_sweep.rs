//! Monte Carlo sweep over the resampling probability alpha, printed as CSV.

use allcast::cli::output::write_summary_csv;
use allcast::montecarlo::sweep;
use allcast::{Algorithm, ExperimentConfig};

fn main() {
    let reps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let mut configs = Vec::new();
    for alpha in [0.0, 0.25, 0.5, 1.0] {
        configs.push(ExperimentConfig::new(Algorithm::R1, 64, 0.4).with_alpha(alpha));
        configs.push(ExperimentConfig::rlnc(64, 0.4, 2.0).with_alpha(alpha));
    }
    let configs: Vec<_> = configs.into_iter().map(|c| c.with_replicates(reps).with_seed(1)).collect();
    let runs = sweep(&configs, None).unwrap();
    write_summary_csv(std::io::stdout().lock(), &runs).unwrap();
}
