//! Sparse random linear network coding: ranks per round and decoded payloads.

use allcast::analysis::rlnc_bound;
use allcast::protocols::RlncEngine;
use allcast::{generate_er, RlncOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(256);
    let beta: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8.0);
    let p = 0.4;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = generate_er(n, p, &mut rng).unwrap();
    let payloads: Vec<u64> = (0..n).map(|_| rng.random()).collect();
    let opts = RlncOptions { beta, strict: false, payload_check: true };
    let mut engine = RlncEngine::new(opts, payloads.clone());
    println!("RLNC({beta}) on G({n}, {p}), bound {} rounds", rlnc_bound(p));

    for round in 1..=50 {
        engine.step_round(&g, &mut rng);
        let ranks: Vec<usize> = (0..n).map(|v| engine.rank(v)).collect();
        let done = ranks.iter().filter(|&&r| r == n).count();
        println!("round {round}: min rank {}, {done}/{n} nodes can decode", ranks.iter().min().unwrap());
        if done == n {
            break;
        }
    }
    println!("mean pi after round 1: {:.3}", (0..n).map(|v| engine.inclusion_probability(v)).sum::<f64>() / n as f64);
    if engine.decoder(0).is_full_rank() {
        let decoded = engine.decoder(0).solve().unwrap();
        println!("node 0 decoded all payloads: {}", decoded == payloads);
    }
    println!("payload mismatches: {}", engine.payload_mismatches());
}
