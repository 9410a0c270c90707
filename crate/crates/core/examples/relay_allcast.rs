//! Random relaying (R1 and R2) on a single G(n, p), round by round.

use allcast::analysis::relay_bound;
use allcast::protocols::RelayEngine;
use allcast::{generate_er, run_relay, GraphProcess, RelayVariant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let (n, p) = (256, 0.4);
    for variant in [RelayVariant::R1, RelayVariant::R2] {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = generate_er(n, p, &mut rng).unwrap();
        let mut engine = RelayEngine::new(variant, n);
        let mut round = 0;
        while (0..n).any(|v| engine.known_count(v) < n) {
            engine.step_round(&g, &mut rng);
            round += 1;
            if round <= 3 || round % 5 == 0 {
                let least = (0..n).map(|v| engine.known_count(v)).min().unwrap();
                println!("{variant:?} round {round:>2}: every node knows at least {least}/{n}");
            }
        }
        println!("{variant:?} finished in {round} rounds (bound {:.2})\n", relay_bound(variant, n as u64, p, 0.0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut process = GraphProcess::stationary(n, p, 0.5, &mut rng).unwrap();
    let r = run_relay(RelayVariant::R1, &mut process, 500, &mut rng);
    println!("R1 on a time-varying graph (alpha 0.5): {:?} rounds, lower bound {:?}", r.rounds_to_allcast, r.lower_bound);
}
