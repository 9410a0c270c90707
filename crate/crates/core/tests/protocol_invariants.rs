use allcast::protocols::{RelayEngine, RlncEngine};
use allcast::{generate_er, run_relay, run_rlnc, GraphProcess, RelayVariant, RlncOptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn variant() -> impl Strategy<Value = RelayVariant> {
    prop_oneof![Just(RelayVariant::R1), Just(RelayVariant::R2)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relay_broadcasts_are_legal(
        v in variant(), n in 2usize..40, p in 0.05f64..1.0, alpha in 0.0f64..1.0, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut proc = GraphProcess::stationary(n, p, alpha, &mut rng).unwrap();
        let mut e = RelayEngine::new(v, n);
        e.step_round(proc.current(), &mut rng);
        let frozen: Vec<Vec<u32>> = (0..n).map(|u| e.round1_buffer(u).to_vec()).collect();
        for _ in 0..15 {
            let before = e.clone();
            proc.advance(&mut rng);
            e.step_round(proc.current(), &mut rng);
            for u in 0..n {
                let sent = e.last_broadcasts()[u];
                let pool = match v {
                    RelayVariant::R1 => before.round1_buffer(u),
                    RelayVariant::R2 => before.received(u),
                };
                if pool.is_empty() {
                    prop_assert_eq!(sent as usize, u);
                } else {
                    prop_assert!(pool.contains(&sent), "node {} sent {} not in {:?}", u, sent, pool);
                }
                // The round-1 pool never changes and knowledge only grows.
                prop_assert_eq!(e.round1_buffer(u), &frozen[u][..]);
                prop_assert!(e.received(u).starts_with(before.received(u)));
                // Every out-neighbour now holds what u sent.
                for w in proc.current().out_neighbors(u).iter_ones() {
                    prop_assert!(e.holds(w, sent as usize));
                }
            }
        }
    }

    #[test]
    fn rlnc_rows_are_supported_and_consistent(
        n in 2usize..40, p in 0.05f64..1.0, beta in 0.5f64..8.0, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate_er(n, p, &mut rng).unwrap();
        let payloads: Vec<u64> = (0..n).map(|_| rng.random()).collect();
        let opts = RlncOptions { beta, strict: false, payload_check: true };
        let mut e = RlncEngine::new(opts, payloads.clone());
        e.step_round(&g, &mut rng);
        for _ in 0..6 {
            let ranks: Vec<usize> = (0..n).map(|v| e.rank(v)).collect();
            e.step_round(&g, &mut rng);
            for u in 0..n {
                let sources = e.round1_sources(u);
                match &e.last_broadcasts()[u] {
                    None => prop_assert!(sources.is_empty()),
                    Some((row, payload)) => {
                        for i in row.iter_ones() {
                            prop_assert!(sources.contains(&(i as u32)));
                        }
                        prop_assert_eq!(*payload, row.select_xor(&payloads));
                    }
                }
                prop_assert!(e.rank(u) >= ranks[u]);
            }
        }
        prop_assert_eq!(e.payload_mismatches(), 0);
    }

    #[test]
    fn rounds_never_beat_the_lower_bound(
        alg in 0u8..3, n in 2usize..30, p in 0.1f64..1.0, alpha in 0.0f64..1.0, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut proc = GraphProcess::stationary(n, p, alpha, &mut rng).unwrap();
        let r = match alg {
            0 => run_relay(RelayVariant::R1, &mut proc, 300, &mut rng),
            1 => run_relay(RelayVariant::R2, &mut proc, 300, &mut rng),
            _ => run_rlnc(RlncOptions { payload_check: true, ..RlncOptions::default() }, &mut proc, 300, &mut rng),
        };
        if let Some(t) = r.rounds_to_allcast {
            let lb = r.lower_bound.expect("a completed run has a finite lower bound");
            prop_assert!(t >= lb, "rounds {} < lower bound {}", t, lb);
            prop_assert_eq!(r.per_node_completion.iter().flatten().max(), Some(&t));
        }
        prop_assert_eq!(r.completed, r.rounds_to_allcast.is_some());
        if alg == 2 && r.completed {
            prop_assert_eq!(r.payload_verified, Some(true));
        }
    }

    #[test]
    fn runs_are_deterministic(alg in 0u8..3, n in 2usize..30, p in 0.1f64..1.0, seed in any::<u64>()) {
        let once = || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut proc = GraphProcess::stationary(n, p, 0.3, &mut rng).unwrap();
            match alg {
                0 => run_relay(RelayVariant::R1, &mut proc, 200, &mut rng),
                1 => run_relay(RelayVariant::R2, &mut proc, 200, &mut rng),
                _ => run_rlnc(RlncOptions::default(), &mut proc, 200, &mut rng),
            }
        };
        prop_assert_eq!(once(), once());
    }
}

#[test]
fn payload_check_does_not_change_the_random_stream() {
    for seed in 0..20 {
        let run = |check: bool| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut proc = GraphProcess::stationary(40, 0.3, 0.0, &mut rng).unwrap();
            let opts = RlncOptions { beta: 2.0, strict: false, payload_check: check };
            run_rlnc(opts, &mut proc, 100, &mut rng)
        };
        let (a, b) = (run(false), run(true));
        assert_eq!(a.per_node_completion, b.per_node_completion);
        assert_eq!(a.payload_verified, None);
        assert_eq!(b.payload_verified, Some(true));
    }
}

#[test]
fn strict_decoding_is_never_faster() {
    for seed in 0..20 {
        let run = |strict: bool| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut proc = GraphProcess::stationary(48, 0.4, 0.0, &mut rng).unwrap();
            let opts = RlncOptions { beta: 2.0, strict, payload_check: true };
            run_rlnc(opts, &mut proc, 200, &mut rng)
        };
        let (loose, strict) = (run(false), run(true));
        if let (Some(a), Some(b)) = (loose.rounds_to_allcast, strict.rounds_to_allcast) {
            assert!(b >= a, "seed {seed}: strict {b} < non-strict {a}");
        }
    }
}
