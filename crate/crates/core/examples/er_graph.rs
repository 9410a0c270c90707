//! Sample directed G(n, p), inspect degrees and two-hop sets, and evolve it
//! with the On-Off edge process.

use allcast::analysis::lower_bound_static;
use allcast::{evolve, generate_er};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let p: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let g = generate_er(n, p, &mut rng).unwrap();
    let ins = g.in_degrees();
    println!("G({n}, {p}): {} edges, mean in-degree {:.2} (expected {:.2})", g.edge_count(),
        ins.iter().sum::<usize>() as f64 / n as f64, (n - 1) as f64 * p);
    println!("in-degree range [{}, {}]", ins.iter().min().unwrap(), ins.iter().max().unwrap());
    println!("|M_01| = {} (expected {:.2})", g.two_hop_set(0, 1).unwrap().count_ones(), (n - 2) as f64 * p * p);
    for delta in [0.1, 0.2, 0.5] {
        println!("concentration at delta {delta}: {:?}", g.concentration_check(delta, p));
    }
    println!("static lower bound on allcast rounds: {:?}", lower_bound_static(&g));

    for alpha in [0.0, 0.1, 0.5, 1.0] {
        let h = evolve(&g, p, alpha, &mut rng).unwrap();
        let kept = (0..n)
            .map(|u| h.out_neighbors(u).and_count(g.out_neighbors(u)))
            .sum::<usize>();
        println!("alpha {alpha}: {} edges, {kept} shared with the original", h.edge_count());
    }
    let small = generate_er(5, 0.5, &mut rng).unwrap();
    print!("adjacency text of a G(5, 0.5):\n{}", small.to_adjacency_text());
}
