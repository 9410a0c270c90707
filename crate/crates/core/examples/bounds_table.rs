//! Round bounds for each algorithm and the universal lower-tail bound.

use allcast::analysis::{corollary_tail, relay_bound, rlnc_bound};
use allcast::RelayVariant;

fn main() {
    let p = 0.4;
    println!("{:>6} {:>8} {:>8} {:>6}", "n", "R1", "R2", "RLNC");
    for n in [64u64, 128, 256, 512, 1024, 4096] {
        println!("{n:>6} {:>8.2} {:>8.2} {:>6}", relay_bound(RelayVariant::R1, n, p, 0.0),
            relay_bound(RelayVariant::R2, n, p, 0.0), rlnc_bound(p));
    }
    println!("\nP(allcast within 1/q rounds) <= ... for n = 50, p = {p}");
    for q in [0.41, 0.42, 0.45, 0.5] {
        println!("q = {q}: {:.3e}", corollary_tail(q, p, 50).unwrap());
    }
    println!("\nRLNC bound across p: {:?}", [0.1, 0.2, 0.25, 0.4, 0.5, 1.0].map(rlnc_bound));
}
