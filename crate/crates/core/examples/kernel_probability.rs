//! Probability that a weight-k vector lies in the kernel of a sparse random
//! block: closed form, brute-force oracle, and the two upper bounds.

use allcast::analysis::{
    kernel_prob_bounds, kernel_prob_exact, kernel_prob_oracle, parity_prob, KernelParams,
    ORACLE_MAX_K,
};

fn main() {
    println!("P(s, 0.1) for s = 0..8:");
    for s in 0..8 {
        print!(" {:.4}", parity_prob(s, 0.1));
    }
    println!();

    let (m, p, pi) = (12, 0.5, 0.05);
    println!("\nm = {m}, p = {p}, pi = {pi}");
    println!("  k        exact       oracle      general      small-k");
    for k in [1, 2, 3, 4, 6, 8, 12, 32, 128, 512] {
        let kp = KernelParams::new(k, m, p, pi);
        let b = kernel_prob_bounds(kp).unwrap();
        let oracle = if k <= ORACLE_MAX_K {
            format!("{:.4e}", kernel_prob_oracle(kp).unwrap())
        } else {
            "-".into()
        };
        let small = b.small_k.map_or("n/a".into(), |v| format!("{v:.4e}"));
        println!("{k:>4} {:>12.4e} {oracle:>12} {:>12.4e} {small:>12}", kernel_prob_exact(kp).unwrap(), b.general);
    }
    println!("k* = {}", kernel_prob_bounds(KernelParams::new(1, m, p, pi)).unwrap().k_star);
}
