//! Kernel membership probabilities for sparse random GF(2) blocks.
//!
//! The random block `R` has `m` rows and independent columns: a column is
//! zero with probability `1 - p`, otherwise its entries are i.i.d.
//! Bernoulli(`pi`). For a fixed vector with `k` ones, `R x = 0` iff the sum
//! of the selected `k` columns vanishes.

use super::bounds::rel_entropy;
use super::AnalysisError;

/// Largest row count accepted by [`kernel_prob_oracle`] (state space `2^m`).
pub const ORACLE_MAX_M: usize = 12;
/// Largest weight accepted by [`kernel_prob_oracle`].
pub const ORACLE_MAX_K: usize = 12;

/// Binomial weights switch to log-factorials above this `k`.
const DIRECT_BINOMIAL_MAX_K: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    /// Weight of the test vector.
    pub k: usize,
    /// Rows of the block.
    pub m: usize,
    /// Probability that a column is active.
    pub p: f64,
    /// Entry probability within an active column.
    pub pi: f64,
}

impl KernelParams {
    pub fn new(k: usize, m: usize, p: f64, pi: f64) -> Self {
        Self { k, m, p, pi }
    }

    fn validate(&self) -> Result<(), AnalysisError> {
        for (name, value) in [("p", self.p), ("pi", self.pi)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(AnalysisError::Domain {
                    name,
                    value,
                    domain: "[0, 1]",
                });
            }
        }
        Ok(())
    }
}

/// Probability that the XOR of `s` independent Bernoulli(`pi`) bits is zero:
/// `(1 + (1 - 2 pi)^s) / 2`.
pub fn parity_prob(s: u64, pi: f64) -> f64 {
    let bias = 1.0 - 2.0 * pi;
    let power = match i32::try_from(s) {
        Ok(e) => bias.powi(e),
        Err(_) => bias.powf(s as f64),
    };
    0.5 * (1.0 + power)
}

fn binomial_weights(k: usize, p: f64) -> Vec<f64> {
    let q = 1.0 - p;
    if k <= DIRECT_BINOMIAL_MAX_K || p == 0.0 || p == 1.0 {
        let mut coeff = 1.0f64;
        (0..=k)
            .map(|s| {
                if s > 0 {
                    coeff = coeff * (k - s + 1) as f64 / s as f64;
                }
                coeff * p.powi(s as i32) * q.powi((k - s) as i32)
            })
            .collect()
    } else {
        let mut ln_fact = vec![0.0f64; k + 1];
        for i in 1..=k {
            ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
        }
        let (lp, lq) = (p.ln(), q.ln());
        (0..=k)
            .map(|s| {
                (ln_fact[k] - ln_fact[s] - ln_fact[k - s] + s as f64 * lp + (k - s) as f64 * lq)
                    .exp()
            })
            .collect()
    }
}

/// `sum_s C(k,s) p^s (1-p)^(k-s) P(s, pi)^m`.
pub fn kernel_prob_exact(kp: KernelParams) -> Result<f64, AnalysisError> {
    kp.validate()?;
    let m = i32::try_from(kp.m).unwrap_or(i32::MAX);
    Ok(binomial_weights(kp.k, kp.p)
        .into_iter()
        .enumerate()
        .map(|(s, w)| w * parity_prob(s as u64, kp.pi).powi(m))
        .sum())
}

/// Brute-force dynamic program over the `2^m` possible partial column sums.
///
/// Independent of the closed form: it never groups columns by how many are
/// active, it just convolves the full per-column pattern law `k` times.
pub fn kernel_prob_oracle(kp: KernelParams) -> Result<f64, AnalysisError> {
    kp.validate()?;
    if kp.m > ORACLE_MAX_M {
        return Err(AnalysisError::OracleLimit {
            what: "m",
            value: kp.m,
            limit: ORACLE_MAX_M,
        });
    }
    if kp.k > ORACLE_MAX_K {
        return Err(AnalysisError::OracleLimit {
            what: "k",
            value: kp.k,
            limit: ORACLE_MAX_K,
        });
    }
    let states = 1usize << kp.m;
    let column: Vec<f64> = (0..states)
        .map(|b| {
            let ones = b.count_ones() as i32;
            let active = kp.p * kp.pi.powi(ones) * (1.0 - kp.pi).powi(kp.m as i32 - ones);
            if b == 0 {
                active + (1.0 - kp.p)
            } else {
                active
            }
        })
        .collect();

    let mut dist = vec![0.0f64; states];
    dist[0] = 1.0;
    for _ in 0..kp.k {
        let mut next = vec![0.0f64; states];
        for (state, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for (pattern, &w) in column.iter().enumerate() {
                next[state ^ pattern] += mass * w;
            }
        }
        dist = next;
    }
    Ok(dist[0])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBounds {
    /// `2^-m [1 + exp(-k p pi) + 2 exp(-(k/m) D(p/2; p))]^m`.
    pub general: f64,
    /// `exp(-k m p pi / 4)`, only valid for `k <= k_star`.
    pub small_k: Option<f64>,
    pub k_star: usize,
}

/// Largest `k` with `(1 - 2 pi)^k >= 1/2` and `(1 - pi k / 2)^m >= 1/2`.
fn k_star(m: usize, pi: f64) -> usize {
    let holds = |k: usize| {
        let linear = 1.0 - pi * k as f64 / 2.0;
        (1.0 - 2.0 * pi).powi(k as i32) >= 0.5 && linear > 0.0 && linear.powi(m as i32) >= 0.5
    };
    let mut k = 0;
    while holds(k + 1) {
        k += 1;
    }
    k
}

/// The two convenient upper bounds on [`kernel_prob_exact`].
pub fn kernel_prob_bounds(kp: KernelParams) -> Result<KernelBounds, AnalysisError> {
    if kp.pi >= 0.5 {
        return Err(AnalysisError::PiTooLarge(kp.pi));
    }
    if kp.pi <= 0.0 {
        return Err(AnalysisError::Domain {
            name: "pi",
            value: kp.pi,
            domain: "(0, 1/2)",
        });
    }
    if kp.m == 0 {
        return Err(AnalysisError::Domain {
            name: "m",
            value: 0.0,
            domain: "m >= 1",
        });
    }
    let (k, m) = (kp.k as f64, kp.m as f64);
    let divergence = rel_entropy(kp.p / 2.0, kp.p)?;
    let inner = 1.0 + (-k * kp.p * kp.pi).exp() + 2.0 * (-(k / m) * divergence).exp();
    let general = (inner / 2.0).powi(kp.m as i32);

    let k_star = k_star(kp.m, kp.pi);
    let small_k = (kp.k <= k_star).then(|| (-k * m * kp.p * kp.pi / 4.0).exp());
    Ok(KernelBounds {
        general,
        small_k,
        k_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parity_examples() {
        assert_eq!(parity_prob(0, 0.3), 1.0);
        assert_abs_diff_eq!(parity_prob(1, 0.25), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(parity_prob(2, 0.25), 0.625, epsilon = 1e-15);
    }

    #[test]
    fn exact_examples() {
        assert_eq!(kernel_prob_exact(KernelParams::new(0, 3, 0.4, 0.2)).unwrap(), 1.0);
        assert_abs_diff_eq!(
            kernel_prob_exact(KernelParams::new(1, 2, 0.5, 0.25)).unwrap(),
            0.78125,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            kernel_prob_exact(KernelParams::new(2, 1, 0.5, 0.25)).unwrap(),
            0.78125,
            epsilon = 1e-15
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(kernel_prob_oracle(KernelParams::new(0, 4, 0.3, 0.2)).unwrap(), 1.0);
        assert_abs_diff_eq!(
            kernel_prob_oracle(KernelParams::new(5, 3, 0.7, 0.0)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            kernel_prob_oracle(KernelParams::new(1, 2, 0.5, 0.25)).unwrap(),
            0.78125,
            epsilon = 1e-15
        );
        assert!(matches!(
            kernel_prob_oracle(KernelParams::new(2, 13, 0.5, 0.25)),
            Err(AnalysisError::OracleLimit { what: "m", .. })
        ));
        assert!(matches!(
            kernel_prob_oracle(KernelParams::new(13, 2, 0.5, 0.25)),
            Err(AnalysisError::OracleLimit { what: "k", .. })
        ));
    }

    #[test]
    fn large_k_uses_log_weights() {
        // Weights must still sum to one once the log path kicks in.
        let sum: f64 = binomial_weights(400, 0.3).iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
        let direct = kernel_prob_exact(KernelParams::new(50, 4, 0.3, 0.1)).unwrap();
        let logged = kernel_prob_exact(KernelParams::new(51, 4, 0.3, 0.1)).unwrap();
        assert!(logged <= direct + 1e-12);
    }

    #[test]
    fn k_star_example() {
        assert_eq!(k_star(3, 0.1), 3);
        let b = kernel_prob_bounds(KernelParams::new(4, 3, 0.5, 0.1)).unwrap();
        assert_eq!(b.k_star, 3);
        assert!(b.small_k.is_none());
        let b = kernel_prob_bounds(KernelParams::new(3, 3, 0.5, 0.1)).unwrap();
        assert!(b.small_k.is_some());
    }

    #[test]
    fn bounds_reject_large_pi() {
        assert!(matches!(
            kernel_prob_bounds(KernelParams::new(1, 1, 0.5, 0.5)),
            Err(AnalysisError::PiTooLarge(_))
        ));
    }
}
