//! Tail bounds and round-count bounds.

use super::AnalysisError;
use crate::graph::DirectedGraph;
use crate::protocols::RelayVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Upper,
    Lower,
}

fn check_open_unit(name: &'static str, value: f64) -> Result<(), AnalysisError> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(AnalysisError::Domain {
            name,
            value,
            domain: "(0, 1)",
        })
    }
}

fn check_closed_unit(name: &'static str, value: f64) -> Result<(), AnalysisError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(AnalysisError::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}

/// `a * ln(a / b)` with `0 * ln 0 = 0`.
fn xlogx_over(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * (a / b).ln()
    }
}

/// Kullback-Leibler divergence of Bernoulli(q) from Bernoulli(p).
pub fn rel_entropy(q: f64, p: f64) -> Result<f64, AnalysisError> {
    check_open_unit("p", p)?;
    check_closed_unit("q", q)?;
    Ok((xlogx_over(q, p) + xlogx_over(1.0 - q, 1.0 - p)).max(0.0))
}

/// Chernoff bound `exp(-n H(q; p))` on `P(X > nq)` (upper) or `P(X < nq)`
/// (lower) for `X ~ Bin(n, p)`.
pub fn binom_tail_bound(n: u64, p: f64, q: f64, side: TailSide) -> Result<f64, AnalysisError> {
    match side {
        TailSide::Upper if q <= p => return Err(AnalysisError::UpperSide { q, p }),
        TailSide::Lower if q >= p => return Err(AnalysisError::LowerSide { q, p }),
        _ => {}
    }
    Ok((-(n as f64) * rel_entropy(q, p)?).exp())
}

/// Bound on the probability that any algorithm finishes within `1/q` rounds
/// when every round's graph is G(n, p): `(1/q) exp(-n(n-1) H(q; p))`.
pub fn corollary_tail(q: f64, p: f64, n: u64) -> Result<f64, AnalysisError> {
    if q <= p {
        return Err(AnalysisError::UpperSide { q, p });
    }
    let pairs = (n as f64) * (n.saturating_sub(1) as f64);
    Ok((-pairs * rel_entropy(q, p)?).exp() / q)
}

/// Round bound `2(1+eps) ln(n) / p` for R1 and `2(1+eps) ln(n) / p^2` for R2.
pub fn relay_bound(variant: RelayVariant, n: u64, p: f64, epsilon: f64) -> f64 {
    let base = 2.0 * (1.0 + epsilon) * (n as f64).ln() / p;
    match variant {
        RelayVariant::R1 => base,
        RelayVariant::R2 => base / p,
    }
}

/// `ceil(1/p) + 2`. Reciprocals within 1e-9 of an integer round to it.
pub fn rlnc_bound(p: f64) -> u32 {
    ceil_tolerant(1.0 / p) + 2
}

pub(crate) fn ceil_tolerant(x: f64) -> u32 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest as u32
    } else {
        x.ceil() as u32
    }
}

/// `ceil((n-1) / d_min)` for a fixed graph; `None` when some node has no
/// in-neighbour, in which case allcast never completes.
pub fn lower_bound_static(g: &DirectedGraph) -> Option<u32> {
    let n = g.n();
    if n <= 1 {
        return Some(0);
    }
    let d_min = g.min_in_degree();
    if d_min == 0 {
        None
    } else {
        Some((n - 1).div_ceil(d_min) as u32)
    }
}

/// `max_v min { T : sum_{t <= T} d_t(v) >= n - 1 }` over per-round in-degree
/// rows. `None` if some node has not accumulated `n - 1` by the last row.
pub fn lower_bound_sequence<R: AsRef<[usize]>>(in_degree_rows: &[R]) -> Option<u32> {
    let first = in_degree_rows.first()?;
    let mut tracker = LowerBoundTracker::new(first.as_ref().len());
    for row in in_degree_rows {
        tracker.observe(row.as_ref());
    }
    tracker.value()
}

/// Streaming form of [`lower_bound_sequence`], fed one round at a time.
#[derive(Debug, Clone)]
pub struct LowerBoundTracker {
    need: usize,
    cumulative: Vec<usize>,
    reached_at: Vec<Option<u32>>,
    rounds: u32,
    pending: usize,
}

impl LowerBoundTracker {
    pub fn new(n: usize) -> Self {
        let need = n.saturating_sub(1);
        let (reached_at, pending) = if need == 0 {
            (vec![Some(0); n], 0)
        } else {
            (vec![None; n], n)
        };
        Self {
            need,
            cumulative: vec![0; n],
            reached_at,
            rounds: 0,
            pending,
        }
    }

    pub fn observe(&mut self, in_degrees: &[usize]) {
        assert_eq!(in_degrees.len(), self.cumulative.len(), "row length mismatch");
        self.rounds += 1;
        if self.pending == 0 {
            return;
        }
        for (v, &d) in in_degrees.iter().enumerate() {
            if self.reached_at[v].is_none() {
                self.cumulative[v] += d;
                if self.cumulative[v] >= self.need {
                    self.reached_at[v] = Some(self.rounds);
                    self.pending -= 1;
                }
            }
        }
    }

    pub fn is_settled(&self) -> bool {
        self.pending == 0
    }

    pub fn value(&self) -> Option<u32> {
        if self.pending > 0 {
            return None;
        }
        Some(self.reached_at.iter().map(|r| r.unwrap_or(0)).max().unwrap_or(0))
    }
}
