use rand::distr::{Bernoulli, Distribution};
use rand::Rng;

use super::{drive, Engine, TrialResult};
use crate::gf2::{DecoderState, Gf2Vector};
use crate::graph::{DirectedGraph, GraphProcess};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlncOptions {
    pub beta: f64,
    /// Count only coded rows (rounds 2 onwards) towards decoding.
    pub strict: bool,
    /// Solve each node's system on completion and compare with the originals.
    pub payload_check: bool,
}

impl Default for RlncOptions {
    fn default() -> Self {
        Self {
            beta: 8.0,
            strict: false,
            payload_check: false,
        }
    }
}

/// `min(1, beta ln(d) / d)`, and 1 when `d <= 1`.
pub fn inclusion_probability(beta: f64, d_in: usize) -> f64 {
    if d_in <= 1 {
        return 1.0;
    }
    let d = d_in as f64;
    (beta * d.ln() / d).min(1.0)
}

/// Sparse random linear network coding over GF(2).
///
/// After round 1 each node keeps the packets it heard as its coding pool and
/// from then on broadcasts a random XOR of them together with the
/// coefficient vector.
#[derive(Debug, Clone)]
pub struct RlncEngine {
    n: usize,
    options: RlncOptions,
    round: u32,
    payloads: Vec<u64>,
    round1_sources: Vec<Vec<u32>>,
    coins: Vec<Option<Bernoulli>>,
    decoders: Vec<DecoderState>,
    completion: Vec<Option<u32>>,
    pending: usize,
    mismatches: usize,
    last_broadcast: Vec<Option<(Gf2Vector, u64)>>,
    scratch: Gf2Vector,
}

impl RlncEngine {
    /// `payloads[w]` is node `w`'s original packet content.
    pub fn new(options: RlncOptions, payloads: Vec<u64>) -> Self {
        let n = payloads.len();
        assert!(n >= 2, "allcast needs at least two nodes");
        assert!(options.beta > 0.0, "beta must be positive");
        let mut decoders = vec![DecoderState::new(n); n];
        if !options.strict {
            for (v, dec) in decoders.iter_mut().enumerate() {
                dec.insert_with_payload(Gf2Vector::unit(n, v), payloads[v])
                    .expect("unit vector has the decoder dimension");
            }
        }
        Self {
            n,
            options,
            round: 0,
            payloads,
            round1_sources: vec![Vec::new(); n],
            coins: vec![None; n],
            decoders,
            completion: vec![None; n],
            pending: n,
            mismatches: 0,
            last_broadcast: vec![None; n],
            scratch: Gf2Vector::zeros(n),
        }
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn options(&self) -> RlncOptions {
        self.options
    }

    pub fn payloads(&self) -> &[u64] {
        &self.payloads
    }

    pub fn rank(&self, node: usize) -> usize {
        self.decoders[node].rank()
    }

    pub fn decoder(&self, node: usize) -> &DecoderState {
        &self.decoders[node]
    }

    pub fn round1_sources(&self, node: usize) -> &[u32] {
        &self.round1_sources[node]
    }

    pub fn inclusion_probability(&self, node: usize) -> f64 {
        inclusion_probability(self.options.beta, self.round1_sources[node].len())
    }

    /// Coefficient vector and coded payload each node sent last round
    /// (`None` in round 1 or for a node with an empty pool).
    pub fn last_broadcasts(&self) -> &[Option<(Gf2Vector, u64)>] {
        &self.last_broadcast
    }

    /// Decoded payloads that disagreed with the originals so far.
    pub fn payload_mismatches(&self) -> usize {
        self.mismatches
    }

    fn deliver(&mut self, receiver: usize, row: &Gf2Vector, payload: u64) {
        if self.completion[receiver].is_some() {
            return;
        }
        self.decoders[receiver]
            .insert_ref(row, payload, &mut self.scratch)
            .expect("rows have the decoder dimension");
        if self.decoders[receiver].is_full_rank() {
            self.completion[receiver] = Some(self.round);
            self.pending -= 1;
            if self.options.payload_check {
                let decoded = self.decoders[receiver]
                    .solve()
                    .expect("full-rank decoder is solvable");
                self.mismatches += decoded
                    .iter()
                    .zip(&self.payloads)
                    .filter(|(a, b)| a != b)
                    .count();
            }
        }
    }

    pub fn step_round<R: Rng + ?Sized>(&mut self, graph: &DirectedGraph, rng: &mut R) {
        assert_eq!(graph.n(), self.n, "graph size does not match engine");
        self.round += 1;
        let n = self.n;

        if self.round == 1 {
            for u in 0..n {
                let row = Gf2Vector::unit(n, u);
                let payload = self.payloads[u];
                for v in graph.out_neighbors(u).iter_ones() {
                    self.round1_sources[v].push(u as u32);
                    if !self.options.strict {
                        self.deliver(v, &row, payload);
                    }
                }
            }
            for v in 0..n {
                let d = self.round1_sources[v].len();
                self.coins[v] = (d > 0).then(|| {
                    Bernoulli::new(inclusion_probability(self.options.beta, d))
                        .expect("inclusion probability lies in [0, 1]")
                });
            }
            return;
        }

        // Every coded row is drawn before any is delivered.
        for u in 0..n {
            let Some(coin) = self.coins[u] else {
                self.last_broadcast[u] = None;
                continue;
            };
            let (mut row, _) = self.last_broadcast[u]
                .take()
                .unwrap_or_else(|| (Gf2Vector::zeros(n), 0));
            row.words_mut().fill(0);
            let mut payload = 0u64;
            for &w in &self.round1_sources[u] {
                if coin.sample(rng) {
                    row.set(w as usize, true);
                    payload ^= self.payloads[w as usize];
                }
            }
            self.last_broadcast[u] = Some((row, payload));
        }

        let broadcasts = std::mem::take(&mut self.last_broadcast);
        for (u, sent) in broadcasts.iter().enumerate() {
            if let Some((row, payload)) = sent {
                if row.is_zero() {
                    continue;
                }
                for v in graph.out_neighbors(u).iter_ones() {
                    self.deliver(v, row, *payload);
                }
            }
        }
        self.last_broadcast = broadcasts;
    }
}

impl Engine for RlncEngine {
    fn step_round<R: Rng + ?Sized>(&mut self, graph: &DirectedGraph, rng: &mut R) {
        RlncEngine::step_round(self, graph, rng)
    }

    fn all_complete(&self) -> bool {
        self.pending == 0
    }

    fn completion(&self) -> &[Option<u32>] {
        &self.completion
    }

    fn payload_verified(&self) -> Option<bool> {
        self.options.payload_check.then_some(self.mismatches == 0)
    }
}

/// Runs RLNC(beta) until every node can decode every packet or `max_rounds`
/// rounds have been played. Payloads are drawn from `rng` before round 1.
pub fn run_rlnc<R: Rng + ?Sized>(
    options: RlncOptions,
    process: &mut GraphProcess,
    max_rounds: u32,
    rng: &mut R,
) -> TrialResult {
    let payloads: Vec<u64> = (0..process.n()).map(|_| rng.random()).collect();
    let mut engine = RlncEngine::new(options, payloads);
    drive(&mut engine, process, max_rounds, rng)
}
