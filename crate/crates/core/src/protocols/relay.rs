use rand::Rng;

use super::{drive, Engine, RelayVariant, TrialResult};
use crate::graph::{DirectedGraph, GraphProcess, NodeSet};

/// Random relaying state for all nodes.
///
/// Knowledge is kept twice: `holders[x]` is the set of nodes holding packet
/// `x` (so a broadcast is one masked OR per word), and `received[v]` lists
/// the distinct foreign packets `v` holds in arrival order, the first
/// `round1_len[v]` of which arrived in round 1.
#[derive(Debug, Clone)]
pub struct RelayEngine {
    variant: RelayVariant,
    n: usize,
    round: u32,
    holders: Vec<NodeSet>,
    received: Vec<Vec<u32>>,
    round1_len: Vec<usize>,
    completion: Vec<Option<u32>>,
    pending: usize,
    last_broadcast: Vec<u32>,
}

impl RelayEngine {
    pub fn new(variant: RelayVariant, n: usize) -> Self {
        assert!(n >= 2, "allcast needs at least two nodes");
        Self {
            variant,
            n,
            round: 0,
            holders: (0..n).map(|x| NodeSet::unit(n, x)).collect(),
            received: vec![Vec::new(); n],
            round1_len: vec![0; n],
            completion: vec![None; n],
            pending: n,
            last_broadcast: (0..n as u32).collect(),
        }
    }

    pub fn variant(&self) -> RelayVariant {
        self.variant
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn holds(&self, node: usize, packet: usize) -> bool {
        self.holders[packet].get(node)
    }

    /// Packets held by `node`, own packet included.
    pub fn known_count(&self, node: usize) -> usize {
        self.received[node].len() + 1
    }

    /// Nodes currently holding `packet`.
    pub fn holders(&self, packet: usize) -> &NodeSet {
        &self.holders[packet]
    }

    /// Foreign packets received in round 1.
    pub fn round1_buffer(&self, node: usize) -> &[u32] {
        &self.received[node][..self.round1_len[node]]
    }

    /// All distinct foreign packets received so far, in arrival order.
    pub fn received(&self, node: usize) -> &[u32] {
        &self.received[node]
    }

    /// Packets relayed in the most recent round, indexed by sender.
    pub fn last_broadcasts(&self) -> &[u32] {
        &self.last_broadcast
    }

    fn candidates(&self, node: usize) -> &[u32] {
        match self.variant {
            RelayVariant::R1 => self.round1_buffer(node),
            RelayVariant::R2 => self.received(node),
        }
    }

    pub fn step_round<R: Rng + ?Sized>(&mut self, graph: &DirectedGraph, rng: &mut R) {
        assert_eq!(graph.n(), self.n, "graph size does not match engine");
        self.round += 1;

        // All choices use knowledge from earlier rounds only.
        if self.round > 1 {
            for v in 0..self.n {
                let pool = self.candidates(v);
                self.last_broadcast[v] = if pool.is_empty() {
                    v as u32
                } else {
                    pool[rng.random_range(0..pool.len())]
                };
            }
        }

        for u in 0..self.n {
            let packet = self.last_broadcast[u] as usize;
            let out = graph.out_neighbors(u).words();
            let held = self.holders[packet].words_mut();
            for (wi, (h, &o)) in held.iter_mut().zip(out).enumerate() {
                let mut fresh = o & !*h;
                *h |= fresh;
                while fresh != 0 {
                    let v = wi * 64 + fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    self.received[v].push(packet as u32);
                    if self.received[v].len() + 1 == self.n {
                        self.completion[v] = Some(self.round);
                        self.pending -= 1;
                    }
                }
            }
        }

        if self.round == 1 {
            for v in 0..self.n {
                self.round1_len[v] = self.received[v].len();
            }
        }
    }
}

impl Engine for RelayEngine {
    fn step_round<R: Rng + ?Sized>(&mut self, graph: &DirectedGraph, rng: &mut R) {
        RelayEngine::step_round(self, graph, rng)
    }

    fn all_complete(&self) -> bool {
        self.pending == 0
    }

    fn completion(&self) -> &[Option<u32>] {
        &self.completion
    }
}

/// Runs Algorithm Relay until every node holds every packet or `max_rounds`
/// rounds have been played.
pub fn run_relay<R: Rng + ?Sized>(
    variant: RelayVariant,
    process: &mut GraphProcess,
    max_rounds: u32,
    rng: &mut R,
) -> TrialResult {
    let mut engine = RelayEngine::new(variant, process.n());
    drive(&mut engine, process, max_rounds, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complete_graph_finishes_in_one_round() {
        for variant in [RelayVariant::R1, RelayVariant::R2] {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let mut proc = GraphProcess::fixed(DirectedGraph::complete(9));
            let r = run_relay(variant, &mut proc, 50, &mut rng);
            assert_eq!(r.rounds_to_allcast, Some(1));
            assert_eq!(r.lower_bound, Some(1));
        }
    }

    #[test]
    fn three_cycle_r1_trace() {
        let g = DirectedGraph::cycle(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut e = RelayEngine::new(RelayVariant::R1, 3);
        e.step_round(&g, &mut rng);
        // After round 1 node v holds its predecessor's packet.
        for v in 0..3 {
            assert_eq!(e.round1_buffer(v), &[((v + 2) % 3) as u32]);
        }
        e.step_round(&g, &mut rng);
        assert_eq!(e.last_broadcasts(), &[2, 0, 1]);
        for v in 0..3 {
            assert_eq!(e.known_count(v), 3);
        }
        let mut proc = GraphProcess::fixed(g);
        let r = run_relay(RelayVariant::R1, &mut proc, 10, &mut rng);
        assert_eq!(r.rounds_to_allcast, Some(2));
        assert_eq!(r.lower_bound, Some(2));
    }

    #[test]
    fn one_way_edge_is_censored() {
        let g = DirectedGraph::from_edges(2, &[(0, 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut proc = GraphProcess::fixed(g);
        let r = run_relay(RelayVariant::R2, &mut proc, 20, &mut rng);
        assert!(!r.completed);
        assert_eq!(r.rounds_to_allcast, None);
        assert_eq!(r.per_node_completion, vec![None, Some(1)]);
        assert_eq!(r.lower_bound, None);
    }

    #[test]
    fn empty_round_changes_only_counter() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut e = RelayEngine::new(RelayVariant::R2, 4);
        e.step_round(&DirectedGraph::empty(4), &mut rng);
        assert_eq!(e.round(), 1);
        for v in 0..4 {
            assert_eq!(e.known_count(v), 1);
            assert!(e.round1_buffer(v).is_empty());
        }
    }
}
