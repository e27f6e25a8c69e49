//! Maker's engine for positional games on hypergraphs.
//!
//! Maker keeps the potential
//!
//! ```text
//! Phi = sum_e exp(lambda * (b_e - m_e)) / cosh(lambda)^(b_e + m_e)
//! ```
//!
//! non-increasing over every (Maker move, Breaker move) pair by claiming the
//! vertex with the largest total weight of incident hyperedges, where
//! `lambda = sqrt(2 ln(2X) / x)`. With Breaker moving first `Phi` never
//! exceeds `2X`, which yields at least `x/2 - sqrt(x ln(2X) / 2)` Maker
//! vertices in every hyperedge once the board is exhausted.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::board::Player;
use crate::error::{Error, Result};

/// `x/2 - sqrt(x ln(2X) / 2)`; negative for small `x`.
pub fn quota(x: usize, hyperedges: usize) -> f64 {
    let x = x as f64;
    x / 2.0 - (x * (2.0 * hyperedges as f64).ln() / 2.0).sqrt()
}

/// `sqrt(2 ln(2X) / x)`, or `None` when the game is degenerate.
pub fn engine_lambda(x: usize, hyperedges: usize) -> Option<f64> {
    if hyperedges == 0 || x == 0 {
        return None;
    }
    Some((2.0 * (2.0 * hyperedges as f64).ln() / x as f64).sqrt())
}

#[derive(Clone, Debug)]
pub struct HypergraphGame {
    edges: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
    owner: Vec<Option<Player>>,
    maker_count: Vec<u32>,
    breaker_count: Vec<u32>,
    unclaimed: usize,
    min_size: usize,
    lambda: Option<f64>,
}

impl HypergraphGame {
    /// A fresh game on vertices `0..vertex_count`.
    pub fn new(vertex_count: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut incidence = vec![Vec::new(); vertex_count];
        let mut stored = Vec::with_capacity(edges.len());
        for (id, mut members) in edges.into_iter().enumerate() {
            members.sort_unstable();
            members.dedup();
            if let Some(&bad) = members.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::InvalidVertex(bad));
            }
            for &v in &members {
                incidence[v].push(id as u32);
            }
            stored.push(members.into_iter().map(|v| v as u32).collect::<Vec<_>>());
        }
        let min_size = stored.iter().map(Vec::len).min().unwrap_or(0);
        let lambda = engine_lambda(min_size, stored.len());
        Ok(HypergraphGame {
            maker_count: vec![0; stored.len()],
            breaker_count: vec![0; stored.len()],
            edges: stored,
            incidence,
            owner: vec![None; vertex_count],
            unclaimed: vertex_count,
            min_size,
            lambda,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.owner.len()
    }

    /// `X`
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `x`, the smallest initial hyperedge size.
    pub fn min_size(&self) -> usize {
        self.min_size
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn quota(&self) -> f64 {
        quota(self.min_size, self.edges.len())
    }

    pub fn edge(&self, e: usize) -> &[u32] {
        &self.edges[e]
    }

    pub fn edges_of(&self, v: usize) -> &[u32] {
        &self.incidence[v]
    }

    pub fn maker_count(&self, e: usize) -> u32 {
        self.maker_count[e]
    }

    pub fn maker_counts(&self) -> &[u32] {
        &self.maker_count
    }

    pub fn breaker_count(&self, e: usize) -> u32 {
        self.breaker_count[e]
    }

    pub fn unclaimed_in(&self, e: usize) -> u32 {
        self.edges[e].len() as u32 - self.maker_count[e] - self.breaker_count[e]
    }

    pub fn owner(&self, v: usize) -> Option<Player> {
        self.owner[v]
    }

    pub fn unclaimed(&self) -> usize {
        self.unclaimed
    }

    pub fn is_over(&self) -> bool {
        self.unclaimed == 0
    }

    pub fn unclaimed_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.owner.iter().enumerate().filter(|(_, o)| o.is_none()).map(|(v, _)| v)
    }

    pub fn claim(&mut self, v: usize, player: Player) -> Result<()> {
        match self.owner.get(v) {
            Some(None) => {}
            _ => return Err(Error::PolicyBug(v)),
        }
        self.owner[v] = Some(player);
        self.unclaimed -= 1;
        let counts = match player {
            Player::Maker => &mut self.maker_count,
            Player::Breaker => &mut self.breaker_count,
        };
        for &e in &self.incidence[v] {
            counts[e as usize] += 1;
        }
        Ok(())
    }

    fn log_weight(&self, e: usize, lambda: f64, log_cosh: f64) -> f64 {
        let b = self.breaker_count[e] as f64;
        let m = self.maker_count[e] as f64;
        lambda * (b - m) - (b + m) * log_cosh
    }

    /// `Phi` as defined in the module docs; `0` for degenerate games.
    pub fn potential(&self) -> f64 {
        let Some(lambda) = self.lambda else { return 0.0 };
        let log_cosh = lambda.cosh().ln();
        (0..self.edges.len()).map(|e| self.log_weight(e, lambda, log_cosh).exp()).sum()
    }

    /// Relative scores of every vertex (claimed vertices score `-inf`),
    /// rescaled so the heaviest live hyperedge has weight 1.
    pub fn scores(&self) -> Vec<f64> {
        let mut scores: Vec<f64> = self
            .owner
            .iter()
            .map(|o| if o.is_none() { 0.0 } else { f64::NEG_INFINITY })
            .collect();
        let Some(lambda) = self.lambda else { return scores };
        let log_cosh = lambda.cosh().ln();
        let live = |e: usize| self.unclaimed_in(e) > 0;
        let top = (0..self.edges.len())
            .filter(|&e| live(e))
            .map(|e| self.log_weight(e, lambda, log_cosh))
            .fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return scores;
        }
        for e in (0..self.edges.len()).filter(|&e| live(e)) {
            let w = (self.log_weight(e, lambda, log_cosh) - top).exp();
            for &v in &self.edges[e] {
                if self.owner[v as usize].is_none() {
                    scores[v as usize] += w;
                }
            }
        }
        scores
    }

    /// The unclaimed vertex of largest score, lowest index on ties.
    pub fn maker_move(&self) -> Result<usize> {
        let scores = self.scores();
        let mut best: Option<(usize, f64)> = None;
        for (v, &score) in scores.iter().enumerate() {
            if self.owner[v].is_none() && best.is_none_or(|(_, b)| score > b) {
                best = Some((v, score));
            }
        }
        best.map(|(v, _)| v).ok_or(Error::NoUnclaimedVertex)
    }
}

/// A Breaker policy for stand-alone hypergraph games. `None` passes.
pub trait HyperBreaker {
    fn pick(&mut self, game: &HypergraphGame) -> Option<usize>;
}

pub struct RandomHyperBreaker {
    rng: ChaCha8Rng,
}

impl RandomHyperBreaker {
    pub fn new(seed: u64) -> Self {
        RandomHyperBreaker {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl HyperBreaker for RandomHyperBreaker {
    fn pick(&mut self, game: &HypergraphGame) -> Option<usize> {
        if game.is_over() {
            return None;
        }
        let k = self.rng.gen_range(0..game.unclaimed());
        game.unclaimed_vertices().nth(k)
    }
}

/// Attacks the live hyperedge with the fewest Maker vertices (then fewest
/// unclaimed), claiming its member that lies in the most hyperedges.
pub struct GreedyHyperBreaker;

impl HyperBreaker for GreedyHyperBreaker {
    fn pick(&mut self, game: &HypergraphGame) -> Option<usize> {
        let target = (0..game.edge_count())
            .filter(|&e| game.unclaimed_in(e) > 0)
            .min_by_key(|&e| (game.maker_count(e), game.unclaimed_in(e), e));
        match target {
            Some(e) => game
                .edge(e)
                .iter()
                .map(|&v| v as usize)
                .filter(|&v| game.owner(v).is_none())
                .max_by_key(|&v| (game.edges_of(v).len(), std::cmp::Reverse(v))),
            None => game.unclaimed_vertices().next(),
        }
    }
}

/// Takes the vertex Maker's engine would take next.
pub struct ThiefHyperBreaker;

impl HyperBreaker for ThiefHyperBreaker {
    fn pick(&mut self, game: &HypergraphGame) -> Option<usize> {
        game.maker_move().ok()
    }
}

pub struct PassingHyperBreaker;

impl HyperBreaker for PassingHyperBreaker {
    fn pick(&mut self, _game: &HypergraphGame) -> Option<usize> {
        None
    }
}

/// Plays until every vertex is claimed and returns the final Maker count of
/// every hyperedge.
pub fn play_hypergraph_game(
    game: &mut HypergraphGame,
    breaker: &mut dyn HyperBreaker,
    maker_first: bool,
) -> Result<Vec<u32>> {
    let mut maker_turn = maker_first;
    while !game.is_over() {
        if maker_turn {
            let v = game.maker_move()?;
            game.claim(v, Player::Maker)?;
        } else if let Some(v) = breaker.pick(game) {
            game.claim(v, Player::Breaker)?;
        }
        maker_turn = !maker_turn;
    }
    Ok(game.maker_counts().to_vec())
}

/// Random hypergraph on `vertices` vertices with `hyperedges` hyperedges of
/// sizes drawn from `min_size..=max_size`.
pub fn random_hypergraph(
    vertices: usize,
    hyperedges: usize,
    min_size: usize,
    max_size: usize,
    seed: u64,
) -> Result<HypergraphGame> {
    use rand::seq::index::sample;
    if min_size > max_size || max_size > vertices {
        return Err(Error::Infeasible(format!(
            "hyperedge sizes {min_size}..={max_size} on {vertices} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..hyperedges)
        .map(|_| {
            let size = rng.gen_range(min_size..=max_size);
            sample(&mut rng, vertices, size).into_vec()
        })
        .collect();
    HypergraphGame::new(vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-3
    }

    #[test]
    fn quota_examples() {
        // 2 - sqrt(2 ln 2), 1 - sqrt(ln 2), 50 - sqrt(50 ln 2)
        assert!(close(quota(4, 1), 0.8226));
        assert!(close(quota(2, 1), 0.1674));
        assert!(close(quota(100, 1), 44.1129));
        for x in 1..300 {
            for big_x in [1, 2, 7, 64, 4096] {
                assert!(quota(x, big_x) < x as f64 / 2.0);
            }
        }
    }

    #[test]
    fn maker_move_examples() {
        let fresh = HypergraphGame::new(5, vec![(0..5).collect()]).unwrap();
        assert_eq!(fresh.maker_move().unwrap(), 0);

        let mut g = HypergraphGame::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        g.claim(4, Player::Breaker).unwrap();
        let v = g.maker_move().unwrap();
        assert!([3, 5].contains(&v), "picked {v}");

        let mut last = HypergraphGame::new(3, vec![vec![0, 1, 2]]).unwrap();
        last.claim(0, Player::Maker).unwrap();
        last.claim(2, Player::Breaker).unwrap();
        assert_eq!(last.maker_move().unwrap(), 1);
        last.claim(1, Player::Maker).unwrap();
        assert!(matches!(last.maker_move(), Err(Error::NoUnclaimedVertex)));
    }

    #[test]
    fn play_examples() {
        for seed in 0..50 {
            let mut g = HypergraphGame::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
            let counts = play_hypergraph_game(&mut g, &mut RandomHyperBreaker::new(seed), false).unwrap();
            assert!(counts[0] >= 1);
        }
        let mut g = HypergraphGame::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let counts = play_hypergraph_game(&mut g, &mut PassingHyperBreaker, false).unwrap();
        assert_eq!(counts, vec![4]);
    }

    #[test]
    fn claim_errors() {
        let mut g = HypergraphGame::new(2, vec![vec![0, 1]]).unwrap();
        g.claim(0, Player::Breaker).unwrap();
        assert!(matches!(g.claim(0, Player::Maker), Err(Error::PolicyBug(0))));
        assert!(matches!(g.claim(7, Player::Maker), Err(Error::PolicyBug(7))));
        assert!(HypergraphGame::new(2, vec![vec![0, 5]]).is_err());
    }

    #[test]
    fn degenerate_games_play_lowest_index() {
        let mut empty = HypergraphGame::new(3, vec![]).unwrap();
        assert!(empty.lambda().is_none());
        assert_eq!(empty.maker_move().unwrap(), 0);
        play_hypergraph_game(&mut empty, &mut RandomHyperBreaker::new(1), true).unwrap();
        let with_empty_edge = HypergraphGame::new(3, vec![vec![], vec![1]]).unwrap();
        assert_eq!(with_empty_edge.maker_move().unwrap(), 0);
    }

    #[test]
    fn counts_match_intersections() {
        let mut g = random_hypergraph(30, 8, 4, 12, 9).unwrap();
        play_hypergraph_game(&mut g, &mut RandomHyperBreaker::new(3), false).unwrap();
        for e in 0..g.edge_count() {
            let m = g.edge(e).iter().filter(|&&v| g.owner(v as usize) == Some(Player::Maker)).count();
            let b = g.edge(e).iter().filter(|&&v| g.owner(v as usize) == Some(Player::Breaker)).count();
            assert_eq!(m as u32, g.maker_count(e));
            assert_eq!(b as u32, g.breaker_count(e));
            assert_eq!(g.unclaimed_in(e), 0);
        }
    }

    /// Direct recomputation of the potential from the ownership vector.
    fn recomputed_potential(g: &HypergraphGame) -> f64 {
        let lambda = g.lambda().unwrap();
        (0..g.edge_count())
            .map(|e| {
                let (mut m, mut b) = (0i32, 0i32);
                for &v in g.edge(e) {
                    match g.owner(v as usize) {
                        Some(Player::Maker) => m += 1,
                        Some(Player::Breaker) => b += 1,
                        None => {}
                    }
                }
                (lambda * (b - m) as f64).exp() / lambda.cosh().powi(b + m)
            })
            .sum()
    }

    #[test]
    fn potential_never_increases_over_a_maker_breaker_pair() {
        for seed in 0..40u64 {
            let mut g = random_hypergraph(24, 10, 6, 14, seed).unwrap();
            let x_count = g.edge_count() as f64;
            let mut breakers: Vec<Box<dyn HyperBreaker>> = vec![
                Box::new(RandomHyperBreaker::new(seed)),
                Box::new(GreedyHyperBreaker),
                Box::new(ThiefHyperBreaker),
            ];
            let breaker = &mut breakers[(seed % 3) as usize];
            // Breaker opens
            let v = breaker.pick(&g).unwrap();
            g.claim(v, Player::Breaker).unwrap();
            assert!(recomputed_potential(&g) <= 2.0 * x_count + 1e-9);
            while !g.is_over() {
                let before = recomputed_potential(&g);
                assert!((before - g.potential()).abs() < 1e-9 * before.max(1.0));
                let m = g.maker_move().unwrap();
                g.claim(m, Player::Maker).unwrap();
                if let Some(b) = breaker.pick(&g) {
                    g.claim(b, Player::Breaker).unwrap();
                }
                let after = recomputed_potential(&g);
                assert!(after <= before * (1.0 + 1e-12), "seed {seed}: {before} -> {after}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn breaker_first_meets_quota(
            seed in any::<u64>(),
            vertices in 8usize..60,
            hyperedges in 1usize..12,
            kind in 0usize..3,
        ) {
            let min_size = vertices / 3;
            let mut g = random_hypergraph(vertices, hyperedges, min_size.max(1), vertices, seed).unwrap();
            let q = g.quota();
            let mut breaker: Box<dyn HyperBreaker> = match kind {
                0 => Box::new(RandomHyperBreaker::new(seed)),
                1 => Box::new(GreedyHyperBreaker),
                _ => Box::new(ThiefHyperBreaker),
            };
            let counts = play_hypergraph_game(&mut g, breaker.as_mut(), false).unwrap();
            for c in counts {
                prop_assert!(c as f64 >= q);
            }
        }
    }
}
