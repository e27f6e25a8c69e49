//! Slow exact references for testing: game-tree search on tiny hypergraph
//! games and brute-force candidate checks straight from the ledger.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::board::{Player, Position, StarVertex};
use crate::discrepancy::HypergraphGame;
use crate::error::{Error, Result};
use crate::graph::{complete, gen_cycle, named_graph};
use crate::instance::Instance;
use crate::leveling::{level_greedy, level_lll, DEFAULT_RESAMPLE_CAP};

/// Largest board the exhaustive searches accept.
pub const MAX_ORACLE_VERTICES: usize = 14;

struct Tiny {
    n: usize,
    edges: Vec<u16>,
}

impl Tiny {
    fn new(game: &HypergraphGame) -> Result<Self> {
        let n = game.vertex_count();
        if game.unclaimed() > MAX_ORACLE_VERTICES || n > 16 {
            return Err(Error::CapExceeded(game.unclaimed()));
        }
        let edges = (0..game.edge_count())
            .map(|e| game.edge(e).iter().fold(0u16, |m, &v| m | (1 << v)))
            .collect();
        Ok(Tiny { n, edges })
    }

    fn value(&self, maker: u16) -> u32 {
        self.edges.iter().map(|e| (e & maker).count_ones()).min().unwrap_or(u32::MAX)
    }

    fn counts(&self, maker: u16) -> Vec<u32> {
        let mut counts: Vec<u32> = self.edges.iter().map(|e| (e & maker).count_ones()).collect();
        counts.sort_unstable();
        counts
    }
}

fn masks_of(game: &HypergraphGame) -> (u16, u16) {
    let mut m = 0u16;
    let mut b = 0u16;
    for v in 0..game.vertex_count() {
        match game.owner(v) {
            Some(Player::Maker) => m |= 1 << v,
            Some(Player::Breaker) => b |= 1 << v,
            None => {}
        }
    }
    (m, b)
}

/// Exact value of the game from the current position, players alternating
/// from `mover`. The value is the ascending vector of final hyperedge Maker
/// counts; Maker maximizes it lexicographically and Breaker minimizes it, so
/// its first entry is the best minimum count Maker can force.
pub fn minimax_hypergraph(game: &HypergraphGame, mover: Player) -> Result<Vec<u32>> {
    let tiny = Tiny::new(game)?;
    let (m, b) = masks_of(game);
    let mut memo = HashMap::new();
    Ok(solve(&tiny, m, b, mover, &mut memo))
}

fn solve(t: &Tiny, m: u16, b: u16, mover: Player, memo: &mut HashMap<(u16, u16), Vec<u32>>) -> Vec<u32> {
    let full = ((1u32 << t.n) - 1) as u16;
    let free = full & !(m | b);
    if free == 0 {
        return t.counts(m);
    }
    if let Some(v) = memo.get(&(m, b)) {
        return v.clone();
    }
    let moves = (0..t.n).filter(|v| free & (1 << v) != 0);
    let value = match mover {
        Player::Maker => moves.map(|v| solve(t, m | 1 << v, b, Player::Breaker, memo)).max(),
        Player::Breaker => moves.map(|v| solve(t, m, b | 1 << v, Player::Maker, memo)).min(),
    }
    .expect("free vertex exists");
    memo.insert((m, b), value.clone());
    value
}

/// Lowest final `min_e maker_count` any Breaker can hold the engine to.
pub fn engine_worst_case(game: &HypergraphGame, mover: Player) -> Result<u32> {
    let tiny = Tiny::new(game)?;
    let mut memo = HashMap::new();
    worst(&tiny, game.clone(), mover, &mut memo)
}

fn worst(t: &Tiny, game: HypergraphGame, mover: Player, memo: &mut HashMap<(u16, u16), u32>) -> Result<u32> {
    let (m, b) = masks_of(&game);
    if game.is_over() {
        return Ok(t.value(m));
    }
    if let Some(&v) = memo.get(&(m, b)) {
        return Ok(v);
    }
    let value = match mover {
        Player::Maker => {
            let mut next = game.clone();
            next.claim(next.maker_move()?, Player::Maker)?;
            worst(t, next, Player::Breaker, memo)?
        }
        Player::Breaker => {
            let mut best = u32::MAX;
            for v in game.unclaimed_vertices() {
                let mut next = game.clone();
                next.claim(v, Player::Breaker)?;
                best = best.min(worst(t, next, Player::Maker, memo)?);
            }
            best
        }
    };
    memo.insert((m, b), value);
    Ok(value)
}

/// Candidate check by plain enumeration: every tuple of upper representatives
/// is tried, and every member of `B_u` is tested edge by edge.
pub fn naive_is_candidate_wrt_edge(inst: &Instance, pos: &Position, x: StarVertex, u: usize) -> Result<bool> {
    let g = inst.graph();
    let v = x.block;
    let (lu, lv) = (inst.level(u), inst.level(v));
    let uppers: Vec<usize> = g
        .neighbors(u)
        .iter()
        .copied()
        .filter(|&w| inst.level(w) > lu && inst.level(w) < lv)
        .collect();
    let b_u = pos.b_or_err(u)?;
    let sets: Vec<&[u64]> = uppers.iter().map(|&w| pos.b_or_err(w)).collect::<Result<_>>()?;
    let t = uppers.len() + 1;
    let required = b_u.len() as f64 / (t as f64 * 2f64.powi(t as i32));
    let holds = |a: StarVertex, c: StarVertex| -> bool {
        inst.board().edge(a, c).map(|e| pos.owner(&e) == Some(Player::Maker)).unwrap_or(false)
    };
    let mut digits = vec![0usize; sets.len()];
    if sets.iter().any(|s| s.is_empty()) {
        return Ok(true);
    }
    loop {
        let count = b_u
            .iter()
            .filter(|&&i| {
                let a = StarVertex::new(u, i);
                holds(a, x) && digits.iter().enumerate().all(|(k, &d)| holds(a, StarVertex::new(uppers[k], sets[k][d])))
            })
            .count();
        if (count as f64) < required {
            return Ok(false);
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(true);
            }
            digits[k] += 1;
            if digits[k] < sets[k].len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// A small instance with every `B_v` fixed at random and a random share of
/// the edges between `B` sets claimed by each player.
pub fn random_position(seed: u64) -> Result<(Instance, Position)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = match rng.gen_range(0..5) {
        0 => gen_cycle(4)?,
        1 => gen_cycle(6)?,
        2 => gen_cycle(rng.gen_range(3..9))?,
        3 => complete(4),
        _ => named_graph("petersen")?,
    };
    let leveling = if rng.gen_bool(0.5) {
        level_greedy(&graph)
    } else {
        level_lll(&graph, rng.gen(), DEFAULT_RESAMPLE_CAP)?
    };
    let s = rng.gen_range(2..=5);
    let inst = Instance::new(graph, leveling, s)?;
    let board = inst.board();
    let mut pos = Position::new(board);
    let n = inst.graph().n();
    for v in 0..n {
        let size = board.block_size(v) as usize;
        let mut members: Vec<u64> = sample(&mut rng, size, s as usize).into_iter().map(|i| i as u64).collect();
        members.sort_unstable();
        pos.set_b(board, v, members)?;
    }
    let density = rng.gen_range(0.5..1.0);
    for (a, b) in inst.graph().edges() {
        let (lo, hi) = if inst.level(a) < inst.level(b) { (a, b) } else { (b, a) };
        for &i in pos.b_or_err(lo)?.to_vec().iter() {
            for &j in pos.b_or_err(hi)?.to_vec().iter() {
                let edge = inst.edge(lo, i, hi, j)?;
                let roll: f64 = rng.gen();
                if roll < density {
                    pos.claim(board, Player::Maker, edge)?;
                } else if roll < density + (1.0 - density) / 2.0 {
                    pos.claim(board, Player::Breaker, edge)?;
                }
            }
        }
    }
    Ok((inst, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidate::is_candidate_wrt_edge;
    use crate::discrepancy::random_hypergraph;

    #[test]
    fn minimax_small_games() {
        // both vertices in one hyperedge: Maker gets one either way
        let game = HypergraphGame::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(minimax_hypergraph(&game, Player::Maker).unwrap(), vec![1]);
        assert_eq!(minimax_hypergraph(&game, Player::Breaker).unwrap(), vec![1]);
        assert_eq!(engine_worst_case(&game, Player::Breaker).unwrap(), 1);
        let four = HypergraphGame::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(minimax_hypergraph(&four, Player::Breaker).unwrap(), vec![2]);
        // a triangle of pairs: whatever Maker takes, one pair holds none of it
        let tri = HypergraphGame::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(minimax_hypergraph(&tri, Player::Breaker).unwrap(), vec![0, 1, 1]);
        let pairs = HypergraphGame::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(minimax_hypergraph(&pairs, Player::Breaker).unwrap(), vec![1, 1]);
    }

    #[test]
    fn minimax_matches_brute_force_without_memo() {
        fn plain(t: &Tiny, m: u16, b: u16, maker: bool) -> u32 {
            let free: Vec<usize> = (0..t.n).filter(|v| (m | b) & (1 << v) == 0).collect();
            if free.is_empty() {
                return t.value(m);
            }
            let vals = free.iter().map(|&v| {
                if maker {
                    plain(t, m | 1 << v, b, false)
                } else {
                    plain(t, m, b | 1 << v, true)
                }
            });
            if maker { vals.max().unwrap() } else { vals.min().unwrap() }
        }
        for seed in 0..20 {
            let game = random_hypergraph(7, 1 + seed as usize % 4, 2, 5, seed).unwrap();
            let tiny = Tiny::new(&game).unwrap();
            assert_eq!(minimax_hypergraph(&game, Player::Breaker).unwrap()[0], plain(&tiny, 0, 0, false));
        }
    }

    #[test]
    fn engine_never_beats_optimum() {
        for seed in 0..40 {
            let game = random_hypergraph(10, 1 + seed as usize % 6, 3, 7, seed).unwrap();
            let best = minimax_hypergraph(&game, Player::Breaker).unwrap()[0];
            let engine = engine_worst_case(&game, Player::Breaker).unwrap();
            assert!(engine <= best);
            assert!(engine as f64 >= game.quota());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let game = HypergraphGame::new(15, vec![(0..15).collect()]).unwrap();
        assert_eq!(minimax_hypergraph(&game, Player::Maker).unwrap_err(), Error::CapExceeded(15));
    }

    #[test]
    fn naive_extremes() {
        let inst = Instance::new(gen_cycle(6).unwrap(), crate::leveling::Leveling::from_levels(vec![1, 2, 3, 1, 2, 3]).unwrap(), 3).unwrap();
        let board = inst.board();
        let mut empty = Position::new(board);
        for v in 0..6 {
            empty.set_b(board, v, vec![0, 1, 2]).unwrap();
        }
        let mut full = empty.clone();
        for (a, b) in inst.graph().edges() {
            let (lo, hi) = if inst.level(a) < inst.level(b) { (a, b) } else { (b, a) };
            for i in 0..3 {
                for j in 0..3 {
                    full.claim(board, Player::Maker, inst.edge(lo, i, hi, j).unwrap()).unwrap();
                }
            }
        }
        for v in 0..6 {
            for u in inst.lower_neighbors(v) {
                for i in 0..3 {
                    let x = StarVertex::new(v, i);
                    assert!(naive_is_candidate_wrt_edge(&inst, &full, x, u).unwrap());
                    assert!(!naive_is_candidate_wrt_edge(&inst, &empty, x, u).unwrap());
                }
            }
        }
    }

    #[test]
    fn naive_agrees_on_a_few_positions() {
        for seed in 0..30 {
            let (inst, pos) = random_position(seed).unwrap();
            for v in 0..inst.graph().n() {
                for u in inst.lower_neighbors(v) {
                    for &i in pos.b(v).unwrap() {
                        let x = StarVertex::new(v, i);
                        assert_eq!(
                            naive_is_candidate_wrt_edge(&inst, &pos, x, u).unwrap(),
                            is_candidate_wrt_edge(&inst, &pos, x, u).unwrap()
                        );
                    }
                }
            }
        }
    }
}
