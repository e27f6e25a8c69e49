//! Level labelings `l: V(G) -> {1..r}` in which vertices sharing a level are
//! at distance at least 3.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::TargetGraph;

/// Default cap on resampling steps in [`level_lll`].
pub const DEFAULT_RESAMPLE_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leveling {
    levels: Vec<u32>,
    r: u32,
}

impl Leveling {
    /// Wraps explicit levels. Every level must lie in `1..=r`.
    pub fn new(levels: Vec<u32>, r: u32) -> Result<Self> {
        if let Some((v, &l)) = levels.iter().enumerate().find(|(_, &l)| l == 0 || l > r) {
            return Err(Error::InvalidLeveling(format!(
                "vertex {v} has level {l} outside 1..={r}"
            )));
        }
        Ok(Leveling { levels, r })
    }

    /// Wraps explicit levels with `r` set to the largest level used.
    pub fn from_levels(levels: Vec<u32>) -> Result<Self> {
        let r = levels.iter().copied().max().unwrap_or(1);
        Self::new(levels, r)
    }

    pub fn level(&self, v: usize) -> u32 {
        self.levels[v]
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `N^-(v)`: neighbors on a strictly lower level, ascending id.
    pub fn lower_neighbors(&self, g: &TargetGraph, v: usize) -> Vec<usize> {
        let lv = self.levels[v];
        g.neighbors(v).iter().copied().filter(|&u| self.levels[u] < lv).collect()
    }

    /// `N^+(v)`: neighbors on a strictly higher level, ascending id.
    pub fn upper_neighbors(&self, g: &TargetGraph, v: usize) -> Vec<usize> {
        let lv = self.levels[v];
        g.neighbors(v).iter().copied().filter(|&u| self.levels[u] > lv).collect()
    }

    /// Vertices ordered by `(level, id)`.
    pub fn level_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.levels.len()).collect();
        order.sort_by_key(|&v| (self.levels[v], v));
        order
    }

    /// `vertex level` per line.
    pub fn to_text(&self) -> String {
        self.levels
            .iter()
            .enumerate()
            .map(|(v, l)| format!("{v} {l}\n"))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = || Error::Parse {
                line: i + 1,
                msg: "expected `vertex level`".into(),
            };
            let mut it = line.split_whitespace();
            let v: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(err)?;
            let l: u32 = it.next().and_then(|t| t.parse().ok()).ok_or_else(err)?;
            pairs.push((v, l));
        }
        let n = pairs.iter().map(|&(v, _)| v + 1).max().unwrap_or(0);
        let mut levels = vec![0; n];
        for (v, l) in pairs {
            levels[v] = l;
        }
        Self::from_levels(levels)
    }
}

/// `ceil(e * d^8)`, the level range of the probabilistic argument.
pub fn paper_r(d: usize) -> u64 {
    (std::f64::consts::E * (d as f64).powi(8)).ceil() as u64
}

/// Same-level pairs `(u, v)`, `u < v`, at distance at most 2.
pub fn validate_leveling(g: &TargetGraph, l: &Leveling) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for v in 0..g.n() {
        for u in g.ball2(v) {
            if u > v && l.level(u) == l.level(v) {
                bad.push((v, u));
            }
        }
    }
    bad
}

/// Random levels in `1..=paper_r(d)`, repaired by resampling the distance-2
/// ball of the first violating vertex (ascending id) until no violation is
/// left.
pub fn level_lll(g: &TargetGraph, seed: u64, resample_cap: usize) -> Result<Leveling> {
    let r = paper_r(g.d().max(1)) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels: Vec<u32> = (0..g.n()).map(|_| rng.gen_range(1..=r)).collect();
    let balls: Vec<Vec<usize>> = (0..g.n()).map(|v| g.ball2(v)).collect();
    let mut resamples = 0;
    loop {
        let violating = (0..g.n()).find(|&v| balls[v].iter().any(|&w| levels[w] == levels[v]));
        let Some(v) = violating else { break };
        if resamples == resample_cap {
            return Err(Error::BudgetExhausted(resample_cap));
        }
        resamples += 1;
        levels[v] = rng.gen_range(1..=r);
        for &w in &balls[v] {
            levels[w] = rng.gen_range(1..=r);
        }
    }
    Leveling::new(levels, r)
}

/// Greedy coloring of the square of `G` in vertex-id order. Uses at most
/// `d^2 + 1` levels.
pub fn level_greedy(g: &TargetGraph) -> Leveling {
    let mut levels = vec![0u32; g.n()];
    for v in 0..g.n() {
        let taken: Vec<u32> = g.ball2(v).into_iter().map(|u| levels[u]).collect();
        levels[v] = (1..).find(|l| !taken.contains(l)).unwrap();
    }
    Leveling::from_levels(levels).expect("greedy levels start at 1")
}
