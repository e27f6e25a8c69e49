//! The implicit board `H` and the evolving game position.
//!
//! Every vertex `v` of `G` owns a block `S_v` of `d * s^2 * |P(v)| + s` board
//! vertices, and `H` joins every vertex of `S_u` to every vertex of `S_v`
//! when `uv` is an edge of `G`. The board is never materialized; only claimed
//! edges are stored.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::blocking::BlockingDag;
use crate::error::{Error, Result};
use crate::graph::TargetGraph;
use crate::leveling::Leveling;

/// `d^5 * 2^(d+4)`.
pub fn paper_s(d: usize) -> u64 {
    (d as u64).pow(5) * (1u64 << (d + 4))
}

/// A board vertex: the `index`-th member of block `S_block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarVertex {
    pub block: usize,
    pub index: u64,
}

impl StarVertex {
    pub fn new(block: usize, index: u64) -> Self {
        StarVertex { block, index }
    }
}

impl fmt::Display for StarVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}#{}", self.block, self.index)
    }
}

impl FromStr for StarVertex {
    type Err = Error;

    /// Accepts `v3#17` and `3#17`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("bad board vertex {s:?}"),
        };
        let body = s.strip_prefix('v').unwrap_or(s);
        let (block, index) = body.split_once('#').ok_or_else(bad)?;
        Ok(StarVertex {
            block: block.parse().map_err(|_| bad())?,
            index: index.parse().map_err(|_| bad())?,
        })
    }
}

/// A board edge oriented from the lower-level endpoint to the higher one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarEdge {
    lower: StarVertex,
    upper: StarVertex,
}

impl StarEdge {
    pub fn lower(&self) -> StarVertex {
        self.lower
    }

    /// The endpoint a claim touches.
    pub fn upper(&self) -> StarVertex {
        self.upper
    }
}

impl fmt::Display for StarEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lower, self.upper)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Maker,
    Breaker,
}

#[derive(Clone, Debug)]
pub struct BoardSpec {
    s: u64,
    d: usize,
    r: u32,
    levels: Vec<u32>,
    adjacency: Vec<Vec<usize>>,
    block_size: Vec<u64>,
    block_offset: Vec<u64>,
}

pub fn build_board_spec(g: &TargetGraph, l: &Leveling, dag: &BlockingDag, s: u64) -> Result<BoardSpec> {
    if s == 0 {
        return Err(Error::Precondition("block parameter s must be at least 1".into()));
    }
    let overflow = || Error::Overflow(format!("block sizes for s = {s}"));
    let d = g.d() as u64;
    let mut block_size = Vec::with_capacity(g.n());
    let mut block_offset = Vec::with_capacity(g.n());
    let mut offset = 0u64;
    for v in 0..g.n() {
        let size = d
            .checked_mul(s)
            .and_then(|x| x.checked_mul(s))
            .and_then(|x| x.checked_mul(dag.descendant_count(v) as u64))
            .and_then(|x| x.checked_add(s))
            .ok_or_else(overflow)?;
        block_offset.push(offset);
        block_size.push(size);
        offset = offset.checked_add(size).ok_or_else(overflow)?;
    }
    Ok(BoardSpec {
        s,
        d: g.d(),
        r: l.r(),
        levels: l.levels().to_vec(),
        adjacency: (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect(),
        block_size,
        block_offset,
    })
}

impl BoardSpec {
    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn block_count(&self) -> usize {
        self.block_size.len()
    }

    pub fn block_size(&self, v: usize) -> u64 {
        self.block_size[v]
    }

    pub fn block_sizes(&self) -> &[u64] {
        &self.block_size
    }

    /// Dense id of a board vertex.
    pub fn dense_id(&self, x: StarVertex) -> u64 {
        self.block_offset[x.block] + x.index
    }

    pub fn vertex_count(&self) -> u64 {
        self.block_offset.last().map_or(0, |o| o + self.block_size.last().unwrap())
    }

    pub fn level(&self, v: usize) -> u32 {
        self.levels[v]
    }

    pub fn contains(&self, x: StarVertex) -> bool {
        x.block < self.block_count() && x.index < self.block_size[x.block]
    }

    pub fn is_board_edge(&self, a: StarVertex, b: StarVertex) -> bool {
        self.contains(a) && self.contains(b) && self.adjacency[a.block].binary_search(&b.block).is_ok()
    }

    /// Orients `{a, b}` by level, failing if it is not a board edge.
    pub fn edge(&self, a: StarVertex, b: StarVertex) -> Result<StarEdge> {
        if !self.is_board_edge(a, b) {
            return Err(Error::NotABoardEdge(a, b));
        }
        let (lower, upper) = if self.levels[a.block] < self.levels[b.block] { (a, b) } else { (b, a) };
        Ok(StarEdge { lower, upper })
    }

    /// Parses `"<vertex> <vertex>"` in `v{v}#{i}` or `{v}#{i}` notation.
    pub fn parse_edge(&self, text: &str) -> Result<StarEdge> {
        let mut it = text.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected two board vertices, got {text:?}"),
            });
        };
        self.edge(a.parse()?, b.parse()?)
    }

    /// Multi-line human readable summary.
    pub fn summary(&self, count: &EdgeCount) -> String {
        let sizes: Vec<String> = self.block_size.iter().map(u64::to_string).collect();
        format!(
            "s {}\nd {}\nr {}\nblocks {}\nvertices {}\nedges_exact {}\nedges_bound {}\n",
            self.s,
            self.d,
            self.r,
            sizes.join(" "),
            self.vertex_count(),
            count.exact,
            count.paper_bound
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCount {
    pub exact: u128,
    /// `|E(G)| * (d * s^2 * d^(2r) + s)^2`
    pub paper_bound: BigUint,
}

pub fn edge_count(spec: &BoardSpec, g: &TargetGraph) -> EdgeCount {
    let exact = g
        .edges()
        .into_iter()
        .map(|(u, v)| spec.block_size(u) as u128 * spec.block_size(v) as u128)
        .sum();
    let d = BigUint::from(spec.d());
    let s = BigUint::from(spec.s());
    let block_bound = &d * &s * &s * d.pow(2 * spec.r()) + &s;
    let paper_bound = BigUint::from(g.edge_count()) * &block_bound * &block_bound;
    EdgeCount { exact, paper_bound }
}

/// Claimed edges, touched flags, `B_v` selections and vertex status.
#[derive(Clone, Debug)]
pub struct Position {
    maker: HashSet<StarEdge>,
    breaker: HashSet<StarEdge>,
    touched: Vec<HashSet<u64>>,
    b_sets: Vec<Option<Vec<u64>>>,
    ready: Vec<bool>,
    completed: Vec<bool>,
}

impl Position {
    pub fn new(spec: &BoardSpec) -> Self {
        let n = spec.block_count();
        Position {
            maker: HashSet::new(),
            breaker: HashSet::new(),
            touched: vec![HashSet::new(); n],
            b_sets: vec![None; n],
            ready: vec![false; n],
            completed: vec![false; n],
        }
    }

    /// Records a claim. Returns whether the upper endpoint became touched.
    pub fn claim(&mut self, spec: &BoardSpec, player: Player, edge: StarEdge) -> Result<bool> {
        if !spec.is_board_edge(edge.lower, edge.upper) || spec.level(edge.lower.block) >= spec.level(edge.upper.block) {
            return Err(Error::NotABoardEdge(edge.lower, edge.upper));
        }
        if self.is_claimed(&edge) {
            return Err(Error::AlreadyClaimed(edge));
        }
        match player {
            Player::Maker => self.maker.insert(edge),
            Player::Breaker => self.breaker.insert(edge),
        };
        Ok(self.touched[edge.upper.block].insert(edge.upper.index))
    }

    pub fn is_claimed(&self, edge: &StarEdge) -> bool {
        self.maker.contains(edge) || self.breaker.contains(edge)
    }

    pub fn owner(&self, edge: &StarEdge) -> Option<Player> {
        if self.maker.contains(edge) {
            Some(Player::Maker)
        } else if self.breaker.contains(edge) {
            Some(Player::Breaker)
        } else {
            None
        }
    }

    pub fn maker_holds(&self, edge: &StarEdge) -> bool {
        self.maker.contains(edge)
    }

    pub fn maker_edges(&self) -> impl Iterator<Item = &StarEdge> {
        self.maker.iter()
    }

    pub fn maker_count(&self) -> usize {
        self.maker.len()
    }

    pub fn breaker_count(&self) -> usize {
        self.breaker.len()
    }

    pub fn is_touched(&self, x: StarVertex) -> bool {
        self.touched[x.block].contains(&x.index)
    }

    pub fn touched_in(&self, v: usize) -> usize {
        self.touched[v].len()
    }

    pub fn untouched_in(&self, spec: &BoardSpec, v: usize) -> u64 {
        spec.block_size(v) - self.touched[v].len() as u64
    }

    /// The `count` lowest untouched indices of `S_v`.
    pub fn lowest_untouched(&self, spec: &BoardSpec, v: usize, count: u64) -> Vec<u64> {
        (0..spec.block_size(v))
            .filter(|i| !self.touched[v].contains(i))
            .take(count as usize)
            .collect()
    }

    pub fn set_b(&mut self, spec: &BoardSpec, v: usize, mut members: Vec<u64>) -> Result<()> {
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&i| i >= spec.block_size(v)) {
            return Err(Error::Precondition(format!("B_{v} exceeds S_{v}")));
        }
        self.b_sets[v] = Some(members);
        Ok(())
    }

    /// Sorted members of `B_v`.
    pub fn b(&self, v: usize) -> Option<&[u64]> {
        self.b_sets[v].as_deref()
    }

    pub fn b_or_err(&self, v: usize) -> Result<&[u64]> {
        self.b(v).ok_or(Error::Undetermined(v))
    }

    /// Position of index `i` inside `B_v`.
    pub fn b_position(&self, v: usize, i: u64) -> Option<usize> {
        self.b(v)?.binary_search(&i).ok()
    }

    pub fn is_ready(&self, v: usize) -> bool {
        self.ready[v]
    }

    pub fn is_completed(&self, v: usize) -> bool {
        self.completed[v]
    }

    pub fn set_ready(&mut self, v: usize) {
        self.ready[v] = true;
    }

    pub fn set_completed(&mut self, v: usize) {
        self.completed[v] = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocking::build_blocking_dag;
    use crate::graph::gen_cycle;

    fn c6(s: u64) -> (TargetGraph, BoardSpec) {
        let g = gen_cycle(6).unwrap();
        let l = Leveling::from_levels(vec![1, 2, 3, 1, 2, 3]).unwrap();
        let dag = build_blocking_dag(&g, &l).unwrap();
        let spec = build_board_spec(&g, &l, &dag, s).unwrap();
        (g, spec)
    }

    #[test]
    fn paper_s_values() {
        assert_eq!(paper_s(1), 32);
        assert_eq!(paper_s(2), 2048);
        assert_eq!(paper_s(3), 31104);
    }

    #[test]
    fn six_cycle_blocks() {
        let (g, spec) = c6(4);
        assert_eq!(spec.block_sizes(), &[4, 36, 132, 4, 36, 132]);
        // 4*36 + 36*132 + 132*4 + 4*36 + 36*132 + 132*4 over edges 01,12,23,34,45,50
        let count = edge_count(&spec, &g);
        assert_eq!(count.exact, 10848);
        assert!(BigUint::from(count.exact) <= count.paper_bound);
    }

    #[test]
    fn materialized_edge_count_matches() {
        // enumerate every pair of board vertices and count board edges
        let (g, spec) = c6(4);
        let total = spec.vertex_count();
        let mut all = Vec::new();
        for v in 0..6 {
            for i in 0..spec.block_size(v) {
                all.push(StarVertex::new(v, i));
            }
        }
        assert_eq!(all.len() as u64, total);
        let mut edges = 0u128;
        for (i, &a) in all.iter().enumerate() {
            for &b in &all[i + 1..] {
                if g.has_edge(a.block, b.block) {
                    edges += 1;
                }
            }
        }
        assert_eq!(edges, edge_count(&spec, &g).exact);
    }

    #[test]
    fn implicit_adjacency_on_triangle() {
        let g = gen_cycle(3).unwrap();
        let l = Leveling::from_levels(vec![1, 2, 3]).unwrap();
        let dag = build_blocking_dag(&g, &l).unwrap();
        let spec = build_board_spec(&g, &l, &dag, 2).unwrap();
        let mut all = Vec::new();
        for v in 0..3 {
            for i in 0..spec.block_size(v) {
                all.push(StarVertex::new(v, i));
            }
        }
        // materialized adjacency: complete bipartite between blocks of adjacent vertices
        for &a in &all {
            for &b in &all {
                let expected = a.block != b.block;
                assert_eq!(spec.is_board_edge(a, b), expected, "{a} {b}");
            }
        }
        assert!(!spec.is_board_edge(StarVertex::new(0, 0), StarVertex::new(1, 99)));
    }

    #[test]
    fn empty_descendants_give_block_of_s() {
        let g = TargetGraph::edgeless(3);
        let l = Leveling::from_levels(vec![1, 2, 3]).unwrap();
        let dag = build_blocking_dag(&g, &l).unwrap();
        let spec = build_board_spec(&g, &l, &dag, 7).unwrap();
        assert_eq!(spec.block_sizes(), &[7, 7, 7]);
        assert_eq!(edge_count(&spec, &g).exact, 0);
    }

    #[test]
    fn overflow_is_reported() {
        let g = gen_cycle(6).unwrap();
        let l = Leveling::from_levels(vec![1, 2, 3, 1, 2, 3]).unwrap();
        let dag = build_blocking_dag(&g, &l).unwrap();
        assert!(matches!(build_board_spec(&g, &l, &dag, 1 << 40), Err(Error::Overflow(_))));
        assert!(build_board_spec(&g, &l, &dag, 0).is_err());
    }

    #[test]
    fn claims_touch_only_upper_endpoint() {
        let (_, spec) = c6(4);
        let mut pos = Position::new(&spec);
        let x = StarVertex::new(0, 1);
        let y = StarVertex::new(1, 5);
        let e = spec.edge(y, x).unwrap();
        assert_eq!(e.lower(), x);
        assert!(pos.claim(&spec, Player::Breaker, e).unwrap());
        assert!(pos.is_touched(y));
        assert!(!pos.is_touched(x));
        assert_eq!(pos.untouched_in(&spec, 1), 35);
        assert_eq!(pos.untouched_in(&spec, 0), 4);
        assert!(matches!(pos.claim(&spec, Player::Maker, e), Err(Error::AlreadyClaimed(_))));
        assert!(matches!(
            spec.edge(StarVertex::new(0, 0), StarVertex::new(2, 0)),
            Err(Error::NotABoardEdge(..))
        ));
        // a second edge into an already touched vertex does not touch anew
        let e2 = spec.edge(StarVertex::new(0, 2), y).unwrap();
        assert!(!pos.claim(&spec, Player::Maker, e2).unwrap());
        // distinct upper endpoints
        for k in 0..5 {
            let e = spec.edge(StarVertex::new(0, k % 4), StarVertex::new(1, 10 + k)).unwrap();
            pos.claim(&spec, Player::Breaker, e).unwrap();
        }
        assert_eq!(pos.untouched_in(&spec, 1), 36 - 6);
        assert_eq!(pos.lowest_untouched(&spec, 1, 3), vec![0, 1, 2]);
    }

    #[test]
    fn vertex_notation() {
        let v: StarVertex = "v3#17".parse().unwrap();
        assert_eq!(v, StarVertex::new(3, 17));
        assert_eq!("3#17".parse::<StarVertex>().unwrap(), v);
        assert_eq!(v.to_string(), "v3#17");
        assert!("v3-17".parse::<StarVertex>().is_err());
        let (_, spec) = c6(4);
        let e = spec.parse_edge("1#0 0#3").unwrap();
        assert_eq!(e.to_string(), "v0#3 v1#0");
    }
}
