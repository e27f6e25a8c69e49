//! Target graphs: loading, built-in instances, random regular generation
//! and shortest-path queries.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default cap on pairing-model attempts in [`gen_random_regular`].
pub const DEFAULT_RETRY_CAP: usize = 1000;

/// A simple undirected graph with dense vertex ids `0..n`.
///
/// `d` is the common degree when the graph is regular and the maximum degree
/// otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetGraph {
    n: usize,
    d: usize,
    adjacency: Vec<Vec<usize>>,
}

impl TargetGraph {
    /// Builds a graph from an edge list. Rejects self-loops and parallel edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n {
                return Err(Error::InvalidVertex(a));
            }
            if b >= n {
                return Err(Error::InvalidVertex(b));
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::DuplicateEdge(a.min(b), a.max(b)));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let d = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(TargetGraph { n, d, adjacency })
    }

    pub fn edgeless(n: usize) -> Self {
        TargetGraph {
            n,
            d: 0,
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn is_regular(&self) -> bool {
        self.adjacency.iter().all(|a| a.len() == self.d)
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn check_regular(&self) -> Result<()> {
        for (v, list) in self.adjacency.iter().enumerate() {
            if list.len() != self.d {
                return Err(Error::NotRegular {
                    vertex: v,
                    degree: list.len(),
                    expected: self.d,
                });
            }
        }
        Ok(())
    }

    /// Vertices at distance 1 or 2 from `v`, sorted, excluding `v`.
    pub fn ball2(&self, v: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &w in &self.adjacency[v] {
            out.insert(w);
            for &x in &self.adjacency[w] {
                if x != v {
                    out.insert(x);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Edge-list text, one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

/// Parses whitespace-separated 0-based vertex pairs, one edge per line.
///
/// Blank lines and lines starting with `#` are skipped. The vertex count is
/// one more than the largest id. With `require_regular`, non-regular graphs
/// are rejected.
pub fn load_graph(text: &str, require_regular: bool) -> Result<TargetGraph> {
    let mut edges = Vec::new();
    let mut max_id = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: &str| Error::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let mut fields = line.split_whitespace();
        let a: usize = fields
            .next()
            .ok_or_else(|| parse_err("missing vertex"))?
            .parse()
            .map_err(|_| parse_err("bad vertex id"))?;
        let b: usize = fields
            .next()
            .ok_or_else(|| parse_err("missing second vertex"))?
            .parse()
            .map_err(|_| parse_err("bad vertex id"))?;
        if fields.next().is_some() {
            return Err(parse_err("trailing tokens"));
        }
        max_id = Some(max_id.unwrap_or(0).max(a).max(b));
        edges.push((a, b));
    }
    let n = max_id.map_or(0, |m| m + 1);
    let g = TargetGraph::from_edges(n, &edges)?;
    if require_regular {
        g.check_regular()?;
    }
    Ok(g)
}

pub fn gen_cycle(n: usize) -> Result<TargetGraph> {
    if n < 3 {
        return Err(Error::Infeasible(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    TargetGraph::from_edges(n, &edges)
}

pub fn petersen() -> TargetGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    TargetGraph::from_edges(10, &edges).expect("petersen edges are simple")
}

pub fn complete(n: usize) -> TargetGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    TargetGraph::from_edges(n, &edges).expect("complete graph is simple")
}

/// Resolves a built-in name: `c{n}`, `k{n}`, `petersen`.
pub fn named_graph(name: &str) -> Result<TargetGraph> {
    let lower = name.to_ascii_lowercase();
    if lower == "petersen" {
        return Ok(petersen());
    }
    let parse_n = |rest: &str| {
        rest.parse::<usize>()
            .map_err(|_| Error::Config(format!("unknown graph name {name:?}")))
    };
    if let Some(rest) = lower.strip_prefix('c') {
        return gen_cycle(parse_n(rest)?);
    }
    if let Some(rest) = lower.strip_prefix('k') {
        let n = parse_n(rest)?;
        if n < 2 {
            return Err(Error::Infeasible(format!("k{n} has no edges")));
        }
        return Ok(complete(n));
    }
    Err(Error::Config(format!("unknown graph name {name:?}")))
}

/// Samples a simple `d`-regular graph on `n` vertices with the pairing model,
/// rejecting loops and multi-edges, up to `retry_cap` attempts.
pub fn gen_random_regular(n: usize, d: usize, seed: u64, retry_cap: usize) -> Result<TargetGraph> {
    if !(n * d).is_multiple_of(2) {
        return Err(Error::Infeasible(format!("n*d = {} is odd", n * d)));
    }
    if d >= n && !(n == 0 && d == 0) {
        return Err(Error::Infeasible(format!("degree {d} needs more than {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..retry_cap {
        points.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        return TargetGraph::from_edges(n, &edges);
    }
    Err(Error::BudgetExhausted(retry_cap))
}

/// Shortest-path edge count between `u` and `v`; `None` when disconnected.
pub fn bfs_distance(g: &TargetGraph, u: usize, v: usize) -> Result<Option<usize>> {
    if u >= g.n() {
        return Err(Error::InvalidVertex(u));
    }
    if v >= g.n() {
        return Err(Error::InvalidVertex(v));
    }
    if u == v {
        return Ok(Some(0));
    }
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([u]);
    dist[u] = 0;
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                if y == v {
                    return Ok(Some(dist[y]));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Shortest path by enumerating simple paths (tiny graphs only).
    fn brute_distance(g: &TargetGraph, u: usize, v: usize) -> Option<usize> {
        fn walk(g: &TargetGraph, at: usize, goal: usize, seen: &mut Vec<bool>, len: usize, best: &mut Option<usize>) {
            if at == goal {
                *best = Some(best.map_or(len, |b| b.min(len)));
                return;
            }
            for &w in g.neighbors(at) {
                if !seen[w] {
                    seen[w] = true;
                    walk(g, w, goal, seen, len + 1, best);
                    seen[w] = false;
                }
            }
        }
        let mut seen = vec![false; g.n()];
        seen[u] = true;
        let mut best = None;
        walk(g, u, v, &mut seen, 0, &mut best);
        best
    }

    #[test]
    fn triangle_from_text() {
        let g = load_graph("0 1\n1 2\n2 0", true).unwrap();
        assert_eq!((g.n(), g.d()), (3, 2));
    }

    #[test]
    fn six_cycle_from_text() {
        let text = "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";
        let g = load_graph(text, true).unwrap();
        assert_eq!((g.n(), g.d()), (6, 2));
        assert_eq!(g, gen_cycle(6).unwrap());
    }

    #[test]
    fn petersen_degree_sequence() {
        let g = load_graph(&petersen().to_edge_list(), true).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.n(), 10);
        let degrees: Vec<_> = (0..10).map(|v| g.neighbors(v).len()).collect();
        assert_eq!(degrees, vec![3; 10]);
    }

    #[test]
    fn load_errors() {
        assert!(matches!(load_graph("0 1\n1 0", false), Err(Error::DuplicateEdge(0, 1))));
        assert!(matches!(load_graph("2 2", false), Err(Error::SelfLoop(2))));
        assert!(matches!(load_graph("0 x", false), Err(Error::Parse { line: 1, .. })));
        // A path is fine unless regularity is demanded.
        assert!(load_graph("0 1\n1 2", false).is_ok());
        assert!(matches!(load_graph("0 1\n1 2", true), Err(Error::NotRegular { .. })));
    }

    #[test]
    fn cycles() {
        assert!(gen_cycle(2).is_err());
        let c3 = gen_cycle(3).unwrap();
        assert_eq!(c3, complete(3));
        let c6 = gen_cycle(6).unwrap();
        assert_eq!(brute_distance(&c6, 0, 3), Some(3));
        assert_eq!(bfs_distance(&c6, 0, 3).unwrap(), Some(3));
        let c4 = gen_cycle(4).unwrap();
        let diameter = (0..4)
            .flat_map(|u| (0..4).map(move |v| (u, v)))
            .map(|(u, v)| brute_distance(&c4, u, v).unwrap())
            .max();
        assert_eq!(diameter, Some(2));
        assert_eq!(bfs_distance(&c4, 0, 2).unwrap(), Some(2));
    }

    #[test]
    fn distance_edge_cases() {
        let g = gen_cycle(5).unwrap();
        assert_eq!(bfs_distance(&g, 3, 3).unwrap(), Some(0));
        assert!(matches!(bfs_distance(&g, 0, 9), Err(Error::InvalidVertex(9))));
        let two_triangles = load_graph("0 1\n1 2\n2 0\n3 4\n4 5\n5 3", true).unwrap();
        assert_eq!(bfs_distance(&two_triangles, 0, 4).unwrap(), None);
    }

    #[test]
    fn random_regular_examples() {
        assert_eq!(gen_random_regular(4, 3, 11, DEFAULT_RETRY_CAP).unwrap(), complete(4));
        let g = gen_random_regular(10, 3, 1, DEFAULT_RETRY_CAP).unwrap();
        assert!(g.is_regular());
        assert_eq!(g.d(), 3);
        assert!(matches!(
            gen_random_regular(5, 3, 0, DEFAULT_RETRY_CAP),
            Err(Error::Infeasible(_))
        ));
        assert!(gen_random_regular(4, 4, 0, DEFAULT_RETRY_CAP).is_err());
        assert_eq!(
            gen_random_regular(20, 3, 5, DEFAULT_RETRY_CAP),
            gen_random_regular(20, 3, 5, DEFAULT_RETRY_CAP)
        );
    }

    #[test]
    fn named() {
        assert_eq!(named_graph("c6").unwrap(), gen_cycle(6).unwrap());
        assert_eq!(named_graph("k4").unwrap(), complete(4));
        assert_eq!(named_graph("petersen").unwrap().n(), 10);
        assert!(named_graph("wheel").is_err());
    }

    #[test]
    fn thousand_random_regular_draws_are_simple_and_regular() {
        for seed in 0..1000u64 {
            let d = 2 + (seed % 3) as usize;
            let n = if d % 2 == 1 { 8 + 2 * (seed % 10) as usize } else { 5 + (seed % 15) as usize };
            let g = gen_random_regular(n, d, seed, DEFAULT_RETRY_CAP).unwrap();
            assert!(g.is_regular());
            assert_eq!(g.d(), d);
            for v in 0..n {
                assert!(!g.neighbors(v).contains(&v));
                for &w in g.neighbors(v) {
                    assert!(g.has_edge(w, v));
                }
                let mut list = g.neighbors(v).to_vec();
                list.dedup();
                assert_eq!(list.len(), d);
            }
        }
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(seed in 0u64..400, a in 0usize..16, b in 0usize..16, c in 0usize..16) {
            let g = gen_random_regular(16, 3, seed, DEFAULT_RETRY_CAP).unwrap();
            let dab = bfs_distance(&g, a, b).unwrap();
            prop_assert_eq!(dab, bfs_distance(&g, b, a).unwrap());
            if let (Some(ab), Some(bc), Some(ac)) =
                (dab, bfs_distance(&g, b, c).unwrap(), bfs_distance(&g, a, c).unwrap())
            {
                prop_assert!(ac <= ab + bc);
            }
        }
    }
}
