//! The blocking digraph `D` and descendant sets `P(v)`.
//!
//! For `l(u) < l(v)`, `u` blocks `v` when `(u, v)` is an edge of `G`, or when
//! some `w` with `l(w) < l(u)` is adjacent to both. `D` has an arc `v -> u`
//! whenever `u` blocks `v`, so levels strictly decrease along arcs.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::TargetGraph;
use crate::leveling::{validate_leveling, Leveling};

#[derive(Clone, Debug)]
pub struct BlockingDag {
    arcs: Vec<Vec<usize>>,
    preds: Vec<Vec<usize>>,
    descendants: Vec<FixedBitSet>,
    // P(v) sorted by (level, id)
    descendants_by_level: Vec<Vec<usize>>,
}

impl BlockingDag {
    /// Out-neighbors of `v`, ascending id.
    pub fn arcs(&self, v: usize) -> &[usize] {
        &self.arcs[v]
    }

    /// In-neighbors of `v` (vertices `v` blocks), ascending id.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.preds[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arcs[v].len()
    }

    pub fn descendants(&self, v: usize) -> &FixedBitSet {
        &self.descendants[v]
    }

    pub fn descendant_count(&self, v: usize) -> usize {
        self.descendants[v].count_ones(..)
    }

    /// `P(v)` in ascending `(level, id)` order.
    pub fn descendants_by_level(&self, v: usize) -> &[usize] {
        &self.descendants_by_level[v]
    }

    pub fn is_descendant(&self, v: usize, u: usize) -> bool {
        self.descendants[v].contains(u)
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.arcs.len()
    }

    /// Every arc as `(v, u)`, sorted.
    pub fn arc_list(&self) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .enumerate()
            .flat_map(|(v, out)| out.iter().map(move |&u| (v, u)))
            .collect()
    }

    /// `v u` per line.
    pub fn to_text(&self) -> String {
        self.arc_list().into_iter().map(|(v, u)| format!("{v} {u}\n")).collect()
    }
}

pub fn build_blocking_dag(g: &TargetGraph, l: &Leveling) -> Result<BlockingDag> {
    if l.len() != g.n() {
        return Err(Error::InvalidLeveling(format!(
            "{} levels for {} vertices",
            l.len(),
            g.n()
        )));
    }
    if let Some(&(u, v)) = validate_leveling(g, l).first() {
        return Err(Error::InvalidLeveling(format!(
            "vertices {u} and {v} share level {} within distance 2",
            l.level(u)
        )));
    }
    let n = g.n();
    let mut arcs = vec![Vec::new(); n];
    for (a, b) in g.edges() {
        let (low, high) = if l.level(a) < l.level(b) { (a, b) } else { (b, a) };
        arcs[high].push(low);
    }
    for w in 0..n {
        let upper = l.upper_neighbors(g, w);
        for &a in &upper {
            for &b in &upper {
                if l.level(a) < l.level(b) {
                    arcs[b].push(a);
                }
            }
        }
    }
    for out in &mut arcs {
        out.sort_unstable();
        out.dedup();
    }
    let mut preds = vec![Vec::new(); n];
    for (v, out) in arcs.iter().enumerate() {
        for &u in out {
            preds[u].push(v);
        }
    }

    let mut descendants = vec![FixedBitSet::with_capacity(n); n];
    for v in l.level_order() {
        let mut set = FixedBitSet::with_capacity(n);
        for &u in &arcs[v] {
            set.insert(u);
            set.union_with(&descendants[u]);
        }
        descendants[v] = set;
    }
    let descendants_by_level = descendants
        .iter()
        .map(|set| {
            let mut list: Vec<usize> = set.ones().collect();
            list.sort_by_key(|&u| (l.level(u), u));
            list
        })
        .collect();
    Ok(BlockingDag {
        arcs,
        preds,
        descendants,
        descendants_by_level,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagReport {
    pub max_out_degree: usize,
    pub max_descendants: usize,
    pub out_degree_bound: usize,
    /// `(d^2)^r`; `None` when it does not fit in 128 bits.
    pub descendant_bound: Option<u128>,
    pub levels_decrease: bool,
    pub pass: bool,
}

pub fn check_dag_bounds(dag: &BlockingDag, g: &TargetGraph, l: &Leveling) -> DagReport {
    let d = g.d();
    let max_out_degree = (0..g.n()).map(|v| dag.out_degree(v)).max().unwrap_or(0);
    let max_descendants = (0..g.n()).map(|v| dag.descendant_count(v)).max().unwrap_or(0);
    let out_degree_bound = d * d;
    let descendant_bound = ((d * d) as u128).checked_pow(l.r());
    let levels_decrease = dag.arc_list().iter().all(|&(v, u)| l.level(v) > l.level(u));
    let pass = levels_decrease
        && max_out_degree <= out_degree_bound
        && descendant_bound.is_none_or(|b| max_descendants as u128 <= b);
    DagReport {
        max_out_degree,
        max_descendants,
        out_degree_bound,
        descendant_bound,
        levels_decrease,
        pass,
    }
}
