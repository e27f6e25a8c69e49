use crate::blocking::{build_blocking_dag, BlockingDag};
use crate::board::{build_board_spec, BoardSpec, StarEdge, StarVertex};
use crate::error::Result;
use crate::graph::TargetGraph;
use crate::leveling::Leveling;

/// Everything derived from `(G, l, s)` before play starts. Immutable.
#[derive(Clone, Debug)]
pub struct Instance {
    graph: TargetGraph,
    leveling: Leveling,
    dag: BlockingDag,
    board: BoardSpec,
}

impl Instance {
    pub fn new(graph: TargetGraph, leveling: Leveling, s: u64) -> Result<Self> {
        let dag = build_blocking_dag(&graph, &leveling)?;
        let board = build_board_spec(&graph, &leveling, &dag, s)?;
        Ok(Instance {
            graph,
            leveling,
            dag,
            board,
        })
    }

    pub fn graph(&self) -> &TargetGraph {
        &self.graph
    }

    pub fn leveling(&self) -> &Leveling {
        &self.leveling
    }

    pub fn dag(&self) -> &BlockingDag {
        &self.dag
    }

    pub fn board(&self) -> &BoardSpec {
        &self.board
    }

    pub fn s(&self) -> u64 {
        self.board.s()
    }

    pub fn level(&self, v: usize) -> u32 {
        self.leveling.level(v)
    }

    pub fn lower_neighbors(&self, v: usize) -> Vec<usize> {
        self.leveling.lower_neighbors(&self.graph, v)
    }

    pub fn upper_neighbors(&self, v: usize) -> Vec<usize> {
        self.leveling.upper_neighbors(&self.graph, v)
    }

    /// Board edge between `S_u[i]` and `S_v[j]`.
    pub fn edge(&self, u: usize, i: u64, v: usize, j: u64) -> Result<StarEdge> {
        self.board.edge(StarVertex::new(u, i), StarVertex::new(v, j))
    }
}
