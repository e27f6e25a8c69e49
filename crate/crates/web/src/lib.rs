//! WebAssembly bindings for the browser demo. Every export takes plain
//! arguments and returns a JSON string; errors become JS exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sparse_maker::blocking::check_dag_bounds;
use sparse_maker::board::edge_count;
use sparse_maker::breaker::{make_breaker, BreakerKind};
use sparse_maker::config::{LevelingMode, SMode};
use sparse_maker::discrepancy::{play_hypergraph_game, random_hypergraph, GreedyHyperBreaker, HyperBreaker, RandomHyperBreaker};
use sparse_maker::graph::{named_graph, TargetGraph};
use sparse_maker::instance::Instance;
use sparse_maker::leveling::{level_greedy, level_lll, Leveling, DEFAULT_RESAMPLE_CAP};
use sparse_maker::maker::{default_round_cap, run_game};

// Browser games must finish while the page waits.
const MAX_BOARD_VERTICES: u64 = 2_000_000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn level(g: &TargetGraph, mode: &str, seed: u64) -> Result<Leveling, String> {
    match mode.parse::<LevelingMode>().map_err(err)? {
        LevelingMode::Greedy => Ok(level_greedy(g)),
        LevelingMode::Lll => level_lll(g, seed, DEFAULT_RESAMPLE_CAP).map_err(err),
    }
}

fn build(graph: &str, leveling: &str, seed: u64, s: &str) -> Result<Instance, String> {
    let g = named_graph(graph).map_err(err)?;
    let l = level(&g, leveling, seed)?;
    let s = s.parse::<SMode>().map_err(err)?.resolve(g.d()).map_err(err)?;
    Instance::new(g, l, s).map_err(err)
}

/// Leveling, blocking digraph and block sizes of a named graph.
pub fn inspect_json(graph: &str, leveling: &str, seed: u64, s: &str) -> Result<String, String> {
    let inst = build(graph, leveling, seed, s)?;
    let g = inst.graph();
    let dag = inst.dag();
    let report = check_dag_bounds(dag, g, inst.leveling());
    let count = edge_count(inst.board(), g);
    let out = json!({
        "n": g.n(),
        "d": g.d(),
        "edges": g.edges(),
        "levels": inst.leveling().levels(),
        "r": inst.leveling().r(),
        "arcs": dag.arc_list(),
        "descendants": (0..g.n()).map(|v| dag.descendants_by_level(v).to_vec()).collect::<Vec<_>>(),
        "max_out_degree": report.max_out_degree,
        "dag_ok": report.pass,
        "s": inst.s(),
        "blocks": inst.board().block_sizes(),
        "board_vertices": inst.board().vertex_count(),
        "board_edges": count.exact.to_string(),
        "board_edge_bound": count.paper_bound.to_string(),
    });
    Ok(out.to_string())
}

/// Plays one game and summarizes it.
pub fn play_json(graph: &str, leveling: &str, seed: u64, s: &str, breaker: &str) -> Result<String, String> {
    let inst = build(graph, leveling, seed, s)?;
    if inst.board().vertex_count() > MAX_BOARD_VERTICES {
        return Err(format!("board has {} vertices; pick a smaller s", inst.board().vertex_count()));
    }
    let kind: BreakerKind = breaker.parse().map_err(err)?;
    let mut policy = make_breaker(kind, seed).map_err(err)?;
    let record = run_game(&inst, policy.as_mut(), default_round_cap(&inst), false).map_err(err)?;
    let o = record.outcome;
    let audits: Vec<Value> = o
        .audits
        .iter()
        .map(|a| {
            json!({
                "vertex": a.vertex,
                "round": a.round,
                "untouched": a.untouched,
                "touched": a.touched,
                "ok": a.invariant_ok && a.attribution_ok,
            })
        })
        .collect();
    let out = json!({
        "maker_won": o.maker_won(),
        "termination": o.termination.to_string(),
        "rounds": o.rounds,
        "guarantee": o.guarantee,
        "subgames": o.subgames,
        "maker_edges": o.maker_edges,
        "breaker_edges": o.breaker_edges,
        "ready_round": o.ready_round,
        "audits": audits,
        "scheme_verified": o.scheme_verified,
        "embedding": o.embedding.map(|e| e.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "embedding_verified": o.embedding_verified,
    });
    Ok(out.to_string())
}

/// Plays Maker's potential-based engine on a random hypergraph.
pub fn hypergraph_json(
    vertices: usize,
    hyperedges: usize,
    min_size: usize,
    max_size: usize,
    breaker: &str,
    seed: u64,
) -> Result<String, String> {
    let mut game = random_hypergraph(vertices, hyperedges, min_size, max_size, seed).map_err(err)?;
    let mut policy: Box<dyn HyperBreaker> = match breaker {
        "random" => Box::new(RandomHyperBreaker::new(seed)),
        "greedy" => Box::new(GreedyHyperBreaker),
        other => return Err(format!("unknown hypergraph breaker {other:?}")),
    };
    let sizes: Vec<usize> = (0..game.edge_count()).map(|e| game.edge(e).len()).collect();
    let quota = game.quota();
    let counts = play_hypergraph_game(&mut game, policy.as_mut(), false).map_err(err)?;
    let out = json!({
        "quota": quota,
        "min_size": game.min_size(),
        "sizes": sizes,
        "maker_counts": counts,
        "all_at_quota": counts.iter().all(|&c| c as f64 >= quota),
    });
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn inspect(graph: &str, leveling: &str, seed: u64, s: &str) -> Result<String, JsValue> {
    inspect_json(graph, leveling, seed, s).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn play(graph: &str, leveling: &str, seed: u64, s: &str, breaker: &str) -> Result<String, JsValue> {
    play_json(graph, leveling, seed, s, breaker).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hypergraph(
    vertices: usize,
    hyperedges: usize,
    min_size: usize,
    max_size: usize,
    breaker: &str,
    seed: u64,
) -> Result<String, JsValue> {
    hypergraph_json(vertices, hyperedges, min_size, max_size, breaker, seed).map_err(|e| JsValue::from_str(&e))
}
