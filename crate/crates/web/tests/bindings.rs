use serde_json::Value;

use sparse_maker_web::{hypergraph_json, inspect_json, play_json};

fn parse(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn inspect_six_cycle() {
    let v = parse(&inspect_json("c6", "greedy", 0, "4").unwrap());
    assert_eq!(v["blocks"], serde_json::json!([4, 36, 132, 4, 36, 132]));
    assert_eq!(v["board_edges"], "10848");
    assert_eq!(v["dag_ok"], true);
    assert_eq!(v["arcs"].as_array().unwrap().len(), 8);
}

#[test]
fn play_guarantee_mode() {
    let v = parse(&play_json("c6", "greedy", 3, "guarantee", "greedy").unwrap());
    assert_eq!(v["maker_won"], true);
    assert_eq!(v["scheme_verified"], true);
    assert_eq!(v["embedding"].as_array().unwrap().len(), 6);
    assert!(v["audits"].as_array().unwrap().iter().all(|a| a["ok"] == true));
}

#[test]
fn hypergraph_demo() {
    let v = parse(&hypergraph_json(60, 10, 20, 40, "greedy", 1).unwrap());
    assert_eq!(v["all_at_quota"], true);
    assert_eq!(v["maker_counts"].as_array().unwrap().len(), 10);
}

#[test]
fn bad_input_is_an_error() {
    assert!(inspect_json("q7", "greedy", 0, "4").is_err());
    assert!(play_json("c6", "greedy", 0, "4", "scripted").is_err());
    assert!(play_json("petersen", "greedy", 0, "paper", "random").is_err());
    assert!(hypergraph_json(5, 2, 6, 7, "random", 0).is_err());
}
