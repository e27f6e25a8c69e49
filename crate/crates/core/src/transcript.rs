//! Plain-text game transcripts and their replay.
//!
//! ```text
//! sparse-maker transcript version=1
//! config graph=c6 leveling=greedy level_seed=0 s=guarantee breaker=random seed=7
//! graph n=6 edges=0-1 0-5 1-2 2-3 3-4 4-5
//! levels 1 2 3 1 2 3
//! board s=128 r=3 round_cap=1179648 blocks=128 ... exact_edges=... bound=...
//! B 1 v1#40 v2#7
//! M 1 v0#0 v1#0 case=1p sub=0>v1#0
//! ...
//! outcome winner=maker termination=completed rounds=36864 ...
//! ready v0=0 v1=0 v2=96 ...
//! audit v=2 round=96 untouched=... touched=... max_charge=... invariant=ok attribution=ok
//! scheme verified
//! embedding valid
//! 0 → v0#0
//! 1 → v1#0
//! ...
//! end
//! ```
//!
//! Replaying feeds the `B` lines to a scripted Breaker and regenerates the
//! whole text, which must match byte for byte.

use std::fmt::Write as _;

use crate::board::{edge_count, StarEdge};
use crate::breaker::ScriptedBreaker;
use crate::error::{Error, Result};
use crate::graph::TargetGraph;
use crate::instance::Instance;
use crate::leveling::Leveling;
use crate::maker::{BreakerMove, Case, Event, Game, Outcome};

pub const TRANSCRIPT_VERSION: u32 = 1;
const MAGIC: &str = "sparse-maker transcript";

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "violated"
    }
}

/// Header lines: everything needed to rebuild the instance.
pub fn render_header(config_echo: &str, inst: &Instance, round_cap: u64) -> String {
    let g = inst.graph();
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    let levels: Vec<String> = inst.leveling().levels().iter().map(u32::to_string).collect();
    let blocks: Vec<String> = inst.board().block_sizes().iter().map(u64::to_string).collect();
    let count = edge_count(inst.board(), g);
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} version={TRANSCRIPT_VERSION}");
    let _ = writeln!(out, "config {config_echo}");
    let _ = writeln!(out, "graph n={} edges={}", g.n(), edges.join(" "));
    let _ = writeln!(out, "levels {}", levels.join(" "));
    let _ = writeln!(
        out,
        "board s={} r={} round_cap={round_cap} blocks={} exact_edges={} bound={}",
        inst.s(),
        inst.leveling().r(),
        blocks.join(","),
        count.exact,
        count.paper_bound
    );
    out
}

pub fn render_event(e: &Event) -> String {
    match e {
        Event::Breaker { round, mv: BreakerMove::Pass } => format!("B {round} pass"),
        Event::Breaker { round, mv: BreakerMove::Claim(edge) } => format!("B {round} {edge}"),
        Event::Maker { round, edge, case, u, x } => format!("M {round} {edge} case={case} sub={u}>{x}"),
    }
}

/// Footer lines: outcome, readiness audits, scheme check and embedding.
pub fn render_footer(outcome: &Outcome) -> String {
    let o = outcome;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "outcome winner={} termination={} rounds={} subgames={} lost={} maker_edges={} breaker_edges={} guarantee={}",
        if o.maker_won() { "maker" } else { "breaker" },
        o.termination,
        o.rounds,
        o.subgames,
        o.lost_subgames,
        o.maker_edges,
        o.breaker_edges,
        o.guarantee
    );
    let ready: Vec<String> = o
        .ready_round
        .iter()
        .enumerate()
        .map(|(v, r)| match r {
            Some(r) => format!("v{v}={r}"),
            None => format!("v{v}=-"),
        })
        .collect();
    let _ = writeln!(out, "ready {}", ready.join(" "));
    for a in &o.audits {
        let _ = writeln!(
            out,
            "audit v={} round={} untouched={} touched={} max_charge={} invariant={} attribution={}",
            a.vertex,
            a.round,
            a.untouched,
            a.touched,
            a.max_charge,
            flag(a.invariant_ok),
            flag(a.attribution_ok)
        );
    }
    let scheme = match o.scheme_verified {
        Some(true) => "verified",
        Some(false) => "failed",
        None => "skipped",
    };
    let _ = writeln!(out, "scheme {scheme}");
    match (&o.embedding, o.embedding_verified) {
        (Some(image), Some(ok)) => {
            let _ = writeln!(out, "embedding {}", if ok { "valid" } else { "invalid" });
            for (g, x) in image.iter().enumerate() {
                let _ = writeln!(out, "{g} → {x}");
            }
        }
        _ => {
            let _ = writeln!(out, "embedding none");
        }
    }
    out.push_str("end\n");
    out
}

pub fn render(config_echo: &str, inst: &Instance, round_cap: u64, events: &[Event], outcome: &Outcome) -> String {
    let mut out = render_header(config_echo, inst, round_cap);
    for e in events {
        out.push_str(&render_event(e));
        out.push('\n');
    }
    out.push_str(&render_footer(outcome));
    out
}

/// What a transcript header fixes.
#[derive(Clone, Debug)]
pub struct Header {
    pub config: String,
    pub instance: Instance,
    pub round_cap: u64,
}

fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.split_whitespace().find_map(|tok| tok.strip_prefix(key)?.strip_prefix('='))
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Transcript(format!("line {line}: {}", msg.into()))
}

pub fn parse_header(text: &str) -> Result<Header> {
    let mut lines = text.lines();
    let mut next = |k: usize, prefix: &str| -> Result<String> {
        let line = lines.next().ok_or_else(|| bad(k, "transcript ends early"))?;
        line.strip_prefix(prefix)
            .map(str::to_string)
            .ok_or_else(|| bad(k, format!("expected {prefix:?}")))
    };
    let magic = next(1, MAGIC)?;
    let version = field(&magic, "version").ok_or_else(|| bad(1, "missing version"))?;
    if version != TRANSCRIPT_VERSION.to_string() {
        return Err(bad(1, format!("unsupported version {version}")));
    }
    let config = next(2, "config ")?;
    let graph_line = next(3, "graph ")?;
    let n: usize = field(&graph_line, "n")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(3, "missing n"))?;
    let edge_text = graph_line.split_once("edges=").map_or("", |(_, e)| e);
    let mut edges = Vec::new();
    for tok in edge_text.split_whitespace() {
        let (a, b) = tok.split_once('-').ok_or_else(|| bad(3, format!("bad edge {tok:?}")))?;
        let parse = |x: &str| x.parse::<usize>().map_err(|_| bad(3, format!("bad edge {tok:?}")));
        edges.push((parse(a)?, parse(b)?));
    }
    let graph = TargetGraph::from_edges(n, &edges)?;
    let levels_line = next(4, "levels")?;
    let levels = levels_line
        .split_whitespace()
        .map(|x| x.parse::<u32>().map_err(|_| bad(4, format!("bad level {x:?}"))))
        .collect::<Result<Vec<u32>>>()?;
    let board_line = next(5, "board ")?;
    let num = |key: &str| -> Result<u64> {
        field(&board_line, key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(5, format!("missing {key}")))
    };
    let s = num("s")?;
    let r = num("r")? as u32;
    let round_cap = num("round_cap")?;
    let leveling = Leveling::new(levels, r)?;
    let instance = Instance::new(graph, leveling, s)?;
    Ok(Header {
        config,
        instance,
        round_cap,
    })
}

/// Breaker moves recorded in a transcript, in order.
pub fn breaker_moves(text: &str, inst: &Instance) -> Result<Vec<BreakerMove>> {
    let mut moves = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let Some(rest) = line.strip_prefix("B ") else {
            continue;
        };
        let mv = match rest.split_once(' ') {
            Some((_, "pass")) => BreakerMove::Pass,
            Some((_, edge)) => BreakerMove::Claim(inst.board().parse_edge(edge).map_err(|e| bad(k + 1, e.to_string()))?),
            None => return Err(bad(k + 1, "malformed Breaker line")),
        };
        moves.push(mv);
    }
    Ok(moves)
}

/// Parses a Maker line back into its parts.
pub fn parse_maker_line(line: &str, inst: &Instance) -> Result<(u64, StarEdge, Case)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let ["M", round, a, b, case, _sub] = toks[..] else {
        return Err(Error::Transcript(format!("malformed Maker line {line:?}")));
    };
    let round = round.parse().map_err(|_| Error::Transcript(format!("bad round in {line:?}")))?;
    let edge = inst.board().parse_edge(&format!("{a} {b}"))?;
    let case = case
        .strip_prefix("case=")
        .ok_or_else(|| Error::Transcript(format!("missing case in {line:?}")))?
        .parse()?;
    Ok((round, edge, case))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    /// 1-based line number.
    pub line: usize,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Replay {
    pub outcome: Outcome,
    pub regenerated: String,
    pub divergence: Option<Divergence>,
}

impl Replay {
    pub fn matches(&self) -> bool {
        self.divergence.is_none()
    }
}

pub fn first_divergence(expected: &str, actual: &str) -> Option<Divergence> {
    let mut a = expected.lines();
    let mut b = actual.lines();
    let mut line = 0;
    loop {
        line += 1;
        match (a.next(), b.next()) {
            (None, None) => return None,
            (x, y) if x == y => continue,
            (x, y) => {
                return Some(Divergence {
                    line,
                    expected: x.map(str::to_string),
                    actual: y.map(str::to_string),
                })
            }
        }
    }
}

/// Rebuilds the game from the header, replays Breaker's moves, and compares
/// the regenerated transcript against `text`.
pub fn replay(text: &str) -> Result<Replay> {
    let header = parse_header(text)?;
    let inst = &header.instance;
    let moves = breaker_moves(text, inst)?;
    let mut breaker = ScriptedBreaker::new(moves);
    let mut game = Game::new(inst, true)?;
    let outcome = game.play(&mut breaker, header.round_cap)?;
    let events = game.take_events().unwrap_or_default();
    let regenerated = render(&header.config, inst, header.round_cap, &events, &outcome);
    let divergence = first_divergence(text, &regenerated).or_else(|| {
        // same lines but different trailing bytes
        (text != regenerated).then(|| Divergence {
            line: regenerated.lines().count() + 1,
            expected: None,
            actual: None,
        })
    });
    Ok(Replay {
        outcome,
        regenerated,
        divergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::breaker::RandomBreaker;
    use crate::graph::gen_cycle;
    use crate::maker::{default_round_cap, run_game};

    fn sample() -> (Instance, String) {
        let g = gen_cycle(6).unwrap();
        let inst = Instance::new(g, Leveling::from_levels(vec![1, 2, 3, 1, 2, 3]).unwrap(), 8).unwrap();
        let cap = default_round_cap(&inst);
        let rec = run_game(&inst, &mut RandomBreaker::new(5), cap, true).unwrap();
        let text = render("graph=c6 s=8 breaker=random seed=5", &inst, cap, &rec.events.unwrap(), &rec.outcome);
        (inst, text)
    }

    #[test]
    fn header_round_trip() {
        let (inst, text) = sample();
        let h = parse_header(&text).unwrap();
        assert_eq!(h.config, "graph=c6 s=8 breaker=random seed=5");
        assert_eq!(h.instance.board().block_sizes(), inst.board().block_sizes());
        assert_eq!(h.instance.graph().edges(), inst.graph().edges());
        assert!(text.lines().nth(4).unwrap().contains("blocks=8,136,520,8,136,520"));
    }

    #[test]
    fn replay_reproduces() {
        let (_, text) = sample();
        let r = replay(&text).unwrap();
        assert!(r.matches(), "{:?}", r.divergence);
        assert_eq!(r.regenerated, text);
        assert!(r.outcome.maker_won());
    }

    #[test]
    fn tampering_is_located() {
        let (inst, text) = sample();
        let lines: Vec<&str> = text.lines().collect();
        let k = lines.iter().position(|l| l.starts_with("M ")).unwrap();
        let (round, _, _) = parse_maker_line(lines[k], &inst).unwrap();
        assert_eq!(round, 1);
        let forged = lines[k].replace("case=", "case=x");
        let mut tampered: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        tampered[k] = forged.clone();
        let r = replay(&(tampered.join("\n") + "\n")).unwrap();
        let d = r.divergence.unwrap();
        assert_eq!(d.line, k + 1);
        assert_eq!(d.expected.as_deref(), Some(forged.as_str()));

        let footer = text.replace("scheme verified", "scheme failed");
        assert!(!replay(&footer).unwrap().matches());
        assert!(replay(&text.replace("version=1", "version=9")).is_err());
    }
}
