//! Breaker policies for the full game.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::board::{StarEdge, StarVertex};
use crate::error::{Error, Result};
use crate::maker::{BreakerMove, BreakerPolicy, Game, SubgameId, SubgameStatus};

const RANDOM_RETRIES: usize = 100;

/// Uniform `G`-edge, uniform endpoints inside the two blocks.
pub struct RandomBreaker {
    rng: ChaCha8Rng,
}

impl RandomBreaker {
    pub fn new(seed: u64) -> Self {
        RandomBreaker {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

fn random_edge(rng: &mut ChaCha8Rng, game: &Game<'_>) -> Result<BreakerMove> {
    let inst = game.instance();
    let edges = inst.graph().edges();
    if edges.is_empty() {
        return Ok(BreakerMove::Pass);
    }
    for _ in 0..RANDOM_RETRIES {
        let (a, b) = edges[rng.gen_range(0..edges.len())];
        let i = rng.gen_range(0..inst.board().block_size(a));
        let j = rng.gen_range(0..inst.board().block_size(b));
        let e = inst.edge(a, i, b, j)?;
        if !game.position().is_claimed(&e) {
            return Ok(BreakerMove::Claim(e));
        }
    }
    Ok(BreakerMove::Pass)
}

impl BreakerPolicy for RandomBreaker {
    fn next_move(&mut self, game: &Game<'_>) -> Result<BreakerMove> {
        random_edge(&mut self.rng, game)
    }
}

/// Picks a live subgame at random and attacks it until it is decided,
/// always inside the hyperedge closest to failing.
pub struct GreedySubgameBreaker {
    rng: ChaCha8Rng,
    target: Option<SubgameId>,
}

impl GreedySubgameBreaker {
    pub fn new(seed: u64) -> Self {
        GreedySubgameBreaker {
            rng: ChaCha8Rng::seed_from_u64(seed),
            target: None,
        }
    }
}

impl BreakerPolicy for GreedySubgameBreaker {
    fn next_move(&mut self, game: &Game<'_>) -> Result<BreakerMove> {
        let alive = |id: SubgameId| game.subgame(id).status() == SubgameStatus::Live;
        if !self.target.is_some_and(alive) {
            let live: Vec<SubgameId> = game.live_subgames().collect();
            self.target = live.choose(&mut self.rng).copied();
        }
        let Some(id) = self.target else {
            return random_edge(&mut self.rng, game);
        };
        match game.subgame(id).weakest_spot() {
            Some(p) => Ok(BreakerMove::Claim(game.subgame_edge(id, p)?)),
            None => random_edge(&mut self.rng, game),
        }
    }
}

/// Spreads claims over the blocks of vertices that are not ready yet,
/// preferring the vertex with the largest descendant set, to burn through
/// untouched vertices before `B_v` is chosen.
pub struct ScatterBreaker {
    rng: ChaCha8Rng,
    next_index: HashMap<usize, u64>,
}

impl ScatterBreaker {
    pub fn new(seed: u64) -> Self {
        ScatterBreaker {
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_index: HashMap::new(),
        }
    }
}

impl BreakerPolicy for ScatterBreaker {
    fn next_move(&mut self, game: &Game<'_>) -> Result<BreakerMove> {
        let inst = game.instance();
        let pos = game.position();
        let n = inst.graph().n();
        let target = (0..n)
            .filter(|&v| !pos.is_ready(v) && !inst.lower_neighbors(v).is_empty())
            .max_by_key(|&v| (inst.dag().descendant_count(v), std::cmp::Reverse(v)));
        let Some(v) = target else {
            return random_edge(&mut self.rng, game);
        };
        let size = inst.board().block_size(v);
        let cursor = self.next_index.entry(v).or_insert(0);
        while *cursor < size && pos.is_touched(StarVertex::new(v, *cursor)) {
            *cursor += 1;
        }
        if *cursor == size {
            return random_edge(&mut self.rng, game);
        }
        let j = *cursor;
        let lower = inst.lower_neighbors(v);
        let u = lower[self.rng.gen_range(0..lower.len())];
        let i = self.rng.gen_range(0..inst.board().block_size(u));
        Ok(BreakerMove::Claim(inst.edge(u, i, v, j)?))
    }
}

/// Replays a fixed list of moves, then passes.
pub struct ScriptedBreaker {
    moves: VecDeque<BreakerMove>,
}

impl ScriptedBreaker {
    pub fn new(moves: impl IntoIterator<Item = BreakerMove>) -> Self {
        ScriptedBreaker {
            moves: moves.into_iter().collect(),
        }
    }

    /// One move per line: `u#i v#j` or `pass`. Blank lines and `#` comments
    /// are skipped.
    pub fn parse(text: &str, game: &Game<'_>) -> Result<Self> {
        let mut moves = VecDeque::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mv = parse_move(line, game).map_err(|e| Error::Parse {
                line: k + 1,
                msg: e.to_string(),
            })?;
            moves.push_back(mv);
        }
        Ok(ScriptedBreaker { moves })
    }

    pub fn remaining(&self) -> usize {
        self.moves.len()
    }
}

fn parse_move(line: &str, game: &Game<'_>) -> Result<BreakerMove> {
    if line == "pass" {
        Ok(BreakerMove::Pass)
    } else {
        Ok(BreakerMove::Claim(game.instance().board().parse_edge(line)?))
    }
}

impl BreakerPolicy for ScriptedBreaker {
    fn next_move(&mut self, game: &Game<'_>) -> Result<BreakerMove> {
        let mv = self.moves.pop_front().unwrap_or(BreakerMove::Pass);
        if let BreakerMove::Claim(e) = mv {
            if game.position().is_claimed(&e) {
                return Err(Error::AlreadyClaimed(e));
            }
        }
        Ok(mv)
    }
}

/// Reads moves from a terminal. Commands: `u#i v#j`, `pass`, `show v`,
/// `quit`.
pub struct InteractiveBreaker<R, W> {
    input: R,
    output: W,
}

impl<R: BufRead, W: Write> InteractiveBreaker<R, W> {
    pub fn new(input: R, output: W) -> Self {
        InteractiveBreaker { input, output }
    }

    fn show(&mut self, game: &Game<'_>, v: usize) -> Result<()> {
        let inst = game.instance();
        if v >= inst.graph().n() {
            writeln!(self.output, "no vertex {v}")?;
            return Ok(());
        }
        let pos = game.position();
        let status = if pos.is_completed(v) {
            "completed"
        } else if pos.is_ready(v) {
            "ready"
        } else {
            "waiting"
        };
        writeln!(
            self.output,
            "v{v}: level {} |S| = {} touched {} {status}",
            inst.level(v),
            inst.board().block_size(v),
            pos.touched_in(v)
        )?;
        if let Some(b) = pos.b(v) {
            writeln!(self.output, "  B = {b:?}")?;
        }
        for &id in game.subgames_of(v) {
            let g = game.subgame(id);
            if g.status() == SubgameStatus::Live {
                let open: Vec<usize> = (0..g.size()).filter(|&p| g.is_unclaimed(p)).collect();
                let b_u = pos.b_or_err(g.u())?;
                let open: Vec<String> = open.iter().map(|&p| format!("{}#{}", g.u(), b_u[p])).collect();
                writeln!(self.output, "  live {} -> {}: open {}", g.u(), g.x(), open.join(" "))?;
            }
        }
        Ok(())
    }
}

impl<R: BufRead, W: Write> BreakerPolicy for InteractiveBreaker<R, W> {
    fn next_move(&mut self, game: &Game<'_>) -> Result<BreakerMove> {
        if let Some(crate::maker::Event::Maker { edge, case, .. }) = game.events().and_then(|e| e.last()) {
            writeln!(self.output, "Maker claims {edge} (case {case})")?;
        }
        loop {
            write!(self.output, "round {}> ", game.round() + 1)?;
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(Error::Aborted);
            }
            let line = line.trim();
            if line == "quit" {
                return Err(Error::Aborted);
            }
            if let Some(rest) = line.strip_prefix("show") {
                match rest.trim().trim_start_matches('v').parse::<usize>() {
                    Ok(v) => self.show(game, v)?,
                    Err(_) => writeln!(self.output, "usage: show <vertex>")?,
                }
                continue;
            }
            match parse_move(line, game) {
                Ok(BreakerMove::Claim(e)) if game.position().is_claimed(&e) => {
                    writeln!(self.output, "{e} is already claimed")?;
                }
                Ok(mv) => return Ok(mv),
                Err(e) => writeln!(self.output, "{e}")?,
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakerKind {
    Random,
    Greedy,
    Scatter,
    Scripted,
    Interactive,
}

impl BreakerKind {
    /// Policies that need nothing but a seed.
    pub const AUTOMATIC: [BreakerKind; 3] = [BreakerKind::Random, BreakerKind::Greedy, BreakerKind::Scatter];
}

impl fmt::Display for BreakerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BreakerKind::Random => "random",
            BreakerKind::Greedy => "greedy",
            BreakerKind::Scatter => "scatter",
            BreakerKind::Scripted => "scripted",
            BreakerKind::Interactive => "interactive",
        })
    }
}

impl FromStr for BreakerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random" => BreakerKind::Random,
            "greedy" | "greedy_subgame" => BreakerKind::Greedy,
            "scatter" => BreakerKind::Scatter,
            "scripted" => BreakerKind::Scripted,
            "interactive" => BreakerKind::Interactive,
            _ => return Err(Error::Config(format!("unknown breaker {s:?}"))),
        })
    }
}

/// Builds a seeded policy. Scripted and interactive policies need input and
/// are constructed directly.
pub fn make_breaker(kind: BreakerKind, seed: u64) -> Result<Box<dyn BreakerPolicy>> {
    Ok(match kind {
        BreakerKind::Random => Box::new(RandomBreaker::new(seed)),
        BreakerKind::Greedy => Box::new(GreedySubgameBreaker::new(seed)),
        BreakerKind::Scatter => Box::new(ScatterBreaker::new(seed)),
        BreakerKind::Scripted | BreakerKind::Interactive => {
            return Err(Error::Config(format!("breaker {kind} needs an input source")))
        }
    })
}

/// Moves Breaker made in a recorded game, for replay through [`ScriptedBreaker`].
pub fn breaker_moves(events: &[crate::maker::Event]) -> Vec<BreakerMove> {
    events
        .iter()
        .filter_map(|e| match e {
            crate::maker::Event::Breaker { mv, .. } => Some(*mv),
            _ => None,
        })
        .collect()
}

/// A claim `edge` helper for building scripts by hand.
pub fn claim(edge: StarEdge) -> BreakerMove {
    BreakerMove::Claim(edge)
}
