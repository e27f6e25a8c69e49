//! Maker's global strategy.
//!
//! Once every out-neighbor of `v` in the blocking digraph is completed, `v`
//! becomes ready and Maker fixes `B_v` as the `s` lowest untouched vertices of
//! `S_v`. For every lower neighbor `u` and every `x` in `B_v` a subgame on the
//! `s` board edges `B_u x {x}` opens; winning all of them completes `v`.
//!
//! Breaker always claims an edge `(a, y)` with `a` in `S_u`, `y` in `S_v`,
//! `l(u) < l(v)`. Maker answers by the level status of `v`:
//!
//! * case 1, `v` ready but not completed: inside the subgame containing the
//!   edge if there is a live one, otherwise in the first live subgame of `v`;
//! * case 2, `v` not ready: in a ready, not completed descendant of `v`;
//! * case 3, `v` completed: in the lowest-id vertex that is not completed,
//!   descending to a ready descendant when that vertex is not ready.
//!
//! Only case-2 answers touch blocks that are not ready yet, and each is
//! charged to a descendant whose subgames can absorb at most `d s^2` Maker
//! moves, which keeps at least `s` untouched vertices in every `S_v` at the
//! moment it becomes ready.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::board::{Player, Position, StarEdge, StarVertex};
use crate::candidate::{extract_embedding, meets_threshold, threshold_count, upper_set, verify_embedding, verify_scheme};
use crate::discrepancy::HypergraphGame;
use crate::error::{Error, Result};
use crate::instance::Instance;

pub type SubgameId = usize;

/// Whether `s` satisfies, for every `t` in `2..=d`,
/// `a - sqrt(a ln(2 s^(t-1))) >= s / (2^t t)` with `a = s / (2^t (t-1))`.
pub fn check_s_guarantee(d: usize, s: u64) -> bool {
    const MARGIN: f64 = 1e-9;
    let s = s as f64;
    (2..=d).all(|t| {
        let pow = (1u64 << t) as f64;
        let a = s / (pow * (t - 1) as f64);
        let log_term = std::f64::consts::LN_2 + (t - 1) as f64 * s.ln();
        let lhs = a - (a * log_term).sqrt();
        lhs >= s / (pow * t as f64) - MARGIN
    })
}

/// Smallest power of two `s >= 2` passing [`check_s_guarantee`].
pub fn guarantee_s(d: usize) -> u64 {
    let mut s = 2u64;
    while !check_s_guarantee(d, s) {
        s *= 2;
    }
    s
}

/// `4 * sum_v d s^2 (|P(v)| + 1)`.
pub fn default_round_cap(inst: &Instance) -> u64 {
    let s = inst.s();
    let d = inst.graph().d() as u64;
    let total: u64 = (0..inst.graph().n())
        .map(|v| d * s * s * (inst.dag().descendant_count(v) as u64 + 1))
        .sum();
    (4 * total).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgameStatus {
    Live,
    Won,
    Lost,
}

/// The `t = 1` subgame: Maker answers with the lowest unclaimed edge.
#[derive(Clone, Debug)]
pub struct PairingBoard {
    owner: Vec<Option<Player>>,
    maker: u32,
    unclaimed: usize,
}

impl PairingBoard {
    fn new(size: usize) -> Self {
        PairingBoard {
            owner: vec![None; size],
            maker: 0,
            unclaimed: size,
        }
    }

    pub fn maker_count(&self) -> u32 {
        self.maker
    }
}

#[derive(Clone, Debug)]
pub enum SubgameBoard {
    Pairing(PairingBoard),
    Hyper(HypergraphGame),
}

/// The game on `B_u x {x}`. Positions index `B_u`.
#[derive(Clone, Debug)]
pub struct Subgame {
    u: usize,
    x: StarVertex,
    t: usize,
    need: u32,
    board: SubgameBoard,
    status: SubgameStatus,
    unsatisfied: usize,
    maker_mask: FixedBitSet,
    maker_moves: u32,
}

impl Subgame {
    fn open(inst: &Instance, pos: &Position, upstream: impl Fn(usize, StarVertex) -> Option<FixedBitSet>, u: usize, x: StarVertex) -> Result<Self> {
        let uppers = upper_set(inst.graph(), inst.leveling(), u, x.block)?;
        let t = uppers.len() + 1;
        if t > inst.graph().d().max(1) {
            return Err(Error::InvariantViolation(format!("t = {t} exceeds d")));
        }
        let size = pos.b_or_err(u)?.len();
        let need = threshold_count(t, size as u64) as u32;
        let board = if t == 1 {
            SubgameBoard::Pairing(PairingBoard::new(size))
        } else {
            let mut per_upper = Vec::with_capacity(uppers.len());
            for &w in &uppers {
                let mut masks = Vec::new();
                for &i in pos.b_or_err(w)? {
                    let mask = upstream(u, StarVertex::new(w, i)).ok_or_else(|| {
                        Error::InvariantViolation(format!("no finished subgame for ({u}, v{w}#{i})"))
                    })?;
                    masks.push(mask);
                }
                per_upper.push(masks);
            }
            let mut edges = Vec::new();
            let mut full = FixedBitSet::with_capacity(size);
            full.insert_range(..);
            collect_hyperedges(&full, &per_upper, &mut edges);
            // upstream candidates leave each hyperedge at least |B_u| / ((t-1) 2^(t-1))
            let required = threshold_count(t - 1, size as u64) as usize;
            if let Some(small) = edges.iter().find(|e| !meets_threshold(e.len() as u64, t - 1, size as u64)) {
                return Err(Error::HyperedgeTooSmall {
                    size: small.len(),
                    required,
                });
            }
            SubgameBoard::Hyper(HypergraphGame::new(size, edges)?)
        };
        let unsatisfied = match &board {
            SubgameBoard::Pairing(_) => 1,
            SubgameBoard::Hyper(h) => h.edge_count(),
        };
        let status = if unsatisfied == 0 { SubgameStatus::Won } else { SubgameStatus::Live };
        Ok(Subgame {
            u,
            x,
            t,
            need,
            board,
            status,
            unsatisfied,
            maker_mask: FixedBitSet::with_capacity(size),
            maker_moves: 0,
        })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    /// The target vertex `v` whose block holds `x`.
    pub fn v(&self) -> usize {
        self.x.block
    }

    pub fn x(&self) -> StarVertex {
        self.x
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Maker edges needed in every hyperedge.
    pub fn need(&self) -> u32 {
        self.need
    }

    pub fn status(&self) -> SubgameStatus {
        self.status
    }

    pub fn board(&self) -> &SubgameBoard {
        &self.board
    }

    pub fn size(&self) -> usize {
        self.maker_mask.len()
    }

    pub fn maker_moves(&self) -> u32 {
        self.maker_moves
    }

    /// Positions of `B_u` Maker has joined to `x`.
    pub fn maker_mask(&self) -> &FixedBitSet {
        &self.maker_mask
    }

    pub fn is_unclaimed(&self, p: usize) -> bool {
        match &self.board {
            SubgameBoard::Pairing(b) => b.owner[p].is_none(),
            SubgameBoard::Hyper(h) => h.owner(p).is_none(),
        }
    }

    fn unclaimed(&self) -> usize {
        match &self.board {
            SubgameBoard::Pairing(b) => b.unclaimed,
            SubgameBoard::Hyper(h) => h.unclaimed(),
        }
    }

    fn maker_choice(&self) -> Result<usize> {
        match &self.board {
            SubgameBoard::Pairing(b) => b.owner.iter().position(Option::is_none).ok_or(Error::NoUnclaimedVertex),
            SubgameBoard::Hyper(h) => h.maker_move(),
        }
    }

    fn claim(&mut self, p: usize, player: Player) -> Result<()> {
        match &mut self.board {
            SubgameBoard::Pairing(b) => {
                if b.owner.get(p) != Some(&None) {
                    return Err(Error::PolicyBug(p));
                }
                b.owner[p] = Some(player);
                b.unclaimed -= 1;
                if player == Player::Maker {
                    b.maker += 1;
                    if b.maker == self.need {
                        self.unsatisfied = 0;
                    }
                }
            }
            SubgameBoard::Hyper(h) => {
                h.claim(p, player)?;
                if player == Player::Maker {
                    for &e in h.edges_of(p) {
                        if h.maker_count(e as usize) == self.need {
                            self.unsatisfied -= 1;
                        }
                    }
                }
            }
        }
        if player == Player::Maker {
            self.maker_mask.insert(p);
            self.maker_moves += 1;
        }
        if self.unsatisfied == 0 {
            self.status = SubgameStatus::Won;
        } else if self.unclaimed() == 0 {
            self.status = SubgameStatus::Lost;
        }
        Ok(())
    }

    /// Whether `x` is now a candidate with respect to `(u, v)`.
    pub fn win_check(&self) -> bool {
        let size = self.size() as u64;
        match &self.board {
            SubgameBoard::Pairing(b) => meets_threshold(b.maker as u64, 1, size),
            SubgameBoard::Hyper(h) => (0..h.edge_count()).all(|e| meets_threshold(h.maker_count(e) as u64, self.t, size)),
        }
    }

    /// An unclaimed position inside the unsatisfied hyperedge with the least
    /// room for Maker (`maker + unclaimed - need`).
    pub fn weakest_spot(&self) -> Option<usize> {
        match &self.board {
            SubgameBoard::Pairing(b) => b.owner.iter().position(Option::is_none),
            SubgameBoard::Hyper(h) => {
                let e = (0..h.edge_count())
                    .filter(|&e| h.maker_count(e) < self.need && h.unclaimed_in(e) > 0)
                    .min_by_key(|&e| (h.maker_count(e) + h.unclaimed_in(e), e))?;
                h.edge(e)
                    .iter()
                    .map(|&p| p as usize)
                    .filter(|&p| h.owner(p).is_none())
                    .max_by_key(|&p| (h.edges_of(p).len(), std::cmp::Reverse(p)))
            }
        }
    }
}

fn collect_hyperedges(acc: &FixedBitSet, per_upper: &[Vec<FixedBitSet>], out: &mut Vec<Vec<usize>>) {
    let Some((first, rest)) = per_upper.split_first() else {
        out.push(acc.ones().collect());
        return;
    };
    for mask in first {
        let mut next = acc.clone();
        next.intersect_with(mask);
        collect_hyperedges(&next, rest, out);
    }
}

/// Why Maker moved where it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// Answer inside the subgame Breaker just played in.
    Direct,
    /// Case 1 without a live subgame under Breaker's edge.
    ReadyPhantom,
    NotReady,
    Completed,
    Pass,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Direct => "1",
            Case::ReadyPhantom => "1p",
            Case::NotReady => "2",
            Case::Completed => "3",
            Case::Pass => "pass",
        })
    }
}

impl std::str::FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "1" => Case::Direct,
            "1p" => Case::ReadyPhantom,
            "2" => Case::NotReady,
            "3" => Case::Completed,
            "pass" => Case::Pass,
            _ => return Err(Error::Transcript(format!("unknown case tag {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakerMove {
    Claim(StarEdge),
    Pass,
}

/// One move of the game log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Breaker { round: u64, mv: BreakerMove },
    Maker { round: u64, edge: StarEdge, case: Case, u: usize, x: StarVertex },
}

/// A Breaker strategy for the full game.
pub trait BreakerPolicy {
    fn next_move(&mut self, game: &Game<'_>) -> Result<BreakerMove>;
}

/// Snapshot taken when a vertex becomes ready.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadinessAudit {
    pub vertex: usize,
    pub round: u64,
    pub untouched: u64,
    pub touched: u64,
    /// Largest number of touched vertices charged to one descendant.
    pub max_charge: u64,
    pub invariant_ok: bool,
    pub attribution_ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    AllCompleted,
    SubgameLost,
    RoundCap,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::AllCompleted => "completed",
            Termination::SubgameLost => "subgame_lost",
            Termination::RoundCap => "round_cap",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub winner: Player,
    pub termination: Termination,
    pub rounds: u64,
    pub guarantee: bool,
    pub ready_round: Vec<Option<u64>>,
    pub audits: Vec<ReadinessAudit>,
    pub invariant_violations: usize,
    pub attribution_violations: usize,
    pub lost_subgames: usize,
    pub subgames: usize,
    pub maker_edges: usize,
    pub breaker_edges: usize,
    pub scheme_verified: Option<bool>,
    pub embedding: Option<Vec<StarVertex>>,
    pub embedding_verified: Option<bool>,
}

impl Outcome {
    pub fn maker_won(&self) -> bool {
        self.winner == Player::Maker
    }
}

/// A game in progress.
pub struct Game<'a> {
    inst: &'a Instance,
    pos: Position,
    subgames: Vec<Subgame>,
    index: HashMap<(usize, StarVertex), SubgameId>,
    vertex_subgames: Vec<Vec<SubgameId>>,
    won: Vec<usize>,
    cursor: Vec<usize>,
    pending: Vec<usize>,
    ready_round: Vec<Option<u64>>,
    charges: Vec<BTreeMap<usize, u64>>,
    audits: Vec<ReadinessAudit>,
    newly_ready: Vec<usize>,
    completed_count: usize,
    lost: usize,
    round: u64,
    events: Option<Vec<Event>>,
}

impl<'a> Game<'a> {
    /// Initial position: vertices without out-arcs get `B_v = S_v` and are
    /// completed; vertices whose out-neighbors are all such become ready.
    pub fn new(inst: &'a Instance, record: bool) -> Result<Self> {
        let n = inst.graph().n();
        let mut game = Game {
            inst,
            pos: Position::new(inst.board()),
            subgames: Vec::new(),
            index: HashMap::new(),
            vertex_subgames: vec![Vec::new(); n],
            won: vec![0; n],
            cursor: vec![0; n],
            pending: (0..n).map(|v| inst.dag().out_degree(v)).collect(),
            ready_round: vec![None; n],
            charges: vec![BTreeMap::new(); n],
            audits: Vec::new(),
            newly_ready: Vec::new(),
            completed_count: 0,
            lost: 0,
            round: 0,
            events: record.then(Vec::new),
        };
        for v in 0..n {
            if inst.dag().out_degree(v) == 0 {
                game.pos.set_b(inst.board(), v, (0..inst.board().block_size(v)).collect())?;
                game.pos.set_ready(v);
                game.ready_round[v] = Some(0);
                game.complete(v);
            }
        }
        game.settle_ready()?;
        Ok(game)
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn position(&self) -> &Position {
        &self.pos
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn subgames(&self) -> &[Subgame] {
        &self.subgames
    }

    pub fn subgame(&self, id: SubgameId) -> &Subgame {
        &self.subgames[id]
    }

    /// Subgames of `v` in `(u, x)` order.
    pub fn subgames_of(&self, v: usize) -> &[SubgameId] {
        &self.vertex_subgames[v]
    }

    pub fn live_subgames(&self) -> impl Iterator<Item = SubgameId> + '_ {
        self.subgames
            .iter()
            .enumerate()
            .filter(|(_, g)| g.status == SubgameStatus::Live)
            .map(|(id, _)| id)
    }

    pub fn all_completed(&self) -> bool {
        self.completed_count == self.inst.graph().n()
    }

    pub fn lost_subgames(&self) -> usize {
        self.lost
    }

    pub fn audits(&self) -> &[ReadinessAudit] {
        &self.audits
    }

    pub fn events(&self) -> Option<&[Event]> {
        self.events.as_deref()
    }

    pub fn take_events(&mut self) -> Option<Vec<Event>> {
        self.events.take()
    }

    /// Board edge for position `p` of subgame `id`.
    pub fn subgame_edge(&self, id: SubgameId, p: usize) -> Result<StarEdge> {
        let g = &self.subgames[id];
        let i = self.pos.b_or_err(g.u)?[p];
        self.inst.board().edge(StarVertex::new(g.u, i), g.x)
    }

    /// The subgame whose board contains `edge`, if any.
    pub fn subgame_of(&self, edge: &StarEdge) -> Option<(SubgameId, usize)> {
        let id = *self.index.get(&(edge.lower().block, edge.upper()))?;
        let p = self.pos.b_position(edge.lower().block, edge.lower().index)?;
        Some((id, p))
    }

    fn complete(&mut self, v: usize) {
        self.pos.set_completed(v);
        self.completed_count += 1;
        for &p in self.inst.dag().predecessors(v) {
            self.pending[p] -= 1;
            if self.pending[p] == 0 {
                self.pos.set_ready(p);
                self.ready_round[p] = Some(self.round);
                self.newly_ready.push(p);
            }
        }
    }

    fn record_win(&mut self, id: SubgameId) {
        let v = self.subgames[id].v();
        self.won[v] += 1;
        if self.won[v] == self.vertex_subgames[v].len() {
            self.complete(v);
        }
    }

    /// Fixes `B_v` and opens subgames for every vertex that became ready this
    /// round, cascading through subgames won on opening.
    fn settle_ready(&mut self) -> Result<()> {
        while !self.newly_ready.is_empty() {
            let mut batch = std::mem::take(&mut self.newly_ready);
            batch.sort_unstable();
            for v in batch {
                self.select_b(v)?;
                self.open_subgames(v)?;
            }
        }
        Ok(())
    }

    fn select_b(&mut self, v: usize) -> Result<()> {
        let inst = self.inst;
        let s = inst.s();
        let d = inst.graph().d() as u64;
        let untouched = self.pos.untouched_in(inst.board(), v);
        let touched = self.pos.touched_in(v) as u64;
        let charges = &self.charges[v];
        let max_charge = charges.values().copied().max().unwrap_or(0);
        let charged: u64 = charges.values().sum();
        let attribution_ok = charges.keys().all(|&w| inst.dag().is_descendant(v, w))
            && max_charge <= d * s * s
            && charged == touched
            && touched <= d * s * s * inst.dag().descendant_count(v) as u64;
        let invariant_ok = untouched >= s;
        self.audits.push(ReadinessAudit {
            vertex: v,
            round: self.round,
            untouched,
            touched,
            max_charge,
            invariant_ok,
            attribution_ok,
        });
        if !invariant_ok {
            return Err(Error::InvariantViolation(format!(
                "only {untouched} untouched vertices in S_{v} when it became ready, need {s}"
            )));
        }
        let members = self.pos.lowest_untouched(inst.board(), v, s);
        self.pos.set_b(inst.board(), v, members)
    }

    fn open_subgames(&mut self, v: usize) -> Result<()> {
        let inst = self.inst;
        let b_v = self.pos.b_or_err(v)?.to_vec();
        for u in inst.lower_neighbors(v) {
            for &i in &b_v {
                let x = StarVertex::new(v, i);
                let sub = {
                    let lookup = |u: usize, y: StarVertex| {
                        let id = self.index.get(&(u, y))?;
                        let g = &self.subgames[*id];
                        (g.status == SubgameStatus::Won).then(|| g.maker_mask.clone())
                    };
                    Subgame::open(inst, &self.pos, lookup, u, x)?
                };
                let id = self.subgames.len();
                let won = sub.status == SubgameStatus::Won;
                self.subgames.push(sub);
                self.index.insert((u, x), id);
                self.vertex_subgames[v].push(id);
                if won {
                    self.record_win(id);
                }
            }
        }
        Ok(())
    }

    /// First live subgame of `w` in `(u, x)` order.
    fn phantom_target(&mut self, w: usize) -> Option<SubgameId> {
        let list = &self.vertex_subgames[w];
        while self.cursor[w] < list.len() && self.subgames[list[self.cursor[w]]].status != SubgameStatus::Live {
            self.cursor[w] += 1;
        }
        list.get(self.cursor[w]).copied()
    }

    fn ready_descendant(&self, v: usize) -> Option<usize> {
        self.inst
            .dag()
            .descendants_by_level(v)
            .iter()
            .copied()
            .find(|&w| self.pos.is_ready(w) && !self.pos.is_completed(w))
    }

    fn first_open_vertex(&self) -> Option<usize> {
        let w = (0..self.inst.graph().n()).find(|&w| !self.pos.is_completed(w))?;
        if self.pos.is_ready(w) {
            Some(w)
        } else {
            self.ready_descendant(w)
        }
    }

    fn log(&mut self, e: Event) {
        if let Some(events) = &mut self.events {
            events.push(e);
        }
    }

    /// Plays one round: Breaker's move, then Maker's answer.
    pub fn step(&mut self, mv: BreakerMove) -> Result<()> {
        self.round += 1;
        let round = self.round;
        self.log(Event::Breaker { round, mv });
        let mut charge_block = None;
        let (case, target) = match mv {
            BreakerMove::Pass => {
                let w = self.first_open_vertex();
                (Case::Pass, w.and_then(|w| self.phantom_target(w)))
            }
            BreakerMove::Claim(edge) => {
                let newly = self.pos.claim(self.inst.board(), Player::Breaker, edge)?;
                let v = edge.upper().block;
                let mut direct = None;
                if let Some((id, p)) = self.subgame_of(&edge) {
                    if self.subgames[id].status == SubgameStatus::Live {
                        self.subgames[id].claim(p, Player::Breaker)?;
                        match self.subgames[id].status {
                            SubgameStatus::Live => direct = Some(id),
                            SubgameStatus::Lost => self.lost += 1,
                            SubgameStatus::Won => unreachable!("breaker claims never win a subgame"),
                        }
                    }
                }
                if self.pos.is_completed(v) {
                    let w = self.first_open_vertex();
                    (Case::Completed, w.and_then(|w| self.phantom_target(w)))
                } else if self.pos.is_ready(v) {
                    match direct {
                        Some(id) => (Case::Direct, Some(id)),
                        None => (Case::ReadyPhantom, self.phantom_target(v)),
                    }
                } else {
                    if newly {
                        charge_block = Some(v);
                    }
                    let w = self.ready_descendant(v).ok_or_else(|| {
                        Error::InvariantViolation(format!("vertex {v} is not ready but has no ready descendant"))
                    })?;
                    (Case::NotReady, self.phantom_target(w))
                }
            }
        };
        let Some(id) = target else {
            if self.lost > 0 {
                return Ok(());
            }
            return Err(Error::InvariantViolation("Maker has no live subgame to play in".into()));
        };
        let p = self.subgames[id].maker_choice()?;
        let edge = self.subgame_edge(id, p)?;
        if self.pos.is_claimed(&edge) {
            return Err(Error::InvariantViolation(format!("subgame edge {edge} claimed outside its subgame")));
        }
        self.pos.claim(self.inst.board(), Player::Maker, edge)?;
        self.subgames[id].claim(p, Player::Maker)?;
        let (u, x) = (self.subgames[id].u, self.subgames[id].x);
        self.log(Event::Maker { round, edge, case, u, x });
        if let Some(v) = charge_block {
            *self.charges[v].entry(x.block).or_insert(0) += 1;
        }
        match self.subgames[id].status {
            SubgameStatus::Won => self.record_win(id),
            SubgameStatus::Lost => self.lost += 1,
            SubgameStatus::Live => {}
        }
        self.settle_ready()
    }

    fn finish(&self, termination: Termination) -> Result<Outcome> {
        let inst = self.inst;
        let winner = if termination == Termination::AllCompleted { Player::Maker } else { Player::Breaker };
        let (mut scheme_verified, mut embedding, mut embedding_verified) = (None, None, None);
        if winner == Player::Maker {
            let ok = verify_scheme(inst, &self.pos)?;
            scheme_verified = Some(ok);
            if ok {
                let image = extract_embedding(inst, &self.pos)?;
                embedding_verified = Some(verify_embedding(inst, &self.pos, &image));
                embedding = Some(image);
            }
        }
        Ok(Outcome {
            winner,
            termination,
            rounds: self.round,
            guarantee: check_s_guarantee(inst.graph().d(), inst.s()),
            ready_round: self.ready_round.clone(),
            audits: self.audits.clone(),
            invariant_violations: self.audits.iter().filter(|a| !a.invariant_ok).count(),
            attribution_violations: self.audits.iter().filter(|a| !a.attribution_ok).count(),
            lost_subgames: self.lost,
            subgames: self.subgames.len(),
            maker_edges: self.pos.maker_count(),
            breaker_edges: self.pos.breaker_count(),
            scheme_verified,
            embedding,
            embedding_verified,
        })
    }

    /// Plays until every vertex is completed, a subgame is lost, or
    /// `round_cap` rounds have been played.
    pub fn play(&mut self, breaker: &mut dyn BreakerPolicy, round_cap: u64) -> Result<Outcome> {
        let termination = loop {
            if self.all_completed() {
                break Termination::AllCompleted;
            }
            if self.lost > 0 {
                break Termination::SubgameLost;
            }
            if self.round >= round_cap {
                break Termination::RoundCap;
            }
            let mv = breaker.next_move(self)?;
            self.step(mv)?;
        };
        self.finish(termination)
    }
}

/// A finished game: its outcome and, when recorded, every move.
#[derive(Clone, Debug)]
pub struct GameRecord {
    pub outcome: Outcome,
    pub events: Option<Vec<Event>>,
}

pub fn run_game(inst: &Instance, breaker: &mut dyn BreakerPolicy, round_cap: u64, record: bool) -> Result<GameRecord> {
    let mut game = Game::new(inst, record)?;
    let outcome = game.play(breaker, round_cap)?;
    Ok(GameRecord {
        outcome,
        events: game.take_events(),
    })
}
