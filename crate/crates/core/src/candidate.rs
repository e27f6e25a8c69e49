//! Candidates, candidate schemes, and extraction of a copy of `G` from
//! Maker's graph.
//!
//! For an edge `uv` with `l(u) < l(v)` let `u_1, ..., u_{t-1}` be the upper
//! neighbors of `u` below `v`. A board vertex `x` in `S_v` is a candidate
//! with respect to `uv` when, for every choice of `b_i` in `B_{u_i}`, at least
//! a `1 / (t 2^t)` fraction of `B_u` is joined by Maker to all `b_i` and to `x`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::board::{Position, StarVertex};
use crate::error::{Error, Result};
use crate::graph::TargetGraph;
use crate::instance::Instance;
use crate::leveling::Leveling;

/// `{w in N^+(u) : l(w) < l(v)}`, sorted by `(level, id)`. `t` is its length
/// plus one.
pub fn upper_set(g: &TargetGraph, l: &Leveling, u: usize, v: usize) -> Result<Vec<usize>> {
    if !g.has_edge(u, v) || l.level(u) >= l.level(v) {
        return Err(Error::Precondition(format!(
            "upper set needs an edge {u}-{v} with l({u}) < l({v})"
        )));
    }
    let mut out: Vec<usize> = l
        .upper_neighbors(g, u)
        .into_iter()
        .filter(|&w| l.level(w) < l.level(v))
        .collect();
    out.sort_by_key(|&w| (l.level(w), w));
    Ok(out)
}

/// `count / b_len >= 1 / (t 2^t)` in integers.
pub fn meets_threshold(count: u64, t: usize, b_len: u64) -> bool {
    count as u128 * t as u128 * (1u128 << t) >= b_len as u128
}

/// Smallest count meeting [`meets_threshold`].
pub fn threshold_count(t: usize, b_len: u64) -> u64 {
    let denom = t as u64 * (1u64 << t);
    b_len.div_ceil(denom)
}

/// Bitsets over positions of `B_u` recording Maker's edges toward a fixed
/// board vertex, built lazily from the ledger.
pub struct MakerMasks<'a> {
    inst: &'a Instance,
    pos: &'a Position,
    cache: HashMap<(usize, StarVertex), FixedBitSet>,
}

impl<'a> MakerMasks<'a> {
    pub fn new(inst: &'a Instance, pos: &'a Position) -> Self {
        MakerMasks {
            inst,
            pos,
            cache: HashMap::new(),
        }
    }

    /// Positions `p` with Maker holding `(B_u[p], y)`.
    pub fn mask(&mut self, u: usize, y: StarVertex) -> Result<&FixedBitSet> {
        if !self.cache.contains_key(&(u, y)) {
            let b_u = self.pos.b_or_err(u)?;
            let mut mask = FixedBitSet::with_capacity(b_u.len());
            for (p, &i) in b_u.iter().enumerate() {
                let edge = self.inst.board().edge(StarVertex::new(u, i), y)?;
                if self.pos.maker_holds(&edge) {
                    mask.insert(p);
                }
            }
            self.cache.insert((u, y), mask);
        }
        Ok(&self.cache[&(u, y)])
    }
}

fn candidate_wrt_edge_masked(masks: &mut MakerMasks<'_>, x: StarVertex, u: usize) -> Result<bool> {
    let inst = masks.inst;
    let v = x.block;
    let uppers = upper_set(inst.graph(), inst.leveling(), u, v)?;
    let t = uppers.len() + 1;
    let b_len = masks.pos.b_or_err(u)?.len() as u64;
    let mut choices = Vec::with_capacity(uppers.len());
    for &w in &uppers {
        let b_w = masks.pos.b_or_err(w)?.to_vec();
        let mut per_w = Vec::with_capacity(b_w.len());
        for i in b_w {
            per_w.push(masks.mask(u, StarVertex::new(w, i))?.clone());
        }
        choices.push(per_w);
    }
    let base = masks.mask(u, x)?.clone();
    Ok(all_tuples_meet(&base, &choices, t, b_len))
}

// Depth-first over tuples, intersecting as it goes.
fn all_tuples_meet(acc: &FixedBitSet, choices: &[Vec<FixedBitSet>], t: usize, b_len: u64) -> bool {
    let Some((first, rest)) = choices.split_first() else {
        return meets_threshold(acc.count_ones(..) as u64, t, b_len);
    };
    first.iter().all(|mask| {
        let mut next = acc.clone();
        next.intersect_with(mask);
        all_tuples_meet(&next, rest, t, b_len)
    })
}

/// Whether `x` (in `S_v`) is a candidate with respect to the edge `uv`.
pub fn is_candidate_wrt_edge(inst: &Instance, pos: &Position, x: StarVertex, u: usize) -> Result<bool> {
    candidate_wrt_edge_masked(&mut MakerMasks::new(inst, pos), x, u)
}

/// Candidate with respect to every lower neighbor of its block.
pub fn is_candidate(inst: &Instance, pos: &Position, x: StarVertex) -> Result<bool> {
    let mut masks = MakerMasks::new(inst, pos);
    for u in inst.lower_neighbors(x.block) {
        if !candidate_wrt_edge_masked(&mut masks, x, u)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every member of every `B_v` is a candidate.
pub fn verify_scheme(inst: &Instance, pos: &Position) -> Result<bool> {
    let mut masks = MakerMasks::new(inst, pos);
    for v in inst.leveling().level_order() {
        let b_v = pos.b_or_err(v)?.to_vec();
        for u in inst.lower_neighbors(v) {
            for &i in &b_v {
                if !candidate_wrt_edge_masked(&mut masks, StarVertex::new(v, i), u)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Picks images in decreasing level order: each `u` maps to the lowest member
/// of `B_u` that Maker joins to the images of all of `N^+(u)`. The result is
/// checked edge by edge before it is returned.
pub fn extract_embedding(inst: &Instance, pos: &Position) -> Result<Vec<StarVertex>> {
    let n = inst.graph().n();
    let mut image: Vec<Option<StarVertex>> = vec![None; n];
    let mut order = inst.leveling().level_order();
    order.reverse();
    for u in order {
        let uppers = inst.upper_neighbors(u);
        let b_u = pos.b_or_err(u)?;
        let chosen = b_u.iter().copied().find(|&i| {
            let me = StarVertex::new(u, i);
            uppers.iter().all(|&w| {
                let target = image[w].expect("upper neighbors are placed first");
                inst.board().edge(me, target).is_ok_and(|e| pos.maker_holds(&e))
            })
        });
        match chosen {
            Some(i) => image[u] = Some(StarVertex::new(u, i)),
            None => return Err(Error::NoValidImage(u)),
        }
    }
    let image: Vec<StarVertex> = image.into_iter().map(Option::unwrap).collect();
    if !verify_embedding(inst, pos, &image) {
        return Err(Error::InvariantViolation("extracted embedding failed verification".into()));
    }
    Ok(image)
}

/// Injective and every edge of `G` lands on a Maker edge.
pub fn verify_embedding(inst: &Instance, pos: &Position, image: &[StarVertex]) -> bool {
    if image.len() != inst.graph().n() {
        return false;
    }
    let mut seen: Vec<StarVertex> = image.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != image.len() {
        return false;
    }
    inst.graph().edges().into_iter().all(|(a, b)| {
        inst.board()
            .edge(image[a], image[b])
            .is_ok_and(|e| pos.maker_holds(&e))
    })
}
