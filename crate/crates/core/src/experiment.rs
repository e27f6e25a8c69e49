//! Many seeded games on one instance, with per-run records and aggregates.

use std::fmt;

use crate::breaker::{make_breaker, BreakerKind};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::maker::{run_game, Outcome};

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub index: usize,
    pub seed: u64,
    pub result: std::result::Result<Outcome, Error>,
}

impl fmt::Display for RunRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "run={} seed={}", self.index, self.seed)?;
        match &self.result {
            Ok(o) => write!(
                f,
                " winner={} termination={} rounds={} lost={} invariant_violations={} attribution_violations={} scheme={} embedding={}",
                if o.maker_won() { "maker" } else { "breaker" },
                o.termination,
                o.rounds,
                o.lost_subgames,
                o.invariant_violations,
                o.attribution_violations,
                o.scheme_verified.map_or("-".into(), |b| b.to_string()),
                o.embedding_verified.map_or("-".into(), |b| b.to_string()),
            ),
            Err(e) => write!(f, " error={e:?}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub breaker: BreakerKind,
    pub round_cap: u64,
    pub records: Vec<RunRecord>,
    pub wins: usize,
    pub errors: usize,
    pub mean_rounds: f64,
    pub max_rounds: u64,
    pub invariant_violations: usize,
    pub attribution_violations: usize,
    /// Subgames that ended with some hyperedge short of its Maker quota.
    pub quota_violations: usize,
}

impl ExperimentReport {
    pub fn runs(&self) -> usize {
        self.records.len()
    }

    pub fn all_won(&self) -> bool {
        self.wins == self.records.len()
    }

    fn aggregate(breaker: BreakerKind, round_cap: u64, records: Vec<RunRecord>) -> Self {
        let outcomes: Vec<&Outcome> = records.iter().filter_map(|r| r.result.as_ref().ok()).collect();
        let total_rounds: u64 = outcomes.iter().map(|o| o.rounds).sum();
        ExperimentReport {
            breaker,
            round_cap,
            wins: outcomes.iter().filter(|o| o.maker_won()).count(),
            errors: records.len() - outcomes.len(),
            mean_rounds: if outcomes.is_empty() { 0.0 } else { total_rounds as f64 / outcomes.len() as f64 },
            max_rounds: outcomes.iter().map(|o| o.rounds).max().unwrap_or(0),
            invariant_violations: outcomes.iter().map(|o| o.invariant_violations).sum::<usize>()
                + records
                    .iter()
                    .filter(|r| matches!(r.result, Err(Error::InvariantViolation(_))))
                    .count(),
            attribution_violations: outcomes.iter().map(|o| o.attribution_violations).sum(),
            quota_violations: outcomes.iter().map(|o| o.lost_subgames).sum(),
            records,
        }
    }

    /// One summary line.
    pub fn summary(&self) -> String {
        format!(
            "experiment version=1 breaker={} runs={} wins={} errors={} mean_rounds={:.1} max_rounds={} round_cap={} invariant_violations={} attribution_violations={} quota_violations={}",
            self.breaker,
            self.runs(),
            self.wins,
            self.errors,
            self.mean_rounds,
            self.max_rounds,
            self.round_cap,
            self.invariant_violations,
            self.attribution_violations,
            self.quota_violations
        )
    }
}

fn one_run(inst: &Instance, kind: BreakerKind, index: usize, seed: u64, round_cap: u64) -> RunRecord {
    let result = make_breaker(kind, seed).and_then(|mut b| run_game(inst, b.as_mut(), round_cap, false).map(|r| r.outcome));
    RunRecord { index, seed, result }
}

/// Plays `repetitions` games with Breaker seeds `seed_base + i`. Errors are
/// recorded per run, not propagated.
pub fn run_experiment(
    inst: &Instance,
    kind: BreakerKind,
    seed_base: u64,
    repetitions: usize,
    round_cap: u64,
) -> Result<ExperimentReport> {
    if !BreakerKind::AUTOMATIC.contains(&kind) {
        return Err(Error::Config(format!("experiments need a seeded breaker, not {kind}")));
    }
    let seed = |i: usize| seed_base.wrapping_add(i as u64);
    #[cfg(feature = "parallel")]
    let records: Vec<RunRecord> = {
        use rayon::prelude::*;
        (0..repetitions)
            .into_par_iter()
            .map(|i| one_run(inst, kind, i, seed(i), round_cap))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let records: Vec<RunRecord> = (0..repetitions).map(|i| one_run(inst, kind, i, seed(i), round_cap)).collect();
    Ok(ExperimentReport::aggregate(kind, round_cap, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_cycle;
    use crate::leveling::Leveling;
    use crate::maker::default_round_cap;

    fn c6(s: u64) -> Instance {
        Instance::new(gen_cycle(6).unwrap(), Leveling::from_levels(vec![1, 2, 3, 1, 2, 3]).unwrap(), s).unwrap()
    }

    #[test]
    fn empty_experiment() {
        let inst = c6(4);
        let r = run_experiment(&inst, BreakerKind::Random, 0, 0, 10).unwrap();
        assert_eq!(r.runs(), 0);
        assert!(r.all_won());
        assert!(r.summary().contains("runs=0 wins=0 errors=0 mean_rounds=0.0"));
    }

    #[test]
    fn aggregates_add_up() {
        let inst = c6(16);
        let cap = default_round_cap(&inst);
        let r = run_experiment(&inst, BreakerKind::Greedy, 100, 6, cap).unwrap();
        assert_eq!(r.runs(), 6);
        let wins = r.records.iter().filter(|x| x.result.as_ref().is_ok_and(|o| o.maker_won())).count();
        assert_eq!(r.wins, wins);
        assert_eq!(r.records[3].seed, 103);
        assert!(r.records[3].to_string().starts_with("run=3 seed=103 winner="));
        // tiny cap: nobody finishes
        let r = run_experiment(&inst, BreakerKind::Random, 0, 3, 5).unwrap();
        assert_eq!(r.wins, 0);
        assert!(r.records.iter().all(|x| x.to_string().contains("termination=round_cap")));
    }

    #[test]
    fn scripted_is_rejected() {
        assert!(run_experiment(&c6(4), BreakerKind::Scripted, 0, 1, 10).is_err());
    }
}
