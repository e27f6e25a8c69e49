//! Run configuration: flat `key=value` files, overridable field by field.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::board::paper_s;
use crate::breaker::BreakerKind;
use crate::error::{Error, Result};
use crate::graph::{gen_random_regular, load_graph, named_graph, TargetGraph, DEFAULT_RETRY_CAP};
use crate::instance::Instance;
use crate::leveling::{level_greedy, level_lll, Leveling, DEFAULT_RESAMPLE_CAP};
use crate::maker::{check_s_guarantee, guarantee_s};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSource {
    /// `c{n}`, `k{n}` or `petersen`.
    Named(String),
    /// Edge-list file.
    File(PathBuf),
    Random { n: usize, d: usize, seed: u64 },
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::Named(name) => f.write_str(name),
            GraphSource::File(path) => write!(f, "file:{}", path.display()),
            GraphSource::Random { n, d, seed } => write!(f, "random:{n},{d},{seed}"),
        }
    }
}

impl FromStr for GraphSource {
    type Err = Error;

    /// `petersen`, `c6`, `random:n,d,seed`, `file:path`, or a bare path.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("random:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            let [n, d, seed] = parts[..] else {
                return Err(Error::Config(format!("expected random:n,d,seed, got {s:?}")));
            };
            let num = |x: &str| x.parse::<u64>().map_err(|_| Error::Config(format!("bad number {x:?} in {s:?}")));
            return Ok(GraphSource::Random {
                n: num(n)? as usize,
                d: num(d)? as usize,
                seed: num(seed)?,
            });
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(GraphSource::File(PathBuf::from(path)));
        }
        if named_graph(s).is_ok() {
            return Ok(GraphSource::Named(s.to_string()));
        }
        if s.contains('/') || s.contains('.') {
            return Ok(GraphSource::File(PathBuf::from(s)));
        }
        Err(Error::Config(format!("unknown graph {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelingMode {
    Greedy,
    Lll,
}

impl fmt::Display for LevelingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelingMode::Greedy => "greedy",
            LevelingMode::Lll => "lll",
        })
    }
}

impl FromStr for LevelingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(LevelingMode::Greedy),
            "lll" => Ok(LevelingMode::Lll),
            _ => Err(Error::Config(format!("unknown leveling {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SMode {
    /// `d^5 2^(d+4)`.
    Paper,
    /// Smallest power of two passing the guarantee check.
    Guarantee,
    Custom(u64),
}

impl SMode {
    pub fn resolve(self, d: usize) -> Result<u64> {
        let s = match self {
            SMode::Paper => paper_s(d),
            SMode::Guarantee => guarantee_s(d),
            SMode::Custom(s) => s,
        };
        if s == 0 {
            return Err(Error::Config("s must be positive".into()));
        }
        if self == SMode::Guarantee && !check_s_guarantee(d, s) {
            return Err(Error::Config(format!("s = {s} fails the guarantee check for d = {d}")));
        }
        Ok(s)
    }
}

impl fmt::Display for SMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SMode::Paper => f.write_str("paper"),
            SMode::Guarantee => f.write_str("guarantee"),
            SMode::Custom(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for SMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(SMode::Paper),
            "guarantee" => Ok(SMode::Guarantee),
            _ => s
                .parse()
                .map(SMode::Custom)
                .map_err(|_| Error::Config(format!("s must be paper, guarantee or a number, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub graph: GraphSource,
    pub leveling: LevelingMode,
    pub level_seed: u64,
    pub s: SMode,
    pub breaker: BreakerKind,
    pub seed: u64,
    /// Move list for the scripted policy.
    pub script: Option<PathBuf>,
    pub repetitions: usize,
    pub round_cap: Option<u64>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            graph: GraphSource::Named("c6".into()),
            leveling: LevelingMode::Greedy,
            level_seed: 0,
            s: SMode::Guarantee,
            breaker: BreakerKind::Random,
            seed: 0,
            script: None,
            repetitions: 1,
            round_cap: None,
            output: None,
        }
    }
}

impl RunConfig {
    pub const KEYS: [&'static str; 10] = [
        "graph",
        "leveling",
        "level_seed",
        "s",
        "breaker",
        "seed",
        "script",
        "repetitions",
        "round_cap",
        "output",
    ];

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<u64> { v.parse().map_err(|_| Error::Config(format!("{key}: not a number: {v:?}"))) };
        match key {
            "graph" => self.graph = value.parse()?,
            "leveling" => self.leveling = value.parse()?,
            "level_seed" => self.level_seed = num(value)?,
            "s" => self.s = value.parse()?,
            "breaker" => self.breaker = value.parse()?,
            "seed" => self.seed = num(value)?,
            "script" => self.script = Some(PathBuf::from(value)),
            "repetitions" => self.repetitions = num(value)? as usize,
            "round_cap" => self.round_cap = Some(num(value)?),
            "output" => self.output = Some(PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` file on top of `self`. `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: k + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                line: k + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// One-line `key=value` echo of the fields that affect play.
    pub fn echo(&self) -> String {
        let mut out = format!(
            "graph={} leveling={} level_seed={} s={} breaker={} seed={}",
            self.graph, self.leveling, self.level_seed, self.s, self.breaker, self.seed
        );
        if let Some(cap) = self.round_cap {
            out.push_str(&format!(" round_cap={cap}"));
        }
        out
    }

    pub fn load_graph(&self) -> Result<TargetGraph> {
        match &self.graph {
            GraphSource::Named(name) => named_graph(name),
            GraphSource::File(path) => load_graph(&std::fs::read_to_string(path)?, true),
            GraphSource::Random { n, d, seed } => gen_random_regular(*n, *d, *seed, DEFAULT_RETRY_CAP),
        }
    }

    pub fn level(&self, g: &TargetGraph) -> Result<Leveling> {
        match self.leveling {
            LevelingMode::Greedy => Ok(level_greedy(g)),
            LevelingMode::Lll => level_lll(g, self.level_seed, DEFAULT_RESAMPLE_CAP),
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        let g = self.load_graph()?;
        let l = self.level(&g)?;
        let s = self.s.resolve(g.d())?;
        Instance::new(g, l, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_file_and_override() {
        let mut cfg = RunConfig::from_text(
            "# a run\ngraph = petersen\nleveling=lll\nlevel_seed=4\ns=64\nbreaker=scatter\nseed=9 # trailing\nrepetitions=100\n",
        )
        .unwrap();
        assert_eq!(cfg.graph, GraphSource::Named("petersen".into()));
        assert_eq!(cfg.s, SMode::Custom(64));
        assert_eq!(cfg.breaker, BreakerKind::Scatter);
        assert_eq!(cfg.repetitions, 100);
        cfg.set("seed", "1").unwrap();
        assert_eq!(cfg.seed, 1);
        assert_eq!(
            cfg.echo(),
            "graph=petersen leveling=lll level_seed=4 s=64 breaker=scatter seed=1"
        );
    }

    #[test]
    fn bad_lines_report_position() {
        let err = RunConfig::from_text("graph=c6\nnonsense\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = RunConfig::from_text("colour=blue\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!("z9".parse::<GraphSource>().is_err());
    }

    #[test]
    fn graph_sources() {
        assert_eq!(
            "random:20,3,5".parse::<GraphSource>().unwrap(),
            GraphSource::Random { n: 20, d: 3, seed: 5 }
        );
        assert_eq!("file:g.txt".parse::<GraphSource>().unwrap(), GraphSource::File("g.txt".into()));
        assert_eq!("./g.txt".parse::<GraphSource>().unwrap(), GraphSource::File("./g.txt".into()));
        for src in ["c12", "random:20,3,5", "file:x/y"] {
            assert_eq!(src.parse::<GraphSource>().unwrap().to_string(), src);
        }
    }

    #[test]
    fn s_modes() {
        assert_eq!(SMode::Guarantee.resolve(2).unwrap(), 128);
        assert_eq!(SMode::Paper.resolve(2).unwrap(), 2048);
        assert_eq!(SMode::Custom(64).resolve(3).unwrap(), 64);
        assert!(SMode::Custom(0).resolve(2).is_err());
        let inst = RunConfig::default().instance().unwrap();
        assert_eq!(inst.s(), 128);
    }
}
