use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sparse_maker::blocking::check_dag_bounds;
use sparse_maker::board::{edge_count, Player, StarVertex};
use sparse_maker::breaker::{make_breaker, BreakerKind, InteractiveBreaker, ScriptedBreaker};
use sparse_maker::candidate::is_candidate_wrt_edge;
use sparse_maker::config::RunConfig;
use sparse_maker::discrepancy::random_hypergraph;
use sparse_maker::experiment::run_experiment;
use sparse_maker::leveling::{paper_r, validate_leveling};
use sparse_maker::maker::{default_round_cap, BreakerPolicy, Game};
use sparse_maker::oracle::{engine_worst_case, minimax_hypergraph, naive_is_candidate_wrt_edge, random_position};
use sparse_maker::transcript::{render, replay};
use sparse_maker::Error;

/// Maker-Breaker G-games on sparse boards.
#[derive(Parser)]
#[command(name = "sparse-maker", version)]
struct Cli {
    /// Flat key=value run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct InstanceArgs {
    /// Named graph (cN, kN, petersen), random:n,d,seed, or an edge-list file.
    #[arg(long)]
    graph: Option<String>,
    /// greedy or lll.
    #[arg(long)]
    leveling: Option<String>,
    #[arg(long)]
    level_seed: Option<String>,
    /// paper, guarantee, or a number.
    #[arg(long)]
    s: Option<String>,
}

#[derive(Args, Default)]
struct PlayArgs {
    /// random, greedy, scatter, scripted, interactive.
    #[arg(long)]
    breaker: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Move list for the scripted breaker.
    #[arg(long)]
    script: Option<String>,
    #[arg(long)]
    round_cap: Option<String>,
    #[arg(long, short)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a leveling and check it.
    Label(InstanceArgs),
    /// Print the blocking digraph and its bound report.
    Dag(InstanceArgs),
    /// Print block sizes and edge counts of the board.
    Board(InstanceArgs),
    /// Play one game and write its transcript.
    Play {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        play: PlayArgs,
    },
    /// Play many seeded games and report aggregates.
    Experiment {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        play: PlayArgs,
        #[arg(long)]
        repetitions: Option<String>,
    },
    /// Replay a transcript and check that it reproduces exactly.
    Verify { transcript: PathBuf },
    /// Run the differential checks against the brute-force oracles.
    Oracle {
        #[arg(long, default_value_t = 500)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn config(path: Option<&PathBuf>, instance: &InstanceArgs, play: Option<&PlayArgs>, repetitions: Option<&String>) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = path {
        cfg.apply_text(&fs::read_to_string(path)?)?;
    }
    let mut flags = vec![
        ("graph", instance.graph.as_ref()),
        ("leveling", instance.leveling.as_ref()),
        ("level_seed", instance.level_seed.as_ref()),
        ("s", instance.s.as_ref()),
        ("repetitions", repetitions),
    ];
    if let Some(p) = play {
        flags.extend([
            ("breaker", p.breaker.as_ref()),
            ("seed", p.seed.as_ref()),
            ("script", p.script.as_ref()),
            ("round_cap", p.round_cap.as_ref()),
            ("output", p.output.as_ref()),
        ]);
    }
    for (key, value) in flags {
        if let Some(value) = value {
            cfg.set(key, value)?;
        }
    }
    Ok(cfg)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Error> {
    match &cfg.output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn label(cfg: &RunConfig) -> Result<ExitCode, Error> {
    let g = cfg.load_graph()?;
    let l = cfg.level(&g)?;
    let bad = validate_leveling(&g, &l);
    print!("{}", l.to_text());
    println!("# r {} (worst-case bound {})", l.r(), paper_r(g.d()));
    println!("# violations {}", bad.len());
    for (u, v) in &bad {
        println!("# too close: {u} {v}");
    }
    Ok(if bad.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn dag(cfg: &RunConfig) -> Result<ExitCode, Error> {
    let g = cfg.load_graph()?;
    let l = cfg.level(&g)?;
    let dag = sparse_maker::blocking::build_blocking_dag(&g, &l)?;
    let report = check_dag_bounds(&dag, &g, &l);
    print!("{}", dag.to_text());
    for v in 0..g.n() {
        let p: Vec<String> = dag.descendants_by_level(v).iter().map(usize::to_string).collect();
        println!("# P({v}) = {{{}}}", p.join(","));
    }
    println!(
        "# max_out_degree {} (bound {}) max_descendants {} (bound {}) levels_decrease {} pass {}",
        report.max_out_degree,
        report.out_degree_bound,
        report.max_descendants,
        report.descendant_bound.map_or("overflow".into(), |b| b.to_string()),
        report.levels_decrease,
        report.pass
    );
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn board(cfg: &RunConfig) -> Result<ExitCode, Error> {
    let inst = cfg.instance()?;
    let count = edge_count(inst.board(), inst.graph());
    print!("{}", inst.board().summary(&count));
    Ok(ExitCode::SUCCESS)
}

fn play(cfg: &RunConfig) -> Result<ExitCode, Error> {
    let inst = cfg.instance()?;
    let cap = cfg.round_cap.unwrap_or_else(|| default_round_cap(&inst));
    let mut game = Game::new(&inst, true)?;
    let outcome = match cfg.breaker {
        BreakerKind::Interactive => {
            let stdin = io::stdin();
            let mut breaker = InteractiveBreaker::new(stdin.lock(), io::stderr());
            game.play(&mut breaker, cap)?
        }
        BreakerKind::Scripted => {
            let path = cfg.script.as_ref().ok_or_else(|| Error::Config("scripted breaker needs --script".into()))?;
            let mut breaker = ScriptedBreaker::parse(&fs::read_to_string(path)?, &game)?;
            game.play(&mut breaker, cap)?
        }
        kind => {
            let mut breaker: Box<dyn BreakerPolicy> = make_breaker(kind, cfg.seed)?;
            game.play(breaker.as_mut(), cap)?
        }
    };
    let events = game.take_events().unwrap_or_default();
    emit(cfg, &render(&cfg.echo(), &inst, cap, &events, &outcome))?;
    eprintln!(
        "{} after {} rounds ({})",
        if outcome.maker_won() { "Maker wins" } else { "Breaker holds" },
        outcome.rounds,
        outcome.termination
    );
    Ok(if outcome.maker_won() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn experiment(cfg: &RunConfig) -> Result<ExitCode, Error> {
    let inst = cfg.instance()?;
    let cap = cfg.round_cap.unwrap_or_else(|| default_round_cap(&inst));
    let report = run_experiment(&inst, cfg.breaker, cfg.seed, cfg.repetitions, cap)?;
    let mut text = String::new();
    for r in &report.records {
        text.push_str(&r.to_string());
        text.push('\n');
    }
    text.push_str(&report.summary());
    text.push('\n');
    emit(cfg, &text)?;
    if cfg.output.is_some() {
        println!("{}", report.summary());
    }
    Ok(if report.errors > 0 {
        ExitCode::from(1)
    } else if !report.all_won() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn verify(path: &PathBuf) -> Result<ExitCode, Error> {
    let text = fs::read_to_string(path)?;
    let r = replay(&text)?;
    match &r.divergence {
        None => {
            println!("replay identical ({} lines)", text.lines().count());
            println!(
                "scheme {} embedding {}",
                match r.outcome.scheme_verified {
                    Some(true) => "verified",
                    Some(false) => "failed",
                    None => "skipped",
                },
                match r.outcome.embedding_verified {
                    Some(true) => "valid",
                    Some(false) => "invalid",
                    None => "none",
                }
            );
            Ok(ExitCode::SUCCESS)
        }
        Some(d) => {
            println!("first divergence at line {}", d.line);
            println!("  transcript: {}", d.expected.as_deref().unwrap_or("<end of file>"));
            println!("  replay:     {}", d.actual.as_deref().unwrap_or("<end of file>"));
            Ok(ExitCode::from(1))
        }
    }
}

fn oracle(cases: u64, seed: u64) -> Result<ExitCode, Error> {
    let mut disagreements = 0;
    let mut checks = 0;
    for k in 0..cases {
        let (inst, pos) = random_position(seed + k)?;
        for v in 0..inst.graph().n() {
            for u in inst.lower_neighbors(v) {
                for &i in pos.b_or_err(v)? {
                    let x = StarVertex::new(v, i);
                    checks += 1;
                    if is_candidate_wrt_edge(&inst, &pos, x, u)? != naive_is_candidate_wrt_edge(&inst, &pos, x, u)? {
                        disagreements += 1;
                        println!("disagreement: position {} vertex {x} lower neighbor {u}", seed + k);
                    }
                }
            }
        }
    }
    println!("candidates: {cases} positions, {checks} checks, {disagreements} disagreements");
    let mut sandwich_failures = 0;
    for k in 0..cases {
        let s = seed + k;
        let vertices = 2 + (s % 11) as usize;
        let hyperedges = 1 + (s % 5) as usize;
        let min = 1 + (s % vertices as u64) as usize;
        let game = random_hypergraph(vertices, hyperedges, min, vertices, s)?;
        let optimum = minimax_hypergraph(&game, Player::Breaker)?[0];
        let engine = engine_worst_case(&game, Player::Breaker)?;
        if (engine as f64) < game.quota() || engine > optimum {
            sandwich_failures += 1;
            println!("engine out of range: game {s} quota {:.3} engine {engine} optimum {optimum}", game.quota());
        }
    }
    println!("engine: {cases} games, {sandwich_failures} outside [quota, optimum]");
    Ok(if disagreements + sandwich_failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let path = cli.config.as_ref();
    match &cli.command {
        Command::Label(i) => label(&config(path, i, None, None)?),
        Command::Dag(i) => dag(&config(path, i, None, None)?),
        Command::Board(i) => board(&config(path, i, None, None)?),
        Command::Play { instance, play: p } => play(&config(path, instance, Some(p), None)?),
        Command::Experiment {
            instance,
            play: p,
            repetitions,
        } => experiment(&config(path, instance, Some(p), repetitions.as_ref())?),
        Command::Verify { transcript } => verify(transcript),
        Command::Oracle { cases, seed } => oracle(*cases, *seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Error::Aborted) => {
            eprintln!("aborted");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
