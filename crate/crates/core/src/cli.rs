//! `pursuit` command line: run, campaign, gen, replay, serve.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::campaign::{run_campaign, CampaignError, CampaignSpec, EnvSource};
use crate::environment::Environment;
use crate::gen::{generate, GenParams, ObstacleShape};
use crate::sim::{
    check_bound, finish, replay, Game, GameConfig, GameStatus, Trace, BOUND_CONSTANT,
};
use crate::strategy::EvaderPolicy;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BOUND: i32 = 2;
pub const EXIT_GEN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pursuit",
    version,
    about = "Three-pursuer pursuit-evasion in polygonal domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one game and write its trace.
    Run(RunArgs),
    /// Play many games and write one CSV row per game.
    Campaign(CampaignArgs),
    /// Generate a random environment.
    Gen(GenArgs),
    /// Re-run a trace and check every turn.
    Replay(ReplayArgs),
    /// Host interactive sessions over HTTP and WebSocket.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long, default_value = "greedy")]
    pub policy: EvaderPolicy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to ⌈50·(2k·diam + diam²)⌉.
    #[arg(long)]
    pub turn_cap: Option<u64>,
    #[arg(long, default_value_t = BOUND_CONSTANT)]
    pub bound_constant: f64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Environment JSON file, or `env0` / `env1`.
    #[arg(long)]
    pub env: String,
    #[command(flatten)]
    pub game: GameArgs,
    /// Trace output (JSON lines).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenFlags {
    #[arg(long, default_value_t = 20.0)]
    pub width: f64,
    #[arg(long, default_value_t = 20.0)]
    pub height: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub min_radius: f64,
    #[arg(long, default_value_t = 3.0)]
    pub max_radius: f64,
    #[arg(long, default_value_t = 7)]
    pub max_vertices: usize,
    #[arg(long, value_parser = parse_shape, default_value = "convex")]
    pub shape: ObstacleShape,
    #[arg(long, default_value_t = 2000)]
    pub max_attempts: usize,
}

impl GenFlags {
    fn params(&self, k: usize) -> GenParams {
        GenParams {
            k,
            width: self.width,
            height: self.height,
            d_min: self.d_min,
            min_radius: self.min_radius,
            max_radius: self.max_radius,
            max_vertices: self.max_vertices,
            shape: self.shape,
            max_attempts: self.max_attempts,
        }
    }
}

fn parse_shape(s: &str) -> Result<ObstacleShape, String> {
    match s {
        "convex" => Ok(ObstacleShape::Convex),
        "rect" => Ok(ObstacleShape::Rect),
        _ => Err(format!("unknown shape `{s}` (convex, rect)")),
    }
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    /// Environment files (or `env0` / `env1`); when absent, environments are generated.
    #[arg(long)]
    pub env: Vec<String>,
    /// Obstacle counts for generated environments.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,5")]
    pub k: Vec<usize>,
    /// First generator seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of generator seeds per k.
    #[arg(long, default_value_t = 100)]
    pub seeds: u64,
    /// Games per environment.
    #[arg(long, default_value_t = 1)]
    pub repetitions: u64,
    #[arg(long, default_value = "greedy")]
    pub policy: EvaderPolicy,
    #[arg(long)]
    pub turn_cap: Option<u64>,
    #[arg(long, default_value_t = BOUND_CONSTANT)]
    pub bound_constant: f64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-run every game from its trace.
    #[arg(long)]
    pub verify_replay: bool,
    /// Write one trace per game into this directory.
    #[arg(long)]
    pub traces: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GenFlags,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub gen: GenFlags,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Trace file to verify.
    pub trace: PathBuf,
    /// Environment the trace must have been recorded on.
    #[arg(long)]
    pub env: Option<String>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
}

/// Loads `env0`, `env1` or a JSON file and validates it.
pub fn load_env(source: &str) -> Result<Environment, String> {
    let env = match source {
        "env0" => Environment::env0(),
        "env1" => Environment::env1(),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            Environment::from_json(&text).map_err(|e| format!("{path}: {e}"))?
        }
    };
    env.ensure_valid().map_err(|e| format!("{source}: {e}"))?;
    Ok(env)
}

fn writer(out: Option<&Path>) -> std::io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn cmd_run(a: &RunArgs) -> i32 {
    let env = match load_env(&a.env) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let g = &a.game;
    let cfg = GameConfig {
        policy: g.policy,
        seed: g.seed,
        turn_cap: g.turn_cap,
        bound_constant: g.bound_constant,
    };
    if g.policy == EvaderPolicy::Human {
        eprintln!("error: the human policy needs a session (`pursuit serve`)");
        return EXIT_INPUT;
    }
    let res = match Game::new(env, cfg, None).and_then(|mut game| {
        game.run()?;
        Ok(finish(game))
    }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    if let Some(out) = &a.out {
        if let Err(e) = File::create(out)
            .map(BufWriter::new)
            .and_then(|w| res.trace.write_jsonl(w))
        {
            eprintln!("error: {}: {e}", out.display());
            return EXIT_INPUT;
        }
    }
    let b = check_bound(&res, g.bound_constant);
    println!(
        "status={:?} turns={} capture_turn={} budget={:.1} margin={:.1} rounds={} hash={}",
        res.status,
        res.turns,
        res.capture_turn.map_or("-".into(), |t| t.to_string()),
        b.budget,
        b.margin,
        res.stats.rounds,
        res.trace.final_hash()
    );
    if res.status == GameStatus::Captured && b.ok {
        EXIT_OK
    } else {
        EXIT_BOUND
    }
}

pub fn cmd_campaign(a: &CampaignArgs) -> i32 {
    let source = if a.env.is_empty() {
        EnvSource::Generated {
            ks: a.k.clone(),
            seeds: a.seed..a.seed + a.seeds,
            params: a.gen.params(0),
        }
    } else {
        let mut envs = Vec::new();
        for e in &a.env {
            match load_env(e) {
                Ok(env) => envs.push(env),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT;
                }
            }
        }
        EnvSource::List(envs)
    };
    if a.repetitions == 0 {
        eprintln!("error: repetitions must be at least 1");
        return EXIT_INPUT;
    }
    let spec = CampaignSpec {
        source,
        policy: a.policy,
        repetitions: a.repetitions,
        bound_constant: a.bound_constant,
        turn_cap: a.turn_cap,
        verify_replay: a.verify_replay,
        trace_dir: a.traces.clone(),
    };
    if let Some(dir) = &a.traces {
        if let Err(e) = std::fs::create_dir_all(dir) {
            eprintln!("error: {}: {e}", dir.display());
            return EXIT_INPUT;
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = a.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let summary = match pool.install(|| run_campaign(&spec)) {
        Ok(s) => s,
        Err(CampaignError::Empty) => {
            eprintln!("error: no environments");
            return EXIT_INPUT;
        }
        Err(e @ CampaignError::Generation { .. }) => {
            eprintln!("error: {e}");
            return EXIT_GEN;
        }
    };
    let written = writer(a.out.as_deref())
        .map_err(|e| e.to_string())
        .and_then(|w| summary.write_csv(w).map_err(|e| e.to_string()));
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    let failed = summary.failures().count();
    eprintln!("{} games, {} failed", summary.rows.len(), failed);
    for r in summary.failures().take(10) {
        eprintln!(
            "  {} seed {}: {} {}",
            r.env,
            r.seed,
            r.status.as_str(),
            r.error.as_deref().unwrap_or("")
        );
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_BOUND
    }
}

pub fn cmd_gen(a: &GenArgs) -> i32 {
    let env = match generate(&a.gen.params(a.k), a.seed) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_GEN;
        }
    };
    let res = writer(a.out.as_deref()).and_then(|mut w| {
        w.write_all(env.to_json().as_bytes())?;
        w.write_all(b"\n")?;
        w.flush()
    });
    match res {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn cmd_replay(a: &ReplayArgs) -> i32 {
    let trace = match File::open(&a.trace)
        .map_err(|e| e.to_string())
        .and_then(|f| Trace::read_jsonl(BufReader::new(f)).map_err(|e| e.to_string()))
    {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", a.trace.display());
            return EXIT_INPUT;
        }
    };
    if let Some(name) = &a.env {
        match load_env(name) {
            Ok(env) if env == trace.header.env => {}
            Ok(_) => {
                eprintln!("error: trace was recorded on a different environment");
                return EXIT_INPUT;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
        }
    }
    let rep = match replay(&trace) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    println!(
        "records={} hash={} divergence={} chain={} violations={}",
        rep.turns,
        rep.final_hash,
        rep.divergence.map_or("none".into(), |t| t.to_string()),
        rep.broken_chain
            .map_or("ok".into(), |t| format!("broken at {t}")),
        rep.violations.len()
    );
    for v in &rep.violations {
        println!("  {v}");
    }
    if rep.ok() {
        EXIT_OK
    } else {
        EXIT_BOUND
    }
}

pub fn cmd_serve(a: &ServeArgs) -> i32 {
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    match rt.block_on(crate::service::serve(&a.addr)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Campaign(a) => cmd_campaign(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Replay(a) => cmd_replay(a),
        Command::Serve(a) => cmd_serve(a),
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
