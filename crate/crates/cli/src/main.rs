//! Command-line front end: run evaluations, dump frames, check config files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stoch_arcade::harness::{
    dump_frames, list_presets, load_config, preset, run_episodes, write_report, AgentId, DumpError, IoError,
    LoadedConfig, ReportFormat, RunError, RunOptions, RunParams,
};
use stoch_arcade::GameId;

const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "stoch-arcade", version, about = "Evaluate agents on stochastic arcade games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run episodes and write a report.
    Run(RunArgs),
    /// Write the observation of every step as a PPM file.
    DumpFrames(DumpArgs),
    /// Parse and validate a configuration file.
    ValidateConfig { file: PathBuf },
    /// Print the named presets.
    ListPresets,
}

#[derive(Clone, Copy, ValueEnum)]
enum GameArg {
    Brickout,
    Pugilist,
}

impl From<GameArg> for GameId {
    fn from(g: GameArg) -> Self {
        match g {
            GameArg::Brickout => GameId::Brickout,
            GameArg::Pugilist => GameId::Pugilist,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct Source {
    /// Game to play; must agree with the preset or file when both are given.
    #[arg(long, value_enum)]
    game: Option<GameArg>,
    /// A named preset (see list-presets).
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// A JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// random, noop, scripted, scripted_brickout or scripted_pugilist.
    #[arg(long)]
    agent: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ticks per agent decision.
    #[arg(long)]
    frameskip: Option<u32>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    episodes: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Worker threads for episodes; the report does not depend on it.
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    steps: u64,
    #[arg(long)]
    dir: PathBuf,
}

enum Failure {
    Config(String),
    Io(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<DumpError> for Failure {
    fn from(e: DumpError) -> Self {
        match e {
            DumpError::Run(e) => e.into(),
            DumpError::Io(e) => e.into(),
        }
    }
}

fn read_config_file(path: &Path) -> Result<LoadedConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    load_config(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// Everything a command needs once flags, file and preset are merged.
struct Resolved {
    game: GameId,
    loaded: LoadedConfig,
    agent: AgentId,
    seed: u64,
    frameskip: u32,
}

fn resolve(source: &Source) -> Result<Resolved, Failure> {
    let loaded = match (&source.preset, &source.config) {
        (Some(name), _) => {
            let p = preset(name).map_err(|e| Failure::Config(e.to_string()))?;
            LoadedConfig { game: p.game, config: p.config, run: RunParams::default() }
        }
        (None, Some(path)) => read_config_file(path)?,
        (None, None) => unreachable!("clap requires --preset or --config"),
    };
    let game = loaded.game;
    if let Some(g) = source.game.map(GameId::from) {
        if g != game {
            return Err(Failure::Config(format!("--game {g} conflicts with the configuration, which runs {game}")));
        }
    }
    let agent_name = source.agent.as_deref().or(loaded.run.agent.as_deref()).unwrap_or("scripted");
    let agent = AgentId::parse(agent_name, game).map_err(|e| Failure::Config(e.to_string()))?;
    let frameskip = source.frameskip.or(loaded.run.frameskip).unwrap_or(1);
    if frameskip == 0 {
        return Err(Failure::Config("--frameskip must be at least 1".into()));
    }
    Ok(Resolved { game, agent, seed: source.seed.or(loaded.run.seed).unwrap_or(0), frameskip, loaded })
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    let r = resolve(&args.source)?;
    let episodes = args.episodes.or(r.loaded.run.episodes).unwrap_or(100);
    let options = RunOptions {
        parallel: args.parallel.or(r.loaded.run.parallel).unwrap_or(1),
        frameskip: r.frameskip,
        ..RunOptions::default()
    };
    let report = run_episodes(r.game, &r.loaded.config, r.agent, episodes, r.seed, &options)?;
    let format = match args.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
    };
    write_report(&report, format, &args.out)?;
    println!(
        "{} {} episodes={} mean_return={:.3} std_return={:.3} -> {}",
        report.game,
        report.agent,
        report.episodes,
        report.mean_return,
        report.std_return,
        args.out.display()
    );
    Ok(())
}

fn dump(args: &DumpArgs) -> Result<(), Failure> {
    let r = resolve(&args.source)?;
    let written = dump_frames(r.game, &r.loaded.config, r.agent, args.steps, r.seed, r.frameskip, &args.dir)?;
    println!("wrote {} frames to {}", written.len(), args.dir.display());
    Ok(())
}

fn validate(path: &Path) -> Result<(), Failure> {
    let loaded = read_config_file(path)?;
    println!(
        "{}: ok ({} type {} mode {} p={})",
        path.display(),
        loaded.game,
        loaded.config.type_id,
        loaded.config.mode,
        loaded.config.probability
    );
    Ok(())
}

fn print_presets() {
    for p in list_presets() {
        println!("{:<16} {:<9} {}", p.name, p.game, p.summary);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run(args),
        Command::DumpFrames(args) => dump(args),
        Command::ValidateConfig { file } => validate(file),
        Command::ListPresets => {
            print_presets();
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
