//! Command-line entry points.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::thread;

use battlespace_core::analysis::{
    action_histogram, run_match, state_space_estimate, ActionHistogram, ImpactClass, ImpactPolicy, MatchConfig,
    StartMode,
};
use battlespace_core::encode::Layout;
use battlespace_core::nn::InputEncoder;
use battlespace_core::train::{train, TrainConfig};
use battlespace_core::{GameConfig, PlayerId};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::agent_spec::AgentSpec;
use crate::error::{at, Error, Result};
use crate::formats::{checkpoint, encoded, logs, snapshot};
use crate::server::{Hub, Server, BIND_ENV, DEFAULT_BIND, WS_BIND_ENV};

#[derive(Debug, Parser)]
#[command(name = "battlespace", version, about = "Battlespace wargame simulator, agents and server")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LayoutArg {
    Binary,
    Layers,
    List,
}

impl From<LayoutArg> for Layout {
    fn from(l: LayoutArg) -> Layout {
        match l {
            LayoutArg::Binary => Layout::Binary,
            LayoutArg::Layers => Layout::Layers,
            LayoutArg::List => Layout::List,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StartArg {
    RandomBoard,
    Deployment,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Bin,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the game server.
    Serve {
        /// TCP address for newline-delimited JSON clients.
        #[arg(long, env = BIND_ENV, default_value = DEFAULT_BIND)]
        bind: String,
        /// Optional address for WebSocket clients.
        #[arg(long, env = WS_BIND_ENV)]
        ws_bind: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory finished games are logged to.
        #[arg(long)]
        log_dir: Option<PathBuf>,
    },
    /// Play agents against each other without a UI.
    Headless {
        #[arg(long, default_value = "random")]
        agent_a: AgentSpec,
        #[arg(long, default_value = "random")]
        agent_b: AgentSpec,
        #[arg(long, default_value_t = 10)]
        games: u32,
        /// Game config JSON; defaults to a 5×5 duel.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "random-board")]
        start: StartArg,
        /// Directory for per-game JSONL logs and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a network on search statistics from random boards.
    Train {
        /// Training config JSON.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "layers")]
        encoder: LayoutArg,
        #[arg(long)]
        epochs: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write `step,loss`; defaults to `<out>.loss.csv`.
        #[arg(long)]
        loss_log: Option<PathBuf>,
    },
    /// Play a trained network against an opponent.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, default_value = "random")]
        opponent: AgentSpec,
        #[arg(long, default_value_t = 4)]
        games: u32,
        #[arg(long, default_value_t = 1.0)]
        temperature: f64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a board snapshot.
    Encode {
        #[arg(long)]
        board: PathBuf,
        #[arg(long, value_enum)]
        layout: LayoutArg,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to text for `.txt` outputs, binary otherwise.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Player whose units the list layout describes.
        #[arg(long, default_value_t = 0)]
        player: PlayerId,
    },
    /// Estimate the number of board states.
    Statespace {
        #[arg(long, default_value_t = 6)]
        missiles: u64,
        #[arg(long, default_value_t = 1)]
        bombs: u64,
        #[arg(long, default_value_t = 10)]
        walls: u64,
        #[arg(long, default_value_t = 10)]
        width: u64,
        #[arg(long, default_value_t = 11)]
        length: u64,
        #[arg(long, default_value_t = 2)]
        height: u64,
    },
    /// Action histogram of a game log.
    Analyze {
        #[arg(long)]
        log: PathBuf,
        /// Only count these players' moves.
        #[arg(long)]
        player: Vec<PlayerId>,
        /// Count bombs and air advances as non-impactful.
        #[arg(long)]
        strict_air: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn load_game(path: &Option<PathBuf>) -> Result<GameConfig> {
    path.as_deref().map_or_else(|| Ok(GameConfig::default()), snapshot::read_config)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n").map_err(at(path))
}

fn write_logs(dir: &Path, outcome: &battlespace_core::analysis::MatchOutcome) -> Result<()> {
    fs::create_dir_all(dir).map_err(at(dir))?;
    for log in &outcome.logs {
        let path = dir.join(format!("game-{:04}.jsonl", log.game));
        fs::write(&path, logs::game_log_bytes(log)?).map_err(at(&path))?;
    }
    let games: Vec<_> = outcome
        .logs
        .iter()
        .map(|l| json!({"game": l.game, "seed": l.seed, "teamA": l.team_a, "rounds": l.rounds.len(), "result": l.result(), "fault": l.fault}))
        .collect();
    write_json(&dir.join("report.json"), &json!({"report": outcome.report, "games": games}))
}

/// Mantissa-exponent text for `10^log10`, one significant digit.
pub fn approx_power(log10: f64) -> String {
    let mut exp = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exp).round();
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exp += 1.0;
    }
    format!("{mantissa}e{exp}")
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Serve { bind, ws_bind, seed, log_dir } => {
            let mut hub = Hub::new(seed);
            if let Some(dir) = log_dir {
                fs::create_dir_all(&dir).map_err(at(&dir))?;
                hub = hub.with_log_dir(dir);
            }
            let server = Server::new(hub);
            let tcp = TcpListener::bind(&bind)?;
            println!("listening on tcp://{}", tcp.local_addr()?);
            if let Some(addr) = ws_bind {
                let ws = TcpListener::bind(&addr)?;
                println!("listening on ws://{}", ws.local_addr()?);
                let s = server.clone();
                thread::spawn(move || s.serve_ws(ws));
            }
            io::stdout().flush()?;
            server.serve_tcp(tcp);
        }
        Command::Headless { agent_a, agent_b, games, config, seed, start, out } => {
            let mut a = agent_a.build()?;
            let mut b = agent_b.build()?;
            let start = match start {
                StartArg::RandomBoard => StartMode::RandomBoard,
                StartArg::Deployment => StartMode::Deployment,
            };
            let cfg = MatchConfig { game: load_game(&config)?, start };
            let outcome = run_match(a.as_mut(), b.as_mut(), games, &cfg, seed)?;
            if let Some(dir) = out {
                write_logs(&dir, &outcome)?;
            }
            println!("{}", serde_json::to_string_pretty(&outcome.report)?);
        }
        Command::Train { config, out, encoder, epochs, seed, loss_log } => {
            let mut cfg: TrainConfig = match &config {
                Some(p) => serde_json::from_str(&fs::read_to_string(p).map_err(at(p))?)?,
                None => TrainConfig::default(),
            };
            if let Some(e) = epochs {
                cfg.epochs = e;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let enc = InputEncoder::new(encoder.into());
            let result = train(&cfg, enc.default_spec(&cfg.game), enc)?;
            checkpoint::save(&out, &result.network, cfg.seed, enc)?;
            let loss_path = loss_log.unwrap_or_else(|| {
                let mut p = out.clone().into_os_string();
                p.push(".loss.csv");
                p.into()
            });
            let mut w = BufWriter::new(File::create(&loss_path).map_err(at(&loss_path))?);
            logs::write_loss_csv(&mut w, &result.steps)?;
            w.flush()?;
            for (e, loss) in result.epoch_means().iter().enumerate() {
                println!("epoch {e:>3}  loss {loss:.6}");
            }
            println!("checkpoint {}  loss log {}", out.display(), loss_path.display());
        }
        Command::Eval { checkpoint: path, opponent, games, temperature, config, seed, out } => {
            let mut nn = AgentSpec::Neural { checkpoint: path, temperature }.build()?;
            let mut opp = opponent.build()?;
            let cfg = MatchConfig { game: load_game(&config)?, start: StartMode::RandomBoard };
            let outcome = run_match(nn.as_mut(), opp.as_mut(), games, &cfg, seed)?;
            let mut hist = ActionHistogram::new(ImpactPolicy::default());
            for log in outcome.logs.iter().filter(|l| l.fault.is_none()) {
                let seats: Vec<PlayerId> =
                    cfg.game.players().filter(|&p| cfg.game.team_of(p) == log.team_a).collect();
                hist.add_log(log, Some(&seats))?;
            }
            if let Some(dir) = &out {
                write_logs(dir, &outcome)?;
                let path = dir.join("histogram.csv");
                let mut w = BufWriter::new(File::create(&path).map_err(at(&path))?);
                logs::write_histogram_csv(&mut w, &hist)?;
                w.flush()?;
            }
            let summary = json!({
                "report": outcome.report,
                "moves": hist.total(),
                "nonImpactfulShare": hist.share(ImpactClass::NonImpactful),
                "impactfulShare": hist.share(ImpactClass::Impactful),
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Encode { board, layout, out, format, player } => {
            let state = snapshot::read_state(&board)?;
            let array = encoded::encode(&state, layout.into(), player)?;
            let text = match format {
                Some(FormatArg::Text) => true,
                Some(FormatArg::Bin) => false,
                None => out.extension().is_some_and(|e| e == "txt"),
            };
            if text {
                fs::write(&out, encoded::text_dump(&array)).map_err(at(&out))?;
            } else {
                let mut w = BufWriter::new(File::create(&out).map_err(at(&out))?);
                encoded::write_encoded(&mut w, &array)?;
                w.flush()?;
            }
            println!("{} {:?} -> {}", layout_name(array.layout), array.dims, out.display());
        }
        Command::Statespace { missiles, bombs, walls, width, length, height } => {
            let squares = width * length * height;
            let e = state_space_estimate(missiles, bombs, walls, squares);
            println!("squares={squares}");
            println!("combinationsPerSquare={}", e.combinations_per_square);
            println!("log10States={:.3}", e.log10_states);
            println!("states≈{}", approx_power(e.log10_states));
            println!("totalUnits={}", e.total_units);
        }
        Command::Analyze { log, player, strict_air, csv } => {
            let file = File::open(&log).map_err(at(&log))?;
            let game = logs::read_game_log(BufReader::new(file))?;
            let policy = ImpactPolicy { air_impactful: !strict_air };
            let players = (!player.is_empty()).then_some(player.as_slice());
            let hist = action_histogram(&game, players, policy)?;
            match csv {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path).map_err(at(&path))?);
                    logs::write_histogram_csv(&mut w, &hist)?;
                    w.flush()?;
                }
                None => logs::write_histogram_csv(&mut io::stdout().lock(), &hist)?,
            }
            let summary = json!({
                "roundsPlayed": hist.rounds_played,
                "moves": hist.total(),
                "impactfulShare": hist.share(ImpactClass::Impactful),
                "nonImpactfulShare": hist.share(ImpactClass::NonImpactful),
                "result": game.result(),
            });
            println!("{summary}");
        }
    }
    Ok(())
}

fn layout_name(l: Layout) -> &'static str {
    match l {
        Layout::Binary => "binary",
        Layout::Layers => "layers",
        Layout::List => "list",
    }
}

/// Exit code for a finished run: 0 on success, 1 on a runtime error.
pub fn main_with(cli: Cli) -> i32 {
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Usage(_) = e {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers() {
        assert_eq!(approx_power(514.897), "8e514");
        assert_eq!(approx_power(2.0), "1e2");
        assert_eq!(approx_power(2.99), "1e3");
    }
}
