//! Experiment instrumentation: state-space size, action histograms and
//! head-to-head matches.

use alloc::string::String;
use alloc::vec::Vec;

use libm::log10;
use serde::{Deserialize, Serialize};

use crate::action::{Action, Domain, AIR_ACTIONS, LAND_ACTIONS};
use crate::agents::Agent;
use crate::board_gen::{random_board, random_deployment};
use crate::config::GameConfig;
use crate::error::{Error, Result};
use crate::rng::{derive_path, derive_seed};
use crate::rules::{resolve_round, JointMove};
use crate::state::{GameResult, GameState, Phase};
use crate::unit::{PlayerId, TeamId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StateSpaceEstimate {
    pub combinations_per_square: u64,
    pub log10_states: f64,
    pub total_units: u64,
}

/// Upper-bound estimate: every square independently holds one of
/// `8·(20 + M) + B + W` things (any of the twenty roster units or `M`
/// missiles in one of eight headings, a bomb, a wall).
pub fn state_space_estimate(missiles: u64, bombs: u64, walls: u64, squares: u64) -> StateSpaceEstimate {
    let cps = 8 * (20 + missiles) + bombs + walls;
    StateSpaceEstimate {
        combinations_per_square: cps,
        log10_states: squares as f64 * log10(cps as f64),
        total_units: 20 + missiles + bombs + walls,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImpactClass {
    Impactful,
    NonImpactful,
}

/// Which actions count as impactful. Ram, shoot and every ground advance
/// always do; turns and idling never do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ImpactPolicy {
    /// Bomb and the airplane's multi-square advances.
    pub air_impactful: bool,
}

impl Default for ImpactPolicy {
    fn default() -> Self {
        ImpactPolicy { air_impactful: true }
    }
}

impl ImpactPolicy {
    pub fn classify(self, action: Action) -> ImpactClass {
        let hit = match action {
            Action::Bomb | Action::AdvanceBy(..) => self.air_impactful,
            a => a.is_impactful(),
        };
        if hit {
            ImpactClass::Impactful
        } else {
            ImpactClass::NonImpactful
        }
    }
}

/// One line of a game log: the moves that were resolved and what came of
/// them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// Round number the moves were played in.
    pub round: u32,
    pub moves: JointMove,
    /// Digest of the state after resolution.
    pub hash: u64,
    pub phase: Phase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<GameResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GameLog {
    pub game: u32,
    pub seed: u64,
    /// Team played by agent A.
    pub team_a: TeamId,
    pub initial_hash: u64,
    pub rounds: Vec<RoundRecord>,
    /// Set when an agent failed and the game was abandoned.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<String>,
}

impl GameLog {
    pub fn result(&self) -> Option<GameResult> {
        self.rounds.last().and_then(|r| r.result)
    }

    /// A log is complete when rounds are consecutive from zero and the
    /// last one ends the game.
    pub fn check_complete(&self) -> Result<()> {
        for (i, r) in self.rounds.iter().enumerate() {
            if r.round as usize != i {
                return Err(Error::TruncatedLog(alloc::format!("record {i} is round {}", r.round)));
            }
        }
        match self.rounds.last() {
            Some(r) if r.phase == Phase::Finished && r.result.is_some() => Ok(()),
            _ => Err(Error::TruncatedLog("game does not end".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub action: Action,
    pub count: u64,
    pub class: ImpactClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionHistogram {
    /// Land actions in table order, then the air-only ones.
    pub bins: Vec<HistogramBin>,
    pub rounds_played: u64,
}

impl ActionHistogram {
    pub fn new(policy: ImpactPolicy) -> Self {
        let bins = LAND_ACTIONS
            .iter()
            .chain(AIR_ACTIONS.iter().filter(|a| !Domain::Land.contains(**a)))
            .map(|&action| HistogramBin { action, count: 0, class: policy.classify(action) })
            .collect();
        ActionHistogram { bins, rounds_played: 0 }
    }

    pub fn add(&mut self, action: Action) {
        if let Some(b) = self.bins.iter_mut().find(|b| b.action == action) {
            b.count += 1;
        }
    }

    /// Fold another game's log in. `players` restricts counting to those
    /// seats; `None` counts everyone.
    pub fn add_log(&mut self, log: &GameLog, players: Option<&[PlayerId]>) -> Result<()> {
        log.check_complete()?;
        for r in &log.rounds {
            for (p, turn) in &r.moves {
                if players.is_none_or(|ps| ps.contains(p)) {
                    turn.values().for_each(|a| self.add(*a));
                }
            }
        }
        self.rounds_played += log.rounds.len() as u64;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }

    pub fn class_total(&self, class: ImpactClass) -> u64 {
        self.bins.iter().filter(|b| b.class == class).map(|b| b.count).sum()
    }

    /// Fraction of counted moves in `class`; zero for an empty histogram.
    pub fn share(&self, class: ImpactClass) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.class_total(class) as f64 / n as f64,
        }
    }
}

/// Histogram of every move in a complete game log.
pub fn action_histogram(log: &GameLog, players: Option<&[PlayerId]>, policy: ImpactPolicy) -> Result<ActionHistogram> {
    let mut h = ActionHistogram::new(policy);
    h.add_log(log, players)?;
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StartMode {
    /// Units scattered anywhere on the board.
    #[default]
    RandomBoard,
    /// Random placements inside each player's deployment region.
    Deployment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct MatchConfig {
    pub game: GameConfig,
    pub start: StartMode,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig { game: GameConfig::default(), start: StartMode::RandomBoard }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MatchReport {
    /// Completed games; faults are not included.
    pub games: u32,
    pub wins_a: u32,
    pub wins_b: u32,
    pub draws: u32,
    pub faults: u32,
    pub mean_rounds: f64,
}

#[derive(Debug, Clone)]
pub struct MatchOutcome {
    pub report: MatchReport,
    pub logs: Vec<GameLog>,
}

/// Start position of game `g` of a match.
pub fn match_start(cfg: &MatchConfig, game_seed: u64) -> Result<GameState> {
    match cfg.start {
        StartMode::RandomBoard => random_board(&cfg.game, game_seed),
        StartMode::Deployment => random_deployment(&cfg.game, game_seed),
    }
}

/// Play one game to the end. Agent A controls every player of `team_a`.
pub fn play_game(
    agent_a: &mut dyn Agent,
    agent_b: &mut dyn Agent,
    mut state: GameState,
    team_a: TeamId,
    game: u32,
    seed: u64,
) -> GameLog {
    let mut log = GameLog { game, seed, team_a, initial_hash: state.hash64(), rounds: Vec::new(), fault: None };
    let cfg = state.config.clone();
    while !state.is_finished() {
        let round = state.round;
        let mut joint = JointMove::new();
        for p in cfg.players() {
            if state.playable_units(p).next().is_none() {
                joint.insert(p, Default::default());
                continue;
            }
            let agent: &mut dyn Agent = if cfg.team_of(p) == team_a { &mut *agent_a } else { &mut *agent_b };
            match agent.decide(&state, p, derive_path(seed, &[round as u64, p as u64])) {
                Ok(turn) => {
                    joint.insert(p, turn);
                }
                Err(e) => {
                    log.fault = Some(alloc::format!("{} (player {p}, round {round}): {e}", agent.name()));
                    return log;
                }
            }
        }
        match resolve_round(&state, &joint) {
            Ok(next) => state = next,
            Err(e) => {
                log.fault = Some(alloc::format!("round {round}: {e}"));
                return log;
            }
        }
        log.rounds.push(RoundRecord { round, moves: joint, hash: state.hash64(), phase: state.phase, result: state.result });
    }
    log
}

/// Play `games` games, agent A taking team `g % 2` in game `g`.
pub fn run_match(
    agent_a: &mut dyn Agent,
    agent_b: &mut dyn Agent,
    games: u32,
    cfg: &MatchConfig,
    seed: u64,
) -> Result<MatchOutcome> {
    cfg.game.validate()?;
    let mut report = MatchReport::default();
    let mut logs = Vec::with_capacity(games as usize);
    let mut rounds_total = 0u64;
    for g in 0..games {
        let game_seed = derive_seed(seed, g as u64);
        let team_a = (g % 2) as TeamId;
        let log = play_game(agent_a, agent_b, match_start(cfg, game_seed)?, team_a, g, game_seed);
        match (log.fault.is_some(), log.result()) {
            (false, Some(result)) => {
                report.games += 1;
                rounds_total += log.rounds.len() as u64;
                match result {
                    GameResult::Draw => report.draws += 1,
                    GameResult::Winner(t) if t == team_a => report.wins_a += 1,
                    GameResult::Winner(_) => report.wins_b += 1,
                }
            }
            _ => report.faults += 1,
        }
        logs.push(log);
    }
    if report.games > 0 {
        report.mean_rounds = rounds_total as f64 / report.games as f64;
    }
    Ok(MatchOutcome { report, logs })
}
