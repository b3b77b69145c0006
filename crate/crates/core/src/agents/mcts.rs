//! Flat Monte Carlo search at the root: every legal joint action of the
//! deciding player is a child, rollouts play random moves to the end.

use alloc::string::String;
use alloc::vec::Vec;

use libm::{log, sqrt};
use serde::{Deserialize, Serialize};

use super::random::{sample_action, ActionWeights};
use super::{Agent, JointSpace};
use crate::action::Action;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from, GameRng};
use crate::rules::{reward, PlayerTurn};
use crate::state::{GameState, Phase};
use crate::unit::PlayerId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Selection {
    /// Rollouts spread round-robin over the root actions.
    Uniform,
    /// UCB1 on the win rate; unvisited actions first.
    Ucb1 { c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Scoring {
    WinMinusLoss,
    WinOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct MctsConfig {
    pub rollouts: u32,
    pub selection: Selection,
    pub scoring: Scoring,
    pub rollout_policy: ActionWeights,
}

impl Default for MctsConfig {
    fn default() -> Self {
        MctsConfig {
            rollouts: 500,
            selection: Selection::Uniform,
            scoring: Scoring::WinMinusLoss,
            rollout_policy: ActionWeights::uniform(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OutcomeDistribution {
    pub p_win: f64,
    pub p_loss: f64,
    pub p_draw: f64,
}

impl OutcomeDistribution {
    pub const UNIFORM: Self = OutcomeDistribution { p_win: 1.0 / 3.0, p_loss: 1.0 / 3.0, p_draw: 1.0 / 3.0 };

    pub fn as_array(&self) -> [f64; 3] {
        [self.p_win, self.p_loss, self.p_draw]
    }
}

impl Scoring {
    pub fn score(self, d: &OutcomeDistribution) -> f64 {
        match self {
            Scoring::WinMinusLoss => d.p_win - d.p_loss,
            Scoring::WinOnly => d.p_win,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RootEntry {
    pub action: PlayerTurn,
    /// Position in the player's fixed joint action space.
    pub index: usize,
    pub wins: u32,
    pub losses: u32,
    pub draws: u32,
    pub visits: u32,
}

impl RootEntry {
    /// Empirical outcome frequencies; uniform before the first visit.
    pub fn distribution(&self) -> OutcomeDistribution {
        if self.visits == 0 {
            return OutcomeDistribution::UNIFORM;
        }
        let n = self.visits as f64;
        OutcomeDistribution { p_win: self.wins as f64 / n, p_loss: self.losses as f64 / n, p_draw: self.draws as f64 / n }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RootStats {
    pub player: PlayerId,
    pub entries: Vec<RootEntry>,
    pub total_rollouts: u32,
}

fn pick(selection: Selection, entries: &[RootEntry], k: u32) -> usize {
    match selection {
        Selection::Uniform => k as usize % entries.len(),
        Selection::Ucb1 { c } => {
            if let Some(i) = entries.iter().position(|e| e.visits == 0) {
                return i;
            }
            let ln_n = log(k as f64);
            let mut best = 0;
            let mut best_v = f64::NEG_INFINITY;
            for (i, e) in entries.iter().enumerate() {
                let n = e.visits as f64;
                let v = e.wins as f64 / n + c * sqrt(ln_n / n);
                if v > best_v {
                    best_v = v;
                    best = i;
                }
            }
            best
        }
    }
}

/// Random actions for every living playable unit, except those of `fixed`
/// whose actions come from the given turn.
fn round_moves(
    state: &GameState,
    fixed: Option<(PlayerId, &PlayerTurn)>,
    weights: &ActionWeights,
    rng: &mut GameRng,
    out: &mut Vec<(usize, Action)>,
) -> Result<()> {
    out.clear();
    for (i, u) in state.units.iter().enumerate() {
        if !u.is_playable() {
            continue;
        }
        let a = match fixed {
            Some((p, turn)) if u.player == Some(p) => turn.get(&u.id).copied().unwrap_or(Action::DoNothing),
            _ => sample_action(&state.config, u, weights, rng)?,
        };
        out.push((i, a));
    }
    Ok(())
}

/// Play one rollout starting with `turn` for `player`; returns the reward of
/// the player's team.
fn rollout(state: &GameState, player: PlayerId, turn: &PlayerTurn, weights: &ActionWeights, seed: u64) -> Result<i8> {
    let mut rng = rng_from(seed);
    let mut s = state.clone();
    let mut moves = Vec::new();
    round_moves(&s, Some((player, turn)), weights, &mut rng, &mut moves)?;
    s.apply_round(&moves);
    while !s.is_finished() {
        round_moves(&s, None, weights, &mut rng, &mut moves)?;
        s.apply_round(&moves);
    }
    reward(&s, s.config.team_of(player))
}

/// Run `config.rollouts` rollouts from `state` for `player`. Rollout `k`
/// draws its randomness from `derive_seed(seed, k)` only.
pub fn mcts_root(state: &GameState, player: PlayerId, config: &MctsConfig, seed: u64) -> Result<RootStats> {
    if state.phase != Phase::Playing {
        return Err(Error::WrongPhase { expected: Phase::Playing, actual: state.phase });
    }
    if !state.config.has_player(player) {
        return Err(Error::UnknownPlayer(player));
    }
    if config.rollouts == 0 {
        return Err(Error::InvalidArgument("rollouts must be at least 1".into()));
    }
    config.rollout_policy.validate()?;
    let space = JointSpace::for_player(&state.config, player);
    let masks = space.slot_masks(state);
    let mut entries: Vec<RootEntry> = space
        .legal_indices(&masks)
        .into_iter()
        .map(|index| RootEntry { action: space.turn(state, index), index, wins: 0, losses: 0, draws: 0, visits: 0 })
        .collect();
    for k in 0..config.rollouts {
        let i = pick(config.selection, &entries, k);
        let r = rollout(state, player, &entries[i].action, &config.rollout_policy, derive_seed(seed, k as u64))?;
        let e = &mut entries[i];
        e.visits += 1;
        match r {
            1 => e.wins += 1,
            -1 => e.losses += 1,
            _ => e.draws += 1,
        }
    }
    Ok(RootStats { player, entries, total_rollouts: config.rollouts })
}

/// The best-scoring root action; ties go to the earliest entry.
pub fn mcts_select(stats: &RootStats, scoring: Scoring) -> Result<PlayerTurn> {
    let mut best: Option<(f64, &RootEntry)> = None;
    for e in &stats.entries {
        let s = scoring.score(&e.distribution());
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, e));
        }
    }
    best.map(|(_, e)| e.action.clone()).ok_or_else(|| Error::InvalidArgument("no root actions".into()))
}

#[derive(Debug, Clone, Default)]
pub struct MctsAgent {
    pub config: MctsConfig,
}

impl Agent for MctsAgent {
    fn name(&self) -> String {
        alloc::format!("mcts{}", self.config.rollouts)
    }

    fn decide(&mut self, state: &GameState, player: PlayerId, seed: u64) -> Result<PlayerTurn> {
        let stats = mcts_root(state, player, &self.config, seed)?;
        mcts_select(&stats, self.config.scoring)
    }
}
