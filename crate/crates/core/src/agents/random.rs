use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Agent;
use crate::action::{Action, Domain};
use crate::config::GameConfig;
use crate::error::{Error, Result};
use crate::observe::BoardView;
use crate::rng::{rng_from, GameRng};
use crate::rules::{legal_mask, PlayerTurn};
use crate::state::GameState;
use crate::unit::{PlayerId, Unit};

/// Relative sampling weights per action, indexed like the domain tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionWeights {
    pub land: Vec<f64>,
    pub air: Vec<f64>,
}

impl Default for ActionWeights {
    fn default() -> Self {
        Self::uniform()
    }
}

impl ActionWeights {
    pub fn uniform() -> Self {
        ActionWeights { land: alloc::vec![1.0; Domain::Land.len()], air: alloc::vec![1.0; Domain::Air.len()] }
    }

    /// Four times the weight on everything that moves a unit or launches a
    /// projectile.
    pub fn offensive() -> Self {
        let mut w = Self::uniform();
        for d in [Domain::Land, Domain::Air] {
            for (i, a) in d.actions().iter().enumerate() {
                if a.is_impactful() {
                    w.table_mut(d)[i] = 4.0;
                }
            }
        }
        w
    }

    pub fn table(&self, domain: Domain) -> &[f64] {
        match domain {
            Domain::Land => &self.land,
            Domain::Air => &self.air,
        }
    }

    fn table_mut(&mut self, domain: Domain) -> &mut Vec<f64> {
        match domain {
            Domain::Land => &mut self.land,
            Domain::Air => &mut self.air,
        }
    }

    pub fn get(&self, domain: Domain, action: Action) -> Option<f64> {
        domain.index_of(action).map(|i| self.table(domain)[i])
    }

    pub fn set(&mut self, domain: Domain, action: Action, weight: f64) -> Result<()> {
        let i = domain
            .index_of(action)
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("{action} is not a {domain:?} action")))?;
        self.table_mut(domain)[i] = weight;
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        for d in [Domain::Land, Domain::Air] {
            let t = self.table(d);
            if t.len() != d.len() {
                return Err(Error::ShapeMismatch { expected: d.len(), actual: t.len() });
            }
            if t.iter().any(|w| !w.is_finite() || *w < 0.0) {
                return Err(Error::InvalidArgument("weights must be finite and non-negative".into()));
            }
        }
        Ok(())
    }
}

/// Draw one legal action for `unit` with probability proportional to its
/// weight among the legal actions.
pub fn sample_action(config: &GameConfig, unit: &Unit, weights: &ActionWeights, rng: &mut GameRng) -> Result<Action> {
    let domain = Domain::of(unit.class).ok_or(Error::NotPlayable(unit.id))?;
    let mask = legal_mask(config, unit);
    let table = weights.table(domain);
    let legal = |i: usize| mask & (1 << i) != 0;
    let total: f64 = (0..domain.len()).filter(|&i| legal(i)).map(|i| table[i]).sum();
    if total <= 0.0 {
        return Err(Error::ZeroWeights(unit.id));
    }
    let mut r = rng.gen::<f64>() * total;
    let mut last = None;
    for i in (0..domain.len()).filter(|&i| legal(i) && table[i] > 0.0) {
        if r < table[i] {
            return Ok(domain.actions()[i]);
        }
        r -= table[i];
        last = Some(i);
    }
    Ok(domain.actions()[last.expect("positive total has a positive entry")])
}

/// A weighted random turn for every living playable unit of `player` that
/// the view shows.
pub fn random_move(view: &impl BoardView, player: PlayerId, weights: &ActionWeights, rng: &mut GameRng) -> Result<PlayerTurn> {
    let cfg = view.config();
    if !cfg.has_player(player) {
        return Err(Error::UnknownPlayer(player));
    }
    let mut turn = PlayerTurn::new();
    for u in view.units().iter().filter(|u| u.player == Some(player) && u.is_playable()) {
        turn.insert(u.id, sample_action(cfg, u, weights, rng)?);
    }
    Ok(turn)
}

#[derive(Debug, Clone, Default)]
pub struct RandomAgent {
    pub weights: ActionWeights,
}

impl Agent for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn decide(&mut self, state: &GameState, player: PlayerId, seed: u64) -> Result<PlayerTurn> {
        random_move(state, player, &self.weights, &mut rng_from(seed))
    }
}
