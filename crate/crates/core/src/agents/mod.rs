//! Action selection: random, Monte Carlo root search and the neural agent.

mod joint;
mod mcts;
mod neural;
mod random;

use alloc::string::String;

pub use joint::{JointSpace, Slot};
pub use mcts::{
    mcts_root, mcts_select, MctsAgent, MctsConfig, OutcomeDistribution, RootEntry, RootStats, Scoring,
    Selection,
};
pub use neural::{masked_softmax, nn_agent_decide, NeuralAgent};
pub use random::{random_move, sample_action, ActionWeights, RandomAgent};

use crate::error::Result;
use crate::rules::PlayerTurn;
use crate::state::GameState;
use crate::unit::PlayerId;

/// Anything that can choose a player's turn. `seed` is the only source of
/// randomness an agent may use.
pub trait Agent {
    fn name(&self) -> String;

    fn decide(&mut self, state: &GameState, player: PlayerId, seed: u64) -> Result<PlayerTurn>;
}
