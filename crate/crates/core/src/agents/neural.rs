use alloc::string::String;
use alloc::vec::Vec;

use libm::exp;
use rand::Rng;

use super::{Agent, JointSpace, Scoring};
use crate::error::{Error, Result};
use crate::nn::{InputEncoder, Network};
use crate::observe::BoardView;
use crate::rng::rng_from;
use crate::rules::PlayerTurn;
use crate::state::GameState;
use crate::unit::PlayerId;

/// Softmax of `scores / temperature` over the entries where `legal` is set;
/// masked entries get probability zero.
pub fn masked_softmax(scores: &[f64], legal: &[bool], temperature: f64) -> Result<Vec<f64>> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::InvalidArgument("temperature must be positive".into()));
    }
    let m = scores
        .iter()
        .zip(legal)
        .filter(|(_, l)| **l)
        .map(|(s, _)| *s)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument("every action is masked".into()));
    }
    let mut p: Vec<f64> =
        scores.iter().zip(legal).map(|(s, l)| if *l { exp((s - m) / temperature) } else { 0.0 }).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    Ok(p)
}

/// Encode, predict outcome rows, score each joint action, mask illegal
/// ones, and sample from the tempered softmax.
pub fn nn_agent_decide(
    view: &impl BoardView,
    player: PlayerId,
    network: &Network,
    encoder: InputEncoder,
    scoring: Scoring,
    temperature: f64,
    seed: u64,
) -> Result<PlayerTurn> {
    let cfg = view.config();
    let space = JointSpace::for_player(cfg, player);
    let input = encoder.encode(view, player)?;
    let out = network.forward(&input)?;
    if out.actions != space.size() {
        return Err(Error::ShapeMismatch { expected: space.size(), actual: out.actions });
    }
    let scores: Vec<f64> = (0..out.actions).map(|a| scoring.score(&out.distribution(a))).collect();
    let masks = space.slot_masks(view);
    let legal: Vec<bool> = (0..out.actions).map(|a| space.is_legal(&masks, a)).collect();
    let probs = masked_softmax(&scores, &legal, temperature)?;
    let mut r = rng_from(seed).gen::<f64>();
    let mut pick = None;
    for (a, p) in probs.iter().enumerate().filter(|(_, p)| **p > 0.0) {
        pick = Some(a);
        if r < *p {
            break;
        }
        r -= p;
    }
    Ok(space.turn(view, pick.expect("at least one legal action")))
}

#[derive(Debug, Clone)]
pub struct NeuralAgent {
    pub network: Network,
    pub encoder: InputEncoder,
    pub scoring: Scoring,
    pub temperature: f64,
}

impl Agent for NeuralAgent {
    fn name(&self) -> String {
        "nn".into()
    }

    fn decide(&mut self, state: &GameState, player: PlayerId, seed: u64) -> Result<PlayerTurn> {
        nn_agent_decide(state, player, &self.network, self.encoder, self.scoring, self.temperature, seed)
    }
}
