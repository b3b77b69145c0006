//! Supervised training on Monte Carlo root statistics: random boards are
//! labelled with the rollout outcome frequencies of every joint action, and
//! the network learns to predict them.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::agents::{mcts_root, JointSpace, MctsConfig, RootStats, Selection};
use crate::board_gen::random_board;
use crate::config::GameConfig;
use crate::error::{Error, Result};
use crate::nn::{InputEncoder, Network, NetworkSpec, OutcomeMatrix, Sgd};
use crate::rng::{derive_path, derive_seed, rng_from};
use crate::unit::PlayerId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TrainMode {
    /// One update per board.
    PerBoard,
    /// One update per `batchSize` boards.
    MiniBatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct TrainConfig {
    pub game: GameConfig,
    pub epochs: u32,
    pub batch_size: usize,
    pub rollouts_per_board: u32,
    pub learning_rate: f64,
    pub momentum: f64,
    pub boards_per_epoch: usize,
    pub mode: TrainMode,
    /// Draw new boards every epoch instead of revisiting one labelled set.
    pub fresh_boards: bool,
    pub selection: Selection,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            game: GameConfig::default(),
            epochs: 20,
            batch_size: 4,
            rollouts_per_board: 500,
            learning_rate: 1e-2,
            momentum: 0.9,
            boards_per_epoch: 64,
            mode: TrainMode::MiniBatch,
            fresh_boards: false,
            selection: Selection::Uniform,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        self.game.validate()?;
        let bad = |reason: &str| Err(Error::InvalidArgument(alloc::format!("train config: {reason}")));
        if !(1..=64).contains(&self.batch_size) {
            return bad("batchSize must be in 1..=64");
        }
        let actions = JointSpace::for_player(&self.game, 0).size();
        if (self.rollouts_per_board as usize) < actions {
            return bad("rolloutsPerBoard must cover every joint action");
        }
        if self.boards_per_epoch == 0 {
            return bad("boardsPerEpoch must be positive");
        }
        if self.learning_rate.is_nan() || self.learning_rate < 0.0 || !(0.0..1.0).contains(&self.momentum) {
            return bad("learning rate must be >= 0 and momentum in [0, 1)");
        }
        Ok(())
    }

    fn step_batch(&self) -> usize {
        match self.mode {
            TrainMode::PerBoard => 1,
            TrainMode::MiniBatch => self.batch_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrainingSample {
    pub input: Vec<f64>,
    pub target: OutcomeMatrix,
    pub board_seed: u64,
    pub player: PlayerId,
}

/// Outcome rows indexed by joint action; actions never tried stay uniform.
pub fn target_from_stats(stats: &RootStats, actions: usize) -> OutcomeMatrix {
    let mut t = OutcomeMatrix::uniform(actions);
    for e in stats.entries.iter().filter(|e| e.visits > 0) {
        t.probs[e.index * 3..e.index * 3 + 3].copy_from_slice(&e.distribution().as_array());
    }
    t
}

/// `count` samples, each from its own random board and search.
pub fn generate_samples(
    game: &GameConfig,
    encoder: InputEncoder,
    count: usize,
    mcts: &MctsConfig,
    seed: u64,
) -> Result<Vec<TrainingSample>> {
    let players = game.num_players() as usize;
    (0..count)
        .map(|i| {
            let board_seed = derive_seed(seed, i as u64);
            let state = random_board(game, board_seed)?;
            let player = (i % players) as PlayerId;
            let stats = mcts_root(&state, player, mcts, derive_seed(board_seed, 1))?;
            let actions = JointSpace::for_player(game, player).size();
            Ok(TrainingSample {
                input: encoder.encode(&state, player)?,
                target: target_from_stats(&stats, actions),
                board_seed,
                player,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepLoss {
    pub step: usize,
    pub epoch: u32,
    pub loss: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub network: Network,
    pub steps: Vec<StepLoss>,
}

impl TrainOutcome {
    /// Mean step loss of each epoch.
    pub fn epoch_means(&self) -> Vec<f64> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for s in &self.steps {
            let e = s.epoch as usize;
            if out.len() <= e {
                out.resize(e + 1, (0.0, 0));
            }
            out[e].0 += s.loss;
            out[e].1 += 1;
        }
        out.into_iter().map(|(sum, n)| sum / n.max(1) as f64).collect()
    }
}

/// One gradient step on the mean batch loss; returns the loss before the
/// update.
pub fn backward_and_step(net: &mut Network, opt: &mut Sgd, batch: &[&TrainingSample]) -> Result<f64> {
    let pairs: Vec<(&[f64], &OutcomeMatrix)> = batch.iter().map(|s| (s.input.as_slice(), &s.target)).collect();
    let (loss, grads) = net.loss_and_gradients(&pairs)?;
    if !loss.is_finite() {
        return Err(Error::Diverged { step: 0 });
    }
    opt.step(net, &grads);
    Ok(loss)
}

/// Train `network` on a fixed dataset for `cfg.epochs` shuffled passes.
pub fn fit(network: Network, dataset: &[TrainingSample], cfg: &TrainConfig) -> Result<TrainOutcome> {
    let mut out = TrainOutcome { network, steps: Vec::new() };
    let mut opt = Sgd::new(cfg.learning_rate, cfg.momentum);
    for epoch in 0..cfg.epochs {
        run_epoch(&mut out, &mut opt, dataset, cfg, epoch)?;
    }
    Ok(out)
}

fn run_epoch(out: &mut TrainOutcome, opt: &mut Sgd, data: &[TrainingSample], cfg: &TrainConfig, epoch: u32) -> Result<()> {
    let mut order: Vec<&TrainingSample> = data.iter().collect();
    order.shuffle(&mut rng_from(derive_path(cfg.seed, &[3, epoch as u64])));
    for batch in order.chunks(cfg.step_batch()) {
        let step = out.steps.len();
        let loss = backward_and_step(&mut out.network, opt, batch).map_err(|e| match e {
            Error::Diverged { .. } => Error::Diverged { step },
            other => other,
        })?;
        out.steps.push(StepLoss { step, epoch, loss });
    }
    Ok(())
}

/// Full pipeline: label boards, build a network from `spec`, train.
pub fn train(cfg: &TrainConfig, spec: NetworkSpec, encoder: InputEncoder) -> Result<TrainOutcome> {
    cfg.validate()?;
    encoder.check_spec(&cfg.game, &spec)?;
    let network = Network::new(spec, derive_seed(cfg.seed, 1))?;
    if cfg.epochs == 0 {
        return Ok(TrainOutcome { network, steps: Vec::new() });
    }
    let mcts = MctsConfig { rollouts: cfg.rollouts_per_board, selection: cfg.selection, ..Default::default() };
    let data_seed = derive_seed(cfg.seed, 2);
    if !cfg.fresh_boards {
        let data = generate_samples(&cfg.game, encoder, cfg.boards_per_epoch, &mcts, data_seed)?;
        return fit(network, &data, cfg);
    }
    let mut out = TrainOutcome { network, steps: Vec::new() };
    let mut opt = Sgd::new(cfg.learning_rate, cfg.momentum);
    for epoch in 0..cfg.epochs {
        let seed = derive_seed(data_seed, epoch as u64);
        let data = generate_samples(&cfg.game, encoder, cfg.boards_per_epoch, &mcts, seed)?;
        run_epoch(&mut out, &mut opt, &data, cfg, epoch)?;
    }
    Ok(out)
}
