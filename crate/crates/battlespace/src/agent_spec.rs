//! Agent descriptors used on the command line.
//!
//! `random`, `offensive`, `mcts[:ROLLOUTS]`, `ucb[:ROLLOUTS]`,
//! `nn:CHECKPOINT[@TEMPERATURE]`.

use std::path::PathBuf;
use std::str::FromStr;

use battlespace_core::agents::{ActionWeights, Agent, MctsAgent, MctsConfig, NeuralAgent, RandomAgent, Scoring, Selection};

use crate::error::{Error, Result};
use crate::formats::checkpoint;

#[derive(Debug, Clone, PartialEq)]
pub enum AgentSpec {
    Random,
    Offensive,
    Mcts { rollouts: u32, ucb: bool },
    Neural { checkpoint: PathBuf, temperature: f64 },
}

impl FromStr for AgentSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let rollouts = |a: Option<&str>| -> Result<u32, String> {
            a.map_or(Ok(500), |v| v.parse().map_err(|_| format!("bad rollout count {v:?}")))
        };
        match head {
            "random" if arg.is_none() => Ok(AgentSpec::Random),
            "offensive" if arg.is_none() => Ok(AgentSpec::Offensive),
            "mcts" => Ok(AgentSpec::Mcts { rollouts: rollouts(arg)?, ucb: false }),
            "ucb" => Ok(AgentSpec::Mcts { rollouts: rollouts(arg)?, ucb: true }),
            "nn" => {
                let arg = arg.ok_or("nn needs a checkpoint path: nn:PATH[@TEMPERATURE]")?;
                let (path, temperature) = match arg.rsplit_once('@') {
                    Some((p, t)) => (p, t.parse().map_err(|_| format!("bad temperature {t:?}"))?),
                    None => (arg, 1.0),
                };
                Ok(AgentSpec::Neural { checkpoint: path.into(), temperature })
            }
            _ => Err(format!("unknown agent {s:?}; expected random, offensive, mcts[:N], ucb[:N] or nn:PATH")),
        }
    }
}

impl AgentSpec {
    pub fn build(&self) -> Result<Box<dyn Agent>> {
        Ok(match self {
            AgentSpec::Random => Box::new(RandomAgent::default()),
            AgentSpec::Offensive => Box::new(RandomAgent { weights: ActionWeights::offensive() }),
            AgentSpec::Mcts { rollouts, ucb } => {
                let selection = if *ucb { Selection::Ucb1 { c: std::f64::consts::SQRT_2 } } else { Selection::Uniform };
                Box::new(MctsAgent { config: MctsConfig { rollouts: *rollouts, selection, ..Default::default() } })
            }
            AgentSpec::Neural { checkpoint: path, temperature } => {
                if temperature.is_nan() || *temperature <= 0.0 {
                    return Err(Error::Usage("temperature must be positive".into()));
                }
                let (network, header) = checkpoint::load(path)?;
                Box::new(NeuralAgent {
                    network,
                    encoder: header.encoder,
                    scoring: Scoring::WinMinusLoss,
                    temperature: *temperature,
                })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        assert_eq!("random".parse(), Ok(AgentSpec::Random));
        assert_eq!("mcts".parse(), Ok(AgentSpec::Mcts { rollouts: 500, ucb: false }));
        assert_eq!("ucb:50".parse(), Ok(AgentSpec::Mcts { rollouts: 50, ucb: true }));
        assert_eq!(
            "nn:a.ckpt@0.5".parse(),
            Ok(AgentSpec::Neural { checkpoint: "a.ckpt".into(), temperature: 0.5 })
        );
        assert!("mcts:x".parse::<AgentSpec>().is_err());
        assert!("alpha".parse::<AgentSpec>().is_err());
    }
}
