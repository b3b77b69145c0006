use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::NetworkSpec;
use crate::action::Domain;
use crate::agents::JointSpace;
use crate::config::GameConfig;
use crate::encode::{encode_binary, encode_layers, encode_list, layers_per_player, GridEncoding, Layout, HEADER_LEN};
use crate::error::{Error, Result};
use crate::observe::BoardView;
use crate::unit::PlayerId;

/// Turns a board into the flat `f64` vector a network reads.
///
/// Player blocks are rotated so the deciding player always comes first,
/// letting one network serve every seat. Values are divided by a fixed
/// per-layout constant to keep them near unit scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEncoder {
    pub layout: Layout,
}

impl InputEncoder {
    pub fn new(layout: Layout) -> Self {
        InputEncoder { layout }
    }

    fn scale(self) -> f64 {
        match self.layout {
            Layout::Binary => 1.0 / 1024.0,
            Layout::Layers => 1.0 / 9.0,
            Layout::List => 1.0 / 32.0,
        }
    }

    fn neighbourhood_len(config: &GameConfig) -> usize {
        let side = 2 * config.visible_range_default as usize + 1;
        side * side - 1
    }

    fn playable_slots(config: &GameConfig) -> usize {
        config.units_per_player.iter().filter(|c| Domain::of(**c).is_some()).count()
    }

    /// `[channels, width, length]` for grids, `[len]` for lists.
    pub fn input_shape(self, config: &GameConfig) -> Vec<usize> {
        let players = config.num_players() as usize;
        let (w, l) = (config.width as usize, config.length as usize);
        match self.layout {
            Layout::Binary => alloc::vec![players * 2 + 2, w, l],
            Layout::Layers => alloc::vec![players * layers_per_player(config.height) + 2, w, l],
            Layout::List => {
                alloc::vec![players * Self::playable_slots(config) * (HEADER_LEN + Self::neighbourhood_len(config))]
            }
        }
    }

    /// The default network for this encoder: conv for grids, dense for
    /// lists, one output row per joint action of a player.
    pub fn default_spec(self, config: &GameConfig) -> NetworkSpec {
        let actions = JointSpace::for_player(config, 0).size();
        let shape = self.input_shape(config);
        match self.layout {
            Layout::List => NetworkSpec::dense(shape[0], actions),
            _ => NetworkSpec::conv([shape[0], shape[1], shape[2]], actions),
        }
    }

    pub fn check_spec(self, config: &GameConfig, spec: &NetworkSpec) -> Result<()> {
        let shape = self.input_shape(config);
        if spec.input_shape != shape {
            return Err(Error::ShapeMismatch { expected: shape.iter().product(), actual: spec.input_len() });
        }
        let actions = JointSpace::for_player(config, 0).size();
        if spec.output_actions != actions {
            return Err(Error::ShapeMismatch { expected: actions, actual: spec.output_actions });
        }
        Ok(())
    }

    pub fn encode(self, view: &impl BoardView, player: PlayerId) -> Result<Vec<f64>> {
        let cfg = view.config();
        if !cfg.has_player(player) {
            return Err(Error::UnknownPlayer(player));
        }
        let players = cfg.num_players() as usize;
        let order: Vec<usize> = (0..players).map(|i| (player as usize + i) % players).collect();
        let k = self.scale();
        let rotate_grid = |g: GridEncoding, per: usize| {
            let plane = g.width * g.length;
            let mut out = Vec::with_capacity(g.data.len());
            for &p in &order {
                out.extend(g.data[p * per * plane..(p + 1) * per * plane].iter().map(|&v| v as f64 * k));
            }
            out.extend(g.data[players * per * plane..].iter().map(|&v| v as f64 * k));
            out
        };
        match self.layout {
            Layout::Binary => Ok(rotate_grid(encode_binary(view)?, 2)),
            Layout::Layers => Ok(rotate_grid(encode_layers(view)?, layers_per_player(cfg.height))),
            Layout::List => {
                let feat = HEADER_LEN + Self::neighbourhood_len(cfg);
                let mut out = Vec::with_capacity(self.input_shape(cfg)[0]);
                for &p in &order {
                    let enc = encode_list(view, p as PlayerId)?;
                    for slot in JointSpace::for_player(cfg, p as PlayerId).slots {
                        let start = out.len();
                        if let Some(u) = enc.per_unit.iter().find(|u| u.unit_id == slot.unit_id) {
                            out.extend(u.features.iter().take(feat).map(|&v| v as f64 * k));
                        }
                        out.resize(start + feat, 0.0);
                    }
                }
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board_gen::random_board;

    #[test]
    fn lengths_match_shapes() {
        for cfg in [GameConfig::default(), GameConfig::classic()] {
            let s = random_board(&cfg, 1).unwrap();
            for layout in [Layout::Binary, Layout::Layers, Layout::List] {
                let e = InputEncoder::new(layout);
                let x = e.encode(&s, 1).unwrap();
                assert_eq!(x.len(), e.input_shape(&cfg).iter().product::<usize>(), "{layout:?}");
                e.check_spec(&cfg, &e.default_spec(&cfg)).unwrap();
            }
        }
    }

    #[test]
    fn deciding_player_comes_first() {
        let cfg = GameConfig::default();
        let s = random_board(&cfg, 2).unwrap();
        let e = InputEncoder::new(Layout::Layers);
        let a = e.encode(&s, 0).unwrap();
        let b = e.encode(&s, 1).unwrap();
        let block = 2 * 25;
        assert_eq!(a[..block], b[block..2 * block]);
        assert_eq!(a[block..2 * block], b[..block]);
        assert_eq!(a[2 * block..], b[2 * block..]);
    }
}
