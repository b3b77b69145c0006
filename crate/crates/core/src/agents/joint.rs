use alloc::vec::Vec;

use crate::action::{Action, Domain};
use crate::config::GameConfig;
use crate::observe::BoardView;
use crate::rules::{legal_mask, PlayerTurn};
use crate::unit::{PlayerId, UnitId};

/// One playable roster unit of a player.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub unit_id: UnitId,
    pub domain: Domain,
}

/// Fixed-size joint action space of one player: the Cartesian product of
/// the action tables of their playable roster units, first slot most
/// significant. Dead units are pinned to `doNothing`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointSpace {
    pub slots: Vec<Slot>,
}

impl JointSpace {
    pub fn for_player(config: &GameConfig, player: PlayerId) -> Self {
        let slots = config
            .units_per_player
            .iter()
            .enumerate()
            .filter_map(|(k, &class)| {
                Domain::of(class).map(|domain| Slot { unit_id: config.unit_id_for(player, k), domain })
            })
            .collect();
        JointSpace { slots }
    }

    pub fn size(&self) -> usize {
        self.slots.iter().map(|s| s.domain.len()).product()
    }

    /// Per-slot action-table indices of a joint index.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = alloc::vec![0; self.slots.len()];
        for (i, s) in self.slots.iter().enumerate().rev() {
            out[i] = index % s.domain.len();
            index /= s.domain.len();
        }
        out
    }

    pub fn encode(&self, per_slot: &[usize]) -> usize {
        self.slots.iter().zip(per_slot).fold(0, |acc, (s, &i)| acc * s.domain.len() + i)
    }

    /// Joint index of a turn; units missing from the turn count as idle.
    pub fn index_of(&self, turn: &PlayerTurn) -> Option<usize> {
        let mut per = Vec::with_capacity(self.slots.len());
        for s in &self.slots {
            let a = turn.get(&s.unit_id).copied().unwrap_or(Action::DoNothing);
            per.push(s.domain.index_of(a)?);
        }
        Some(self.encode(&per))
    }

    /// Legal-action bitmask per slot for the units visible in `view`;
    /// absent or dead units may only idle.
    pub fn slot_masks(&self, view: &impl BoardView) -> Vec<u32> {
        let cfg = view.config();
        self.slots
            .iter()
            .map(|s| {
                match view.units().iter().find(|u| u.id == s.unit_id && u.is_playable()) {
                    Some(u) => legal_mask(cfg, u),
                    None => 1 << s.domain.index_of(Action::DoNothing).expect("doNothing in every table"),
                }
            })
            .collect()
    }

    pub fn is_legal(&self, masks: &[u32], index: usize) -> bool {
        self.decode(index).iter().zip(masks).all(|(&i, &m)| m & (1 << i) != 0)
    }

    /// The turn for a joint index, only listing units that are alive in
    /// `view`.
    pub fn turn(&self, view: &impl BoardView, index: usize) -> PlayerTurn {
        let mut turn = PlayerTurn::new();
        for (s, i) in self.slots.iter().zip(self.decode(index)) {
            if view.units().iter().any(|u| u.id == s.unit_id && u.is_playable()) {
                turn.insert(s.unit_id, s.domain.actions()[i]);
            }
        }
        turn
    }

    /// All legal joint indices in ascending order.
    pub fn legal_indices(&self, masks: &[u32]) -> Vec<usize> {
        let lists: Vec<Vec<usize>> = masks
            .iter()
            .zip(&self.slots)
            .map(|(&m, s)| (0..s.domain.len()).filter(|i| m & (1 << i) != 0).collect())
            .collect();
        let mut out = alloc::vec![0usize];
        for (list, s) in lists.iter().zip(&self.slots) {
            let mut next = Vec::with_capacity(out.len() * list.len());
            for &prefix in &out {
                for &i in list {
                    next.push(prefix * s.domain.len() + i);
                }
            }
            out = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit::UnitClass;
    use alloc::vec;

    #[test]
    fn three_land_units_give_1728() {
        let cfg = GameConfig {
            units_per_player: vec![UnitClass::Soldier, UnitClass::Tank, UnitClass::Truck],
            ..Default::default()
        };
        let space = JointSpace::for_player(&cfg, 1);
        assert_eq!(space.size(), 1728);
        assert_eq!(space.slots[0].unit_id, 3);
        for idx in [0, 1, 143, 1727] {
            assert_eq!(space.encode(&space.decode(idx)), idx);
        }
    }

    #[test]
    fn flags_take_no_slot() {
        let space = JointSpace::for_player(&GameConfig::classic(), 0);
        assert_eq!(space.slots.len(), 4);
        assert_eq!(space.size(), 12 * 12 * 12 * 24);
    }
}
