//! Fog of war: what one player can see.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::config::GameConfig;
use crate::error::{Error, Result};
use crate::geometry::Position;
use crate::state::{GameResult, GameState, Phase};
use crate::unit::{PlayerId, Unit, UnitClass};

/// Read access shared by full states and observations, so encoders and
/// agents accept either.
pub trait BoardView {
    fn config(&self) -> &GameConfig;
    /// Units the viewer knows about, sorted by ID.
    fn units(&self) -> &[Unit];
    fn round(&self) -> u32;
}

impl BoardView for GameState {
    fn config(&self) -> &GameConfig {
        &self.config
    }

    fn units(&self) -> &[Unit] {
        &self.units
    }

    fn round(&self) -> u32 {
        self.round
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Observation {
    pub for_player: PlayerId,
    pub config: Arc<GameConfig>,
    pub visible_squares: BTreeSet<Position>,
    pub visible_units: Vec<Unit>,
    pub round: u32,
    pub phase: Phase,
    pub result: Option<GameResult>,
}

impl BoardView for Observation {
    fn config(&self) -> &GameConfig {
        &self.config
    }

    fn units(&self) -> &[Unit] {
        &self.visible_units
    }

    fn round(&self) -> u32 {
        self.round
    }
}

/// Units whose eyes count for a team: living playable units and flags.
fn is_viewer(u: &Unit) -> bool {
    u.is_alive() && (u.class.is_playable() || u.class == UnitClass::Flag)
}

/// Squares within `range` steps of `origin` along the eight compass rays,
/// on every layer of those columns.
pub fn sight_lines(config: &GameConfig, origin: Position, range: u32, out: &mut BTreeSet<Position>) {
    const RAYS: [(i32, i32); 8] = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];
    let mut mark = |x: i32, y: i32| {
        for z in 0..config.height as i32 {
            if config.in_bounds(x, y, z) {
                out.insert(Position(x, y, z));
            }
        }
    };
    mark(origin.0, origin.1);
    for (dx, dy) in RAYS {
        for k in 1..=range as i32 {
            mark(origin.0 + dx * k, origin.1 + dy * k);
        }
    }
}

/// A player's fog-of-war view of the game.
pub fn observe(state: &GameState, player: PlayerId) -> Result<Observation> {
    let cfg = &state.config;
    if !cfg.has_player(player) {
        return Err(Error::UnknownPlayer(player));
    }
    let team = cfg.team_of(player);
    let mut visible = BTreeSet::new();
    for u in state.units.iter().filter(|u| u.is_friend_of(team) && is_viewer(u)) {
        sight_lines(cfg, u.position, u.visible_range, &mut visible);
    }
    let visible_units = state
        .units
        .iter()
        .filter(|u| match u.owner {
            None => true,
            Some(t) if t == team => true,
            Some(_) => u.is_alive() && visible.contains(&u.position),
        })
        .cloned()
        .collect();
    Ok(Observation {
        for_player: player,
        config: state.config.clone(),
        visible_squares: visible,
        visible_units,
        round: state.round,
        phase: state.phase,
        result: state.result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Orientation;
    use alloc::vec;

    fn two_team_state(enemy_at: (i32, i32)) -> GameState {
        let cfg = GameConfig { num_teams: 2, players_per_team: 2, width: 6, length: 6, ..Default::default() };
        let mk = |id, player: PlayerId, x, y| Unit {
            id,
            owner: Some(player / 2),
            player: Some(player),
            class: UnitClass::Soldier,
            position: Position(x, y, 0),
            orientation: Orientation::NORTH,
            health: 1,
            visible_range: 1,
        };
        GameState {
            config: Arc::new(cfg),
            units: vec![mk(0, 0, 2, 2), mk(1, 1, 5, 0), mk(2, 2, enemy_at.0, enemy_at.1), mk(3, 3, 5, 5)],
            round: 0,
            phase: Phase::Playing,
            result: None,
            next_unit_id: 4,
            seed: 0,
            deployed: vec![0, 1, 2, 3],
        }
    }

    #[test]
    fn diagonal_neighbour_visible() {
        let s = two_team_state((3, 3));
        let o = observe(&s, 0).unwrap();
        assert!(o.visible_units.iter().any(|u| u.id == 2));
        assert!(o.visible_squares.contains(&Position(3, 3, 0)));
    }

    #[test]
    fn distant_enemy_hidden_teammate_shown() {
        let s = two_team_state((2, 5));
        let o = observe(&s, 0).unwrap();
        assert!(!o.visible_units.iter().any(|u| u.id == 2));
        assert!(!o.visible_units.iter().any(|u| u.id == 3));
        assert!(o.visible_units.iter().any(|u| u.id == 1), "teammate is always listed");
        for u in o.visible_units.iter().filter(|u| u.owner == Some(1)) {
            assert!(o.visible_squares.contains(&u.position));
        }
    }

    #[test]
    fn unknown_player() {
        let s = two_team_state((2, 5));
        assert_eq!(observe(&s, 7).unwrap_err(), Error::UnknownPlayer(7));
    }

    #[test]
    fn rays_skip_knight_squares() {
        let cfg = GameConfig { width: 7, length: 7, ..Default::default() };
        let mut v = BTreeSet::new();
        sight_lines(&cfg, Position(3, 3, 0), 2, &mut v);
        assert_eq!(v.len(), 1 + 8 * 2);
        assert!(v.contains(&Position(5, 5, 0)));
        assert!(!v.contains(&Position(4, 5, 0)));
    }
}
