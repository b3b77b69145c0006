use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unit::{PlayerId, TeamId, UnitClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameMode {
    Annihilation,
    CaptureTheFlag,
}

/// Board dimensions, roster and rule parameters for one game.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct GameConfig {
    pub width: u32,
    pub length: u32,
    pub height: u32,
    pub num_teams: u32,
    pub players_per_team: u32,
    pub units_per_player: Vec<UnitClass>,
    pub wall_count: u32,
    pub max_rounds: u32,
    pub missile_speed: u32,
    pub mode: GameMode,
    pub visible_range_default: u32,
    pub seed: u64,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            width: 5,
            length: 5,
            height: 1,
            num_teams: 2,
            players_per_team: 1,
            units_per_player: vec![UnitClass::Soldier],
            wall_count: 0,
            max_rounds: 100,
            missile_speed: 2,
            mode: GameMode::Annihilation,
            visible_range_default: 1,
            seed: 0,
        }
    }
}

impl GameConfig {
    /// The full-size board: 10x11x2, two teams of two players, five units
    /// each and a breached wall line.
    pub fn classic() -> Self {
        GameConfig {
            width: 10,
            length: 11,
            height: 2,
            num_teams: 2,
            players_per_team: 2,
            units_per_player: vec![
                UnitClass::Soldier,
                UnitClass::Tank,
                UnitClass::Truck,
                UnitClass::Airplane,
                UnitClass::Flag,
            ],
            wall_count: 10,
            max_rounds: 100,
            missile_speed: 2,
            mode: GameMode::CaptureTheFlag,
            visible_range_default: 1,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: &str| Err(Error::InvalidConfig { field, reason: reason.to_string() });
        if self.width < 2 {
            return bad("width", "must be at least 2");
        }
        if self.length < 2 {
            return bad("length", "must be at least 2");
        }
        if !(1..=2).contains(&self.height) {
            return bad("height", "must be 1 or 2");
        }
        if !(2..=3).contains(&self.num_teams) {
            return bad("numTeams", "must be 2 or 3");
        }
        if self.players_per_team == 0 {
            return bad("playersPerTeam", "must be at least 1");
        }
        if self.num_players() > 5 {
            return bad("playersPerTeam", "at most 5 players in total");
        }
        if self.players_per_team > self.width {
            return bad("playersPerTeam", "more players per team than board columns");
        }
        if self.max_rounds == 0 {
            return bad("maxRounds", "must be at least 1");
        }
        if self.wall_count >= self.width * self.length {
            return bad("wallCount", "must be smaller than width*length");
        }
        if self.wall_count > self.width {
            return bad("wallCount", "walls form one line across the width");
        }
        if self.units_per_player.is_empty() {
            return bad("unitsPerPlayer", "roster is empty");
        }
        for class in &self.units_per_player {
            if !class.is_deployable() {
                return Err(Error::InvalidConfig {
                    field: "unitsPerPlayer",
                    reason: format!("{} cannot be deployed by a player", class.name()),
                });
            }
            if class.is_air() && self.height < 2 {
                return bad("unitsPerPlayer", "airplanes need height 2");
            }
        }
        if !self.units_per_player.iter().any(|c| c.is_playable()) {
            return bad("unitsPerPlayer", "roster has no playable unit");
        }
        if self.mode == GameMode::CaptureTheFlag
            && !self.units_per_player.contains(&UnitClass::Flag)
        {
            return bad("mode", "capture the flag needs a flag in the roster");
        }
        Ok(())
    }

    pub fn num_players(&self) -> u32 {
        self.num_teams * self.players_per_team
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        0..self.num_players() as PlayerId
    }

    pub fn teams(&self) -> impl Iterator<Item = TeamId> {
        0..self.num_teams as TeamId
    }

    pub fn team_of(&self, player: PlayerId) -> TeamId {
        (player as u32 / self.players_per_team) as TeamId
    }

    pub fn has_player(&self, player: PlayerId) -> bool {
        (player as u32) < self.num_players()
    }

    pub fn squares_per_layer(&self) -> u32 {
        self.width * self.length
    }

    pub fn total_squares(&self) -> u32 {
        self.width * self.length * self.height
    }

    pub fn roster_len(&self) -> u32 {
        self.units_per_player.len() as u32
    }

    /// Stable ID of roster slot `slot` of `player`.
    pub fn unit_id_for(&self, player: PlayerId, slot: usize) -> u32 {
        player as u32 * self.roster_len() + slot as u32
    }

    /// First unit ID used by walls.
    pub fn wall_base_id(&self) -> u32 {
        self.num_players() * self.roster_len()
    }

    /// Layer a unit of `class` lives on.
    pub fn layer_of(&self, class: UnitClass) -> i32 {
        if class.is_air() {
            self.height as i32 - 1
        } else {
            0
        }
    }

    pub fn in_bounds(&self, x: i32, y: i32, z: i32) -> bool {
        x >= 0
            && y >= 0
            && z >= 0
            && (x as u32) < self.width
            && (y as u32) < self.length
            && (z as u32) < self.height
    }

    /// Row of the wall line.
    pub fn wall_row(&self) -> i32 {
        (self.length / 2) as i32
    }

    /// Column left open in the wall line.
    pub fn wall_opening(&self) -> i32 {
        ((self.width - 1) / 2) as i32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_classic_are_valid() {
        GameConfig::default().validate().unwrap();
        GameConfig::classic().validate().unwrap();
    }

    #[test]
    fn errors_name_the_field() {
        let cases: Vec<(GameConfig, &str)> = vec![
            (GameConfig { width: 1, ..Default::default() }, "width"),
            (GameConfig { height: 3, ..Default::default() }, "height"),
            (GameConfig { max_rounds: 0, ..Default::default() }, "maxRounds"),
            (GameConfig { wall_count: 6, ..Default::default() }, "wallCount"),
            (
                GameConfig { units_per_player: vec![UnitClass::Airplane], ..Default::default() },
                "unitsPerPlayer",
            ),
            (
                GameConfig { units_per_player: vec![UnitClass::Missile], ..Default::default() },
                "unitsPerPlayer",
            ),
            (GameConfig { mode: GameMode::CaptureTheFlag, ..Default::default() }, "mode"),
        ];
        for (cfg, field) in cases {
            match cfg.validate() {
                Err(Error::InvalidConfig { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected InvalidConfig({field}), got {other:?}"),
            }
        }
    }

    #[test]
    fn classic_ids() {
        let c = GameConfig::classic();
        assert_eq!(c.unit_id_for(0, 0), 0);
        assert_eq!(c.unit_id_for(3, 4), 19);
        assert_eq!(c.wall_base_id(), 20);
        assert_eq!(c.wall_row(), 5);
        assert_eq!(c.wall_opening(), 4);
        assert_eq!(c.team_of(1), 0);
        assert_eq!(c.team_of(2), 1);
    }
}
