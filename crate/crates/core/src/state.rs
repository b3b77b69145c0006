//! Authoritative game state, setup and deployment.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::config::GameConfig;
use crate::error::{Error, Result};
use crate::geometry::{Orientation, Position};
use crate::unit::{PlayerId, TeamId, Unit, UnitClass, UnitId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Deployment,
    Playing,
    Finished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameResult {
    Winner(TeamId),
    Draw,
}

/// Rectangle of squares a player may deploy into (half-open ranges).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub x0: i32,
    pub x1: i32,
    pub y0: i32,
    pub y1: i32,
}

impl Region {
    pub fn contains(&self, x: i32, y: i32) -> bool {
        (self.x0..self.x1).contains(&x) && (self.y0..self.y1).contains(&y)
    }

    pub fn squares(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        (self.x0..self.x1).flat_map(move |x| (self.y0..self.y1).map(move |y| (x, y)))
    }
}

/// Team band split along the length, then split along the width per player.
pub fn deployment_region(config: &GameConfig, player: PlayerId) -> Region {
    let team = config.team_of(player) as u32;
    let teams = config.num_teams;
    let (y0, y1) = if teams == 2 {
        let half = config.length / 2;
        if team == 0 {
            (0, half)
        } else {
            (config.length - half, config.length)
        }
    } else {
        (team * config.length / teams, (team + 1) * config.length / teams)
    };
    let k = player as u32 % config.players_per_team;
    let ppt = config.players_per_team;
    let x0 = k * config.width / ppt;
    let x1 = (k + 1) * config.width / ppt;
    Region { x0: x0 as i32, x1: x1 as i32, y0: y0 as i32, y1: y1 as i32 }
}

/// One unit a player asks to place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Placement {
    pub unit_class: UnitClass,
    pub position: Position,
    pub orientation: Orientation,
}

/// Full game state. Values are treated as immutable by the public API:
/// operations return successors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct GameState {
    pub config: Arc<GameConfig>,
    /// Sorted by unit ID.
    pub units: Vec<Unit>,
    pub round: u32,
    pub phase: Phase,
    pub result: Option<GameResult>,
    pub next_unit_id: UnitId,
    /// Seed the board was generated from.
    pub seed: u64,
    pub deployed: Vec<PlayerId>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct StateRepr {
    config: GameConfig,
    units: Vec<Unit>,
    round: u32,
    phase: Phase,
    #[serde(default)]
    result: Option<GameResult>,
    #[serde(default, rename = "nextUnitID")]
    next_unit_id: Option<UnitId>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    deployed: Option<Vec<PlayerId>>,
}

impl From<GameState> for StateRepr {
    fn from(s: GameState) -> Self {
        StateRepr {
            config: (*s.config).clone(),
            units: s.units,
            round: s.round,
            phase: s.phase,
            result: s.result,
            next_unit_id: Some(s.next_unit_id),
            seed: s.seed,
            deployed: Some(s.deployed),
        }
    }
}

impl TryFrom<StateRepr> for GameState {
    type Error = Error;

    fn try_from(r: StateRepr) -> Result<Self> {
        let mut units = r.units;
        units.sort_by_key(|u| u.id);
        let floor = r.config.wall_base_id() + r.config.wall_count;
        let max_id = units.iter().map(|u| u.id + 1).max().unwrap_or(0);
        let deployed = r.deployed.unwrap_or_else(|| {
            r.config
                .players()
                .filter(|&p| units.iter().any(|u| u.player == Some(p)))
                .collect()
        });
        let state = GameState {
            config: Arc::new(r.config),
            units,
            round: r.round,
            phase: r.phase,
            result: r.result,
            next_unit_id: r.next_unit_id.unwrap_or(floor).max(max_id).max(floor),
            seed: r.seed,
            deployed,
        };
        state.check_invariants()?;
        Ok(state)
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

/// Fresh game in the deployment phase, walls in place.
pub fn new_game(config: GameConfig) -> Result<GameState> {
    config.validate()?;
    let mut units = Vec::new();
    let row = config.wall_row();
    let start = ((config.width - config.wall_count) / 2) as i32;
    let base = config.wall_base_id();
    for slot in 0..config.wall_count as i32 {
        let x = start + slot;
        if x == config.wall_opening() {
            continue;
        }
        units.push(Unit {
            id: base + slot as u32,
            owner: None,
            player: None,
            class: UnitClass::Wall,
            position: Position(x, row, 0),
            orientation: Orientation::SOUTH,
            health: 1,
            visible_range: 0,
        });
    }
    let next_unit_id = base + config.wall_count;
    let seed = config.seed;
    Ok(GameState {
        config: Arc::new(config),
        units,
        round: 0,
        phase: Phase::Deployment,
        result: None,
        next_unit_id,
        seed,
        deployed: Vec::new(),
    })
}

/// Place a player's roster. The game starts once every player has deployed.
pub fn deploy(state: &GameState, player: PlayerId, placements: &[Placement]) -> Result<GameState> {
    if state.phase != Phase::Deployment {
        return Err(Error::WrongPhase { expected: Phase::Deployment, actual: state.phase });
    }
    let cfg = &state.config;
    if !cfg.has_player(player) {
        return Err(Error::UnknownPlayer(player));
    }
    if state.deployed.contains(&player) {
        return Err(Error::InvalidDeployment(format!("player {player} already deployed")));
    }
    if placements.len() != cfg.units_per_player.len() {
        return Err(Error::InvalidDeployment(format!(
            "roster has {} units, got {} placements",
            cfg.units_per_player.len(),
            placements.len()
        )));
    }
    let region = deployment_region(cfg, player);
    let team = cfg.team_of(player);
    let mut used = alloc::vec![false; cfg.units_per_player.len()];
    let mut next = state.clone();
    for p in placements {
        let slot = cfg
            .units_per_player
            .iter()
            .enumerate()
            .position(|(i, &c)| c == p.unit_class && !used[i])
            .ok_or_else(|| {
                Error::InvalidDeployment(format!("{} is not in the remaining roster", p.unit_class.name()))
            })?;
        used[slot] = true;
        let Position(x, y, z) = p.position;
        if !region.contains(x, y) {
            return Err(Error::InvalidDeployment(format!(
                "{} at {} is outside the deployment region",
                p.unit_class.name(),
                p.position
            )));
        }
        if z != cfg.layer_of(p.unit_class) {
            return Err(Error::InvalidDeployment(format!(
                "{} must be placed on layer {}",
                p.unit_class.name(),
                cfg.layer_of(p.unit_class)
            )));
        }
        if !p.orientation.is_planar() {
            return Err(Error::InvalidDeployment(format!("orientation {} is not planar", p.orientation)));
        }
        if next.solid_at(p.position).is_some() {
            return Err(Error::InvalidDeployment(format!("square {} is occupied", p.position)));
        }
        next.units.push(Unit {
            id: cfg.unit_id_for(player, slot),
            owner: Some(team),
            player: Some(player),
            class: p.unit_class,
            position: p.position,
            orientation: p.orientation,
            health: 1,
            visible_range: cfg.visible_range_default,
        });
    }
    next.units.sort_by_key(|u| u.id);
    next.deployed.push(player);
    next.deployed.sort_unstable();
    if next.deployed.len() as u32 == cfg.num_players() {
        next.phase = Phase::Playing;
    }
    Ok(next)
}

impl GameState {
    pub fn unit(&self, id: UnitId) -> Option<&Unit> {
        self.units.binary_search_by_key(&id, |u| u.id).ok().map(|i| &self.units[i])
    }

    /// Living non-projectile unit on a square.
    pub fn solid_at(&self, pos: Position) -> Option<&Unit> {
        self.units.iter().find(|u| u.is_solid() && u.position == pos)
    }

    /// Living playable units of a player, by ID.
    pub fn playable_units(&self, player: PlayerId) -> impl Iterator<Item = &Unit> {
        self.units.iter().filter(move |u| u.player == Some(player) && u.is_playable())
    }

    pub fn team_alive(&self, team: TeamId) -> bool {
        self.units.iter().any(|u| u.owner == Some(team) && u.is_playable())
    }

    pub fn is_finished(&self) -> bool {
        self.phase == Phase::Finished
    }

    /// 64-bit FNV-1a digest of everything that affects play.
    pub fn hash64(&self) -> u64 {
        let mut h = Fnv::new();
        h.u64(self.round as u64);
        h.u64(self.phase as u64);
        match self.result {
            None => h.u64(0),
            Some(GameResult::Draw) => h.u64(1),
            Some(GameResult::Winner(t)) => h.u64(2 + t as u64),
        }
        h.u64(self.next_unit_id as u64);
        for u in &self.units {
            h.u64(u.id as u64);
            h.u64(u.owner.map_or(u64::MAX, u64::from));
            h.u64(u.player.map_or(u64::MAX, u64::from));
            h.u64(u.class as u64);
            for c in [u.position.0, u.position.1, u.position.2] {
                h.u64(c as i64 as u64);
            }
            for c in [u.orientation.0, u.orientation.1, u.orientation.2] {
                h.u64(c as i64 as u64);
            }
            h.u64(u.health as u64);
            h.u64(u.visible_range as u64);
        }
        h.finish()
    }

    /// Turn the board half-way round and swap the two teams (and their
    /// players). Rules are invariant under this map on boards whose wall
    /// line maps onto itself.
    pub fn point_reflect(&self) -> GameState {
        let cfg = &self.config;
        let w = cfg.width as i32;
        let l = cfg.length as i32;
        let np = cfg.num_players() as PlayerId;
        let ppt = cfg.players_per_team as PlayerId;
        let mut next = self.clone();
        for u in &mut next.units {
            u.position = Position(w - 1 - u.position.0, l - 1 - u.position.1, u.position.2);
            u.orientation = u.orientation.point_reflect();
            u.owner = u.owner.map(|t| cfg.num_teams as TeamId - 1 - t);
            u.player = u.player.map(|p| {
                let k = p % ppt;
                np - ppt - (p - k) + k
            });
        }
        next.result = self.result.map(|r| match r {
            GameResult::Winner(t) => GameResult::Winner(cfg.num_teams as TeamId - 1 - t),
            GameResult::Draw => GameResult::Draw,
        });
        next
    }

    pub fn check_invariants(&self) -> Result<()> {
        let cfg = &self.config;
        cfg.validate()?;
        if self.round > cfg.max_rounds {
            return Err(invalid(format!("round {} exceeds maxRounds", self.round)));
        }
        if (self.phase == Phase::Finished) != self.result.is_some() {
            return Err(invalid(String::from("result must be set exactly when finished")));
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for (i, u) in self.units.iter().enumerate() {
            if !seen.insert(u.id) {
                return Err(invalid(format!("duplicate unit ID {}", u.id)));
            }
            if u.id >= self.next_unit_id {
                return Err(invalid(format!("unit ID {} not below nextUnitID", u.id)));
            }
            if !u.orientation.is_valid() {
                return Err(invalid(format!("unit {} has invalid orientation", u.id)));
            }
            if (u.orientation.2 == -1) != (u.class == UnitClass::Bomb) {
                return Err(invalid(format!("unit {} orientation/class mismatch", u.id)));
            }
            if u.health > 1 {
                return Err(invalid(format!("unit {} health above 1", u.id)));
            }
            if let Some(p) = u.player {
                if !cfg.has_player(p) || u.owner != Some(cfg.team_of(p)) {
                    return Err(invalid(format!("unit {} has inconsistent owner", u.id)));
                }
            }
            if !u.is_alive() {
                continue;
            }
            let Position(x, y, z) = u.position;
            if !cfg.in_bounds(x, y, z) {
                return Err(invalid(format!("unit {} off the board at {}", u.id, u.position)));
            }
            if !u.class.is_projectile() && z != cfg.layer_of(u.class) {
                return Err(invalid(format!("unit {} on the wrong layer", u.id)));
            }
            if u.is_solid()
                && self.units[..i].iter().any(|v| v.is_solid() && v.position == u.position)
            {
                return Err(invalid(format!("square {} holds two units", u.position)));
            }
        }
        Ok(())
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn classic_wall_line_has_one_opening() {
        let s = new_game(GameConfig::classic()).unwrap();
        assert_eq!(s.phase, Phase::Deployment);
        assert_eq!(s.round, 0);
        let walls: Vec<_> = s.units.iter().filter(|u| u.class == UnitClass::Wall).collect();
        assert_eq!(walls.len(), 9);
        assert!(walls.iter().all(|w| w.position.1 == 5 && w.position.2 == 0));
        let xs: Vec<i32> = walls.iter().map(|w| w.position.0).collect();
        assert_eq!(xs, [0, 1, 2, 3, 5, 6, 7, 8, 9]);
        let ids: Vec<u32> = walls.iter().map(|w| w.id).collect();
        assert_eq!(ids, [20, 21, 22, 23, 25, 26, 27, 28, 29]);
        assert_eq!(s.next_unit_id, 30);
        assert!(s.units.iter().all(|u| u.player.is_none()));
    }

    #[test]
    fn wallless_board_is_empty() {
        let s = new_game(GameConfig::default()).unwrap();
        assert!(s.units.is_empty());
        assert_eq!(s.phase, Phase::Deployment);
        assert_eq!(s.config.squares_per_layer(), 25);
        assert_eq!(s.config.total_squares() - s.config.squares_per_layer(), 0);
    }

    #[test]
    fn invalid_config_rejected() {
        let err = new_game(GameConfig { length: 0, ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { field: "length", .. }));
    }

    fn classic_placements(player: PlayerId) -> Vec<Placement> {
        let r = deployment_region(&GameConfig::classic(), player);
        let o = Orientation::NORTH;
        let (x, y) = (r.x0, r.y0);
        vec![
            Placement { unit_class: UnitClass::Soldier, position: Position(x, y + 1, 0), orientation: o },
            Placement { unit_class: UnitClass::Tank, position: Position(x + 1, y + 1, 0), orientation: o },
            Placement { unit_class: UnitClass::Truck, position: Position(x + 2, y + 1, 0), orientation: o },
            Placement { unit_class: UnitClass::Airplane, position: Position(x, y + 1, 1), orientation: o },
            Placement { unit_class: UnitClass::Flag, position: Position(x + 1, y, 0), orientation: o },
        ]
    }

    #[test]
    fn regions_are_quadrants() {
        let c = GameConfig::classic();
        assert_eq!(deployment_region(&c, 0), Region { x0: 0, x1: 5, y0: 0, y1: 5 });
        assert_eq!(deployment_region(&c, 1), Region { x0: 5, x1: 10, y0: 0, y1: 5 });
        assert_eq!(deployment_region(&c, 2), Region { x0: 0, x1: 5, y0: 6, y1: 11 });
        assert_eq!(deployment_region(&c, 3), Region { x0: 5, x1: 10, y0: 6, y1: 11 });
    }

    #[test]
    fn full_deployment_starts_play() {
        let mut s = new_game(GameConfig::classic()).unwrap();
        for p in 0..4 {
            assert_eq!(s.phase, Phase::Deployment);
            s = deploy(&s, p, &classic_placements(p)).unwrap();
        }
        assert_eq!(s.phase, Phase::Playing);
        assert_eq!(s.units.len(), 9 + 20);
        assert_eq!(s.unit(13).unwrap().class, UnitClass::Airplane);
        assert_eq!(s.unit(13).unwrap().player, Some(2));
        s.check_invariants().unwrap();
    }

    #[test]
    fn flag_at_far_edge_is_accepted() {
        let s = new_game(GameConfig::classic()).unwrap();
        let mut p = classic_placements(0);
        p[4].position = Position(0, 0, 0);
        assert!(deploy(&s, 0, &p).is_ok());
    }

    #[test]
    fn deployment_errors() {
        let s = new_game(GameConfig::classic()).unwrap();
        let mut outside = classic_placements(0);
        outside[0].position = Position(0, 7, 0);
        assert!(matches!(deploy(&s, 0, &outside), Err(Error::InvalidDeployment(_))));

        let mut dup = classic_placements(0);
        dup[1].position = dup[0].position;
        assert!(matches!(deploy(&s, 0, &dup), Err(Error::InvalidDeployment(_))));

        let mut roster = classic_placements(0);
        roster[2].unit_class = UnitClass::Tank;
        assert!(matches!(deploy(&s, 0, &roster), Err(Error::InvalidDeployment(_))));

        assert!(matches!(deploy(&s, 0, &classic_placements(0)[..4]), Err(Error::InvalidDeployment(_))));
        assert!(matches!(deploy(&s, 9, &classic_placements(0)), Err(Error::UnknownPlayer(9))));
    }

    #[test]
    fn wall_square_placement_rejected() {
        // Team 0's band on a 5x5 board excludes the wall row, so widen the
        // wall test to a 3-team board where a band covers the wall row.
        let cfg = GameConfig { num_teams: 3, length: 6, wall_count: 5, ..Default::default() };
        let s = new_game(cfg).unwrap();
        let wall = s.units.iter().find(|u| u.class == UnitClass::Wall).unwrap().position;
        let owner = (0..3).find(|&p| deployment_region(&s.config, p).contains(wall.0, wall.1)).unwrap();
        let p = [Placement { unit_class: UnitClass::Soldier, position: wall, orientation: Orientation::NORTH }];
        let err = deploy(&s, owner, &p).unwrap_err();
        assert!(matches!(err, Error::InvalidDeployment(m) if m.contains("occupied")));
    }

    #[test]
    fn snapshot_round_trip_and_validation() {
        let mut s = new_game(GameConfig::classic()).unwrap();
        for p in 0..4 {
            s = deploy(&s, p, &classic_placements(p)).unwrap();
        }
        let json = serde_json::to_string(&s).unwrap();
        let back: GameState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.hash64(), s.hash64());

        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        v["units"][0]["position"] = serde_json::json!([99, 0, 0]);
        assert!(serde_json::from_value::<GameState>(v).is_err());
    }
}
