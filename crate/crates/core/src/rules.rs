//! Legal moves, simultaneous round resolution and rewards.
//!
//! A round resolves in five fixed phases:
//!
//! 1. every `turn*` heading change applies at once;
//! 2. `shoot` spawns a missile on the square ahead of the shooter, `bomb`
//!    spawns a bomb on the ground square under the plane;
//! 3. projectiles travel: a new missile first checks its spawn square, then
//!    every missile steps `missile_speed` squares, all missiles stepping
//!    together; a missile is used up on the first unit it meets (destroying
//!    it unless it is a wall or flag) or on leaving the board; bombs hit the
//!    ground square they spawned on and vanish;
//! 4. movement: movers aiming at the same square, or swapping squares,
//!    bounce; a mover is blocked by anything that stays on its target square,
//!    except that a ram destroys an enemy unit there and moves in, and a ram
//!    into a wall destroys the rammer; walking into the enemy flag captures
//!    it in capture-the-flag games;
//! 5. terminal check and round counter.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::action::{Action, Domain};
use crate::config::{GameConfig, GameMode};
use crate::error::{Error, Result};
use crate::geometry::{Orientation, Position};
use crate::state::{GameResult, GameState, Phase};
use crate::unit::{PlayerId, TeamId, Unit, UnitClass, UnitId};

/// One player's actions for a round, keyed by unit.
pub type PlayerTurn = BTreeMap<UnitId, Action>;

/// Every player's turn for one round.
pub type JointMove = BTreeMap<PlayerId, PlayerTurn>;

/// Bit `i` set when entry `i` of the unit's action table is legal.
pub fn legal_mask(config: &GameConfig, unit: &Unit) -> u32 {
    let Some(domain) = Domain::of(unit.class) else {
        return 0;
    };
    let Orientation(ox, oy, _) = unit.orientation;
    let Position(x, y, z) = unit.position;
    let mut mask = 0u32;
    for (i, a) in domain.actions().iter().enumerate() {
        let ok = match a.displacement(ox, oy) {
            Some((dx, dy)) => config.in_bounds(x + dx, y + dy, z),
            None => !matches!(a, Action::Bomb) || z > 0,
        };
        if ok {
            mask |= 1 << i;
        }
    }
    mask
}

/// Legal actions of a unit given only the board geometry.
pub fn legal_actions_for(config: &GameConfig, unit: &Unit) -> Vec<Action> {
    let Some(domain) = Domain::of(unit.class) else {
        return Vec::new();
    };
    let mask = legal_mask(config, unit);
    domain
        .actions()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &a)| a)
        .collect()
}

/// Legal actions for a living playable unit, in action-table order.
pub fn legal_actions(state: &GameState, unit: UnitId) -> Result<Vec<Action>> {
    let u = state.unit(unit).ok_or(Error::UnknownUnit(unit))?;
    if !u.is_playable() {
        return Err(Error::NotPlayable(unit));
    }
    Ok(legal_actions_for(&state.config, u))
}

pub fn is_legal(config: &GameConfig, unit: &Unit, action: Action) -> bool {
    Domain::of(unit.class)
        .and_then(|d| d.index_of(action))
        .is_some_and(|i| legal_mask(config, unit) & (1 << i) != 0)
}

/// Validate a joint move and resolve one round.
pub fn resolve_round(state: &GameState, joint: &JointMove) -> Result<GameState> {
    let moves = validate_joint(state, joint)?;
    let mut next = state.clone();
    next.apply_round(&moves);
    Ok(next)
}

/// Check that `joint` gives exactly one legal action to every living
/// playable unit; returns `(unit index, action)` pairs in unit order.
pub fn validate_joint(state: &GameState, joint: &JointMove) -> Result<Vec<(usize, Action)>> {
    if state.phase != Phase::Playing {
        return Err(Error::WrongPhase { expected: Phase::Playing, actual: state.phase });
    }
    let cfg = &state.config;
    for (&player, turn) in joint {
        if !cfg.has_player(player) {
            return Err(Error::UnknownPlayer(player));
        }
        for &id in turn.keys() {
            match state.unit(id) {
                Some(u) if u.player == Some(player) && u.is_playable() => {}
                Some(u) if u.player == Some(player) => return Err(Error::NotPlayable(id)),
                _ => return Err(Error::ForeignUnit { player, unit: id }),
            }
        }
    }
    let mut moves = Vec::new();
    for (idx, u) in state.units.iter().enumerate() {
        if !u.is_playable() {
            continue;
        }
        let player = u.player.expect("playable units belong to a player");
        let turn = joint.get(&player).ok_or(Error::MissingTurn(player))?;
        let &action = turn.get(&u.id).ok_or(Error::MissingAction { player, unit: u.id })?;
        if !is_legal(cfg, u, action) {
            return Err(Error::IllegalAction { unit: u.id, action });
        }
        moves.push((idx, action));
    }
    Ok(moves)
}

/// Terminal reward for a team: +1 win, 0 draw, -1 loss.
pub fn reward(state: &GameState, team: TeamId) -> Result<i8> {
    match state.result {
        None => Err(Error::NotFinished),
        Some(GameResult::Draw) => Ok(0),
        Some(GameResult::Winner(t)) if t == team => Ok(1),
        Some(GameResult::Winner(_)) => Ok(-1),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Move {
    Pending,
    Success,
    Failed,
}

/// Dense index of solid units by square.
struct Occupancy {
    cells: Vec<u32>,
    width: i32,
    length: i32,
}

const EMPTY: u32 = u32::MAX;

impl Occupancy {
    fn build(state: &GameState) -> Self {
        let cfg = &state.config;
        let mut occ = Occupancy {
            cells: vec![EMPTY; cfg.total_squares() as usize],
            width: cfg.width as i32,
            length: cfg.length as i32,
        };
        for (i, u) in state.units.iter().enumerate() {
            if u.is_solid() {
                occ.set(u.position, i);
            }
        }
        occ
    }

    fn slot(&self, p: Position) -> usize {
        ((p.2 * self.length + p.1) * self.width + p.0) as usize
    }

    fn get(&self, p: Position) -> Option<usize> {
        let v = self.cells[self.slot(p)];
        (v != EMPTY).then_some(v as usize)
    }

    fn set(&mut self, p: Position, idx: usize) {
        let s = self.slot(p);
        self.cells[s] = idx as u32;
    }

    fn clear(&mut self, p: Position) {
        let s = self.slot(p);
        self.cells[s] = EMPTY;
    }
}

impl GameState {
    /// Resolve one round without validation. `moves` pairs unit indices with
    /// actions, sorted by index.
    pub(crate) fn apply_round(&mut self, moves: &[(usize, Action)]) {
        let cfg = self.config.clone();

        // Phase 1: headings.
        for &(i, a) in moves {
            if let Action::Turn(deg) = a {
                self.units[i].orientation = self.units[i].orientation.rotate(deg);
            }
        }

        // Phase 2: spawn projectiles.
        let first_new = self.units.len();
        for &(i, a) in moves {
            let shooter = &self.units[i];
            let (class, pos, heading) = match a {
                Action::Shoot => {
                    (UnitClass::Missile, shooter.position.step(shooter.orientation), shooter.orientation)
                }
                Action::Bomb => {
                    (UnitClass::Bomb, shooter.position.offset(0, 0, -1), Orientation::DOWN)
                }
                _ => continue,
            };
            if !cfg.in_bounds(pos.0, pos.1, pos.2) {
                continue;
            }
            let unit = Unit {
                id: self.next_unit_id,
                owner: shooter.owner,
                player: shooter.player,
                class,
                position: pos,
                orientation: heading,
                health: 1,
                visible_range: cfg.visible_range_default,
            };
            self.next_unit_id += 1;
            self.units.push(unit);
        }

        // Phase 3: projectiles.
        let mut occ = Occupancy::build(self);
        let mut hits: Vec<usize> = Vec::new();
        for step in 0..=cfg.missile_speed {
            hits.clear();
            for j in 0..self.units.len() {
                let p = &self.units[j];
                if !p.is_alive() || !p.class.is_projectile() {
                    continue;
                }
                if step == 0 {
                    if j < first_new {
                        continue;
                    }
                } else {
                    if p.class == UnitClass::Bomb {
                        continue;
                    }
                    let to = p.position.step(p.orientation);
                    if !cfg.in_bounds(to.0, to.1, to.2) {
                        self.units[j].health = 0;
                        continue;
                    }
                    self.units[j].position = to;
                }
                let p = &self.units[j];
                let bomb = p.class == UnitClass::Bomb;
                if let Some(target) = occ.get(p.position) {
                    if self.units[target].class.is_destructible() {
                        hits.push(target);
                    }
                    self.units[j].health = 0;
                } else if bomb {
                    self.units[j].health = 0;
                }
            }
            for &t in &hits {
                if self.units[t].health > 0 {
                    self.units[t].health = 0;
                    occ.clear(self.units[t].position);
                }
            }
        }

        // Phase 4: movement.
        let mut movers: Vec<(usize, Position, bool)> = Vec::new();
        for &(i, a) in moves {
            let u = &self.units[i];
            if !u.is_alive() {
                continue;
            }
            if let Some((dx, dy)) = a.displacement(u.orientation.0, u.orientation.1) {
                movers.push((i, u.position.offset(dx, dy, 0), a == Action::Ram));
            }
        }
        let mut status = vec![Move::Pending; movers.len()];
        for a in 0..movers.len() {
            for b in 0..movers.len() {
                if a == b {
                    continue;
                }
                let (ia, da, _) = movers[a];
                let (ib, db, _) = movers[b];
                let same_target = da == db;
                let swap = da == self.units[ib].position && db == self.units[ia].position;
                if same_target || swap {
                    status[a] = Move::Failed;
                }
            }
        }
        let mover_of = |idx: usize, movers: &[(usize, Position, bool)]| {
            movers.iter().position(|&(i, _, _)| i == idx)
        };
        let mut destroyed: Vec<usize> = Vec::new();
        let mut captured: Vec<TeamId> = Vec::new();
        loop {
            let mut changed = false;
            for m in 0..movers.len() {
                if status[m] != Move::Pending {
                    continue;
                }
                let (i, dest, ram) = movers[m];
                let Some(o) = occ.get(dest) else {
                    status[m] = Move::Success;
                    changed = true;
                    continue;
                };
                if let Some(om) = mover_of(o, &movers) {
                    match status[om] {
                        Move::Pending => continue,
                        Move::Success => {
                            status[m] = Move::Success;
                            changed = true;
                            continue;
                        }
                        Move::Failed => {}
                    }
                }
                let team = self.units[i].owner.expect("movers belong to a team");
                let occupant = &self.units[o];
                status[m] = Move::Failed;
                changed = true;
                match occupant.class {
                    UnitClass::Wall => {
                        if ram {
                            destroyed.push(i);
                        }
                    }
                    UnitClass::Flag => {
                        if cfg.mode == GameMode::CaptureTheFlag
                            && occupant.is_enemy_of(team)
                            && self.units[i].class.is_land()
                            && !captured.contains(&team)
                        {
                            captured.push(team);
                        }
                    }
                    _ => {
                        if ram && occupant.is_enemy_of(team) {
                            destroyed.push(o);
                            occ.clear(dest);
                            status[m] = Move::Success;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // Whatever is still pending moves in a closed cycle.
        for (m, &(i, _, _)) in movers.iter().enumerate() {
            if status[m] != Move::Failed {
                occ.clear(self.units[i].position);
            }
        }
        for (m, &(i, dest, _)) in movers.iter().enumerate() {
            if status[m] != Move::Failed {
                self.units[i].position = dest;
                occ.set(dest, i);
            }
        }
        for &d in &destroyed {
            self.units[d].health = 0;
        }

        // Phase 5: bookkeeping and terminal check.
        self.units.retain(|u| u.is_alive() || !u.class.is_projectile());
        self.round += 1;
        let alive: Vec<TeamId> = cfg.teams().filter(|&t| self.team_alive(t)).collect();
        let result = if !captured.is_empty() {
            Some(if captured.len() == 1 { GameResult::Winner(captured[0]) } else { GameResult::Draw })
        } else if alive.len() <= 1 {
            Some(alive.first().map_or(GameResult::Draw, |&t| GameResult::Winner(t)))
        } else if self.round >= cfg.max_rounds {
            Some(GameResult::Draw)
        } else {
            None
        };
        if let Some(r) = result {
            self.result = Some(r);
            self.phase = Phase::Finished;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Orientation as O;
    use alloc::sync::Arc;

    fn unit(id: UnitId, player: PlayerId, class: UnitClass, pos: (i32, i32, i32), o: O) -> Unit {
        Unit {
            id,
            owner: if class == UnitClass::Wall { None } else { Some(player) },
            player: if class == UnitClass::Wall { None } else { Some(player) },
            class,
            position: Position(pos.0, pos.1, pos.2),
            orientation: o,
            health: 1,
            visible_range: 1,
        }
    }

    fn board(cfg: GameConfig, units: Vec<Unit>) -> GameState {
        let next = units.iter().map(|u| u.id + 1).max().unwrap_or(0).max(cfg.wall_base_id() + cfg.wall_count);
        let mut units = units;
        units.sort_by_key(|u| u.id);
        let s = GameState {
            config: Arc::new(cfg),
            units,
            round: 0,
            phase: Phase::Playing,
            result: None,
            next_unit_id: next,
            seed: 0,
            deployed: vec![0, 1],
        };
        s.check_invariants().unwrap();
        s
    }

    fn joint(entries: &[(PlayerId, UnitId, Action)]) -> JointMove {
        let mut j = JointMove::new();
        for &(p, u, a) in entries {
            j.entry(p).or_default().insert(u, a);
        }
        j
    }

    fn soldier(id: UnitId, player: PlayerId, x: i32, y: i32, o: O) -> Unit {
        unit(id, player, UnitClass::Soldier, (x, y, 0), o)
    }

    #[test]
    fn centre_land_unit_has_all_twelve() {
        let s = board(GameConfig::default(), vec![soldier(0, 0, 2, 2, O::NORTH), soldier(1, 1, 0, 0, O::NORTH)]);
        assert_eq!(legal_actions(&s, 0).unwrap().len(), 12);
    }

    #[test]
    fn edge_unit_facing_out_loses_ram_and_advance() {
        // Oracle: from (2,4) facing north the forward square is (2,5), off a
        // 5-long board; all non-moving actions stay legal.
        let s = board(GameConfig::default(), vec![soldier(0, 0, 2, 4, O::NORTH), soldier(1, 1, 0, 0, O::NORTH)]);
        let legal = legal_actions(&s, 0).unwrap();
        assert_eq!(legal.len(), 10);
        assert!(!legal.contains(&Action::Ram));
        assert!(!legal.contains(&Action::Advance1));
        assert!(legal.contains(&Action::Shoot));
        assert!(legal.contains(&Action::DoNothing));
        // Corner facing diagonally out as well.
        let c = board(GameConfig::default(), vec![soldier(0, 0, 0, 0, O(-1, -1, 0)), soldier(1, 1, 4, 4, O::NORTH)]);
        assert_eq!(legal_actions(&c, 0).unwrap().len(), 10);
    }

    #[test]
    fn centre_airplane_has_all_twenty_four() {
        let cfg = GameConfig { height: 2, units_per_player: vec![UnitClass::Airplane], ..Default::default() };
        let s = board(cfg, vec![unit(0, 0, UnitClass::Airplane, (2, 2, 1), O::NORTH), unit(1, 1, UnitClass::Airplane, (0, 0, 1), O::NORTH)]);
        assert_eq!(legal_actions(&s, 0).unwrap().len(), 24);
        // Oracle for the corner: of the 13 offsets |a|+|b|<=2, only
        // (0,0),(1,0),(2,0),(0,1),(1,1),(0,2) stay on the board from (0,0).
        let corner = legal_actions(&s, 1).unwrap();
        assert_eq!(corner.len(), 11 + 6);
    }

    #[test]
    fn legal_actions_errors() {
        let cfg = GameConfig { wall_count: 5, ..Default::default() };
        let mut units = crate::state::new_game(cfg.clone()).unwrap().units;
        units.extend([soldier(0, 0, 2, 0, O::NORTH), soldier(1, 1, 2, 4, O::SOUTH)]);
        let mut s = board(cfg, units);
        assert!(matches!(legal_actions(&s, 77), Err(Error::UnknownUnit(77))));
        let wall = s.units.iter().find(|u| u.class == UnitClass::Wall).unwrap().id;
        assert!(matches!(legal_actions(&s, wall), Err(Error::NotPlayable(_))));
        s.units[0].health = 0;
        assert!(matches!(legal_actions(&s, 0), Err(Error::NotPlayable(0))));
    }

    #[test]
    fn ram_destroys_enemy_and_takes_square() {
        let cfg = GameConfig { units_per_player: vec![UnitClass::Tank, UnitClass::Soldier], ..Default::default() };
        let s = board(cfg, vec![
            unit(0, 0, UnitClass::Tank, (1, 1, 0), O::NORTH),
            unit(1, 0, UnitClass::Soldier, (4, 0, 0), O::NORTH),
            unit(2, 1, UnitClass::Soldier, (1, 2, 0), O::EAST),
            unit(3, 1, UnitClass::Soldier, (4, 4, 0), O::SOUTH),
        ]);
        let j = joint(&[(0, 0, Action::Ram), (0, 1, Action::DoNothing), (1, 2, Action::DoNothing), (1, 3, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.unit(2).unwrap().health, 0);
        assert_eq!(n.unit(0).unwrap().position, Position(1, 2, 0));
        assert_eq!(n.phase, Phase::Playing);
    }

    #[test]
    fn idle_round_only_advances_counter() {
        let s = board(GameConfig::default(), vec![soldier(0, 0, 1, 1, O::NORTH), soldier(1, 1, 3, 3, O::SOUTH)]);
        let j = joint(&[(0, 0, Action::DoNothing), (1, 1, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        let mut expect = s.clone();
        expect.round = 1;
        assert_eq!(n, expect);
    }

    #[test]
    fn ground_missile_absorbed_by_wall() {
        let cfg = GameConfig { wall_count: 5, ..Default::default() };
        let mut units = crate::state::new_game(cfg.clone()).unwrap().units;
        units.push(soldier(0, 0, 0, 0, O::NORTH));
        units.push(soldier(1, 1, 0, 4, O::EAST));
        let s = board(cfg, units);
        // Missile spawns at (0,1), steps to (0,2): wall.
        let j = joint(&[(0, 0, Action::Shoot), (1, 1, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        assert!(n.units.iter().all(|u| u.class != UnitClass::Missile));
        let wall = n.solid_at(Position(0, 2, 0)).unwrap();
        assert_eq!(wall.class, UnitClass::Wall);
        assert!(wall.is_alive());
        assert_eq!(n.unit(1).unwrap().health, 1);
        assert_eq!(n.next_unit_id, s.next_unit_id + 1);
    }

    #[test]
    fn air_missile_flies_over_walls() {
        let cfg = GameConfig {
            height: 2,
            wall_count: 5,
            units_per_player: vec![UnitClass::Airplane],
            ..Default::default()
        };
        let mut units = crate::state::new_game(cfg.clone()).unwrap().units;
        units.push(unit(0, 0, UnitClass::Airplane, (0, 0, 1), O::NORTH));
        units.push(unit(1, 1, UnitClass::Airplane, (0, 3, 1), O::EAST));
        let s = board(cfg, units);
        let j = joint(&[(0, 0, Action::Shoot), (1, 1, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        // (0,1) -> (0,2) over the wall -> (0,3): hit.
        assert_eq!(n.unit(1).unwrap().health, 0);
        assert_eq!(n.result, Some(GameResult::Winner(0)));
        assert_eq!(reward(&n, 0), Ok(1));
        assert_eq!(reward(&n, 1), Ok(-1));
    }

    #[test]
    fn missile_persists_between_rounds() {
        let s = board(GameConfig { length: 8, ..Default::default() }, vec![soldier(0, 0, 0, 0, O::NORTH), soldier(1, 1, 0, 7, O::EAST)]);
        let j = joint(&[(0, 0, Action::Shoot), (1, 1, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        let m = n.units.iter().find(|u| u.class == UnitClass::Missile).unwrap();
        assert_eq!(m.position, Position(0, 3, 0));
        let n2 = resolve_round(&n, &j).unwrap();
        // The second missile follows; the first reached (0,5) and then the
        // soldier at (0,7) on the third round.
        let n3 = resolve_round(&n2, &joint(&[(0, 0, Action::DoNothing), (1, 1, Action::DoNothing)])).unwrap();
        assert_eq!(n3.unit(1).unwrap().health, 0);
        assert_eq!(n3.result, Some(GameResult::Winner(0)));
    }

    #[test]
    fn same_target_bounces_both() {
        let s = board(GameConfig::default(), vec![soldier(0, 0, 1, 2, O::EAST), soldier(1, 1, 3, 2, O::WEST)]);
        let j = joint(&[(0, 0, Action::Advance1), (1, 1, Action::Advance1)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.unit(0).unwrap().position, Position(1, 2, 0));
        assert_eq!(n.unit(1).unwrap().position, Position(3, 2, 0));
    }

    #[test]
    fn swap_bounces_and_chain_follows() {
        let s = board(GameConfig::default(), vec![soldier(0, 0, 1, 2, O::EAST), soldier(1, 1, 2, 2, O::WEST)]);
        let j = joint(&[(0, 0, Action::Ram), (1, 1, Action::Advance1)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.unit(0).unwrap().position, Position(1, 2, 0));
        assert_eq!(n.unit(1).unwrap().position, Position(2, 2, 0));
        assert_eq!(n.unit(1).unwrap().health, 1);

        let cfg = GameConfig { units_per_player: vec![UnitClass::Soldier, UnitClass::Soldier], ..Default::default() };
        let s = board(cfg, vec![
            soldier(0, 0, 0, 2, O::EAST),
            soldier(1, 0, 1, 2, O::EAST),
            soldier(2, 1, 4, 4, O::NORTH),
            soldier(3, 1, 4, 0, O::NORTH),
        ]);
        let j = joint(&[(0, 0, Action::Advance1), (0, 1, Action::Advance1), (1, 2, Action::DoNothing), (1, 3, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.unit(0).unwrap().position, Position(1, 2, 0));
        assert_eq!(n.unit(1).unwrap().position, Position(2, 2, 0));
    }

    #[test]
    fn blocked_by_friend_and_wall_rules() {
        let cfg = GameConfig {
            units_per_player: vec![UnitClass::Soldier, UnitClass::Tank],
            wall_count: 5,
            ..Default::default()
        };
        let mut units = crate::state::new_game(cfg.clone()).unwrap().units;
        units.push(unit(0, 0, UnitClass::Soldier, (0, 1, 0), O::NORTH));
        units.push(unit(1, 0, UnitClass::Tank, (1, 1, 0), O::WEST));
        units.push(soldier(2, 1, 4, 4, O::NORTH));
        units.push(soldier(3, 1, 3, 4, O::NORTH));
        let s = board(cfg, units);
        // Soldier rams the wall at (0,2); tank rams its friend (0,1).
        let j = joint(&[(0, 0, Action::Ram), (0, 1, Action::Ram), (1, 2, Action::DoNothing), (1, 3, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.unit(0).unwrap().health, 0, "ramming a wall destroys the rammer");
        assert_eq!(n.unit(1).unwrap().health, 1);
        assert_eq!(n.unit(1).unwrap().position, Position(1, 1, 0), "friendly ram is blocked");
        assert!(n.solid_at(Position(0, 2, 0)).is_some());
        // Plain advance into a wall is just blocked.
        let j = joint(&[(0, 0, Action::Advance1), (0, 1, Action::DoNothing), (1, 2, Action::DoNothing), (1, 3, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.unit(0).unwrap().position, Position(0, 1, 0));
        assert_eq!(n.unit(0).unwrap().health, 1);
    }

    #[test]
    fn bomb_hits_ground_square() {
        let cfg = GameConfig {
            height: 2,
            units_per_player: vec![UnitClass::Airplane, UnitClass::Soldier],
            ..Default::default()
        };
        let s = board(cfg, vec![
            unit(0, 0, UnitClass::Airplane, (2, 2, 1), O::NORTH),
            unit(1, 0, UnitClass::Soldier, (0, 0, 0), O::NORTH),
            unit(2, 1, UnitClass::Airplane, (4, 4, 1), O::NORTH),
            unit(3, 1, UnitClass::Soldier, (2, 2, 0), O::NORTH),
        ]);
        let j = joint(&[(0, 0, Action::Bomb), (0, 1, Action::DoNothing), (1, 2, Action::DoNothing), (1, 3, Action::Advance1)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.unit(3).unwrap().health, 0, "bomb lands before movement");
        assert!(n.units.iter().all(|u| u.class != UnitClass::Bomb));
        assert_eq!(n.phase, Phase::Playing);
    }

    #[test]
    fn mutual_destruction_is_a_draw() {
        let s = board(GameConfig::default(), vec![soldier(0, 0, 2, 0, O::NORTH), soldier(1, 1, 2, 3, O::SOUTH)]);
        let j = joint(&[(0, 0, Action::Shoot), (1, 1, Action::Shoot)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.unit(0).unwrap().health, 0);
        assert_eq!(n.unit(1).unwrap().health, 0);
        assert_eq!(n.result, Some(GameResult::Draw));
        assert_eq!(reward(&n, 0), Ok(0));
        assert_eq!(reward(&n, 1), Ok(0));
    }

    #[test]
    fn round_limit_is_a_draw() {
        let cfg = GameConfig { max_rounds: 2, ..Default::default() };
        let s = board(cfg, vec![soldier(0, 0, 1, 1, O::NORTH), soldier(1, 1, 3, 3, O::SOUTH)]);
        let j = joint(&[(0, 0, Action::DoNothing), (1, 1, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.phase, Phase::Playing);
        assert!(matches!(reward(&n, 0), Err(Error::NotFinished)));
        let n = resolve_round(&n, &j).unwrap();
        assert_eq!(n.result, Some(GameResult::Draw));
        assert_eq!(n.round, 2);
        assert!(matches!(resolve_round(&n, &j), Err(Error::WrongPhase { .. })));
    }

    #[test]
    fn flag_capture_by_ground_unit() {
        let cfg = GameConfig {
            units_per_player: vec![UnitClass::Soldier, UnitClass::Flag],
            mode: GameMode::CaptureTheFlag,
            ..Default::default()
        };
        let s = board(cfg, vec![
            soldier(0, 0, 2, 2, O::NORTH),
            unit(1, 0, UnitClass::Flag, (0, 0, 0), O::SOUTH),
            soldier(2, 1, 4, 4, O::SOUTH),
            unit(3, 1, UnitClass::Flag, (2, 3, 0), O::SOUTH),
        ]);
        let j = joint(&[(0, 0, Action::Advance1), (1, 2, Action::DoNothing)]);
        let n = resolve_round(&s, &j).unwrap();
        assert_eq!(n.result, Some(GameResult::Winner(0)));
        assert_eq!(n.unit(0).unwrap().position, Position(2, 2, 0));
        assert!(n.unit(3).unwrap().is_alive());
    }

    #[test]
    fn validation_errors() {
        let s = board(GameConfig::default(), vec![soldier(0, 0, 2, 4, O::NORTH), soldier(1, 1, 3, 3, O::SOUTH)]);
        let j = joint(&[(0, 0, Action::Advance1), (1, 1, Action::DoNothing)]);
        assert!(matches!(resolve_round(&s, &j), Err(Error::IllegalAction { unit: 0, action: Action::Advance1 })));
        let j = joint(&[(0, 0, Action::DoNothing)]);
        assert!(matches!(resolve_round(&s, &j), Err(Error::MissingTurn(1))));
        let j = joint(&[(0, 0, Action::DoNothing), (1, 0, Action::DoNothing)]);
        assert!(matches!(resolve_round(&s, &j), Err(Error::ForeignUnit { player: 1, unit: 0 })));
        let j = joint(&[(0, 0, Action::Bomb), (1, 1, Action::DoNothing)]);
        assert!(matches!(resolve_round(&s, &j), Err(Error::IllegalAction { .. })));
    }
}
