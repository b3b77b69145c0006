//! Random boards for headless play and training data.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::config::GameConfig;
use crate::error::{Error, Result};
use crate::geometry::{Orientation, Position};
use crate::rng::{rng_from, GameRng};
use crate::state::{deploy, deployment_region, new_game, GameState, Phase, Placement};
use crate::unit::{PlayerId, Unit, UnitClass};

fn random_heading(class: UnitClass, rng: &mut GameRng) -> Orientation {
    if class.is_immovable() {
        Orientation::SOUTH
    } else {
        Orientation::from_index(rng.gen_range(0..8)).expect("planar index")
    }
}

/// Every roster unit of every player dropped on a uniformly random free
/// square of its layer, with a uniformly random heading. Deployment regions
/// are ignored, so boards look like mid- or end-game positions.
pub fn random_board(config: &GameConfig, seed: u64) -> Result<GameState> {
    let mut state = new_game(config.clone())?;
    let cfg = state.config.clone();
    let mut rng = rng_from(seed);
    let mut free: [Vec<Position>; 2] = [Vec::new(), Vec::new()];
    for z in 0..cfg.height as i32 {
        for y in 0..cfg.length as i32 {
            for x in 0..cfg.width as i32 {
                let p = Position(x, y, z);
                if state.solid_at(p).is_none() {
                    free[z as usize].push(p);
                }
            }
        }
    }
    for player in cfg.players() {
        for (slot, &class) in cfg.units_per_player.iter().enumerate() {
            let layer = &mut free[cfg.layer_of(class) as usize];
            if layer.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "no free square left for player {player}'s {}",
                    class.name()
                )));
            }
            let position = layer.swap_remove(rng.gen_range(0..layer.len()));
            let orientation = random_heading(class, &mut rng);
            state.units.push(Unit {
                id: cfg.unit_id_for(player, slot),
                owner: Some(cfg.team_of(player)),
                player: Some(player),
                class,
                position,
                orientation,
                health: 1,
                visible_range: cfg.visible_range_default,
            });
        }
    }
    state.units.sort_by_key(|u| u.id);
    state.deployed = cfg.players().collect();
    state.phase = Phase::Playing;
    state.seed = seed;
    Ok(state)
}

/// Random legal placements for a player inside their deployment region.
pub fn random_placements(state: &GameState, player: PlayerId, rng: &mut GameRng) -> Result<Vec<Placement>> {
    let cfg = &state.config;
    if !cfg.has_player(player) {
        return Err(Error::UnknownPlayer(player));
    }
    let region = deployment_region(cfg, player);
    let mut taken: Vec<Position> = Vec::new();
    let mut out = Vec::new();
    for &class in &cfg.units_per_player {
        let z = cfg.layer_of(class);
        let free: Vec<Position> = region
            .squares()
            .map(|(x, y)| Position(x, y, z))
            .filter(|p| state.solid_at(*p).is_none() && !taken.contains(p))
            .collect();
        if free.is_empty() {
            return Err(Error::InvalidDeployment(format!("region of player {player} is full")));
        }
        let position = free[rng.gen_range(0..free.len())];
        taken.push(position);
        out.push(Placement { unit_class: class, position, orientation: random_heading(class, rng) });
    }
    Ok(out)
}

/// Start a game by letting every player deploy at random.
pub fn random_deployment(config: &GameConfig, seed: u64) -> Result<GameState> {
    let mut state = new_game(config.clone())?;
    let mut rng = rng_from(seed);
    for player in config.players() {
        let placements = random_placements(&state, player, &mut rng)?;
        state = deploy(&state, player, &placements)?;
    }
    state.seed = seed;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn deterministic_per_seed() {
        let cfg = GameConfig::default();
        assert_eq!(random_board(&cfg, 42).unwrap(), random_board(&cfg, 42).unwrap());
        assert_ne!(random_board(&cfg, 42).unwrap(), random_board(&cfg, 43).unwrap());
    }

    #[test]
    fn one_soldier_each() {
        let s = random_board(&GameConfig::default(), 3).unwrap();
        assert_eq!(s.phase, Phase::Playing);
        assert_eq!(s.units.len(), 2);
        assert_ne!(s.units[0].position, s.units[1].position);
        s.check_invariants().unwrap();
    }

    #[test]
    fn classic_boards_are_valid() {
        for seed in 0..20 {
            let s = random_board(&GameConfig::classic(), seed).unwrap();
            s.check_invariants().unwrap();
            assert_eq!(s.units.iter().filter(|u| u.player.is_some()).count(), 20);
            let d = random_deployment(&GameConfig::classic(), seed).unwrap();
            assert_eq!(d.phase, Phase::Playing);
            d.check_invariants().unwrap();
        }
    }

    #[test]
    fn too_many_units() {
        let cfg = GameConfig {
            width: 2,
            length: 2,
            units_per_player: vec![UnitClass::Soldier, UnitClass::Soldier, UnitClass::Soldier],
            ..Default::default()
        };
        assert!(random_board(&cfg, 0).is_err());
    }
}
