#![allow(dead_code)]

use std::sync::Arc;

use battlespace_core::{GameConfig, GameState, Orientation, Phase, Position, Unit, UnitClass};

pub fn unit(id: u32, player: u8, class: UnitClass, pos: (i32, i32, i32), orient: u8, health: u8) -> Unit {
    Unit {
        id,
        owner: Some(player / 2),
        player: Some(player),
        class,
        position: Position(pos.0, pos.1, pos.2),
        orientation: Orientation::from_index(orient).unwrap(),
        health,
        visible_range: 1,
    }
}

/// The four-player position behind the golden bit-packed tensor fixture.
pub fn classic_board() -> GameState {
    use UnitClass::*;
    let cfg = GameConfig::classic();
    let mut units = battlespace_core::state::new_game(cfg.clone()).unwrap().units;
    units.extend([
        unit(0, 0, Soldier, (2, 4, 0), 6, 1),
        unit(1, 0, Tank, (3, 4, 0), 2, 1),
        unit(2, 0, Truck, (0, 2, 0), 5, 1),
        unit(3, 0, Airplane, (0, 3, 1), 7, 1),
        unit(4, 0, Flag, (2, 1, 0), 4, 1),
        unit(5, 1, Soldier, (9, 0, 0), 1, 1),
        unit(6, 1, Tank, (5, 3, 0), 4, 1),
        unit(7, 1, Truck, (5, 4, 0), 5, 1),
        unit(8, 1, Airplane, (5, 4, 1), 4, 1),
        unit(9, 1, Flag, (8, 1, 0), 4, 1),
        unit(10, 2, Soldier, (1, 8, 0), 0, 0),
        unit(13, 2, Airplane, (4, 6, 1), 3, 1),
        unit(14, 2, Flag, (4, 6, 0), 4, 1),
        unit(16, 3, Tank, (7, 9, 0), 2, 0),
        unit(18, 3, Airplane, (5, 6, 1), 3, 1),
        unit(19, 3, Flag, (5, 6, 0), 4, 1),
    ]);
    units.sort_by_key(|u| u.id);
    let state = GameState {
        config: Arc::new(cfg),
        units,
        round: 7,
        phase: Phase::Playing,
        result: None,
        next_unit_id: 30,
        seed: 0,
        deployed: vec![0, 1, 2, 3],
    };
    state.check_invariants().unwrap();
    state
}
