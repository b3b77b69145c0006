mod common;

use battlespace_core::encode::{encode_binary, encode_layers, encode_list, pack_cell, unpack_cell, Layout};
use battlespace_core::{GameConfig, UnitClass};

#[test]
fn classic_board_cells() {
    let g = encode_binary(&common::classic_board()).unwrap();
    assert_eq!(g.layout, Layout::Binary);
    assert_eq!(g.shape(), [10, 10, 11]);
    // (channel, row, col, value) as printed.
    let expected = [
        (0, 0, 2, 75),
        (0, 2, 1, 137),
        (0, 2, 4, 13),
        (0, 3, 4, 37),
        (1, 0, 3, 111),
        (2, 5, 3, 201),
        (2, 5, 4, 235),
        (2, 8, 1, 297),
        (2, 9, 0, 163),
        (3, 5, 4, 265),
        (4, 4, 6, 457),
        (5, 4, 6, 423),
        (6, 5, 6, 617),
        (7, 5, 6, 583),
        (8, 0, 5, 649),
        (8, 1, 5, 681),
        (8, 2, 5, 713),
        (8, 3, 5, 745),
        (8, 5, 5, 809),
        (8, 6, 5, 841),
        (8, 7, 5, 873),
        (8, 8, 5, 905),
        (8, 9, 5, 937),
    ];
    for &(c, x, y, v) in &expected {
        assert_eq!(g.get(c, x, y), v, "channel {c} row {x} col {y}");
    }
    assert_eq!(g.data.iter().filter(|&&v| v != 0).count(), expected.len());
    assert!(g.channel(9).iter().all(|&v| v == 0));
}

#[test]
fn bit_layout() {
    assert_eq!(pack_cell(2, 5, 1).unwrap(), 75);
    assert_eq!(pack_cell(4, 4, 1).unwrap(), 137);
    assert_eq!(pack_cell(20, 4, 1).unwrap(), 649);
    assert_eq!(pack_cell(29, 4, 1).unwrap(), 937);
    assert!(pack_cell(32, 0, 1).is_err());
    assert!(pack_cell(0, 9, 1).is_err());
    assert!(pack_cell(0, 0, 2).is_err());
    for id in 0..32 {
        for o in 0..9 {
            for h in 0..2 {
                assert_eq!(unpack_cell(pack_cell(id, o, h).unwrap()), (id, o, h));
            }
        }
    }
}

#[test]
fn channel_counts() {
    for ppt in [1, 2] {
        let cfg = GameConfig { players_per_team: ppt, ..GameConfig::default() };
        let s = battlespace_core::board_gen::random_board(&cfg, 1).unwrap();
        assert_eq!(encode_binary(&s).unwrap().channels, cfg.num_players() as usize * 2 + 2);
    }
    let ground = GameConfig { units_per_player: vec![UnitClass::Soldier, UnitClass::Tank], ..Default::default() };
    let s = battlespace_core::board_gen::random_board(&ground, 2).unwrap();
    assert_eq!(encode_layers(&s).unwrap().channels, 6);
    let l = encode_list(&s, 0).unwrap();
    assert_eq!(l.per_unit.len(), 2);
    assert_eq!(l.feature_len(), Some(19));
}

#[test]
fn list_vector_for_a_known_unit() {
    let s = common::classic_board();
    let l = encode_list(&s, 0).unwrap();
    let ids: Vec<u32> = l.per_unit.iter().map(|u| u.unit_id).collect();
    assert_eq!(ids, [0, 1, 2, 3]);
    // Soldier 0 at (2, 4) facing west; tank 1 is its east neighbour.
    let f = &l.per_unit[0].features;
    assert_eq!(&f[..11], &[0, 0, UnitClass::Soldier.code() as i32, 1, 1, 2, 4, 0, -1, 0, 0]);
    // Neighbourhood rows north to south, west to east:
    // (1,5) (2,5) (3,5) / (1,4) (3,4) / (1,3) (2,3) (3,3).
    assert_eq!(&f[11..], &[0, 0, 0, 0, 1, 0, 0, 0]);
}
