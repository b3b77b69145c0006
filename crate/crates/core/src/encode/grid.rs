use alloc::format;

use super::{pack_cell, GridEncoding, Layout};
use crate::error::{Error, Result};
use crate::observe::BoardView;
use crate::unit::{Unit, UnitClass};

/// Units the grid encoders draw: alive, not projectiles.
fn drawn(view: &impl BoardView) -> impl Iterator<Item = &Unit> {
    view.units().iter().filter(|u| u.is_solid())
}

fn orientation_index(u: &Unit) -> u8 {
    u.orientation.index().expect("units carry dictionary orientations")
}

/// Bit-packed grid: channel `2p` holds player `p`'s ground units, `2p + 1`
/// their air units, then one wall channel and one all-zero action channel.
pub fn encode_binary(view: &impl BoardView) -> Result<GridEncoding> {
    let cfg = view.config();
    let players = cfg.num_players() as usize;
    let mut grid =
        GridEncoding::zeros(Layout::Binary, players * 2 + 2, cfg.width as usize, cfg.length as usize);
    for u in drawn(view) {
        let channel = match (u.class, u.player) {
            (UnitClass::Wall, _) => players * 2,
            (_, Some(p)) => p as usize * 2 + usize::from(u.position.2 > 0),
            (_, None) => continue,
        };
        let value = pack_cell(u.id, orientation_index(u), u.health).map_err(|e| match e {
            Error::OutOfRange(m) => Error::OutOfRange(format!("unit {}: {m}", u.id)),
            other => other,
        })?;
        grid.set(channel, u.position.0 as usize, u.position.1 as usize, value);
    }
    Ok(grid)
}

/// Channels each player gets in the property-layer encoding.
pub fn layers_per_player(height: u32) -> usize {
    if height > 1 {
        4
    } else {
        2
    }
}

/// Property layers: per player an occupancy channel and an orientation
/// channel (index + 1, so 0 means empty) for the ground, the same pair for
/// the air on two-layer boards, then wall and action channels.
pub fn encode_layers(view: &impl BoardView) -> Result<GridEncoding> {
    let cfg = view.config();
    let players = cfg.num_players() as usize;
    let per = layers_per_player(cfg.height);
    let mut grid =
        GridEncoding::zeros(Layout::Layers, players * per + 2, cfg.width as usize, cfg.length as usize);
    for u in drawn(view) {
        let (x, y) = (u.position.0 as usize, u.position.1 as usize);
        match (u.class, u.player) {
            (UnitClass::Wall, _) => grid.set(players * per, x, y, 1),
            (_, Some(p)) => {
                let base = p as usize * per + if u.position.2 > 0 { 2 } else { 0 };
                grid.set(base, x, y, 1);
                grid.set(base + 1, x, y, u32::from(orientation_index(u)) + 1);
            }
            (_, None) => {}
        }
    }
    Ok(grid)
}
