use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observe::BoardView;
use crate::unit::{PlayerId, TeamId, Unit};

/// `owner, unitID, unitClass, visibleRange, health, x, y, z, ox, oy, oz`.
pub const HEADER_LEN: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitFeatures {
    pub unit_id: u32,
    pub features: Vec<i32>,
}

/// Per-unit feature vectors, ascending unit ID.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListEncoding {
    pub per_unit: Vec<UnitFeatures>,
}

impl ListEncoding {
    pub fn feature_len(&self) -> Option<usize> {
        self.per_unit.first().map(|u| u.features.len())
    }
}

/// Neighbourhood scan order: rows north to south, each row west to east,
/// centre skipped.
pub fn neighbourhood_offsets(range: u32) -> impl Iterator<Item = (i32, i32)> {
    let r = range as i32;
    (-r..=r)
        .rev()
        .flat_map(move |dy| (-r..=r).map(move |dx| (dx, dy)))
        .filter(|&(dx, dy)| dx != 0 || dy != 0)
}

fn code_at(units: &[Unit], team: TeamId, x: i32, y: i32) -> i32 {
    let mut code = 0;
    for u in units.iter().filter(|u| u.is_solid() && u.position.0 == x && u.position.1 == y) {
        match u.owner {
            Some(t) if t != team => return 2,
            Some(_) => code = 1,
            None => {}
        }
    }
    code
}

/// One vector per living playable unit of `player`: the 11-entry header,
/// then `0` (empty / off board), `1` (friendly) or `2` (enemy) for every
/// square within the unit's visible range.
pub fn encode_list(view: &impl BoardView, player: PlayerId) -> Result<ListEncoding> {
    let cfg = view.config();
    if !cfg.has_player(player) {
        return Err(Error::UnknownPlayer(player));
    }
    let team = cfg.team_of(player);
    let units = view.units();
    let per_unit = units
        .iter()
        .filter(|u| u.player == Some(player) && u.is_playable())
        .map(|u| {
            let mut f = Vec::with_capacity(HEADER_LEN + ((2 * u.visible_range + 1).pow(2) - 1) as usize);
            f.extend_from_slice(&[
                i32::from(u.owner.unwrap_or(0)),
                u.id as i32,
                i32::from(u.class.code()),
                u.visible_range as i32,
                i32::from(u.health),
                u.position.0,
                u.position.1,
                u.position.2,
                i32::from(u.orientation.0),
                i32::from(u.orientation.1),
                i32::from(u.orientation.2),
            ]);
            for (dx, dy) in neighbourhood_offsets(u.visible_range) {
                let (x, y) = (u.position.0 + dx, u.position.1 + dy);
                let code = if cfg.in_bounds(x, y, 0) { code_at(units, team, x, y) } else { 0 };
                f.push(code);
            }
            UnitFeatures { unit_id: u.id, features: f }
        })
        .collect();
    Ok(ListEncoding { per_unit })
}
