//! The per-unit action tables for land and air units.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::unit::UnitClass;

/// One unit's action for a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    /// Move forward one square, destroying an enemy standing there.
    Ram,
    /// Move forward one square.
    Advance1,
    /// Fire a missile along the current heading.
    Shoot,
    DoNothing,
    /// Rotate counter-clockwise by the given number of degrees.
    Turn(i16),
    /// Drop a bomb onto the ground square below (air only).
    Bomb,
    /// Translate by an absolute board offset, keeping the heading (air only).
    AdvanceBy(i8, i8),
}

pub const TURN_ANGLES: [i16; 8] = [-135, -90, -45, 0, 45, 90, 135, 180];

pub const LAND_ACTIONS: [Action; 12] = [
    Action::Ram,
    Action::Advance1,
    Action::Shoot,
    Action::DoNothing,
    Action::Turn(-135),
    Action::Turn(-90),
    Action::Turn(-45),
    Action::Turn(0),
    Action::Turn(45),
    Action::Turn(90),
    Action::Turn(135),
    Action::Turn(180),
];

pub const AIR_OFFSETS: [(i8, i8); 13] = [
    (0, -2),
    (-1, -1),
    (0, -1),
    (1, -1),
    (-2, 0),
    (-1, 0),
    (0, 0),
    (1, 0),
    (2, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (0, 2),
];

pub const AIR_ACTIONS: [Action; 24] = [
    Action::Shoot,
    Action::DoNothing,
    Action::Turn(-135),
    Action::Turn(-90),
    Action::Turn(-45),
    Action::Turn(0),
    Action::Turn(45),
    Action::Turn(90),
    Action::Turn(135),
    Action::Turn(180),
    Action::Bomb,
    Action::AdvanceBy(0, -2),
    Action::AdvanceBy(-1, -1),
    Action::AdvanceBy(0, -1),
    Action::AdvanceBy(1, -1),
    Action::AdvanceBy(-2, 0),
    Action::AdvanceBy(-1, 0),
    Action::AdvanceBy(0, 0),
    Action::AdvanceBy(1, 0),
    Action::AdvanceBy(2, 0),
    Action::AdvanceBy(-1, 1),
    Action::AdvanceBy(0, 1),
    Action::AdvanceBy(1, 1),
    Action::AdvanceBy(0, 2),
];

/// Which action table a unit draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Land,
    Air,
}

impl Domain {
    pub fn of(class: UnitClass) -> Option<Domain> {
        if class.is_land() {
            Some(Domain::Land)
        } else if class.is_air() {
            Some(Domain::Air)
        } else {
            None
        }
    }

    pub fn actions(self) -> &'static [Action] {
        match self {
            Domain::Land => &LAND_ACTIONS,
            Domain::Air => &AIR_ACTIONS,
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.actions().len()
    }

    pub fn index_of(self, action: Action) -> Option<usize> {
        self.actions().iter().position(|&a| a == action)
    }

    pub fn contains(self, action: Action) -> bool {
        self.index_of(action).is_some()
    }
}

impl Action {
    /// Whether the action can translate a unit or create a projectile.
    pub fn is_impactful(self) -> bool {
        matches!(
            self,
            Action::Ram | Action::Advance1 | Action::Shoot | Action::Bomb | Action::AdvanceBy(..)
        )
    }

    pub fn is_turn(self) -> bool {
        matches!(self, Action::Turn(_))
    }

    pub fn is_air_only(self) -> bool {
        matches!(self, Action::Bomb | Action::AdvanceBy(..))
    }

    /// Board offset of a movement action, if any, for a unit facing `(ox, oy)`.
    pub fn displacement(self, ox: i8, oy: i8) -> Option<(i32, i32)> {
        match self {
            Action::Ram | Action::Advance1 => Some((ox as i32, oy as i32)),
            Action::AdvanceBy(0, 0) => None,
            Action::AdvanceBy(a, b) => Some((a as i32, b as i32)),
            _ => None,
        }
    }

    /// Same action after the board is turned half-way round.
    pub fn point_reflect(self) -> Action {
        match self {
            Action::AdvanceBy(a, b) => Action::AdvanceBy(-a, -b),
            other => other,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Ram => f.write_str("ram"),
            Action::Advance1 => f.write_str("advance1"),
            Action::Shoot => f.write_str("shoot"),
            Action::DoNothing => f.write_str("doNothing"),
            Action::Turn(d) => write!(f, "turn{d}"),
            Action::Bomb => f.write_str("bomb"),
            Action::AdvanceBy(a, b) => write!(f, "advance{a},{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown action {0:?}")]
pub struct ParseActionError(pub String);

impl FromStr for Action {
    type Err = ParseActionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseActionError(String::from(s));
        let parsed = match s {
            "ram" => Action::Ram,
            "advance1" => Action::Advance1,
            "shoot" => Action::Shoot,
            "doNothing" => Action::DoNothing,
            "bomb" => Action::Bomb,
            _ => {
                if let Some(deg) = s.strip_prefix("turn") {
                    let d: i16 = deg.parse().map_err(|_| err())?;
                    Action::Turn(d)
                } else if let Some(rest) = s.strip_prefix("advance") {
                    let (a, b) = rest.split_once(',').ok_or_else(err)?;
                    Action::AdvanceBy(a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?)
                } else {
                    return Err(err());
                }
            }
        };
        if LAND_ACTIONS.contains(&parsed) || AIR_ACTIONS.contains(&parsed) {
            Ok(parsed)
        } else {
            Err(err())
        }
    }
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Action {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <alloc::borrow::Cow<'de, str>>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn table_sizes() {
        assert_eq!(LAND_ACTIONS.len(), 12);
        assert_eq!(AIR_ACTIONS.len(), 24);
        let advances = AIR_ACTIONS.iter().filter(|a| matches!(a, Action::AdvanceBy(..))).count();
        assert_eq!(advances, 13);
    }

    #[test]
    fn labels_round_trip() {
        for a in LAND_ACTIONS.iter().chain(AIR_ACTIONS.iter()) {
            let label = a.to_string();
            assert_eq!(label.parse::<Action>().unwrap(), *a, "{label}");
        }
        assert_eq!(Action::AdvanceBy(-1, 1).to_string(), "advance-1,1");
        assert_eq!(Action::Turn(-135).to_string(), "turn-135");
        assert!("turn30".parse::<Action>().is_err());
        assert!("advance3,0".parse::<Action>().is_err());
        assert!("fly".parse::<Action>().is_err());
    }

    #[test]
    fn impact_partition_of_land_set() {
        let impactful: alloc::vec::Vec<_> =
            LAND_ACTIONS.iter().filter(|a| a.is_impactful()).collect();
        assert_eq!(impactful, [&Action::Ram, &Action::Advance1, &Action::Shoot]);
    }
}
