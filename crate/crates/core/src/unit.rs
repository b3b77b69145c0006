use serde::{Deserialize, Serialize};

use crate::geometry::{Orientation, Position};

pub type UnitId = u32;
pub type PlayerId = u8;
pub type TeamId = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitClass {
    Soldier,
    Tank,
    Truck,
    Airplane,
    Flag,
    Wall,
    Missile,
    Bomb,
}

impl UnitClass {
    pub const ALL: [UnitClass; 8] = [
        UnitClass::Soldier,
        UnitClass::Tank,
        UnitClass::Truck,
        UnitClass::Airplane,
        UnitClass::Flag,
        UnitClass::Wall,
        UnitClass::Missile,
        UnitClass::Bomb,
    ];

    /// Player-controlled units: they receive an action every round.
    pub const fn is_playable(self) -> bool {
        matches!(
            self,
            UnitClass::Soldier | UnitClass::Tank | UnitClass::Truck | UnitClass::Airplane
        )
    }

    pub const fn is_land(self) -> bool {
        matches!(self, UnitClass::Soldier | UnitClass::Tank | UnitClass::Truck)
    }

    pub const fn is_air(self) -> bool {
        matches!(self, UnitClass::Airplane)
    }

    pub const fn is_projectile(self) -> bool {
        matches!(self, UnitClass::Missile | UnitClass::Bomb)
    }

    pub const fn is_immovable(self) -> bool {
        matches!(self, UnitClass::Flag | UnitClass::Wall)
    }

    /// Classes a player places during deployment.
    pub const fn is_deployable(self) -> bool {
        self.is_playable() || matches!(self, UnitClass::Flag)
    }

    /// Flags and walls survive everything.
    pub const fn is_destructible(self) -> bool {
        !self.is_immovable()
    }

    pub const fn code(self) -> u8 {
        self as u8
    }

    pub const fn name(self) -> &'static str {
        match self {
            UnitClass::Soldier => "soldier",
            UnitClass::Tank => "tank",
            UnitClass::Truck => "truck",
            UnitClass::Airplane => "airplane",
            UnitClass::Flag => "flag",
            UnitClass::Wall => "wall",
            UnitClass::Missile => "missile",
            UnitClass::Bomb => "bomb",
        }
    }

    pub fn parse(s: &str) -> Option<UnitClass> {
        match s {
            "plane" => Some(UnitClass::Airplane),
            _ => UnitClass::ALL.into_iter().find(|c| c.name() == s),
        }
    }
}

/// One game piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Unit {
    #[serde(rename = "unitID")]
    pub id: UnitId,
    /// Team; walls belong to nobody.
    #[serde(rename = "ownerID")]
    pub owner: Option<TeamId>,
    #[serde(rename = "playerID")]
    pub player: Option<PlayerId>,
    #[serde(rename = "unitClass")]
    pub class: UnitClass,
    pub position: Position,
    pub orientation: Orientation,
    pub health: u8,
    #[serde(rename = "visibleRange")]
    pub visible_range: u32,
}

impl Unit {
    pub fn is_alive(&self) -> bool {
        self.health > 0
    }

    pub fn is_playable(&self) -> bool {
        self.class.is_playable() && self.is_alive()
    }

    /// Alive, not a projectile: occupies its square exclusively.
    pub fn is_solid(&self) -> bool {
        self.is_alive() && !self.class.is_projectile()
    }

    pub fn is_enemy_of(&self, team: TeamId) -> bool {
        matches!(self.owner, Some(t) if t != team)
    }

    pub fn is_friend_of(&self, team: TeamId) -> bool {
        self.owner == Some(team)
    }
}
