//! Board coordinates and unit headings.

use core::fmt;

use serde::{Deserialize, Serialize};

/// A square on the board: `x` runs along the width, `y` along the length and
/// `z` is the layer (0 = ground, 1 = air).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Position(pub i32, pub i32, pub i32);

impl Position {
    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Position(x, y, z)
    }

    pub const fn x(self) -> i32 {
        self.0
    }

    pub const fn y(self) -> i32 {
        self.1
    }

    pub const fn z(self) -> i32 {
        self.2
    }

    pub const fn offset(self, dx: i32, dy: i32, dz: i32) -> Self {
        Position(self.0 + dx, self.1 + dy, self.2 + dz)
    }

    /// One step along a heading.
    pub const fn step(self, o: Orientation) -> Self {
        self.offset(o.0 as i32, o.1 as i32, o.2 as i32)
    }

    pub const fn with_z(self, z: i32) -> Self {
        Position(self.0, self.1, z)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0, self.1, self.2)
    }
}

/// Unit heading, each component in {-1, 0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Orientation(pub i8, pub i8, pub i8);

/// Orientation dictionary: index -> heading. Indices 0..8 run clockwise from
/// north; index 8 is the downward heading only bombs use.
pub const ORIENTATIONS: [Orientation; 9] = [
    Orientation(0, 1, 0),
    Orientation(1, 1, 0),
    Orientation(1, 0, 0),
    Orientation(1, -1, 0),
    Orientation(0, -1, 0),
    Orientation(-1, -1, 0),
    Orientation(-1, 0, 0),
    Orientation(-1, 1, 0),
    Orientation(0, 0, -1),
];

impl Orientation {
    pub const NORTH: Orientation = Orientation(0, 1, 0);
    pub const EAST: Orientation = Orientation(1, 0, 0);
    pub const SOUTH: Orientation = Orientation(0, -1, 0);
    pub const WEST: Orientation = Orientation(-1, 0, 0);
    pub const DOWN: Orientation = Orientation(0, 0, -1);

    /// The eight planar headings, in dictionary order.
    pub fn planar() -> impl Iterator<Item = Orientation> {
        ORIENTATIONS[..8].iter().copied()
    }

    pub fn index(self) -> Option<u8> {
        ORIENTATIONS.iter().position(|&o| o == self).map(|i| i as u8)
    }

    pub fn from_index(index: u8) -> Option<Orientation> {
        ORIENTATIONS.get(index as usize).copied()
    }

    pub fn is_planar(self) -> bool {
        self.2 == 0 && (self.0 != 0 || self.1 != 0)
    }

    pub fn is_valid(self) -> bool {
        self.index().is_some()
    }

    /// Rotate a planar heading counter-clockwise by `degrees` (a multiple of
    /// 45). Negative values turn clockwise. Non-planar headings are returned
    /// unchanged.
    pub fn rotate(self, degrees: i16) -> Orientation {
        match self.index() {
            Some(i) if i < 8 => {
                let steps = i32::from(degrees / 45);
                let idx = (i32::from(i) - steps).rem_euclid(8) as u8;
                ORIENTATIONS[idx as usize]
            }
            _ => self,
        }
    }

    /// Heading after a half-turn of the whole board.
    pub fn point_reflect(self) -> Orientation {
        Orientation(-self.0, -self.1, self.2)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0, self.1, self.2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictionary_round_trips() {
        for i in 0..9u8 {
            assert_eq!(Orientation::from_index(i).unwrap().index(), Some(i));
        }
        assert_eq!(Orientation(0, 0, 0).index(), None);
        assert_eq!(Orientation::from_index(9), None);
    }

    #[test]
    fn rotation_is_counter_clockwise() {
        assert_eq!(Orientation::NORTH.rotate(90), Orientation::WEST);
        assert_eq!(Orientation::NORTH.rotate(-90), Orientation::EAST);
        assert_eq!(Orientation::NORTH.rotate(45), Orientation(-1, 1, 0));
        assert_eq!(Orientation::EAST.rotate(180), Orientation::WEST);
        assert_eq!(Orientation::SOUTH.rotate(0), Orientation::SOUTH);
        assert_eq!(Orientation::DOWN.rotate(90), Orientation::DOWN);
        for o in Orientation::planar() {
            assert_eq!(o.rotate(135).rotate(-135), o);
            assert_eq!(o.rotate(180), o.point_reflect());
        }
    }
}
