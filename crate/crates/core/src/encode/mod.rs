//! The three numeric board representations.
//!
//! * [`encode_binary`]: two channels per player (ground, air) holding a
//!   bit-packed `unitID | orientation | health` integer per occupied cell,
//!   then a wall channel and an always-zero action-history channel.
//! * [`encode_layers`]: one channel per property per player (occupancy,
//!   orientation index + 1), same trailing channels.
//! * [`encode_list`]: one feature vector per playable unit of a player.
//!
//! Grids are channel-major with cells indexed `[channel][x][y]`.

mod cell;
mod grid;
mod list;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use cell::{pack_cell, unpack_cell, HEALTH_BITS, ORIENTATION_BITS, UNIT_ID_BITS};
pub use grid::{encode_binary, encode_layers, layers_per_player};
pub use list::{encode_list, neighbourhood_offsets, ListEncoding, UnitFeatures, HEADER_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Bit-packed cells, two channels per player.
    Binary,
    /// One channel per property.
    Layers,
    /// Per-unit feature vectors.
    List,
}

impl Layout {
    pub fn tag(self) -> u32 {
        match self {
            Layout::Binary => 1,
            Layout::Layers => 2,
            Layout::List => 3,
        }
    }

    pub fn from_tag(tag: u32) -> Option<Layout> {
        match tag {
            1 => Some(Layout::Binary),
            2 => Some(Layout::Layers),
            3 => Some(Layout::List),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Option<Layout> {
        match s {
            "binary" => Some(Layout::Binary),
            "layers" => Some(Layout::Layers),
            "list" => Some(Layout::List),
            _ => None,
        }
    }
}

/// Channel-major grid of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEncoding {
    pub layout: Layout,
    pub channels: usize,
    pub width: usize,
    pub length: usize,
    pub data: Vec<u32>,
}

impl GridEncoding {
    pub fn zeros(layout: Layout, channels: usize, width: usize, length: usize) -> Self {
        GridEncoding { layout, channels, width, length, data: alloc::vec![0; channels * width * length] }
    }

    #[inline]
    pub fn index(&self, channel: usize, x: usize, y: usize) -> usize {
        (channel * self.width + x) * self.length + y
    }

    pub fn get(&self, channel: usize, x: usize, y: usize) -> u32 {
        self.data[self.index(channel, x, y)]
    }

    pub fn set(&mut self, channel: usize, x: usize, y: usize, value: u32) {
        let i = self.index(channel, x, y);
        self.data[i] = value;
    }

    pub fn channel(&self, channel: usize) -> &[u32] {
        let n = self.width * self.length;
        &self.data[channel * n..(channel + 1) * n]
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.channels, self.width, self.length]
    }
}
