use alloc::format;

use crate::error::{Error, Result};

pub const UNIT_ID_BITS: u32 = 5;
pub const ORIENTATION_BITS: u32 = 4;
pub const HEALTH_BITS: u32 = 1;

/// Concatenate `unitID | orientation | health` as 5, 4 and 1 bits.
pub fn pack_cell(unit_id: u32, orientation: u8, health: u8) -> Result<u32> {
    if unit_id >= 1 << UNIT_ID_BITS {
        return Err(Error::OutOfRange(format!("unit ID {unit_id} does not fit in {UNIT_ID_BITS} bits")));
    }
    if orientation > 8 {
        return Err(Error::OutOfRange(format!("orientation index {orientation} above 8")));
    }
    if health > 1 {
        return Err(Error::OutOfRange(format!("health {health} does not fit in {HEALTH_BITS} bit")));
    }
    Ok((unit_id << (ORIENTATION_BITS + HEALTH_BITS)) | (u32::from(orientation) << HEALTH_BITS) | u32::from(health))
}

/// Split a 10-bit cell back into `(unitID, orientation, health)`.
pub fn unpack_cell(value: u32) -> (u32, u8, u8) {
    debug_assert!(value < 1 << (UNIT_ID_BITS + ORIENTATION_BITS + HEALTH_BITS));
    let health = (value & 1) as u8;
    let orientation = ((value >> HEALTH_BITS) & 0xF) as u8;
    let unit_id = (value >> (ORIENTATION_BITS + HEALTH_BITS)) & 0x1F;
    (unit_id, orientation, health)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_cells() {
        assert_eq!(pack_cell(2, 5, 1), Ok(75));
        assert_eq!(pack_cell(0, 0, 0), Ok(0));
        assert_eq!(pack_cell(20, 4, 1), Ok(649));
        assert_eq!(unpack_cell(137), (4, 4, 1));
        assert_eq!(unpack_cell(0), (0, 0, 0));
        assert_eq!(unpack_cell(937), (29, 4, 1));
    }

    #[test]
    fn out_of_range_fields() {
        assert!(pack_cell(32, 0, 1).is_err());
        assert!(pack_cell(0, 9, 1).is_err());
        assert!(pack_cell(0, 0, 2).is_err());
    }

    #[test]
    fn exhaustive_round_trip() {
        for id in 0..32 {
            for o in 0..=8u8 {
                for h in 0..=1u8 {
                    let v = pack_cell(id, o, h).unwrap();
                    assert!(v < 1024);
                    assert_eq!(unpack_cell(v), (id, o, h));
                }
            }
        }
    }
}
