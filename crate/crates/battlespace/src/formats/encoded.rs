//! Encoded boards as a flat binary file and as a numpy-style text dump.
//!
//! Binary layout, all little-endian:
//!
//! ```text
//! b"BSEN"  u32 version (1)  u32 layout tag  u32 ndims  u32 dims[ndims]
//! i32 values[product(dims)]   (row-major)
//! ```
//!
//! Grids are `[channels, width, length]`; lists are `[units, features]`.

use std::io::{Read, Write};

use battlespace_core::encode::{encode_binary, encode_layers, encode_list, GridEncoding, Layout};
use battlespace_core::{BoardView, PlayerId};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"BSEN";
const VERSION: u32 = 1;

/// Any encoder output, flattened to a dense array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedArray {
    pub layout: Layout,
    pub dims: Vec<usize>,
    pub values: Vec<i64>,
}

impl From<&GridEncoding> for EncodedArray {
    fn from(g: &GridEncoding) -> Self {
        EncodedArray { layout: g.layout, dims: g.shape().to_vec(), values: g.data.iter().map(|&v| v.into()).collect() }
    }
}

/// Run the encoder for `layout`. Lists describe `player`'s units.
pub fn encode(view: &impl BoardView, layout: Layout, player: PlayerId) -> Result<EncodedArray> {
    Ok(match layout {
        Layout::Binary => (&encode_binary(view)?).into(),
        Layout::Layers => (&encode_layers(view)?).into(),
        Layout::List => {
            let l = encode_list(view, player)?;
            let width = l.feature_len().unwrap_or(0);
            if l.per_unit.iter().any(|u| u.features.len() != width) {
                return Err(Error::Format("units have different visible ranges".into()));
            }
            EncodedArray {
                layout,
                dims: vec![l.per_unit.len(), width],
                values: l.per_unit.iter().flat_map(|u| u.features.iter().map(|&v| v.into())).collect(),
            }
        }
    })
}

fn put_u32(w: &mut impl Write, v: u32) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(|_| Error::Format("file ends inside the header".into()))?;
    Ok(u32::from_le_bytes(b))
}

pub fn write_encoded(w: &mut impl Write, a: &EncodedArray) -> Result<()> {
    w.write_all(MAGIC)?;
    put_u32(w, VERSION)?;
    put_u32(w, a.layout.tag())?;
    put_u32(w, a.dims.len() as u32)?;
    for &d in &a.dims {
        put_u32(w, d as u32)?;
    }
    for &v in &a.values {
        let v = i32::try_from(v).map_err(|_| Error::Format(format!("value {v} does not fit in i32")))?;
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_encoded(r: &mut impl Read) -> Result<EncodedArray> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|_| Error::Format("missing magic".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format("not an encoded board file".into()));
    }
    let version = get_u32(r)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let tag = get_u32(r)?;
    let layout = Layout::from_tag(tag).ok_or_else(|| Error::Format(format!("unknown layout tag {tag}")))?;
    let ndims = get_u32(r)? as usize;
    if ndims > 8 {
        return Err(Error::Format(format!("{ndims} dimensions")));
    }
    let dims = (0..ndims).map(|_| get_u32(r).map(|d| d as usize)).collect::<Result<Vec<_>>>()?;
    let n: usize = dims.iter().product();
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    if raw.len() != n * 4 {
        return Err(Error::Format(format!("expected {} value bytes, found {}", n * 4, raw.len())));
    }
    let values = raw.chunks_exact(4).map(|c| i32::from_le_bytes([c[0], c[1], c[2], c[3]]).into()).collect();
    Ok(EncodedArray { layout, dims, values })
}

/// Nested-bracket text in the style numpy prints float arrays: every value
/// right-aligned to a common width with a trailing `.`, rows on their own
/// lines and a blank line between the blocks of a 3-d array.
pub fn text_dump(a: &EncodedArray) -> String {
    let cells: Vec<String> = a.values.iter().map(|v| format!("{v}.")).collect();
    let width = cells.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    nest(&mut out, &a.dims, &cells, width, 0);
    out.push('\n');
    out
}

fn nest(out: &mut String, dims: &[usize], cells: &[String], width: usize, depth: usize) {
    out.push('[');
    match dims {
        [] => {}
        [_] => {
            let row: Vec<String> = cells.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(&row.join(" "));
        }
        [n, rest @ ..] => {
            let stride: usize = rest.iter().product();
            for i in 0..*n {
                if i > 0 {
                    out.push_str(&"\n".repeat(dims.len() - 1));
                    out.push_str(&" ".repeat(depth + 1));
                }
                nest(out, rest, &cells[i * stride..(i + 1) * stride], width, depth + 1);
            }
        }
    }
    out.push(']');
}
