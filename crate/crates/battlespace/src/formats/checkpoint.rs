//! Network checkpoints.
//!
//! ```text
//! b"BSNN"  u32 version (1)  u32 header length  header JSON
//! f32 parameters, little-endian, block by block in declaration order
//! ```
//!
//! Training runs in f64; parameters are narrowed to f32 on save.

use std::fs;
use std::path::Path;

use battlespace_core::nn::{InputEncoder, Network, NetworkSpec};
use serde::{Deserialize, Serialize};

use crate::error::{at, Error, Result};

const MAGIC: &[u8; 4] = b"BSNN";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub spec: NetworkSpec,
    pub seed: u64,
    pub encoder: InputEncoder,
}

pub fn to_bytes(net: &Network, seed: u64, encoder: InputEncoder) -> Result<Vec<u8>> {
    let header = serde_json::to_vec(&CheckpointHeader { spec: net.spec.clone(), seed, encoder })?;
    let mut out = Vec::with_capacity(12 + header.len() + net.num_params() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u32).to_le_bytes());
    out.extend_from_slice(&header);
    for block in net.param_blocks() {
        for &v in block {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    Ok(out)
}

pub fn from_bytes(bytes: &[u8]) -> Result<(Network, CheckpointHeader)> {
    let bad = |m: &str| Error::Format(format!("checkpoint: {m}"));
    if bytes.len() < 12 || &bytes[..4] != MAGIC {
        return Err(bad("missing magic"));
    }
    let word = |i: usize| u32::from_le_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);
    if word(4) != VERSION {
        return Err(bad(&format!("unsupported version {}", word(4))));
    }
    let hlen = word(8) as usize;
    let body = bytes.get(12..12 + hlen).ok_or_else(|| bad("truncated header"))?;
    let header: CheckpointHeader = serde_json::from_slice(body)?;
    let mut net = Network::zeros(header.spec.clone())?;
    let params = &bytes[12 + hlen..];
    if params.len() != net.num_params() * 4 {
        return Err(bad(&format!("expected {} parameters, found {} bytes", net.num_params(), params.len())));
    }
    let mut floats = params.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64);
    for block in net.param_blocks_mut() {
        for v in block.iter_mut() {
            *v = floats.next().expect("length checked");
        }
    }
    Ok((net, header))
}

pub fn save(path: &Path, net: &Network, seed: u64, encoder: InputEncoder) -> Result<()> {
    fs::write(path, to_bytes(net, seed, encoder)?).map_err(at(path))
}

pub fn load(path: &Path) -> Result<(Network, CheckpointHeader)> {
    from_bytes(&fs::read(path).map_err(at(path))?)
}
