//! Board snapshots: the JSON form of a `GameState`.

use std::fs;
use std::path::Path;

use battlespace_core::{GameConfig, GameState};

use crate::error::{at, Result};

pub fn read_state(path: &Path) -> Result<GameState> {
    let text = fs::read_to_string(path).map_err(at(path))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_state(path: &Path, state: &GameState) -> Result<()> {
    let text = serde_json::to_string_pretty(state)?;
    fs::write(path, text + "\n").map_err(at(path))
}

/// A game config; missing fields take their defaults.
pub fn read_config(path: &Path) -> Result<GameConfig> {
    let text = fs::read_to_string(path).map_err(at(path))?;
    let cfg: GameConfig = serde_json::from_str(&text)?;
    cfg.validate()?;
    Ok(cfg)
}
