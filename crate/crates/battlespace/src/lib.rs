//! IO side of Battlespace: board snapshots, encoded-board files, network
//! checkpoints, game logs, the game server and the CLI behind the
//! `battlespace` binary.

pub mod agent_spec;
pub mod cli;
pub mod error;
pub mod formats;
pub mod server;

pub use error::{Error, Result};
