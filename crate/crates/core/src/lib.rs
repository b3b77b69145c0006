//! Deterministic rules engine for the Battlespace wargame, plus the three
//! structured-state encoders, the random / Monte Carlo / neural agents, a
//! small trainable network and experiment instrumentation.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the game server live in the `battlespace` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod action;
pub mod agents;
pub mod analysis;
pub mod board_gen;
pub mod config;
pub mod encode;
mod error;
pub mod geometry;
pub mod nn;
pub mod observe;
pub mod rng;
pub mod rules;
pub mod state;
pub mod train;
pub mod unit;

pub use action::{Action, Domain};
pub use config::{GameConfig, GameMode};
pub use error::{Error, Result};
pub use geometry::{Orientation, Position};
pub use observe::{observe, BoardView, Observation};
pub use rules::{legal_actions, resolve_round, reward, JointMove, PlayerTurn};
pub use state::{GameResult, GameState, Phase};
pub use unit::{PlayerId, TeamId, Unit, UnitClass, UnitId};
