//! Game server: sessions with human and agent seats, spoken to over a JSON
//! message protocol (see `docs/PROTOCOL.md`).

pub mod hub;
pub mod net;
pub mod protocol;

pub use hub::{determinize, ConnId, Dispatch, HintJob, Hub, Outgoing};
pub use net::Server;
pub use protocol::{ClientEnvelope, ClientMessage, ErrorCode, ServerEnvelope, ServerMessage};

/// Environment variable holding the TCP bind address.
pub const BIND_ENV: &str = "BATTLESPACE_BIND";
/// Environment variable holding the WebSocket bind address.
pub const WS_BIND_ENV: &str = "BATTLESPACE_WS_BIND";
pub const DEFAULT_BIND: &str = "127.0.0.1:7878";
