//! Wire messages. Every message is one JSON object
//! `{"type": ..., "sessionID": ..., "payload": {...}}`; `sessionID` is
//! omitted before a session exists.

use battlespace_core::agents::RootStats;
use battlespace_core::state::{Placement, Region};
use battlespace_core::{GameConfig, GameResult, Observation, Phase, PlayerId, PlayerTurn, TeamId, UnitClass};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

/// How a computer-controlled seat plays.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum AgentKind {
    Random,
    Mcts { rollouts: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSeat {
    pub player: PlayerId,
    pub agent: AgentKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JoinRequest {
    /// Only read when creating a session.
    pub config: Option<GameConfig>,
    /// Seats filled by agents when creating a session.
    pub agents: Vec<AgentSeat>,
    /// Ask for a particular seat; otherwise the lowest free one.
    pub player: Option<PlayerId>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClientMessage {
    Join(JoinRequest),
    Deploy {
        placements: Vec<Placement>,
    },
    SubmitTurn {
        turn: PlayerTurn,
    },
    RequestHint {
        rollouts: u32,
        #[serde(default)]
        seed: Option<u64>,
    },
    Resign {},
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClientEnvelope {
    pub session_id: Option<String>,
    pub message: ClientMessage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeatInfo {
    pub player: PlayerId,
    pub human: bool,
    pub occupied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServerMessage {
    SessionInfo {
        player: PlayerId,
        team: TeamId,
        config: GameConfig,
        seats: Vec<SeatInfo>,
        phase: Phase,
        paused: bool,
    },
    DeploymentPrompt {
        player: PlayerId,
        region: Region,
        roster: Vec<UnitClass>,
        observation: Observation,
    },
    Observation(Observation),
    HintResponse {
        rollouts: u32,
        /// Hidden enemy units were filled in at random before searching.
        determinized: bool,
        stats: RootStats,
    },
    GameOver {
        result: GameResult,
        reward: i8,
        round: u32,
    },
    Error {
        code: ErrorCode,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadMessage,
    UnknownSession,
    NotSeated,
    SeatTaken,
    LateJoin,
    WrongPhase,
    IllegalDeployment,
    IllegalTurn,
    Internal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServerEnvelope {
    pub session_id: Option<String>,
    pub message: ServerMessage,
}

/// The framing every message shares. Message enums are externally tagged
/// (`{"submit_turn": {...}}`) and moved in and out of this shape, which
/// keeps integer map keys such as unit IDs readable without buffering.
#[derive(Serialize, Deserialize)]
struct Wire {
    #[serde(rename = "type")]
    kind: String,
    #[serde(rename = "sessionID", default, skip_serializing_if = "Option::is_none")]
    session_id: Option<String>,
    #[serde(default)]
    payload: Value,
}

fn to_wire<T: Serialize>(session_id: &Option<String>, message: &T) -> Result<Wire, serde_json::Error> {
    let tagged = serde_json::to_value(message)?;
    let (kind, payload) = match tagged {
        Value::Object(m) if m.len() == 1 => m.into_iter().next().expect("one entry"),
        Value::String(k) => (k, Value::Object(Default::default())),
        _ => return Err(serde::ser::Error::custom("message is not a tagged variant")),
    };
    Ok(Wire { kind, session_id: session_id.clone(), payload })
}

fn from_wire<T: DeserializeOwned>(wire: Wire) -> Result<(Option<String>, T), serde_json::Error> {
    let payload = match wire.payload {
        Value::Null => Value::Object(Default::default()),
        p => p,
    };
    let mut m = serde_json::Map::new();
    m.insert(wire.kind, payload);
    Ok((wire.session_id, serde_json::from_value(Value::Object(m))?))
}

macro_rules! envelope_serde {
    ($env:ident) => {
        impl Serialize for $env {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                to_wire(&self.session_id, &self.message).map_err(serde::ser::Error::custom)?.serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $env {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let (session_id, message) = from_wire(Wire::deserialize(d)?).map_err(serde::de::Error::custom)?;
                Ok($env { session_id, message })
            }
        }
    };
}

envelope_serde!(ClientEnvelope);
envelope_serde!(ServerEnvelope);

impl ServerEnvelope {
    pub fn error(session_id: Option<String>, code: ErrorCode, message: impl Into<String>) -> Self {
        ServerEnvelope { session_id, message: ServerMessage::Error { code, message: message.into() } }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages always serialize")
    }
}
