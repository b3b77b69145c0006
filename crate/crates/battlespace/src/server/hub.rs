//! Sessions and seat bookkeeping, independent of any transport. The hub is
//! fed parsed client messages and answers with messages addressed to
//! connections.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use battlespace_core::agents::{mcts_root, Agent, MctsAgent, MctsConfig, RandomAgent};
use battlespace_core::analysis::{GameLog, RoundRecord};
use battlespace_core::board_gen::random_placements;
use battlespace_core::geometry::{Orientation, Position};
use battlespace_core::rng::{derive_path, derive_seed, rng_from};
use battlespace_core::rules::is_legal;
use battlespace_core::state::{deploy, deployment_region, new_game, Placement};
use battlespace_core::{
    observe, resolve_round, reward, GameResult, GameState, JointMove, Observation, Phase, PlayerId, PlayerTurn, Unit,
};
use rand::Rng;

use super::protocol::{
    AgentKind, ClientEnvelope, ClientMessage, ErrorCode, JoinRequest, SeatInfo, ServerEnvelope, ServerMessage,
};

pub type ConnId = u64;

/// Hint budgets above this are refused.
pub const MAX_HINT_ROLLOUTS: u32 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Outgoing {
    pub conn: ConnId,
    pub envelope: ServerEnvelope,
}

/// What handling one message produced: replies to send now and possibly a
/// hint search to run outside the hub.
#[derive(Debug, Default)]
pub struct Dispatch {
    pub out: Vec<Outgoing>,
    pub hint: Option<HintJob>,
}

impl From<Vec<Outgoing>> for Dispatch {
    fn from(out: Vec<Outgoing>) -> Self {
        Dispatch { out, hint: None }
    }
}

/// A hint request bound to an immutable snapshot of the asking player's
/// view.
#[derive(Debug, Clone)]
pub struct HintJob {
    pub conn: ConnId,
    pub session_id: String,
    pub observation: Observation,
    pub rollouts: u32,
    pub seed: u64,
}

impl HintJob {
    pub fn run(self) -> Outgoing {
        let sid = Some(self.session_id.clone());
        let envelope = match self.search() {
            Ok((stats, determinized)) => ServerEnvelope {
                session_id: sid,
                message: ServerMessage::HintResponse { rollouts: self.rollouts, determinized, stats },
            },
            Err(e) => ServerEnvelope::error(sid, ErrorCode::Internal, e.to_string()),
        };
        Outgoing { conn: self.conn, envelope }
    }

    fn search(&self) -> battlespace_core::Result<(battlespace_core::agents::RootStats, bool)> {
        let (state, determinized) = determinize(&self.observation, derive_seed(self.seed, 0))?;
        let cfg = MctsConfig { rollouts: self.rollouts, ..Default::default() };
        Ok((mcts_root(&state, self.observation.for_player, &cfg, derive_seed(self.seed, 1))?, determinized))
    }
}

/// A full state consistent with an observation: every enemy roster unit
/// the viewer cannot see is assumed alive and put on a uniformly random
/// free square of its layer outside the viewer's sight. Returns whether
/// anything was added.
pub fn determinize(obs: &Observation, seed: u64) -> battlespace_core::Result<(GameState, bool)> {
    let cfg = obs.config.clone();
    let team = cfg.team_of(obs.for_player);
    let mut rng = rng_from(seed);
    let mut units = obs.visible_units.clone();
    let known: BTreeSet<u32> = units.iter().map(|u| u.id).collect();
    let mut added = false;
    for q in cfg.players().filter(|&q| cfg.team_of(q) != team) {
        for (slot, &class) in cfg.units_per_player.iter().enumerate() {
            let id = cfg.unit_id_for(q, slot);
            if known.contains(&id) {
                continue;
            }
            let z = cfg.layer_of(class);
            let free: Vec<Position> = (0..cfg.width as i32)
                .flat_map(|x| (0..cfg.length as i32).map(move |y| Position(x, y, z)))
                .filter(|p| !obs.visible_squares.contains(p))
                .filter(|p| !units.iter().any(|u| u.is_solid() && u.position == *p))
                .collect();
            if free.is_empty() {
                continue;
            }
            let position = free[rng.gen_range(0..free.len())];
            let orientation = if class.is_immovable() {
                Orientation::SOUTH
            } else {
                Orientation::from_index(rng.gen_range(0..8)).expect("planar index")
            };
            units.push(Unit {
                id,
                owner: Some(cfg.team_of(q)),
                player: Some(q),
                class,
                position,
                orientation,
                health: 1,
                visible_range: cfg.visible_range_default,
            });
            added = true;
        }
    }
    units.sort_by_key(|u| u.id);
    let next_unit_id =
        units.iter().map(|u| u.id + 1).chain([cfg.wall_base_id() + cfg.wall_count]).max().unwrap_or(0);
    let state = GameState {
        deployed: cfg.players().collect(),
        config: cfg,
        units,
        round: obs.round,
        phase: Phase::Playing,
        result: None,
        next_unit_id,
        seed,
    };
    state.check_invariants()?;
    Ok((state, added))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Seat {
    Human { conn: Option<ConnId>, claimed: bool },
    Agent(AgentKind),
}

#[derive(Debug)]
struct Session {
    id: String,
    state: GameState,
    seats: BTreeMap<PlayerId, Seat>,
    pending: BTreeMap<PlayerId, PlayerTurn>,
    seed: u64,
    initial_hash: u64,
    rounds: Vec<RoundRecord>,
}

type Reply = Result<Vec<Outgoing>, (ErrorCode, String)>;

fn fail<T>(code: ErrorCode, message: impl Into<String>) -> Result<T, (ErrorCode, String)> {
    Err((code, message.into()))
}

impl Session {
    fn msg(&self, conn: ConnId, message: ServerMessage) -> Outgoing {
        Outgoing { conn, envelope: ServerEnvelope { session_id: Some(self.id.clone()), message } }
    }

    fn humans(&self) -> impl Iterator<Item = (PlayerId, ConnId)> + '_ {
        self.seats.iter().filter_map(|(&p, s)| match s {
            Seat::Human { conn: Some(c), .. } => Some((p, *c)),
            _ => None,
        })
    }

    fn paused(&self) -> bool {
        self.seats.values().any(|s| matches!(s, Seat::Human { conn: None, .. }))
    }

    fn info(&self, conn: ConnId, player: PlayerId) -> Outgoing {
        let seats = self
            .seats
            .iter()
            .map(|(&p, s)| SeatInfo {
                player: p,
                human: matches!(s, Seat::Human { .. }),
                occupied: !matches!(s, Seat::Human { conn: None, .. }),
            })
            .collect();
        self.msg(
            conn,
            ServerMessage::SessionInfo {
                player,
                team: self.state.config.team_of(player),
                config: (*self.state.config).clone(),
                seats,
                phase: self.state.phase,
                paused: self.paused(),
            },
        )
    }

    fn observation(&self, conn: ConnId, player: PlayerId) -> Outgoing {
        let obs = observe(&self.state, player).expect("seated players exist");
        self.msg(conn, ServerMessage::Observation(obs))
    }

    fn game_over(&self, conn: ConnId, player: PlayerId) -> Outgoing {
        let team = self.state.config.team_of(player);
        let result = self.state.result.unwrap_or(GameResult::Draw);
        let reward = reward(&self.state, team).unwrap_or(0);
        self.msg(conn, ServerMessage::GameOver { result, reward, round: self.state.round })
    }

    /// What a player should see right now.
    fn status(&self, conn: ConnId, player: PlayerId) -> Vec<Outgoing> {
        match self.state.phase {
            Phase::Deployment if !self.state.deployed.contains(&player) => {
                let obs = observe(&self.state, player).expect("seated players exist");
                vec![self.msg(
                    conn,
                    ServerMessage::DeploymentPrompt {
                        player,
                        region: deployment_region(&self.state.config, player),
                        roster: self.state.config.units_per_player.clone(),
                        observation: obs,
                    },
                )]
            }
            Phase::Finished => vec![self.observation(conn, player), self.game_over(conn, player)],
            _ => vec![self.observation(conn, player)],
        }
    }

    fn broadcast_status(&self) -> Vec<Outgoing> {
        self.humans().flat_map(|(p, c)| self.status(c, p)).collect()
    }

    fn deploy(&mut self, player: PlayerId, placements: &[Placement]) -> Reply {
        if self.state.phase != Phase::Deployment {
            return fail(ErrorCode::WrongPhase, "deployment is over");
        }
        self.state = deploy(&self.state, player, placements).or_else(|e| fail(ErrorCode::IllegalDeployment, e.to_string()))?;
        Ok(self.broadcast_status())
    }

    fn submit(&mut self, player: PlayerId, turn: PlayerTurn) -> Reply {
        if self.state.phase != Phase::Playing {
            return fail(ErrorCode::WrongPhase, "the game is not in play");
        }
        let cfg = &self.state.config;
        for (&id, &action) in &turn {
            match self.state.unit(id) {
                Some(u) if u.player == Some(player) && u.is_playable() => {
                    if !is_legal(cfg, u, action) {
                        return fail(ErrorCode::IllegalTurn, format!("{action} is not legal for unit {id}"));
                    }
                }
                _ => return fail(ErrorCode::IllegalTurn, format!("unit {id} is not yours to move")),
            }
        }
        if let Some(u) = self.state.playable_units(player).find(|u| !turn.contains_key(&u.id)) {
            return fail(ErrorCode::IllegalTurn, format!("unit {} has no action", u.id));
        }
        self.pending.insert(player, turn);
        self.try_resolve()
    }

    fn try_resolve(&mut self) -> Reply {
        let waiting = self.seats.iter().any(|(&p, s)| {
            matches!(s, Seat::Human { .. })
                && self.state.playable_units(p).next().is_some()
                && !self.pending.contains_key(&p)
        });
        if waiting {
            return Ok(Vec::new());
        }
        let round = self.state.round;
        let mut joint = JointMove::new();
        for (&p, seat) in &self.seats {
            let turn = match seat {
                _ if self.state.playable_units(p).next().is_none() => PlayerTurn::new(),
                Seat::Human { .. } => self.pending[&p].clone(),
                Seat::Agent(kind) => {
                    let seed = derive_path(self.seed, &[1, round as u64, p as u64]);
                    let decided = match *kind {
                        AgentKind::Random => RandomAgent::default().decide(&self.state, p, seed),
                        AgentKind::Mcts { rollouts } => {
                            let mut a = MctsAgent { config: MctsConfig { rollouts, ..Default::default() } };
                            a.decide(&self.state, p, seed)
                        }
                    };
                    decided.or_else(|e| fail(ErrorCode::Internal, format!("agent for player {p}: {e}")))?
                }
            };
            joint.insert(p, turn);
        }
        self.state = resolve_round(&self.state, &joint).or_else(|e| fail(ErrorCode::Internal, e.to_string()))?;
        self.pending.clear();
        self.rounds.push(RoundRecord {
            round,
            moves: joint,
            hash: self.state.hash64(),
            phase: self.state.phase,
            result: self.state.result,
        });
        Ok(self.broadcast_status())
    }

    fn resign(&mut self, player: PlayerId) -> Reply {
        if self.state.phase == Phase::Finished {
            return fail(ErrorCode::WrongPhase, "the game is already over");
        }
        let cfg = self.state.config.clone();
        let loser = cfg.team_of(player);
        let others: Vec<_> = cfg.teams().filter(|&t| t != loser).collect();
        self.state.result = Some(match others.as_slice() {
            [t] => GameResult::Winner(*t),
            _ => GameResult::Draw,
        });
        self.state.phase = Phase::Finished;
        self.pending.clear();
        self.rounds.push(RoundRecord {
            round: self.state.round,
            moves: JointMove::new(),
            hash: self.state.hash64(),
            phase: self.state.phase,
            result: self.state.result,
        });
        Ok(self.broadcast_status())
    }

    fn log(&self) -> GameLog {
        GameLog {
            game: 0,
            seed: self.seed,
            team_a: 0,
            initial_hash: self.initial_hash,
            rounds: self.rounds.clone(),
            fault: None,
        }
    }
}

/// All sessions of one server.
#[derive(Debug)]
pub struct Hub {
    sessions: BTreeMap<String, Session>,
    seats: HashMap<ConnId, (String, PlayerId)>,
    created: u64,
    seed: u64,
    log_dir: Option<PathBuf>,
}

impl Hub {
    pub fn new(seed: u64) -> Self {
        Hub { sessions: BTreeMap::new(), seats: HashMap::new(), created: 0, seed, log_dir: None }
    }

    /// Finished games are written to `<dir>/<sessionID>.jsonl`.
    pub fn with_log_dir(mut self, dir: PathBuf) -> Self {
        self.log_dir = Some(dir);
        self
    }

    /// Full state of a session, for tests and tooling; never sent to
    /// clients.
    pub fn state(&self, session_id: &str) -> Option<&GameState> {
        self.sessions.get(session_id).map(|s| &s.state)
    }

    pub fn seat_of(&self, conn: ConnId) -> Option<(&str, PlayerId)> {
        self.seats.get(&conn).map(|(s, p)| (s.as_str(), *p))
    }

    pub fn handle(&mut self, conn: ConnId, env: ClientEnvelope) -> Dispatch {
        let sid = env.session_id.clone();
        let result = match env.message {
            ClientMessage::Join(req) => self.join(conn, sid.clone(), req).map(Dispatch::from),
            msg => self.seated(conn, sid.clone(), msg),
        };
        result.unwrap_or_else(|(code, message)| {
            let sid = sid.or_else(|| self.seats.get(&conn).map(|(s, _)| s.clone()));
            vec![Outgoing { conn, envelope: ServerEnvelope::error(sid, code, message) }].into()
        })
    }

    pub fn disconnect(&mut self, conn: ConnId) -> Vec<Outgoing> {
        let Some((sid, player)) = self.seats.remove(&conn) else { return Vec::new() };
        let Some(session) = self.sessions.get_mut(&sid) else { return Vec::new() };
        if let Some(Seat::Human { conn: c, .. }) = session.seats.get_mut(&player) {
            *c = None;
        }
        session.pending.remove(&player);
        session.humans().map(|(p, c)| session.info(c, p)).collect()
    }

    fn join(&mut self, conn: ConnId, sid: Option<String>, req: JoinRequest) -> Reply {
        if self.seats.contains_key(&conn) {
            return fail(ErrorCode::SeatTaken, "this connection already holds a seat");
        }
        let sid = match sid {
            Some(s) if self.sessions.contains_key(&s) => s,
            Some(s) => return fail(ErrorCode::UnknownSession, format!("no session {s}")),
            None => self.create(&req)?,
        };
        let session = self.sessions.get_mut(&sid).expect("looked up above");
        // Unclaimed seats close once deployment ends; claimed ones can be
        // reclaimed after a disconnect.
        let deploying = session.state.phase == Phase::Deployment;
        let open = |_: &PlayerId, s: &Seat| matches!(s, Seat::Human { conn: None, claimed } if deploying || *claimed);
        let player = match req.player {
            Some(p) => match session.seats.get(&p) {
                Some(s) if open(&p, s) => p,
                Some(Seat::Human { conn: None, .. }) => return fail(ErrorCode::LateJoin, "deployment is over"),
                Some(_) => return fail(ErrorCode::SeatTaken, format!("seat {p} is taken")),
                None => return fail(ErrorCode::SeatTaken, format!("no seat {p}")),
            },
            None => match session.seats.iter().find(|(p, s)| open(p, s)) {
                Some((&p, _)) => p,
                None if session.state.phase == Phase::Deployment => {
                    return fail(ErrorCode::SeatTaken, "every seat is taken")
                }
                None => return fail(ErrorCode::LateJoin, "deployment is over"),
            },
        };
        session.seats.insert(player, Seat::Human { conn: Some(conn), claimed: true });
        self.seats.insert(conn, (sid.clone(), player));
        let mut out = vec![session.info(conn, player)];
        out.extend(session.status(conn, player));
        for (p, c) in session.humans().filter(|&(_, c)| c != conn) {
            out.push(session.info(c, p));
        }
        Ok(out)
    }

    fn create(&mut self, req: &JoinRequest) -> Result<String, (ErrorCode, String)> {
        let config = req.config.clone().unwrap_or_default();
        let mut state = new_game(config).or_else(|e| fail(ErrorCode::BadMessage, e.to_string()))?;
        let cfg = state.config.clone();
        let index = self.created;
        self.created += 1;
        let seed = req.seed.unwrap_or_else(|| derive_path(self.seed, &[0, index]));
        let mut seats: BTreeMap<PlayerId, Seat> =
            cfg.players().map(|p| (p, Seat::Human { conn: None, claimed: false })).collect();
        for a in &req.agents {
            if !cfg.has_player(a.player) {
                return fail(ErrorCode::BadMessage, format!("no player {} in this config", a.player));
            }
            seats.insert(a.player, Seat::Agent(a.agent));
        }
        if !seats.values().any(|s| matches!(s, Seat::Human { .. })) {
            return fail(ErrorCode::BadMessage, "at least one seat must be human");
        }
        for (&p, seat) in &seats {
            if let Seat::Agent(_) = seat {
                let mut rng = rng_from(derive_path(seed, &[0, p as u64]));
                let placements =
                    random_placements(&state, p, &mut rng).or_else(|e| fail(ErrorCode::BadMessage, e.to_string()))?;
                state = deploy(&state, p, &placements).or_else(|e| fail(ErrorCode::Internal, e.to_string()))?;
            }
        }
        let id = format!("{:016x}", derive_path(self.seed, &[1, index]));
        let initial_hash = state.hash64();
        self.sessions.insert(
            id.clone(),
            Session { id: id.clone(), state, seats, pending: BTreeMap::new(), seed, initial_hash, rounds: Vec::new() },
        );
        Ok(id)
    }

    fn seated(&mut self, conn: ConnId, sid: Option<String>, msg: ClientMessage) -> Result<Dispatch, (ErrorCode, String)> {
        let Some((seat_sid, player)) = self.seats.get(&conn).cloned() else {
            return fail(ErrorCode::NotSeated, "join a session first");
        };
        if sid.as_ref().is_some_and(|s| *s != seat_sid) {
            return fail(ErrorCode::NotSeated, "this connection is seated in another session");
        }
        let session = self.sessions.get_mut(&seat_sid).expect("seats point at live sessions");
        let was_finished = session.state.is_finished();
        let out = match msg {
            ClientMessage::Join(_) => unreachable!("joins are handled separately"),
            ClientMessage::Deploy { placements } => session.deploy(player, &placements)?,
            ClientMessage::SubmitTurn { turn } => session.submit(player, turn)?,
            ClientMessage::Resign {} => session.resign(player)?,
            ClientMessage::RequestHint { rollouts, seed } => {
                if session.state.phase != Phase::Playing {
                    return fail(ErrorCode::WrongPhase, "hints are only available during play");
                }
                if rollouts == 0 || rollouts > MAX_HINT_ROLLOUTS {
                    return fail(ErrorCode::BadMessage, format!("rollouts must be in 1..={MAX_HINT_ROLLOUTS}"));
                }
                let observation = observe(&session.state, player).expect("seated players exist");
                let seed = seed.unwrap_or_else(|| derive_path(session.seed, &[2, session.state.hash64(), player as u64]));
                let job = HintJob { conn, session_id: seat_sid, observation, rollouts, seed };
                return Ok(Dispatch { out: Vec::new(), hint: Some(job) });
            }
        };
        if !was_finished && session.state.is_finished() {
            if let Some(dir) = &self.log_dir {
                let path = dir.join(format!("{}.jsonl", session.id));
                let written = crate::formats::logs::game_log_bytes(&session.log())
                    .and_then(|b| std::fs::write(&path, b).map_err(Into::into));
                if let Err(e) = written {
                    eprintln!("could not write {}: {e}", path.display());
                }
            }
        }
        Ok(out.into())
    }
}
