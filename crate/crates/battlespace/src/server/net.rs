//! Transports: newline-delimited JSON over TCP, and one JSON message per
//! text frame over WebSocket. Both feed the same hub.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use tungstenite::Message;

use super::hub::{ConnId, Dispatch, Hub, Outgoing};
use super::protocol::{ClientEnvelope, ErrorCode, ServerEnvelope};

/// Shared between all connection threads.
#[derive(Clone)]
pub struct Server {
    hub: Arc<Mutex<Hub>>,
    outboxes: Arc<Mutex<HashMap<ConnId, Sender<String>>>>,
    next_conn: Arc<AtomicU64>,
}

impl Server {
    pub fn new(hub: Hub) -> Self {
        Server { hub: Arc::new(Mutex::new(hub)), outboxes: Default::default(), next_conn: Arc::new(AtomicU64::new(1)) }
    }

    fn register(&self) -> (ConnId, Receiver<String>) {
        let id = self.next_conn.fetch_add(1, Ordering::Relaxed);
        let (tx, rx) = channel();
        self.outboxes.lock().expect("outbox lock").insert(id, tx);
        (id, rx)
    }

    fn deliver(&self, out: Vec<Outgoing>) {
        let boxes = self.outboxes.lock().expect("outbox lock");
        for o in out {
            if let Some(tx) = boxes.get(&o.conn) {
                let _ = tx.send(o.envelope.to_json());
            }
        }
    }

    /// Parse and dispatch one incoming text message. Hints are computed on
    /// a separate thread from a snapshot, so the hub stays available.
    fn on_text(&self, conn: ConnId, text: &str) {
        let env: ClientEnvelope = match serde_json::from_str(text) {
            Ok(e) => e,
            Err(e) => {
                let envelope = ServerEnvelope::error(None, ErrorCode::BadMessage, e.to_string());
                return self.deliver(vec![Outgoing { conn, envelope }]);
            }
        };
        let Dispatch { out, hint } = self.hub.lock().expect("hub lock").handle(conn, env);
        self.deliver(out);
        if let Some(job) = hint {
            let me = self.clone();
            thread::spawn(move || me.deliver(vec![job.run()]));
        }
    }

    fn on_close(&self, conn: ConnId) {
        self.outboxes.lock().expect("outbox lock").remove(&conn);
        let out = self.hub.lock().expect("hub lock").disconnect(conn);
        self.deliver(out);
    }

    pub fn serve_tcp(&self, listener: TcpListener) {
        for stream in listener.incoming().flatten() {
            let me = self.clone();
            thread::spawn(move || me.tcp_connection(stream));
        }
    }

    fn tcp_connection(&self, stream: TcpStream) {
        let (conn, rx) = self.register();
        let Ok(mut writer) = stream.try_clone() else { return self.on_close(conn) };
        let pump = thread::spawn(move || {
            for line in rx {
                if writer.write_all(line.as_bytes()).and_then(|_| writer.write_all(b"\n")).is_err() {
                    break;
                }
            }
        });
        for line in BufReader::new(stream).lines() {
            match line {
                Ok(l) if l.trim().is_empty() => {}
                Ok(l) => self.on_text(conn, &l),
                Err(_) => break,
            }
        }
        self.on_close(conn);
        let _ = pump.join();
    }

    pub fn serve_ws(&self, listener: TcpListener) {
        for stream in listener.incoming().flatten() {
            let me = self.clone();
            thread::spawn(move || me.ws_connection(stream));
        }
    }

    fn ws_connection(&self, stream: TcpStream) {
        let Ok(mut ws) = tungstenite::accept(stream) else { return };
        // Short read timeout so one thread can interleave reads and writes.
        let _ = ws.get_ref().set_read_timeout(Some(Duration::from_millis(20)));
        let (conn, rx) = self.register();
        'conn: loop {
            while let Ok(text) = rx.try_recv() {
                if ws.send(Message::text(text)).is_err() {
                    break 'conn;
                }
            }
            match ws.read() {
                Ok(Message::Text(t)) => self.on_text(conn, t.as_str()),
                Ok(Message::Close(_)) => break,
                Ok(_) => {}
                Err(tungstenite::Error::Io(e)) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {}
                Err(_) => break,
            }
        }
        self.on_close(conn);
    }
}
