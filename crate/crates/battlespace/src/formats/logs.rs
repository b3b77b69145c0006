//! Game logs (JSONL, one round per line) and the CSV side files.

use std::io::{BufRead, Write};

use battlespace_core::analysis::{ActionHistogram, GameLog, ImpactClass, RoundRecord};
use battlespace_core::train::StepLoss;

use crate::error::{Error, Result};

pub fn write_game_log(w: &mut impl Write, log: &GameLog) -> Result<()> {
    for r in &log.rounds {
        serde_json::to_writer(&mut *w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn game_log_bytes(log: &GameLog) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_game_log(&mut buf, log)?;
    Ok(buf)
}

/// Read round records; blank lines are skipped.
pub fn read_rounds(r: impl BufRead) -> Result<Vec<RoundRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Format(format!("line {}: {e}", i + 1)))?);
    }
    Ok(out)
}

/// A log read back from disk; match metadata is not part of the file.
pub fn read_game_log(r: impl BufRead) -> Result<GameLog> {
    Ok(GameLog { game: 0, seed: 0, team_a: 0, initial_hash: 0, rounds: read_rounds(r)?, fault: None })
}

pub fn write_loss_csv(w: &mut impl Write, steps: &[StepLoss]) -> Result<()> {
    writeln!(w, "step,loss")?;
    for s in steps {
        writeln!(w, "{},{}", s.step, s.loss)?;
    }
    Ok(())
}

pub fn write_histogram_csv(w: &mut impl Write, h: &ActionHistogram) -> Result<()> {
    writeln!(w, "action,count,class")?;
    for b in &h.bins {
        let class = match b.class {
            ImpactClass::Impactful => "impactful",
            ImpactClass::NonImpactful => "nonImpactful",
        };
        // Air advance labels contain a comma.
        writeln!(w, "\"{}\",{},{class}", b.action, b.count)?;
    }
    Ok(())
}
