//! Reading birth configs and writing result files.
//!
//! Configs travel as CSV (`t,a` per line) or JSONL (one `{"t":…,"a":…}`
//! object per line); the extension picks the parser. All outputs are UTF-8.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use clonaldyn_core::heights::TrajectoryPath;
use clonaldyn_core::{BirthConfig, BirthEvent, ConfigError, ResidentProfile};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid config: {0}")]
    Config(#[from] ConfigError),
}

#[derive(serde::Deserialize)]
struct JsonEvent {
    t: f64,
    a: f64,
}

/// Load a birth config from `path`. `.json`/`.jsonl` parse as JSONL,
/// anything else as CSV; blank lines, `#` comments, and a single header
/// line are skipped. `sort` accepts events in any order.
pub fn load_config(path: &Path, birth_depth: f64, sort: bool) -> Result<BirthConfig, LoadError> {
    let jsonl = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("json") | Some("jsonl")
    );
    let reader = BufReader::new(File::open(path)?);
    let mut events = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parsed = if jsonl {
            serde_json::from_str::<JsonEvent>(trimmed)
                .map(|ev| BirthEvent { t: ev.t, a: ev.a })
                .map_err(|e| e.to_string())
        } else {
            parse_csv_pair(trimmed)
        };
        match parsed {
            Ok(ev) => events.push(ev),
            // one non-numeric line up front is a header, not an error
            Err(_) if events.is_empty() && idx == 0 && !jsonl => continue,
            Err(message) => return Err(LoadError::Parse { line: idx + 1, message }),
        }
    }
    let cfg = if sort {
        BirthConfig::from_unsorted(events, birth_depth)?
    } else {
        BirthConfig::new(events, birth_depth)?
    };
    Ok(cfg)
}

fn parse_csv_pair(line: &str) -> Result<BirthEvent, String> {
    let mut parts = line.split(',');
    let t = parts.next().unwrap_or("").trim();
    let a = parts.next().ok_or("expected two comma-separated fields")?.trim();
    if parts.next().is_some() {
        return Err("expected exactly two comma-separated fields".into());
    }
    let t = t.parse::<f64>().map_err(|e| format!("bad birth time {t:?}: {e}"))?;
    let a = a.parse::<f64>().map_err(|e| format!("bad advantage {a:?}: {e}"))?;
    Ok(BirthEvent { t, a })
}

/// Write a config in the standard CSV form, header included.
pub fn write_config_csv(path: &Path, cfg: &BirthConfig) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,a")?;
    for ev in cfg.events() {
        writeln!(w, "{},{}", ev.t, ev.a)?;
    }
    w.flush()
}

// The profile's wire shape: change time, resident, fitness. The field names
// are part of the format, so they are pinned here rather than derived from
// the in-memory struct.
#[derive(Serialize)]
struct ProfileWire {
    segments: Vec<SegmentWire>,
}

#[derive(Serialize)]
struct SegmentWire {
    s: f64,
    m: usize,
    f: f64,
}

/// Write a resident profile as `{"segments":[{"s":…,"m":…,"f":…}]}`.
pub fn write_profile_json(path: &Path, profile: &ResidentProfile) -> std::io::Result<()> {
    let wire = ProfileWire {
        segments: profile
            .segments
            .iter()
            .map(|seg| SegmentWire { s: seg.s, m: seg.m, f: seg.fitness })
            .collect(),
    };
    write_json(path, &wire)
}

/// Serialize any value as pretty JSON at `path`.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    fs::write(path, text + "\n")
}

/// Write height polylines as CSV rows `index,t,h`, one block per trajectory.
pub fn write_polylines_csv(path: &Path, paths: &[TrajectoryPath]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "index,t,h")?;
    for p in paths {
        for v in &p.vertices {
            writeln!(w, "{},{},{}", p.index, v.t, v.h)?;
        }
    }
    w.flush()
}

/// Write per-replicate estimate values as CSV rows `replicate,value`.
pub fn write_values_csv(path: &Path, values: &[f64]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "replicate,value")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(w, "{i},{v}")?;
    }
    w.flush()
}
