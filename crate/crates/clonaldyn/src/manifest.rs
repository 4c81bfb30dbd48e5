//! Run bookkeeping: every command drops a manifest next to its outputs so a
//! result file can always be traced back to the exact invocation.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub args: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub threads: usize,
    pub wall_ms: u128,
    /// Files the run produced, relative to the manifest.
    pub outputs: Vec<String>,
    /// Free-form counters (sweep steps, replicate counts, …).
    pub counters: serde_json::Value,
    #[serde(skip)]
    started: Instant,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: "clonaldyn",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            seed: None,
            threads: rayon::current_num_threads(),
            wall_ms: 0,
            outputs: Vec::new(),
            counters: serde_json::Value::Null,
            started: Instant::now(),
        }
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Stamp the elapsed time and write the manifest itself.
    pub fn write(&mut self, path: &Path) -> std::io::Result<()> {
        self.wall_ms = self.started.elapsed().as_millis();
        crate::io::write_json(path, self)
    }
}
