//! Run manifests: config echo, input digests, output digests, wall time.
//! Reruns with equal inputs and configuration produce equal result digests.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use dray::error::Result;

fn sha256_hex(data: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(data)))
}

#[derive(Default, Serialize)]
pub struct Inputs {
    digests: BTreeMap<String, String>,
}

impl Inputs {
    /// Read a file, recording its digest under `name`.
    pub fn read(&mut self, name: &str, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path)?;
        self.digests.insert(name.to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }

    /// Record a parameter that stands in for a file input.
    pub fn note_param(&mut self, name: &str, value: &str) {
        self.digests.insert(name.to_string(), value.to_string());
    }
}

#[derive(Serialize)]
pub struct Manifest {
    command: String,
    config: String,
    version: String,
    inputs: BTreeMap<String, String>,
    results: BTreeMap<String, String>,
    wall_time_ms: u128,
}

impl Manifest {
    pub fn new(command: &str, config: &str, inputs: Inputs) -> Self {
        Manifest {
            command: command.to_string(),
            config: config.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: inputs.digests,
            results: BTreeMap::new(),
            wall_time_ms: 0,
        }
    }

    /// Write an output file and record its digest.
    pub fn write_output(&mut self, dir: &Path, name: &str, text: &str) -> Result<()> {
        std::fs::write(dir.join(name), text)?;
        self.results.insert(name.to_string(), sha256_hex(text.as_bytes()));
        Ok(())
    }

    pub fn finish(mut self, dir: &Path, elapsed: Duration) -> Result<()> {
        self.wall_time_ms = elapsed.as_millis();
        let json = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(dir.join("manifest.json"), json)?;
        Ok(())
    }
}
