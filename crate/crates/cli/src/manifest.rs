use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

/// Provenance written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a, P: Serialize> {
    pub subcommand: &'a str,
    pub parameters: &'a P,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub timestamp: u64,
}

impl<'a, P: Serialize> RunManifest<'a, P> {
    pub fn new(subcommand: &'a str, parameters: &'a P, seed: Option<u64>) -> Self {
        RunManifest {
            subcommand,
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    pub fn write_beside(&self, output: &Path) -> std::io::Result<PathBuf> {
        let path = manifest_path(output);
        let text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(&path, text + "\n")?;
        Ok(path)
    }
}

/// `results.csv` -> `results.csv.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
