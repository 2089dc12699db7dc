use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use eprb_core::RunManifest;

use crate::args::CliError;

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Write to the path (with a provenance sidecar) or print to stdout.
pub fn emit(
    out: Option<&Path>,
    contents: &str,
    manifest: Option<&RunManifest>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, contents)?;
            if let Some(m) = manifest {
                write_sidecar(path, m)?;
            }
        }
        None => print!("{contents}"),
    }
    Ok(())
}

pub fn write_sidecar(path: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".manifest.json");
    let json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    fs::write(sidecar, json + "\n")?;
    Ok(())
}

/// JSON reports carry their manifest inline; no sidecar.
pub fn emit_json(out: Option<&Path>, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
