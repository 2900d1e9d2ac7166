use std::fs;
use std::path::{Path, PathBuf};

use hybridauth_core::biometric::Trace;
use hybridauth_core::Transcript;
use serde::Serialize;

use crate::CliError;

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn read_transcript(path: &Path) -> Result<Transcript, CliError> {
    Transcript::from_json(&read_to_string(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn read_trace(path: &Path) -> Result<Trace, CliError> {
    Trace::parse_jsonl(&read_to_string(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::Data(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    write(path, &(serde_json::to_string_pretty(value).expect("values serialize") + "\n"))
}

/// Every `.jsonl` file under `dir`, sorted by path.
pub fn jsonl_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let entries = fs::read_dir(&d).map_err(|e| CliError::Data(format!("{}: {e}", d.display())))?;
        for entry in entries {
            let path = entry.map_err(CliError::data)?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|x| x == "jsonl") {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}
