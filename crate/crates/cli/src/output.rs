use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_f64).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub library_version: &'static str,
    pub command_line: Vec<String>,
    pub parameters: serde_json::Value,
    pub files: Vec<FileRecord>,
    pub wall_time_seconds: f64,
}

/// Invocation details recorded in every manifest.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub command_line: Vec<String>,
    pub started: Instant,
}

impl RunContext {
    pub fn new(command_line: Vec<String>) -> Self {
        Self {
            command_line,
            started: Instant::now(),
        }
    }
}

/// Files written into one output directory. Unless [`OutputSet::finish`]
/// succeeds, everything written so far is removed on drop.
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    files: Vec<FileRecord>,
    written: Vec<PathBuf>,
    committed: bool,
}

fn io_error(action: &str, path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("cannot {action} {}: {err}", path.display()))
}

impl OutputSet {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| io_error("create directory", dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            written: Vec::new(),
            committed: false,
        })
    }

    fn put(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        // Track before writing so a half-written file is also cleaned up.
        self.written.push(path.clone());
        fs::write(&path, contents).map_err(|e| io_error("write", &path, e))
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        self.put(name, contents.as_bytes())?;
        self.files.push(FileRecord {
            path: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
            bytes: contents.len(),
        });
        Ok(())
    }

    pub fn files(&self) -> &[FileRecord] {
        &self.files
    }

    /// Writes the manifest as the final file and keeps the outputs.
    pub fn finish(mut self, ctx: &RunContext, parameters: serde_json::Value) -> Result<RunManifest, CliError> {
        let manifest = RunManifest {
            tool: "antiratio",
            version: env!("CARGO_PKG_VERSION"),
            library_version: antiratio::VERSION,
            command_line: ctx.command_line.clone(),
            parameters,
            files: self.files.clone(),
            wall_time_seconds: ctx.started.elapsed().as_secs_f64(),
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        self.put(MANIFEST_NAME, text.as_bytes())?;
        self.committed = true;
        Ok(manifest)
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        if !self.committed {
            for path in &self.written {
                let _ = fs::remove_file(path);
            }
        }
    }
}
