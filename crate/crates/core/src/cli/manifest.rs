use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Provenance record written beside an output as `<output>.manifest.json`.
/// It holds what is needed to rerun the command; the thread count is left
/// out since outputs do not depend on it.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Value,
    pub config: Value,
    pub outputs: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub stats: Value,
}

impl Manifest {
    pub fn new(command: &'static str, inputs: Value, config: Value) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            config,
            outputs: Vec::new(),
            stats: Value::Null,
        }
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        output.with_file_name(name)
    }

    /// Write one manifest beside each recorded output.
    pub fn write(&self) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        for out in &self.outputs {
            fs::write(Self::path_for(out), &text)?;
        }
        Ok(())
    }
}
