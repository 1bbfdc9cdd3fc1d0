use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Deserialize;

use crate::corpus::{ColumnMap, ConllFormat, ContextSpec, Pos, PosMap};
use crate::space::Weighting;

use super::UsageError;

/// Optional TOML defaults for `build-space`. Command-line flags win.
///
/// ```toml
/// context = "win5d"
/// weighting = "plmi"
/// min_freq = 5
///
/// [columns]
/// head = 8
/// deprel = 9
///
/// [pos_map]
/// NNS = "n"
/// MD = "v"
/// ```
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub context: Option<ContextSpec>,
    pub weighting: Option<Weighting>,
    pub min_freq: Option<u64>,
    pub normalize_entropy: Option<bool>,
    pub jobs: Option<usize>,
    pub columns: Option<ColumnMap>,
    #[serde(default)]
    pub pos_map: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
    }

    pub fn conll_format(&self) -> anyhow::Result<ConllFormat> {
        let mut pos_map = PosMap::new();
        for (tag, code) in &self.pos_map {
            let pos = match code.as_str() {
                "-" | "x" | "other" => Pos::Other,
                c => Pos::from_code(c).ok_or_else(|| UsageError(format!("pos_map: `{tag}` maps to unknown code `{c}`")))?,
            };
            pos_map.insert(tag.clone(), pos);
        }
        Ok(ConllFormat { columns: self.columns.unwrap_or_default(), pos_map })
    }
}
