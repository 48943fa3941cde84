use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use polyqubit::experiments::SweepSpec;
use serde::Deserialize;
use sha2::{Digest, Sha256};

pub const SUPPORTED_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

/// A run config file: a required `schema_version`, an optional `[output]` table and the
/// sweep fields at top level.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub output: OutputSettings,
    pub spec: SweepSpec,
}

/// Rejected config; maps to exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid config: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Self::parse_inner(text).map_err(|e| ConfigError(format!("{e:#}")).into())
    }

    fn parse_inner(text: &str) -> anyhow::Result<Self> {
        let mut table: toml::Table = toml::from_str(text)?;
        let schema_version = match table.remove("schema_version") {
            None => bail!("missing field `schema_version`"),
            Some(v) => v
                .as_integer()
                .and_then(|v| u32::try_from(v).ok())
                .context("field `schema_version` must be a non-negative integer")?,
        };
        if schema_version != SUPPORTED_SCHEMA {
            bail!("field `schema_version`: unsupported version {schema_version}, expected {SUPPORTED_SCHEMA}");
        }
        let output = match table.remove("output") {
            None => OutputSettings::default(),
            Some(v) => v.try_into().context("in table `output`")?,
        };
        let spec: SweepSpec = toml::Value::Table(table).try_into()?;
        Ok(Self {
            output,
            spec,
        })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// SHA-256 of the effective spec (after command-line overrides), as hex.
pub fn spec_hash(spec: &SweepSpec) -> String {
    let canonical = serde_json::to_string(spec).expect("specs always serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}
