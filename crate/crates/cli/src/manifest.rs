//! Run manifests and output files.
//!
//! A command renders its outputs in memory, then the manifest (resolved
//! config plus provenance) is serialized and hashed, and every output file is
//! written with a header carrying that hash. The manifest contains nothing
//! run-specific beyond the config, so the same manifest always produces the
//! same bytes.

use std::fs;
use std::path::{Path, PathBuf};

use langmuir_mc::export::{write_rows, Format, Row};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::{Config, RunInfo};
use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const TOOL: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// A rendered output awaiting its header.
pub struct Artifact {
    pub name: String,
    /// `key=value` metadata placed in the header.
    pub meta: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl Artifact {
    pub fn from_rows<R: Row>(
        stem: &str,
        rows: &[R],
        format: Format,
        meta: Vec<(String, String)>,
    ) -> Result<Self, CliError> {
        let mut body = Vec::new();
        write_rows(&mut body, rows, format)?;
        Ok(Self {
            name: format!("{stem}.{}", format.extension()),
            meta,
            body,
        })
    }
}

pub fn manifest_text(command: &str, config: &Config, artifacts: &[Artifact]) -> Result<String, CliError> {
    let manifest = Config {
        run: Some(RunInfo {
            command: command.to_string(),
            tool_version: TOOL.to_string(),
            master_seed: config.experiment.seed,
            outputs: artifacts.iter().map(|a| a.name.clone()).collect(),
        }),
        ..config.resolved()
    };
    toml::to_string(&manifest).map_err(CliError::runtime)
}

pub fn hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn header(format: Format, command: &str, digest: &str, meta: &[(String, String)]) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut text = format!("# manifest_sha256={digest}\n# command={command} tool={TOOL}\n");
            for (k, v) in meta {
                text.push_str(&format!("# {k}={v}\n"));
            }
            text.into_bytes()
        }
        Format::Jsonl => {
            let mut obj = serde_json::Map::new();
            obj.insert("manifest_sha256".into(), json!(digest));
            obj.insert("command".into(), json!(command));
            obj.insert("tool".into(), json!(TOOL));
            for (k, v) in meta {
                obj.insert(k.clone(), json!(v));
            }
            let mut line = serde_json::to_vec(&serde_json::Value::Object(obj)).expect("header serializes");
            line.push(b'\n');
            line
        }
    }
}

/// Writes every artifact and the manifest into `out`; returns the paths.
pub fn write_all(
    out: &Path,
    command: &str,
    config: &Config,
    artifacts: &[Artifact],
) -> Result<Vec<PathBuf>, CliError> {
    let text = manifest_text(command, config, artifacts)?;
    let digest = hash(&text);
    fs::create_dir_all(out)?;
    let format = config.output.format;
    let mut written = Vec::with_capacity(artifacts.len() + 1);
    for artifact in artifacts {
        let mut bytes = header(format, command, &digest, &artifact.meta);
        bytes.extend_from_slice(&artifact.body);
        let path = out.join(&artifact.name);
        fs::write(&path, bytes)?;
        written.push(path);
    }
    let path = out.join(MANIFEST_FILE);
    fs::write(&path, text)?;
    written.push(path);
    Ok(written)
}
