//! Family archives: a directory holding `manifest.json`, one pattern file
//! per block under `blocks/`, and the arrangement witnesses under
//! `witnesses/`. The manifest's config alone determines every stored bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::pattern::Pattern;

use super::family::{block_name, BlockStore, LevelWitness, StandardBlockFamily};
use super::params::{schedule_params, DeepConfig, DeepParams};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub params: DeepParams,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArchiveReport {
    pub pass: bool,
    /// `field: recorded -> expected` lines.
    pub manifest_diff: Vec<String>,
    /// Name of the first stored block that differs from the rebuild.
    pub first_mismatch: Option<String>,
    pub blocks_checked: usize,
}

fn write_pattern(path: &Path, p: &Pattern) -> Result<()> {
    fs::write(path, p.to_text())?;
    Ok(())
}

pub fn write_archive(fam: &StandardBlockFamily, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir.join("blocks"))?;
    fs::create_dir_all(dir.join("witnesses"))?;
    let manifest = Manifest {
        version: crate::VERSION.to_string(),
        params: fam.params().clone(),
    };
    fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)? + "\n")?;
    for (i, level) in fam.levels().iter().enumerate() {
        for (j, b) in level.blocks.iter().enumerate() {
            write_pattern(&dir.join("blocks").join(format!("{}.txt", block_name(i, j))), b)?;
        }
        match &level.witness {
            LevelWitness::Base => {}
            LevelWitness::Matrix(r) => write_pattern(&dir.join("witnesses").join(format!("R_{i}.txt")), r)?,
            LevelWitness::Permutations(p) => fs::write(
                dir.join("witnesses").join(format!("pi_{i}.json")),
                serde_json::to_string(p)? + "\n",
            )?,
        }
    }
    Ok(())
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(dir.join(MANIFEST))?;
    Ok(serde_json::from_str(&text)?)
}

/// Leaf-level differences between two JSON values, as `path: a -> b`.
fn json_diff(path: &str, a: &Value, b: &Value, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let sub = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                json_diff(
                    &sub,
                    x.get(k).unwrap_or(&Value::Null),
                    y.get(k).unwrap_or(&Value::Null),
                    out,
                );
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                json_diff(&format!("{path}[{i}]"), u, v, out);
            }
        }
        _ if a != b => out.push(format!("{path}: {a} -> {b}")),
        _ => {}
    }
}

/// Rebuild the family from the manifest and compare it with the stored
/// blocks. With `expected`, the manifest's config is also diffed against
/// it, so an archive made under other settings fails with the differing
/// fields listed.
pub fn verify_archive(dir: &Path, expected: Option<&DeepConfig>) -> Result<ArchiveReport> {
    let manifest = read_manifest(dir)?;
    let mut diff = Vec::new();
    if let Some(exp) = expected {
        json_diff(
            "config",
            &serde_json::to_value(&manifest.params.config)?,
            &serde_json::to_value(exp)?,
            &mut diff,
        );
    }
    let derived = schedule_params(&manifest.params.config)?;
    json_diff(
        "params",
        &serde_json::to_value(&manifest.params)?,
        &serde_json::to_value(&derived)?,
        &mut diff,
    );
    let fam = StandardBlockFamily::build(&manifest.params.config)?;
    let mut first_mismatch = None;
    let mut checked = 0;
    'outer: for i in 0..=fam.depth() {
        for j in 0..fam.block_count(i) {
            let name = block_name(i, j);
            let path = dir.join("blocks").join(format!("{name}.txt"));
            let stored = match fs::read_to_string(&path) {
                Ok(text) => Pattern::from_text(&text).ok(),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
                Err(e) => return Err(Error::Io(e)),
            };
            checked += 1;
            if stored.as_ref() != Some(fam.block(i, j)) {
                first_mismatch = Some(name);
                break 'outer;
            }
        }
    }
    Ok(ArchiveReport {
        pass: diff.is_empty() && first_mismatch.is_none(),
        manifest_diff: diff,
        first_mismatch,
        blocks_checked: checked,
    })
}
