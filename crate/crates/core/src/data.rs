//! Canonical data types and line-delimited dataset I/O.
//!
//! Datasets are UTF-8 files with one JSON record per line. Required keys are
//! `id`, `prompt`, and `response`; `dataset_tag` is optional and defaults to
//! `"default"`. Unknown keys are preserved in an opaque metadata map so a
//! save/load round trip does not lose information. `position_index` is the
//! 0-based order within the file and is assigned at load time, never stored:
//! reordering a file deliberately changes it, because positional analyses are
//! about physical training order.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::DataError;

pub const DEFAULT_DATASET_TAG: &str = "default";

/// One supervised fine-tuning example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SftInstance {
    pub id: String,
    pub prompt: String,
    pub response: String,
    #[serde(default = "default_tag")]
    pub dataset_tag: String,
    /// 0-based order within the concatenated training sequence. Assigned at
    /// load time from line order; never serialized.
    #[serde(skip)]
    pub position_index: usize,
    /// Unknown record fields, preserved verbatim.
    #[serde(flatten)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

fn default_tag() -> String {
    DEFAULT_DATASET_TAG.to_string()
}

impl SftInstance {
    pub fn new(id: impl Into<String>, prompt: impl Into<String>, response: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            prompt: prompt.into(),
            response: response.into(),
            dataset_tag: default_tag(),
            position_index: 0,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.dataset_tag = tag.into();
        self
    }
}

/// The multiple-choice probe form of one instance: the original response is
/// preserved as the correct option among distractors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McItem {
    pub instance_id: String,
    pub stem: String,
    pub options: Vec<String>,
    pub correct_index: usize,
}

impl McItem {
    /// Checks the structural invariants: at least two pairwise-distinct
    /// options and a correct index in range.
    pub fn validate(&self) -> Result<(), String> {
        if self.options.len() < 2 {
            return Err(format!("item {} has fewer than 2 options", self.instance_id));
        }
        if self.correct_index >= self.options.len() {
            return Err(format!(
                "item {} correct_index {} out of range {}",
                self.instance_id,
                self.correct_index,
                self.options.len()
            ));
        }
        for i in 0..self.options.len() {
            for j in (i + 1)..self.options.len() {
                if self.options[i] == self.options[j] {
                    return Err(format!("item {} has duplicate option at {i} and {j}", self.instance_id));
                }
            }
        }
        Ok(())
    }
}

/// Load a dataset, assigning `position_index` from line order (0-based).
/// Blank lines are skipped but still advance the line counter used in errors.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<SftInstance>, DataError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let reader = BufReader::new(file);

    let mut instances = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| DataError::Io {
            path: display.clone(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut instance: SftInstance =
            serde_json::from_str(&line).map_err(|e| DataError::Parse {
                path: display.clone(),
                line: line_no,
                message: e.to_string(),
            })?;
        if instance.prompt.is_empty() {
            return Err(DataError::EmptyField {
                path: display.clone(),
                line: line_no,
                field: "prompt",
            });
        }
        if instance.response.is_empty() {
            return Err(DataError::EmptyField {
                path: display.clone(),
                line: line_no,
                field: "response",
            });
        }
        if let Some(&first_line) = seen.get(&instance.id) {
            return Err(DataError::DuplicateId {
                id: instance.id,
                first_line,
                second_line: line_no,
            });
        }
        seen.insert(instance.id.clone(), line_no);
        instance.position_index = instances.len();
        instances.push(instance);
    }
    Ok(instances)
}

/// Write a dataset in file order, one JSON record per line.
pub fn save_dataset(path: impl AsRef<Path>, instances: &[SftInstance]) -> Result<(), DataError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = File::create(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let mut w = BufWriter::new(file);
    for instance in instances {
        let line = serde_json::to_string(instance).map_err(|e| DataError::Parse {
            path: display.clone(),
            line: 0,
            message: e.to_string(),
        })?;
        writeln!(w, "{line}").map_err(|source| DataError::Io {
            path: display.clone(),
            source,
        })?;
    }
    Ok(())
}

/// Generic line-delimited JSON writer used for items, records, summaries and labels.
pub fn save_jsonl<T: Serialize>(path: impl AsRef<Path>, rows: &[T]) -> Result<(), DataError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = File::create(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let mut w = BufWriter::new(file);
    for row in rows {
        let line = serde_json::to_string(row).map_err(|e| DataError::Parse {
            path: display.clone(),
            line: 0,
            message: e.to_string(),
        })?;
        writeln!(w, "{line}").map_err(|source| DataError::Io {
            path: display.clone(),
            source,
        })?;
    }
    Ok(())
}

/// Generic line-delimited JSON reader.
pub fn load_jsonl<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<Vec<T>, DataError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| DataError::Io {
            path: display.clone(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(serde_json::from_str(&line).map_err(|e| DataError::Parse {
            path: display.clone(),
            line: idx + 1,
            message: e.to_string(),
        })?);
    }
    Ok(rows)
}
