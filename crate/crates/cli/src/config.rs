//! Run configuration: a JSON file, command-line flags, or both. Flags win.

use std::fs;
use std::path::{Path, PathBuf};

use qwalk::{Graph, GraphKind, WalkParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Where the graph comes from. Exactly one source must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    File(PathBuf),
    Generate(GraphKind),
}

impl GraphSource {
    pub fn load(&self) -> CliResult<Graph> {
        match self {
            GraphSource::File(path) => load_graph(path),
            GraphSource::Generate(kind) => Ok(Graph::generate(kind)?),
        }
    }
}

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Graph::from_json(&text).map_err(|e| CliError::graph_load(path, e))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default)]
    pub params: WalkParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Values present in `flags` replace those in `self`.
    pub fn overlay(mut self, flags: RunConfig) -> Self {
        if flags.graph.is_some() {
            self.graph = flags.graph;
        }
        if flags.kind.is_some() {
            self.kind = flags.kind;
        }
        if flags.csv.is_some() {
            self.csv = flags.csv;
        }
        if flags.report.is_some() {
            self.report = flags.report;
        }
        self.params.overlay(&flags.params);
        self
    }

    pub fn graph_source(&self) -> CliResult<&GraphSource> {
        self.graph.as_ref().ok_or_else(|| {
            CliError::Usage("no graph given (use --graph FILE or --gen SPEC)".into())
        })
    }

    pub fn walk_kind(&self) -> CliResult<&str> {
        self.kind
            .as_deref()
            .ok_or_else(|| CliError::Usage("no walk kind given (use --kind)".into()))
    }
}
