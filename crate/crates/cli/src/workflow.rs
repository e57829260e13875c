use std::path::PathBuf;

use fiberwise_core::io::from_toml;
use fiberwise_core::Result;
use serde::{Deserialize, Serialize};

/// A reproducible invocation: one subcommand with its inputs and flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkflowConfig {
    pub command: String,
    #[serde(default)]
    pub inputs: Vec<String>,
    /// Extra subcommand arguments, passed through verbatim.
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub verbosity: u8,
    #[serde(default)]
    pub generic: bool,
    #[serde(default)]
    pub bound: Option<i64>,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub table: bool,
}

impl WorkflowConfig {
    pub fn parse(text: &str) -> Result<Self> {
        from_toml(text)
    }

    /// The equivalent command line. Relative input paths are resolved
    /// against `dir`, the directory of the workflow file.
    pub fn argv(&self, dir: &std::path::Path) -> Vec<String> {
        let mut v = vec!["fiberwise".to_string()];
        if let Some(s) = self.seed {
            v.extend(["--seed".into(), s.to_string()]);
        }
        if let Some(o) = &self.out {
            v.extend(["--out".into(), dir.join(o).display().to_string()]);
        }
        if self.generic {
            v.push("--generic".into());
        }
        if let Some(b) = self.bound {
            v.extend(["--bound".into(), b.to_string()]);
        }
        if let Some(f) = &self.field {
            v.extend(["--field".into(), f.clone()]);
        }
        if let Some(j) = self.jobs {
            v.extend(["--jobs".into(), j.to_string()]);
        }
        if self.table {
            v.push("--table".into());
        }
        for _ in 0..self.verbosity {
            v.push("-v".into());
        }
        v.push(self.command.clone());
        for i in &self.inputs {
            let p = dir.join(i);
            v.push(if p.exists() { p.display().to_string() } else { i.clone() });
        }
        v.extend(self.args.iter().cloned());
        v
    }
}
