use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::output::Format;

/// A complete run described in a TOML file.
///
/// ```toml
/// command = ["mvt", "count", "2", "1", "3"]
/// format = "json"
/// output = "count.json"
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand and its arguments, as they would be typed.
    pub command: Vec<String>,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub timestamp: bool,
    /// Largest `t` accepted by the zeta commands.
    #[serde(default)]
    pub max_t: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    /// Equivalent command line, program name included.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec!["vmv".to_string()];
        if let Some(f) = self.format {
            let name = match f {
                Format::Text => "text",
                Format::Csv => "csv",
                Format::Json => "json",
            };
            args.extend(["--format".to_string(), name.to_string()]);
        }
        if let Some(o) = &self.output {
            args.extend(["--output".to_string(), o.display().to_string()]);
        }
        if let Some(t) = self.threads {
            args.extend(["--threads".to_string(), t.to_string()]);
        }
        if let Some(s) = self.seed {
            args.extend(["--seed".to_string(), s.to_string()]);
        }
        if self.timestamp {
            args.push("--timestamp".to_string());
        }
        if let Some(m) = self.max_t {
            args.extend(["--max-t".to_string(), m.to_string()]);
        }
        args.extend(self.command.iter().cloned());
        args
    }
}
