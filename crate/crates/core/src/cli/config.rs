//! Workspace configuration: limits, sizes and paths shared by every command.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::tfnp::DEFAULT_SWEEP_LIMIT;

/// Every field has a default, so a config file only lists what it changes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkspaceConfig {
    /// Largest circuit any compilation may build. Default `2^22`.
    pub gate_cap: usize,
    /// Largest witness sweep a solver attempts. Default `2^20`.
    pub sweep_limit: u64,
    /// Largest domain `check-reduction` accepts. Default `2^16`.
    pub max_domain: usize,
    /// Seed for every randomized generator. Default 0.
    pub seed: u64,
    /// Random circuits per width in the self-test circuit batteries. Default 6.
    pub battery_size: usize,
    /// Generated sentences in the Herbrand self-test items. Default 40.
    pub sentences: usize,
    /// Shipped problem, reduction and sentence records. Defaults to the
    /// crate's `data` directory.
    pub data_dir: PathBuf,
}

impl Default for WorkspaceConfig {
    fn default() -> Self {
        WorkspaceConfig {
            gate_cap: 1 << 22,
            sweep_limit: DEFAULT_SWEEP_LIMIT,
            max_domain: 1 << 16,
            seed: 0,
            battery_size: 6,
            sentences: 40,
            data_dir: PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")),
        }
    }
}

impl WorkspaceConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: WorkspaceConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let limits = [
            ("gate_cap", self.gate_cap as u64),
            ("sweep_limit", self.sweep_limit),
            ("max_domain", self.max_domain as u64),
            ("battery_size", self.battery_size as u64),
            ("sentences", self.sentences as u64),
        ];
        match limits.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(format!("config: {name} must be positive")),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: WorkspaceConfig = serde_json::from_str(r#"{"seed": 7}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.gate_cap, WorkspaceConfig::default().gate_cap);
        assert!(cfg.validate().is_ok());
        let zero: WorkspaceConfig = serde_json::from_str(r#"{"max_domain": 0}"#).unwrap();
        assert!(zero.validate().unwrap_err().contains("max_domain"));
        assert!(serde_json::from_str::<WorkspaceConfig>(r#"{"gatecap": 1}"#).is_err());
    }
}
