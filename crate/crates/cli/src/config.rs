//! Optional TOML config file. Every key is optional; command-line flags win.
//!
//! ```toml
//! tol = 1e-9
//! workers = 4
//! seed = 42
//! restarts = 64
//! max_steps = 20000
//! t0 = 1.0
//! cooling = 0.995
//! prune = true
//! family = "k33"
//! samples = 200
//! canonical_limit = 10
//! switching_limit = 20
//! ```

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub tol: Option<f64>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub max_steps: Option<usize>,
    pub t0: Option<f64>,
    pub cooling: Option<f64>,
    pub prune: Option<bool>,
    pub family: Option<String>,
    pub samples: Option<usize>,
    pub canonical_limit: Option<usize>,
    pub switching_limit: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_config() {
        let c: FileConfig = toml::from_str("seed = 7\ncooling = 0.9\n").unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.cooling, Some(0.9));
        assert!(c.workers.is_none());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("sed = 7\n").is_err());
    }
}
