//! Experiment runner: JSON run configs, bundled presets and artifact writing.

pub mod config;
pub mod presets;
pub mod runner;

use std::path::{Path, PathBuf};

use anyhow::Context;

pub use config::{parse_config, RunConfig, SCHEMA_VERSION};
pub use runner::{run_config, FailureKind, RunError, RunReport};

/// Environment variable overriding every other output location.
pub const OUT_ENV: &str = "SERILIN_OUT";

/// Output root used when nothing else names one.
pub const DEFAULT_OUT: &str = "serilin-out";

/// Resolve a `run` target: a preset name, or else a path to a config file.
pub fn load_target(target: &str) -> Result<RunConfig, RunError> {
    if let Some(config) = presets::preset(target) {
        return Ok(config);
    }
    let path = Path::new(target);
    if !path.exists() {
        return presets::require_preset(target)
            .context("no config file at that path either")
            .map_err(RunError::config);
    }
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(RunError::io)?;
    parse_config(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(RunError::config)
}

/// Output root by precedence: environment, then `--out`, then the config, then the default.
pub fn output_root(env: Option<&str>, flag: Option<&Path>, config: &RunConfig) -> PathBuf {
    if let Some(e) = env.filter(|e| !e.is_empty()) {
        return PathBuf::from(e);
    }
    flag.map(Path::to_path_buf)
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_root_precedence() {
        let mut config = presets::preset("fig1-delta-ic").unwrap();
        assert_eq!(output_root(None, None, &config), PathBuf::from(DEFAULT_OUT));
        config.out_dir = Some("cfg".into());
        assert_eq!(output_root(None, None, &config), PathBuf::from("cfg"));
        assert_eq!(
            output_root(None, Some(Path::new("flag")), &config),
            PathBuf::from("flag")
        );
        assert_eq!(
            output_root(Some("env"), Some(Path::new("flag")), &config),
            PathBuf::from("env")
        );
        assert_eq!(
            output_root(Some(""), Some(Path::new("flag")), &config),
            PathBuf::from("flag")
        );
    }
}
