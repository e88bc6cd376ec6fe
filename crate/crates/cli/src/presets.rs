//! Named configs bundled into the binary.

use anyhow::{Context, Result};

use crate::config::{parse_config, RunConfig};

/// Preset names and their JSON, in listing order.
pub const PRESETS: &[(&str, &str)] = &[
    (
        "fig1-delta-ic",
        include_str!("../presets/fig1-delta-ic.json"),
    ),
    (
        "fig2-cosine-squared",
        include_str!("../presets/fig2-cosine-squared.json"),
    ),
    (
        "fig3-refeeding",
        include_str!("../presets/fig3-refeeding.json"),
    ),
    (
        "fig4-refeed-order",
        include_str!("../presets/fig4-refeed-order.json"),
    ),
    ("fig5-rates", include_str!("../presets/fig5-rates.json")),
    (
        "fig6-turbulence",
        include_str!("../presets/fig6-turbulence.json"),
    ),
    (
        "dirichlet-1d-errors",
        include_str!("../presets/dirichlet-1d-errors.json"),
    ),
    (
        "dirichlet-2d-errors",
        include_str!("../presets/dirichlet-2d-errors.json"),
    ),
    (
        "dirichlet-2d-rates",
        include_str!("../presets/dirichlet-2d-rates.json"),
    ),
    (
        "fig9-barenblatt",
        include_str!("../presets/fig9-barenblatt.json"),
    ),
];

/// `(name, description)` for every preset.
pub fn list_presets() -> Vec<(&'static str, String)> {
    PRESETS
        .iter()
        .map(|(name, _)| {
            let description = preset(name).map(|c| c.description).unwrap_or_default();
            (*name, description)
        })
        .collect()
}

/// Parsed config of a preset, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<RunConfig> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name)?;
    Some(
        parse_config(text)
            .with_context(|| format!("bundled preset {name}"))
            .expect("bundled presets are valid"),
    )
}

/// Parsed preset, with an error listing the known names.
pub fn require_preset(name: &str) -> Result<RunConfig> {
    preset(name).with_context(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        format!(
            "unknown preset {name:?}; known presets: {}",
            names.join(", ")
        )
    })
}
