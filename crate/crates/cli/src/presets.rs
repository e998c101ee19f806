//! Built-in job configurations.

use crate::config::{ConfigError, JobConfig};

const PRESETS: &[(&str, &str)] = &[
    ("paper-2.8", include_str!("../presets/paper-2.8.json")),
    ("paper-3.4", include_str!("../presets/paper-3.4.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

pub fn preset(name: &str) -> Result<JobConfig, ConfigError> {
    let text = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| ConfigError {
            path: String::new(),
            message: format!(
                "unknown example {name:?} (available: {})",
                names().collect::<Vec<_>>().join(", ")
            ),
        })?;
    JobConfig::from_json(text)
}
