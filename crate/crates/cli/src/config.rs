//! Run configuration: defaults, an optional `key = value` file, and flag
//! overrides, applied in that order.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use comove_core::crossbicorr::{DEFAULT_ALPHA, DEFAULT_EXPONENT, DEFAULT_WINDOW_LENGTH};
use comove_core::prewhiten::{DEFAULT_FIXED_ORDER, DEFAULT_MAX_ORDER};
use comove_core::{OrderRule, PrewhitenConfig, PrewhitenScope, WindowSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PrewhitenMode {
    Bic,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    PerWindow,
    FullSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub window_length: usize,
    pub exponent_c: f64,
    pub alpha: f64,
    pub prewhiten_mode: PrewhitenMode,
    pub fixed_order: usize,
    pub p_max: usize,
    pub scope: Scope,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            window_length: DEFAULT_WINDOW_LENGTH,
            exponent_c: DEFAULT_EXPONENT,
            alpha: DEFAULT_ALPHA,
            prewhiten_mode: PrewhitenMode::Fixed,
            fixed_order: DEFAULT_FIXED_ORDER,
            p_max: DEFAULT_MAX_ORDER,
            scope: Scope::PerWindow,
            output_format: OutputFormat::Csv,
        }
    }
}

/// Flag values; `None` leaves the file or default value in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub window_length: Option<usize>,
    pub exponent_c: Option<f64>,
    pub alpha: Option<f64>,
    pub prewhiten_mode: Option<PrewhitenMode>,
    pub fixed_order: Option<usize>,
    pub p_max: Option<usize>,
    pub scope: Option<Scope>,
    pub output_format: Option<OutputFormat>,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value {value:?} for {key}")))
}

fn parse_enum<T: clap::ValueEnum>(key: &str, value: &str) -> Result<T> {
    T::from_str(value, true).map_err(|_| CliError::Usage(format!("invalid value {value:?} for {key}")))
}

impl RunConfig {
    /// Reads `key = value` lines. Keys are the long flag names (`window`,
    /// `c`, `alpha`, `prewhiten`, `order`, `p-max`, `scope`, `format`);
    /// `#` starts a comment.
    pub fn parse_file_contents(contents: &str) -> Result<Overrides> {
        let mut entries = BTreeMap::new();
        for (n, raw) in contents.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let value = value.trim().trim_matches('"');
            entries.insert(key.trim().to_string(), value.to_string());
        }
        let mut o = Overrides::default();
        for (key, value) in &entries {
            match key.as_str() {
                "window" => o.window_length = Some(parse(key, value)?),
                "c" => o.exponent_c = Some(parse(key, value)?),
                "alpha" => o.alpha = Some(parse(key, value)?),
                "prewhiten" => o.prewhiten_mode = Some(parse_enum(key, value)?),
                "order" => o.fixed_order = Some(parse(key, value)?),
                "p-max" => o.p_max = Some(parse(key, value)?),
                "scope" => o.scope = Some(parse_enum(key, value)?),
                "format" => o.output_format = Some(parse_enum(key, value)?),
                other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
            }
        }
        Ok(o)
    }

    pub fn load_file(path: &Path) -> Result<Overrides> {
        let contents = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse_file_contents(&contents)
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(v) = o.$field { self.$field = v; } )* };
        }
        set!(window_length, exponent_c, alpha, prewhiten_mode, fixed_order, p_max, scope, output_format);
        self
    }

    pub fn window_spec(&self) -> Result<WindowSpec> {
        WindowSpec::new(self.window_length, self.exponent_c, self.alpha)
            .map_err(|e| CliError::core("window configuration", e))
    }

    pub fn prewhiten(&self) -> Result<PrewhitenConfig> {
        let rule = match self.prewhiten_mode {
            PrewhitenMode::Bic => OrderRule::Bic { max_order: self.p_max },
            PrewhitenMode::Fixed => {
                if self.fixed_order < 1 {
                    return Err(CliError::Usage("--order must be at least 1".into()));
                }
                OrderRule::Fixed { order: self.fixed_order }
            }
        };
        let scope = match self.scope {
            Scope::PerWindow => PrewhitenScope::PerWindow,
            Scope::FullSample => PrewhitenScope::FullSample,
        };
        Ok(PrewhitenConfig { rule, scope })
    }
}
