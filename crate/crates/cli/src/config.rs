use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use crate::args::{CrossTerm, Method, ProcessName, SuiteName};
use crate::UsageError;

/// Flat TOML mirror of the command-line flags (same names, kebab-case).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub threads: Option<usize>,
    pub nodes_per_panel: Option<usize>,
    pub panels: Option<usize>,
    pub rel_tol: Option<f64>,
    pub process: Option<ProcessName>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub beta: Option<f64>,
    pub y: Option<f64>,
    pub fisou_cross: Option<CrossTerm>,
    pub alphas: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub t_points: Option<usize>,
    pub u: Option<f64>,
    pub full_grid: Option<bool>,
    pub h: Option<f64>,
    pub n_paths: Option<usize>,
    pub seed: Option<u64>,
    pub method: Option<Method>,
    pub shared_z: Option<bool>,
    pub suite: Option<SuiteName>,
    pub report: Option<PathBuf>,
    pub params: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        let cfg = toml::from_str(&text)
            .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))
            .context("loading configuration")?;
        Ok(cfg)
    }
}

/// Flag, then config file, then default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn pick_list(flag: Vec<f64>, file: Option<Vec<f64>>, default: &[f64]) -> Vec<f64> {
    if !flag.is_empty() {
        flag
    } else {
        file.unwrap_or_else(|| default.to_vec())
    }
}

/// Neuron parameter file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeuronFile {
    pub c_m: f64,
    #[serde(default)]
    pub g_l: f64,
    #[serde(default)]
    pub v_l: f64,
    pub tau: f64,
    pub varsigma: f64,
    #[serde(default)]
    pub i0: f64,
    #[serde(default)]
    pub v0: f64,
    /// A number, or the string "stationary".
    pub eta0: Eta0,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Eta0 {
    Value(f64),
    Marker(String),
}

impl NeuronFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read neuron parameters {}: {e}", path.display())))?;
        Ok(toml::from_str(&text).map_err(|e| UsageError(format!("invalid neuron parameters {}: {e}", path.display())))?)
    }
}
