//! Flat `key = value` experiment configuration.
//!
//! Grammar: one `key = value` assignment per line; `#` starts a comment
//! (whole line or trailing); blank lines are ignored. Values are strings,
//! integers, reals, or comma-separated lists of integers/reals.
//!
//! Keys:
//!
//! | key           | value                                             |
//! |---------------|---------------------------------------------------|
//! | `v0`          | signal drift (real)                               |
//! | `sigma0`      | signal noise intensity (real)                     |
//! | `v`           | observation drift (real)                          |
//! | `sigma`       | observation noise intensity (real)                |
//! | `rho_w`       | noise cross-correlation (real)                    |
//! | `horizons`    | comma list of step counts, each >= 2              |
//! | `replicas`    | replica count, >= 1                               |
//! | `master_seed` | integer seed                                      |
//! | `study`       | `consistency` \| `error_validation` \|            |
//! |               | `correlation_sweep` \| `stationarity_check`       |
//! | `rho_grid`    | comma list of reals in [-1, 1] (sweep only)       |
//! | `out`         | output path (optional)                            |

use std::collections::BTreeMap;
use std::path::PathBuf;

use thiserror::Error;

use dmd_filter::error::DmdError;
use dmd_filter::model::SignalObservationModel;

/// Which Monte Carlo study to run.
#[derive(Debug, Clone, PartialEq)]
pub enum StudyKind {
    /// Calibrate on replicated pairs and track estimate spread across
    /// horizons.
    Consistency,
    /// Compare the closed-form error matrix to simulated mean-square
    /// errors.
    ErrorValidation,
    /// Sweep the noise correlation and track the correction terms.
    CorrelationSweep { rho_grid: Vec<f64> },
    /// Compare window variances of stationary-start trajectories.
    StationarityCheck,
}

impl StudyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StudyKind::Consistency => "consistency",
            StudyKind::ErrorValidation => "error_validation",
            StudyKind::CorrelationSweep { .. } => "correlation_sweep",
            StudyKind::StationarityCheck => "stationarity_check",
        }
    }
}

/// Default correlation grid for sweeps without an explicit `rho_grid`.
pub const DEFAULT_RHO_GRID: [f64; 5] = [-0.6, -0.3, 0.0, 0.3, 0.6];

/// A fully parsed experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: SignalObservationModel,
    pub horizons: Vec<usize>,
    pub replicas: usize,
    pub master_seed: u64,
    pub study: StudyKind,
    pub out: Option<PathBuf>,
}

/// Configuration parsing and validation errors.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    BadLine { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value for {key:?}: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("missing required key {0:?}")]
    MissingKey(&'static str),
    #[error("horizons must be non-empty and each at least 2")]
    BadHorizons,
    #[error("replicas must be at least 1")]
    NoReplicas,
    #[error("rho_grid entries must lie in [-1, 1]")]
    BadRhoGrid,
    #[error("rho_grid is only meaningful for study = correlation_sweep")]
    UnexpectedRhoGrid,
    #[error(transparent)]
    Model(#[from] DmdError),
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason: format!("not a real number: {value:?}"),
    })
}

fn parse_u64(key: &str, value: &str, line: usize) -> Result<u64, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason: format!("not an integer: {value:?}"),
    })
}

/// Parses a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    const KEYS: [&str; 11] = [
        "v0",
        "sigma0",
        "v",
        "sigma",
        "rho_w",
        "horizons",
        "replicas",
        "master_seed",
        "study",
        "rho_grid",
        "out",
    ];
    let mut seen: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::BadLine {
            line,
            text: content.to_string(),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { line, key });
        }
        if seen.insert(key.clone(), (line, value)).is_some() {
            return Err(ConfigError::DuplicateKey { line, key });
        }
    }

    let require = |key: &'static str| -> Result<(usize, String), ConfigError> {
        seen.get(key)
            .cloned()
            .ok_or(ConfigError::MissingKey(key))
    };

    let (l, v0) = require("v0")?;
    let v0 = parse_f64("v0", &v0, l)?;
    let (l, sigma0) = require("sigma0")?;
    let sigma0 = parse_f64("sigma0", &sigma0, l)?;
    let (l, v) = require("v")?;
    let v = parse_f64("v", &v, l)?;
    let (l, sigma) = require("sigma")?;
    let sigma = parse_f64("sigma", &sigma, l)?;
    let (l, rho_w) = require("rho_w")?;
    let rho_w = parse_f64("rho_w", &rho_w, l)?;
    let model = SignalObservationModel::from_raw(v0, sigma0, v, sigma, rho_w)?;

    let (l, horizons_text) = require("horizons")?;
    let mut horizons = Vec::new();
    for part in horizons_text.split(',') {
        horizons.push(parse_u64("horizons", part.trim(), l)? as usize);
    }
    if horizons.is_empty() || horizons.iter().any(|&t| t < 2) {
        return Err(ConfigError::BadHorizons);
    }

    let (l, replicas) = require("replicas")?;
    let replicas = parse_u64("replicas", &replicas, l)? as usize;
    if replicas == 0 {
        return Err(ConfigError::NoReplicas);
    }

    let (l, master_seed) = require("master_seed")?;
    let master_seed = parse_u64("master_seed", &master_seed, l)?;

    let (study_line, study_text) = require("study")?;
    let rho_grid = match seen.get("rho_grid") {
        Some((line, text)) => {
            let mut grid = Vec::new();
            for part in text.split(',') {
                grid.push(parse_f64("rho_grid", part.trim(), *line)?);
            }
            if grid.is_empty() || grid.iter().any(|r| !(-1.0..=1.0).contains(r)) {
                return Err(ConfigError::BadRhoGrid);
            }
            Some(grid)
        }
        None => None,
    };
    let study = match study_text.as_str() {
        "consistency" => StudyKind::Consistency,
        "error_validation" => StudyKind::ErrorValidation,
        "correlation_sweep" => StudyKind::CorrelationSweep {
            rho_grid: rho_grid.clone().unwrap_or_else(|| DEFAULT_RHO_GRID.to_vec()),
        },
        "stationarity_check" => StudyKind::StationarityCheck,
        other => {
            return Err(ConfigError::BadValue {
                line: study_line,
                key: "study".into(),
                reason: format!("unknown study {other:?}"),
            })
        }
    };
    if rho_grid.is_some() && !matches!(study, StudyKind::CorrelationSweep { .. }) {
        return Err(ConfigError::UnexpectedRhoGrid);
    }

    let out = seen.get("out").map(|(_, v)| PathBuf::from(v));

    Ok(ExperimentConfig {
        model,
        horizons,
        replicas,
        master_seed,
        study,
        out,
    })
}
