use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

pub const DEFAULT_OUT_DIR: &str = "analyze-out";
pub const MIN_GRID_POINTS: usize = 256;
pub const WITNESS_SIZE_RANGE: (usize, usize) = (8, 1024);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Diagnose,
    Validate,
    Witness,
    All,
}

impl Mode {
    pub fn validates(self) -> bool {
        matches!(self, Mode::Validate | Mode::All)
    }

    pub fn witnesses(self) -> bool {
        matches!(self, Mode::Witness | Mode::All)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Emit {
    Text,
    Json,
    Csv,
}

/// Diagnose normal solvability of a two-bank boundary problem from a JSON spec.
#[derive(Debug, Parser)]
#[command(name = "analyze", version)]
pub struct Cli {
    /// Problem specification (JSON).
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::All)]
    pub mode: Mode,
    /// Sample points for the ellipticity grid.
    #[arg(long = "grid", default_value_t = 4096)]
    pub grid_points: usize,
    /// Finite-section sizes for the witness.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256")]
    pub sizes: Vec<usize>,
    #[arg(long = "out", env = "ANALYZE_OUT_DIR", default_value = DEFAULT_OUT_DIR)]
    pub output_dir: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "text,json,csv")]
    pub emit: Vec<Emit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub mode: Mode,
    pub grid_points: usize,
    pub witness_sizes: Vec<usize>,
    pub output_dir: PathBuf,
    pub emit: BTreeSet<Emit>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ConfigError {
    #[error("grid points must be at least {MIN_GRID_POINTS} (got {0})")]
    GridTooSmall(usize),
    #[error("witness sizes must be strictly increasing within [8, 1024] (got {0:?})")]
    WitnessSizes(Vec<usize>),
}

impl RunConfig {
    pub fn new(cli: Cli) -> Result<Self, ConfigError> {
        let config = Self {
            input_path: cli.spec,
            mode: cli.mode,
            grid_points: cli.grid_points,
            witness_sizes: cli.sizes,
            output_dir: cli.output_dir,
            emit: cli.emit.into_iter().collect(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.grid_points < MIN_GRID_POINTS {
            return Err(ConfigError::GridTooSmall(self.grid_points));
        }
        let (lo, hi) = WITNESS_SIZE_RANGE;
        let sizes = &self.witness_sizes;
        if sizes.len() < 2 || sizes.iter().any(|n| !(lo..=hi).contains(n)) || sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::WitnessSizes(sizes.clone()));
        }
        Ok(())
    }
}
