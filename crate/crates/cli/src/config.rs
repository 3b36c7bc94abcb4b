//! Run configuration: JSON file contents merged with command-line flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use ffr_core::analytics::CellShape;
use ffr_core::fading::TdlChannel;
use ffr_core::{build_layout, ChannelProfile, Correlation, CorrelationMode, SystemParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Coverage,
    Rate,
    Optimize,
    Simulate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    #[default]
    Independent,
    Correlated,
}

impl ModeArg {
    pub fn correlation(self) -> Correlation {
        match self {
            Self::Independent => Correlation::Independent,
            Self::Correlated => Correlation::FullyCorrelated,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Independent => "independent",
            Self::Correlated => "correlated",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CheckArg {
    Coverage,
    Rate,
    #[default]
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum ChannelArg {
    #[value(name = "pedA")]
    #[serde(rename = "pedA")]
    PedA,
    #[value(name = "vehA")]
    #[serde(rename = "vehA")]
    VehA,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ShapeArg {
    #[default]
    Disk,
    Hexagon,
}

impl ShapeArg {
    pub fn cell_shape(self) -> CellShape {
        match self {
            Self::Disk => CellShape::InradiusDisk,
            Self::Hexagon => CellShape::Hexagon,
        }
    }
}

/// Inclusive `start:stop:step` range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    const MAX_POINTS: usize = 100_000;

    pub fn validate(&self) -> Result<(), String> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        if !(self.step > 0.0) {
            return Err(format!("sweep step must be positive, got {}", self.step));
        }
        if self.stop < self.start {
            return Err(format!("sweep stop {} is below start {}", self.stop, self.start));
        }
        if (self.stop - self.start) / self.step > Self::MAX_POINTS as f64 {
            return Err(format!("sweep has more than {} points", Self::MAX_POINTS));
        }
        Ok(())
    }

    /// `start + i·step` up to `stop`, tolerant of rounding at the end point.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got {s:?}"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        let sweep = Self { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? };
        sweep.validate()?;
        Ok(sweep)
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// Everything a command needs. Angles and ratios are in dB, distances in
/// meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub cell_radius_m: f64,
    pub alpha: f64,
    /// Exponents solved by `optimize`.
    pub alphas: Vec<f64>,
    pub target_db: f64,
    pub threshold_db: f64,
    /// `σ²/P` referred to the cell edge.
    pub noise_over_power: f64,
    pub min_radius_m: f64,
    pub mode: ModeArg,
    pub cell_shape: ShapeArg,
    pub r_steps: usize,
    pub threshold_sweep: Sweep,
    pub samples: u64,
    pub seed: u64,
    pub streams: usize,
    pub check: CheckArg,
    pub channel: Option<ChannelArg>,
    /// JSON channel profile; takes precedence over `channel`.
    pub channel_profile: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            cell_radius_m: 577.0,
            alpha: 3.0,
            alphas: vec![2.0, 2.5, 3.0, 3.5, 4.0],
            target_db: 0.0,
            threshold_db: 0.0,
            noise_over_power: 0.0,
            min_radius_m: 0.0,
            mode: ModeArg::Independent,
            cell_shape: ShapeArg::Disk,
            r_steps: 50,
            threshold_sweep: Sweep { start: -10.0, stop: 10.0, step: 0.25 },
            samples: 1_000_000,
            seed: ffr_core::montecarlo::DEFAULT_SEED,
            streams: ffr_core::montecarlo::DEFAULT_STREAMS,
            check: CheckArg::All,
            channel: None,
            channel_profile: None,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn params_for(&self, alpha: f64) -> Result<SystemParams, CliError> {
        let layout = build_layout(self.cell_radius_m)?;
        Ok(SystemParams::from_db(alpha, self.target_db, self.threshold_db, self.noise_over_power, layout)?
            .with_min_radius(self.min_radius_m)?)
    }

    pub fn params(&self) -> Result<SystemParams, CliError> {
        self.params_for(self.alpha)
    }

    /// `R·i/steps` for `i = 1..=steps`.
    pub fn r_grid(&self) -> Result<Vec<f64>, CliError> {
        if self.r_steps == 0 {
            return Err(CliError::Usage("r-steps must be at least 1".into()));
        }
        Ok((1..=self.r_steps).map(|i| self.cell_radius_m * i as f64 / self.r_steps as f64).collect())
    }

    /// Fading mode for simulation: a channel profile if one is configured,
    /// otherwise the sub-band correlation regime.
    pub fn fading_mode(&self) -> Result<CorrelationMode, CliError> {
        let profile = match (&self.channel_profile, self.channel) {
            (Some(path), _) => Some(ChannelProfile::from_json_file(path)?),
            (None, Some(ChannelArg::PedA)) => Some(ChannelProfile::pedestrian_a()),
            (None, Some(ChannelArg::VehA)) => Some(ChannelProfile::vehicular_a()),
            (None, None) => None,
        };
        Ok(match profile {
            Some(p) => CorrelationMode::TappedDelayLine(TdlChannel::new(p)),
            None => match self.mode {
                ModeArg::Independent => CorrelationMode::Independent,
                ModeArg::Correlated => CorrelationMode::FullyCorrelated,
            },
        })
    }
}
