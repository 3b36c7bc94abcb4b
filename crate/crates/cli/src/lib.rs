//! `ffr`: coverage and rate sweeps, rate-optimal thresholds and Monte Carlo
//! cross-checks for planned fractional frequency reuse.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical
//! failure, 4 a requested simulation check failed.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ffr_core::FfrError;

use config::{ChannelArg, CheckArg, CommandKind, ModeArg, RunConfig, ShapeArg, Sweep};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Numerical(_) => EXIT_NUMERICAL,
            Self::CheckFailed(_) => EXIT_CHECK,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "error: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::CheckFailed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<FfrError> for CliError {
    fn from(e: FfrError) -> Self {
        match e {
            FfrError::Numerical { .. } => Self::Numerical(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ffr", version, about = "Coverage, rate and optimal thresholds for planned FFR networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coverage probability versus distance (CSV).
    Coverage(CommonArgs),
    /// Cell-average normalized rate versus SINR threshold (CSV).
    Rate(RateArgs),
    /// Rate-optimal thresholds and gains per path-loss exponent (JSON).
    Optimize(OptimizeArgs),
    /// Monte Carlo estimates checked against the closed forms (CSV + JSON summary).
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Cell radius in meters (half the inter-site distance).
    #[arg(long = "R", value_name = "METERS")]
    pub cell_radius: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub target_db: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub threshold_db: Option<f64>,
    #[arg(long)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub r_steps: Option<usize>,
    /// Noise-to-transmit-power ratio referred to the cell edge (linear).
    #[arg(long)]
    pub noise: Option<f64>,
    /// Users closer than this to their site are excluded (meters).
    #[arg(long)]
    pub min_radius: Option<f64>,
    #[arg(long)]
    pub cell_shape: Option<ShapeArg>,
    /// Write the main output here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Print the merged configuration as JSON and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Threshold sweep in dB as start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated path-loss exponents; defaults to `--alpha` if given.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Sample count; accepts forms like 1e6.
    #[arg(long, value_parser = parse_count)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent random streams the samples are split across.
    #[arg(long)]
    pub streams: Option<usize>,
    #[arg(long)]
    pub check: Option<CheckArg>,
    /// Tapped-delay-line channel; switches to the per-distance FFR coverage study.
    #[arg(long)]
    pub channel: Option<ChannelArg>,
    /// JSON channel profile {name, delays_ns, powers_db}.
    #[arg(long)]
    pub channel_profile: Option<PathBuf>,
    /// Worker threads; output does not depend on this.
    #[arg(long, env = "FFR_THREADS")]
    pub threads: Option<usize>,
    /// Write the JSON summary here instead of stderr.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(format!("not a whole non-negative count: {s:?}"))
    }
}

impl CommonArgs {
    fn merge(&self, kind: CommandKind) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        c.command = Some(kind);
        macro_rules! set {
            ($($flag:ident => $field:ident),*) => {$(if let Some(v) = self.$flag.clone() { c.$field = v; })*};
        }
        set!(cell_radius => cell_radius_m, alpha => alpha, target_db => target_db, threshold_db => threshold_db,
             mode => mode, r_steps => r_steps, noise => noise_over_power, min_radius => min_radius_m,
             cell_shape => cell_shape);
        if self.output.is_some() {
            c.output = self.output.clone();
        }
        Ok(c)
    }
}

/// Output of a command: the main artifact and an optional side report.
pub struct Report {
    pub body: String,
    pub summary: Option<String>,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (common, cfg, summary_path) = match &cli.command {
        Command::Coverage(a) => (a, a.merge(CommandKind::Coverage)?, None),
        Command::Rate(a) => {
            let mut c = a.common.merge(CommandKind::Rate)?;
            if let Some(s) = a.sweep {
                c.threshold_sweep = s;
            }
            (&a.common, c, None)
        }
        Command::Optimize(a) => {
            let mut c = a.common.merge(CommandKind::Optimize)?;
            if let Some(list) = &a.alphas {
                c.alphas = list.clone();
            } else if let Some(alpha) = a.common.alpha {
                c.alphas = vec![alpha];
            }
            (&a.common, c, None)
        }
        Command::Simulate(a) => {
            let mut c = a.common.merge(CommandKind::Simulate)?;
            if let Some(n) = a.samples {
                c.samples = n;
            }
            if let Some(s) = a.seed {
                c.seed = s;
            }
            if let Some(s) = a.streams {
                c.streams = s;
            }
            if let Some(k) = a.check {
                c.check = k;
            }
            if a.channel.is_some() {
                c.channel = a.channel;
            }
            if a.channel_profile.is_some() {
                c.channel_profile = a.channel_profile.clone();
            }
            if let Some(n) = a.threads {
                if n > 0 {
                    // fails only if a pool already exists, which changes nothing observable
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                }
            }
            (&a.common, c, a.summary.clone())
        }
    };

    if common.print_config {
        println!("{}", cfg.to_json());
        return Ok(());
    }

    let outcome = match cfg.command.expect("set by merge") {
        CommandKind::Coverage => commands::coverage(&cfg),
        CommandKind::Rate => commands::rate(&cfg),
        CommandKind::Optimize => commands::optimize(&cfg),
        CommandKind::Simulate => commands::simulate(&cfg),
    };
    let (report, failure) = match outcome {
        Ok(r) => (r, None),
        Err(commands::Failed { report: Some(r), error }) => (r, Some(error)),
        Err(commands::Failed { report: None, error }) => return Err(error),
    };

    match &cfg.output {
        Some(p) => std::fs::write(p, &report.body).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(report.body.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Usage(e.to_string()))?;
        }
    }
    if let Some(s) = &report.summary {
        match &summary_path {
            Some(p) => std::fs::write(p, s).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
            None => eprintln!("{s}"),
        }
    }
    failure.map_or(Ok(()), Err)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn flags_override_config() {
        let cli = Cli::try_parse_from(["ffr", "coverage", "--alpha", "4", "--threshold-db", "-5"]).unwrap();
        let Command::Coverage(a) = cli.command else { panic!() };
        let c = a.merge(CommandKind::Coverage).unwrap();
        assert_eq!(c.alpha, 4.0);
        assert_eq!(c.threshold_db, -5.0);
        assert_eq!(c.target_db, 0.0);
    }
}
