use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, Settings};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qcarpet", version, about = "Wave-packet revivals and quantum carpets in the infinite square well")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Subcommands,
}

#[derive(Debug, Subcommand)]
pub enum Subcommands {
    /// |A(t)|² trace and detected revival events.
    Autocorr(RunArgs),
    /// Position-space carpet ρ(x, t).
    #[command(name = "carpet-x")]
    CarpetX(RunArgs),
    /// Momentum-space carpet γ(p, t).
    #[command(name = "carpet-p")]
    CarpetP(RunArgs),
    /// Revival events with a density slice at each matched fraction.
    Revivals(RunArgs),
    /// Runs the built-in invariant suite.
    Selfcheck,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Mean momentum: a decimal or a multiple of pi such as 30pi.
    #[arg(long, allow_hyphen_values = true)]
    pub p0: Option<String>,
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub mass: Option<String>,
    #[arg(long)]
    pub length: Option<String>,
    #[arg(long)]
    pub hbar: Option<String>,
    /// Use the basis n = 1..=NMAX instead of the automatic window.
    #[arg(long)]
    pub nmax: Option<String>,
    /// START:END with terms like 0.5, Trev, Trev/2, 3*Tcl, 1/4*Trev.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Trace samples.
    #[arg(long)]
    pub samples: Option<String>,
    /// Carpet raster WIDTHxHEIGHT (coordinate by time).
    #[arg(long)]
    pub grid: Option<String>,
    /// linear, sqrt or log1p.
    #[arg(long)]
    pub scaling: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    /// Flip image intensities.
    #[arg(long)]
    pub invert: bool,
    /// Minimum |A|² for a reported event.
    #[arg(long)]
    pub threshold: Option<String>,
    /// Largest denominator for revival fractions.
    #[arg(long)]
    pub qmax: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    /// pgm, csv or both.
    #[arg(long)]
    pub format: Option<String>,
    /// key = value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    /// Config file settings with the flags laid over them.
    pub fn settings(&self) -> Result<Settings, CliError> {
        let base = match &self.config {
            Some(path) => Settings::from_config_file(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("p0", &self.p0),
            ("x0", &self.x0),
            ("sigma", &self.sigma),
            ("mass", &self.mass),
            ("length", &self.length),
            ("hbar", &self.hbar),
            ("nmax", &self.nmax),
            ("window", &self.window),
            ("samples", &self.samples),
            ("grid", &self.grid),
            ("scaling", &self.scaling),
            ("gamma", &self.gamma),
            ("threshold", &self.threshold),
            ("qmax", &self.qmax),
            ("out", &self.out),
            ("format", &self.format),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v.clone())?;
            }
        }
        if self.invert {
            flags.set("invert", "true")?;
        }
        Ok(base.overlay(&flags))
    }
}

impl Subcommands {
    pub fn split(&self) -> Option<(Command, &RunArgs)> {
        match self {
            Subcommands::Autocorr(a) => Some((Command::Autocorr, a)),
            Subcommands::CarpetX(a) => Some((Command::CarpetX, a)),
            Subcommands::CarpetP(a) => Some((Command::CarpetP, a)),
            Subcommands::Revivals(a) => Some((Command::Revivals, a)),
            Subcommands::Selfcheck => None,
        }
    }
}
