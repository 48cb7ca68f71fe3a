//! Run configuration: merging config-file and command-line settings,
//! validation, and resolution of symbolic time windows.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qcarpet::carpet::{RenderSpec, Scaling};
use qcarpet::dynamics::TimeWindow;
use qcarpet::revival::DetectorConfig;
use qcarpet::spectral::{time_scales, GaussianPacket, NRange, TimeScales, WellConfig};

use crate::error::CliError;
use crate::parse::{self, parse_config, ParseError, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Autocorr,
    CarpetX,
    CarpetP,
    Revivals,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Autocorr => "autocorr",
            Command::CarpetX => "carpet-x",
            Command::CarpetP => "carpet-p",
            Command::Revivals => "revivals",
        }
    }

    pub fn is_carpet(&self) -> bool {
        matches!(self, Command::CarpetX | Command::CarpetP)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Pgm,
    Csv,
    Both,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Pgm => "pgm",
            Format::Csv => "csv",
            Format::Both => "both",
        }
    }

    pub fn pgm(&self) -> bool {
        matches!(self, Format::Pgm | Format::Both)
    }

    pub fn csv(&self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

/// Every recognised setting, named as in config files (`--flag` minus the
/// dashes).
pub const KEYS: [&str; 17] = [
    "p0", "x0", "sigma", "mass", "length", "hbar", "nmax", "window", "samples", "grid", "scaling",
    "gamma", "invert", "threshold", "qmax", "out", "format",
];

const MAX_GRID_SIDE: usize = 16_384;
const MAX_SAMPLES: usize = 10_000_000;

/// Raw string settings, later layers overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<&'static str, String>,
}

impl Settings {
    fn key(name: &str) -> Option<&'static str> {
        KEYS.iter().copied().find(|k| *k == name)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), CliError> {
        let key = Settings::key(key).ok_or_else(|| CliError::Invalid(format!("unknown setting {key:?}")))?;
        self.values.insert(key, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Settings from config-file text; `path` is only used in messages.
    pub fn from_config_text(text: &str, path: &Path) -> Result<Self, CliError> {
        let entries = parse_config(text).map_err(|e| match e {
            ParseError::Line { line, reason } => CliError::ConfigFile {
                path: path.to_path_buf(),
                line,
                reason,
            },
            other => CliError::ConfigFile {
                path: path.to_path_buf(),
                line: 0,
                reason: other.to_string(),
            },
        })?;
        let mut settings = Settings::default();
        for entry in entries {
            if Settings::key(&entry.key).is_none() {
                return Err(CliError::ConfigFile {
                    path: path.to_path_buf(),
                    line: entry.line,
                    reason: format!("unknown key {:?}", entry.key),
                });
            }
            settings.set(&entry.key, entry.value)?;
        }
        Ok(settings)
    }

    pub fn from_config_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Settings::from_config_text(&text, path)
    }

    /// `other` wins wherever both are set.
    pub fn overlay(mut self, other: &Settings) -> Settings {
        for (k, v) in &other.values {
            self.values.insert(k, v.clone());
        }
        self
    }
}

/// A fully validated run. Construction performs every check that can be
/// made without expanding the packet, including window resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub well: WellConfig,
    pub packet: GaussianPacket,
    /// The momentum as written, e.g. `30pi`.
    pub p0_text: String,
    pub n_range: Option<NRange>,
    pub window_spec: WindowSpec,
    pub window: TimeWindow,
    pub scales: TimeScales,
    /// Trace samples for `autocorr` and `revivals`.
    pub samples: usize,
    /// Coordinate samples by time samples, for carpets.
    pub grid: (usize, usize),
    pub render: RenderSpec,
    pub detector: DetectorConfig,
    pub out: PathBuf,
    pub format: Format,
}

fn field<T>(
    settings: &Settings,
    key: &'static str,
    default: &str,
    parse: impl Fn(&str) -> Result<T, ParseError>,
) -> Result<T, CliError> {
    let raw = settings.get(key).unwrap_or(default);
    parse(raw).map_err(|source| CliError::Setting { key, source })
}

fn count(s: &str) -> Result<usize, ParseError> {
    s.trim().parse::<usize>().map_err(|_| ParseError::Syntax {
        input: s.to_string(),
        expected: "a non-negative integer",
    })
}

fn flag(s: &str) -> Result<bool, ParseError> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ParseError::Syntax {
            input: s.to_string(),
            expected: "true or false",
        }),
    }
}

impl RunConfig {
    pub fn default_for(command: Command, key: &str) -> &'static str {
        match key {
            "p0" => "30pi",
            "x0" => "0.5",
            "sigma" => "0.1",
            "mass" | "length" | "hbar" => "1",
            "window" if command.is_carpet() => "0:Trev/2",
            "window" => "0:Trev",
            "samples" => "20000",
            "grid" => "512x512",
            "scaling" => "sqrt",
            "gamma" => "1",
            "invert" => "false",
            "threshold" => "0.1",
            "qmax" => "12",
            "out" => ".",
            "format" => "both",
            _ => "",
        }
    }

    pub fn from_settings(command: Command, settings: &Settings) -> Result<Self, CliError> {
        let get = |key| settings.get(key).unwrap_or(RunConfig::default_for(command, key));
        let number = |key: &'static str| field(settings, key, RunConfig::default_for(command, key), parse::parse_number);

        let well = WellConfig::new(number("mass")?, number("length")?, number("hbar")?)?;
        let p0_text = get("p0").trim().to_string();
        let p0 = field(settings, "p0", get("p0"), parse::parse_momentum)?;
        let packet = GaussianPacket::new(&well, number("x0")?, number("sigma")?, p0)?;

        let n_range = match settings.get("nmax") {
            None => None,
            Some(_) => {
                let nmax = field(settings, "nmax", "", count)?;
                let nmax = u32::try_from(nmax)
                    .map_err(|_| CliError::Invalid(format!("nmax {nmax} is too large")))?;
                Some(NRange::new(1, nmax)?)
            }
        };

        let scales = time_scales(&well, &packet);
        let window_spec = field(settings, "window", get("window"), parse::parse_window)?;
        let resolve = |e: &parse::TimeExpr| {
            e.resolve(scales.t_rev, scales.t_cl).ok_or_else(|| {
                CliError::Invalid(format!("window {window_spec} uses Tcl, which is undefined for p0 = 0"))
            })
        };
        let (t_start, t_end) = (resolve(&window_spec.start)?, resolve(&window_spec.end)?);

        let samples = field(settings, "samples", get("samples"), count)?;
        if !(2..=MAX_SAMPLES).contains(&samples) {
            return Err(CliError::Invalid(format!("samples must lie in [2, {MAX_SAMPLES}], got {samples}")));
        }
        let grid = field(settings, "grid", get("grid"), parse::parse_grid)?;
        if grid.0 > MAX_GRID_SIDE || grid.1 > MAX_GRID_SIDE {
            return Err(CliError::Invalid(format!("grid sides must not exceed {MAX_GRID_SIDE}")));
        }
        if command.is_carpet() && grid.1 < 2 {
            return Err(CliError::Invalid("a carpet needs at least 2 time rows".into()));
        }
        let time_samples = if command.is_carpet() { grid.1 } else { samples };
        let window = TimeWindow::new(t_start, t_end, time_samples)?;

        let scaling = field(settings, "scaling", get("scaling"), |s| {
            Scaling::parse(s.trim()).ok_or(ParseError::Syntax {
                input: s.to_string(),
                expected: "linear, sqrt or log1p",
            })
        })?;
        let render = RenderSpec {
            scaling,
            gamma: number("gamma")?,
            invert: field(settings, "invert", get("invert"), flag)?,
        };
        render.validate()?;

        let detector = DetectorConfig {
            threshold: number("threshold")?,
            q_max: field(settings, "qmax", get("qmax"), count)? as u64,
            ..DetectorConfig::default()
        };
        detector.validate()?;

        let format = field(settings, "format", get("format"), |s| match s.trim() {
            "pgm" => Ok(Format::Pgm),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            _ => Err(ParseError::Syntax {
                input: s.to_string(),
                expected: "pgm, csv or both",
            }),
        })?;
        let out = PathBuf::from(get("out"));
        if out.as_os_str().is_empty() {
            return Err(CliError::Invalid("output directory must not be empty".into()));
        }

        Ok(RunConfig {
            command,
            well,
            packet,
            p0_text,
            n_range,
            window_spec,
            window,
            scales,
            samples,
            grid,
            render,
            detector,
            out,
            format,
        })
    }
}
