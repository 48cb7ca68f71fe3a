//! The subcommand pipelines. Each produces its complete set of output files
//! in memory; nothing touches the disk here.

use qcarpet::carpet::{render_pgm, sample_carpet, write_csv, CoordAxis, CoordinateKind};
use qcarpet::dynamics::{autocorr_trace, default_momentum_extent};
use qcarpet::revival::{events_to_csv, find_revivals, slice_profile, RevivalEvent};
use qcarpet::spectral::{coefficients_closed_form, coefficients_quadrature, SpectralState};
use sha2::{Digest, Sha256};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

pub const MANIFEST: &str = "manifest.txt";

/// One output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: &'static str,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: &'static str, bytes: impl Into<Vec<u8>>) -> Self {
        Artifact {
            name,
            bytes: bytes.into(),
        }
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

/// Runs the configured pipeline; the last artifact is the manifest.
pub fn execute(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let (state, method) = expand(cfg)?;
    let mut extra: Vec<(&str, String)> = vec![("coefficients", method.into())];
    let mut artifacts = match cfg.command {
        Command::Autocorr => {
            let trace = autocorr_trace(&state, cfg.window);
            let events = find_revivals(&trace, &cfg.scales, &cfg.detector)?;
            extra.push(("events", events.len().to_string()));
            vec![
                Artifact::new("trace.csv", trace.to_csv(&cfg.scales)),
                Artifact::new("events.csv", events_to_csv(&events, &cfg.scales)),
            ]
        }
        Command::Revivals => {
            let trace = autocorr_trace(&state, cfg.window);
            let events = find_revivals(&trace, &cfg.scales, &cfg.detector)?;
            extra.push(("events", events.len().to_string()));
            vec![
                Artifact::new("events.csv", events_to_csv(&events, &cfg.scales)),
                Artifact::new("slices.csv", slices_csv(cfg, &state, &events)?),
            ]
        }
        Command::CarpetX | Command::CarpetP => {
            let (kind, axis) = carpet_axis(cfg)?;
            let grid = sample_carpet(&state, kind, axis, cfg.window)?;
            extra.push(("coord_min", axis.min().to_string()));
            extra.push(("coord_max", axis.max().to_string()));
            extra.push(("value_max", grid.value_max().to_string()));
            let mut files = Vec::new();
            if cfg.format.pgm() {
                files.push(Artifact::new("carpet.pgm", render_pgm(&grid, &cfg.render)?));
            }
            if cfg.format.csv() {
                files.push(Artifact::new("carpet.csv", write_csv(&grid)));
            }
            files
        }
    };
    let manifest = manifest(cfg, &state, &extra, &artifacts);
    artifacts.push(Artifact::new(MANIFEST, manifest));
    Ok(artifacts)
}

/// Closed-form coefficients, or the quadrature projection onto `(0, L)`
/// when the automatic window cannot reach the captured-norm floor. The
/// closed form integrates the Gaussian over the whole line, so a packet
/// with appreciable weight at the walls saturates below the floor however
/// wide the window.
pub fn expand(cfg: &RunConfig) -> Result<(SpectralState, &'static str), CliError> {
    match coefficients_closed_form(&cfg.well, &cfg.packet, cfg.n_range) {
        Ok(state) => Ok((state, "closed-form")),
        Err(qcarpet::Error::Truncation { .. }) if cfg.n_range.is_none() => {
            Ok((coefficients_quadrature(&cfg.well, &cfg.packet, None)?, "quadrature"))
        }
        Err(e) => Err(e.into()),
    }
}

/// Coordinate axis for a carpet: `(0, L)` or `±(|p₀| + 10πħ/L)`.
pub fn carpet_axis(cfg: &RunConfig) -> Result<(CoordinateKind, CoordAxis), CliError> {
    let width = cfg.grid.0;
    Ok(match cfg.command {
        Command::CarpetP => {
            let extent = default_momentum_extent(&cfg.well, &cfg.packet);
            (CoordinateKind::Momentum, CoordAxis::new(-extent, extent, width)?)
        }
        _ => (CoordinateKind::Position, CoordAxis::new(0.0, cfg.well.length(), width)?),
    })
}

/// One row per matched event: the slice at exactly `T_rev·p/q` and the
/// positions of its prominent maxima, `;`-separated.
fn slices_csv(cfg: &RunConfig, state: &SpectralState, events: &[RevivalEvent]) -> Result<String, CliError> {
    let mut out = String::from("p,q,t,peak_count,peak_positions\n");
    for event in events {
        let Some(f) = event.fraction else { continue };
        let t = cfg.scales.t_rev * f.numer() as f64 / f.denom() as f64;
        let profile = slice_profile(state, t, cfg.detector.slice_samples, cfg.detector.prominence)?;
        let positions: Vec<String> = profile.peak_positions.iter().map(f64::to_string).collect();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            f.numer(),
            f.denom(),
            t,
            profile.peak_count,
            positions.join(";")
        ));
    }
    Ok(out)
}

fn manifest(cfg: &RunConfig, state: &SpectralState, extra: &[(&str, String)], artifacts: &[Artifact]) -> String {
    let d = &cfg.detector;
    let optional = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |v| v.to_string());
    let mut lines: Vec<(String, String)> = vec![
        ("tool".into(), "qcarpet".into()),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), cfg.command.as_str().into()),
        ("mass".into(), cfg.well.mass().to_string()),
        ("length".into(), cfg.well.length().to_string()),
        ("hbar".into(), cfg.well.hbar().to_string()),
        ("p0".into(), cfg.p0_text.clone()),
        ("p0_value".into(), cfg.packet.p0().to_string()),
        ("x0".into(), cfg.packet.x0().to_string()),
        ("sigma".into(), cfg.packet.sigma().to_string()),
        (
            "n_range_source".into(),
            if cfg.n_range.is_some() { "nmax" } else { "default" }.into(),
        ),
        ("n_min".into(), state.n_min().to_string()),
        ("n_max".into(), state.n_max().to_string()),
        ("captured_norm".into(), state.captured_norm().to_string()),
        ("n0".into(), cfg.scales.n0.to_string()),
        ("t_cl".into(), optional(cfg.scales.t_cl)),
        ("t_rev".into(), cfg.scales.t_rev.to_string()),
        (
            "trev_over_tcl".into(),
            cfg.scales.ratio.map_or_else(|| "undefined".into(), |r| r.to_string()),
        ),
        ("window".into(), cfg.window_spec.to_string()),
        ("t_start".into(), cfg.window.t_start().to_string()),
        ("t_end".into(), cfg.window.t_end().to_string()),
        ("time_samples".into(), cfg.window.samples().to_string()),
    ];
    if cfg.command.is_carpet() {
        lines.extend([
            ("grid".into(), format!("{}x{}", cfg.grid.0, cfg.grid.1)),
            ("scaling".into(), cfg.render.scaling.as_str().into()),
            ("gamma".into(), cfg.render.gamma.to_string()),
            ("invert".into(), cfg.render.invert.to_string()),
            ("format".into(), cfg.format.as_str().into()),
        ]);
    } else {
        lines.extend([
            ("threshold".into(), d.threshold.to_string()),
            ("full_threshold".into(), d.full_threshold.to_string()),
            ("qmax".into(), d.q_max.to_string()),
            ("match_tol".into(), d.match_tol_for(&cfg.scales).to_string()),
            ("classical_tol".into(), d.classical_tol.to_string()),
        ]);
        if cfg.command == Command::Revivals {
            lines.extend([
                ("prominence".into(), d.prominence.to_string()),
                ("slice_samples".into(), d.slice_samples.to_string()),
            ]);
        }
    }
    lines.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
    lines.extend(artifacts.iter().map(|a| (format!("sha256.{}", a.name), a.sha256())));
    lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}
