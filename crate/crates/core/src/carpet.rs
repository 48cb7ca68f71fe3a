//! Quantum carpets: densities sampled on a (time × coordinate) raster,
//! rendered to binary PGM or dumped as CSV.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::dynamics::{eigenfunction_p, evolved_amplitudes, TimeWindow};
use crate::error::{Error, Result};
use crate::fmt::shortest;
use crate::spectral::{eigenfunction_x, SpectralState};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateKind {
    Position,
    Momentum,
}

impl CoordinateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoordinateKind::Position => "position",
            CoordinateKind::Momentum => "momentum",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "position" => Some(CoordinateKind::Position),
            "momentum" => Some(CoordinateKind::Momentum),
            _ => None,
        }
    }
}

/// Coordinate axis sampled at the centres of `samples` equal cells of
/// `[min, max]`. For the position axis `[0, L]` no sample hits a wall and the
/// grid is symmetric under `x → L - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordAxis {
    min: f64,
    max: f64,
    samples: usize,
}

impl CoordAxis {
    pub fn new(min: f64, max: f64, samples: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::invalid("coordinate axis", format!("need finite min < max, got [{min}, {max}]")));
        }
        if samples == 0 {
            return Err(Error::invalid("coordinate axis", "need at least one sample"));
        }
        Ok(CoordAxis { min, max, samples })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        self.min + (self.max - self.min) * (j as f64 + 0.5) / self.samples as f64
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.samples).map(|j| self.coordinate(j)).collect()
    }
}

/// Row-major density matrix: one row per time sample, top row `t_start`.
#[derive(Debug, Clone, PartialEq)]
pub struct CarpetGrid {
    kind: CoordinateKind,
    coord_axis: CoordAxis,
    time_axis: TimeWindow,
    values: Vec<f64>,
    value_max: f64,
}

impl CarpetGrid {
    /// Wraps a matrix, clamping negative round-off to zero.
    pub fn from_parts(
        kind: CoordinateKind,
        coord_axis: CoordAxis,
        time_axis: TimeWindow,
        mut values: Vec<f64>,
    ) -> Result<Self> {
        let expected = coord_axis.samples() * time_axis.samples();
        if values.len() != expected {
            return Err(Error::invalid(
                "carpet grid",
                format!("{} values for a {}x{} grid", values.len(), time_axis.samples(), coord_axis.samples()),
            ));
        }
        for v in &mut values {
            if !v.is_finite() {
                return Err(Error::invalid("carpet grid", "non-finite density"));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let value_max = values.iter().copied().fold(0.0, f64::max);
        Ok(CarpetGrid {
            kind,
            coord_axis,
            time_axis,
            values,
            value_max,
        })
    }

    pub fn kind(&self) -> CoordinateKind {
        self.kind
    }

    pub fn coord_axis(&self) -> &CoordAxis {
        &self.coord_axis
    }

    pub fn time_axis(&self) -> &TimeWindow {
        &self.time_axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_max(&self) -> f64 {
        self.value_max
    }

    pub fn width(&self) -> usize {
        self.coord_axis.samples()
    }

    pub fn height(&self) -> usize {
        self.time_axis.samples()
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let w = self.width();
        &self.values[k * w..(k + 1) * w]
    }

    pub fn value(&self, k: usize, j: usize) -> f64 {
        self.values[k * self.width() + j]
    }
}

/// Evaluates `ρ(x, t)` or `γ(p, t)` on the raster.
///
/// The basis table is built once; each row is the amplitude-first sum in
/// ascending `n`, the same arithmetic as [`crate::dynamics::rho_x`] and
/// [`crate::dynamics::gamma_p`], so the result is bitwise identical to
/// pointwise evaluation whatever order rows are scheduled in.
pub fn sample_carpet(
    state: &SpectralState,
    kind: CoordinateKind,
    coord_axis: CoordAxis,
    time_axis: TimeWindow,
) -> Result<CarpetGrid> {
    let cfg = *state.cfg();
    let coords = coord_axis.coordinates();
    let modes: Vec<u32> = state.range().iter().collect();
    let table: Vec<Complex64> = coords
        .iter()
        .flat_map(|&c| {
            modes.iter().map(move |&n| match kind {
                CoordinateKind::Position => Complex64::new(eigenfunction_x(&cfg, n, c), 0.0),
                CoordinateKind::Momentum => eigenfunction_p(&cfg, n, c),
            })
        })
        .collect();
    let width = coords.len();
    let n_modes = modes.len();

    let rows: Vec<Vec<f64>> = (0..time_axis.samples())
        .into_par_iter()
        .map(|k| {
            let amplitudes = evolved_amplitudes(state, time_axis.time(k));
            (0..width)
                .map(|j| {
                    let basis = &table[j * n_modes..(j + 1) * n_modes];
                    let sum = amplitudes
                        .iter()
                        .zip(basis)
                        .fold(Complex64::new(0.0, 0.0), |acc, (&a, &b)| match kind {
                            CoordinateKind::Position => acc + a * b.re,
                            CoordinateKind::Momentum => acc + a * b,
                        });
                    sum.norm_sqr()
                })
                .collect()
        })
        .collect();
    CarpetGrid::from_parts(kind, coord_axis, time_axis, rows.concat())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    Linear,
    Sqrt,
    /// `ln(1 + 1000u)/ln(1001)`, three decades of dynamic range.
    Log1p,
}

impl Scaling {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scaling::Linear => "linear",
            Scaling::Sqrt => "sqrt",
            Scaling::Log1p => "log1p",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "linear" => Some(Scaling::Linear),
            "sqrt" => Some(Scaling::Sqrt),
            "log1p" => Some(Scaling::Log1p),
            _ => None,
        }
    }

    fn apply(&self, u: f64) -> f64 {
        const DECADES: f64 = 1000.0;
        match self {
            Scaling::Linear => u,
            Scaling::Sqrt => u.sqrt(),
            Scaling::Log1p => (DECADES * u).ln_1p() / DECADES.ln_1p(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub scaling: Scaling,
    /// Display gamma: the scaled intensity `s` becomes `s^(1/gamma)`.
    pub gamma: f64,
    pub invert: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            scaling: Scaling::Sqrt,
            gamma: 1.0,
            invert: false,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 10.0) {
            return Err(Error::invalid("gamma", format!("must lie in (0, 10], got {}", self.gamma)));
        }
        Ok(())
    }

    /// Grey level of a density value relative to `value_max`.
    pub fn pixel(&self, v: f64, value_max: f64) -> u8 {
        let level = if value_max > 0.0 {
            let u = (v / value_max).clamp(0.0, 1.0);
            let s = self.scaling.apply(u);
            let s = if self.gamma == 1.0 { s } else { s.powf(self.gamma.recip()) };
            (255.0 * s).round().clamp(0.0, 255.0) as u8
        } else {
            0
        };
        if self.invert {
            255 - level
        } else {
            level
        }
    }
}

/// Binary PGM: `P5\n<width> <height>\n255\n` followed by the pixels, row
/// major, top row at `t_start`.
pub fn render_pgm(grid: &CarpetGrid, spec: &RenderSpec) -> Result<Vec<u8>> {
    spec.validate()?;
    let mut out = format!("P5\n{} {}\n255\n", grid.width(), grid.height()).into_bytes();
    out.reserve(grid.values.len());
    out.extend(grid.values.iter().map(|&v| spec.pixel(v, grid.value_max)));
    Ok(out)
}

/// Axis metadata as `#` comment lines, then one comma-separated line per
/// time sample in shortest round-trip decimal.
pub fn write_csv(grid: &CarpetGrid) -> String {
    let mut out = String::new();
    let c = &grid.coord_axis;
    let t = &grid.time_axis;
    let _ = writeln!(out, "# kind={}", grid.kind.as_str());
    let _ = writeln!(
        out,
        "# coord_min={},coord_max={},coord_samples={}",
        shortest(c.min),
        shortest(c.max),
        c.samples
    );
    let _ = writeln!(
        out,
        "# t_start={},t_end={},t_samples={}",
        shortest(t.t_start()),
        shortest(t.t_end()),
        t.samples()
    );
    for k in 0..grid.height() {
        let row = grid.row(k);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&shortest(*v));
        }
        out.push('\n');
    }
    out
}

fn csv_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Csv {
        line,
        reason: reason.into(),
    }
}

/// Inverse of [`write_csv`].
pub fn parse_csv(text: &str) -> Result<CarpetGrid> {
    let mut kind = None;
    let mut coord: Option<(f64, f64, usize)> = None;
    let mut time: Option<(f64, f64, usize)> = None;
    let mut values = Vec::new();
    let mut rows = 0usize;
    let mut width = None;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(meta) = line.strip_prefix('#') {
            let mut fields = std::collections::BTreeMap::new();
            for part in meta.trim().split(',') {
                if part.is_empty() {
                    continue;
                }
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| csv_err(lineno, format!("expected key=value, got {part:?}")))?;
                fields.insert(k.trim(), v.trim());
            }
            let num = |key: &str| -> Result<f64> {
                fields[key].parse().map_err(|_| csv_err(lineno, format!("bad number for {key}")))
            };
            let count = |key: &str| -> Result<usize> {
                fields[key].parse().map_err(|_| csv_err(lineno, format!("bad count for {key}")))
            };
            if let Some(k) = fields.get("kind") {
                kind = Some(CoordinateKind::parse(k).ok_or_else(|| csv_err(lineno, format!("unknown kind {k:?}")))?);
            }
            if ["coord_min", "coord_max", "coord_samples"].iter().all(|k| fields.contains_key(k)) {
                coord = Some((num("coord_min")?, num("coord_max")?, count("coord_samples")?));
            }
            if ["t_start", "t_end", "t_samples"].iter().all(|k| fields.contains_key(k)) {
                time = Some((num("t_start")?, num("t_end")?, count("t_samples")?));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let before = values.len();
        for field in line.split(',') {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| csv_err(lineno, format!("bad value {field:?}")))?;
            values.push(v);
        }
        let w = values.len() - before;
        match width {
            None => width = Some(w),
            Some(expected) if expected != w => {
                return Err(csv_err(lineno, format!("row has {w} fields, expected {expected}")));
            }
            _ => {}
        }
        rows += 1;
    }

    let kind = kind.ok_or_else(|| csv_err(0, "missing kind"))?;
    let (cmin, cmax, csamples) = coord.ok_or_else(|| csv_err(0, "missing coordinate axis"))?;
    let (t0, t1, tsamples) = time.ok_or_else(|| csv_err(0, "missing time axis"))?;
    if width.unwrap_or(0) != csamples || rows != tsamples {
        return Err(csv_err(
            0,
            format!("data is {rows}x{} but axes say {tsamples}x{csamples}", width.unwrap_or(0)),
        ));
    }
    let coord_axis = CoordAxis::new(cmin, cmax, csamples)?;
    let time_axis = if tsamples == 1 && t0 == t1 {
        TimeWindow::instant(t0)?
    } else {
        TimeWindow::new(t0, t1, tsamples)?
    };
    CarpetGrid::from_parts(kind, coord_axis, time_axis, values)
}
