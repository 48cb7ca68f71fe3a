//! Parsers for the textual inputs: momenta, time windows, grid sizes and
//! config files. None of them panic on any input.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("empty value")]
    Empty,
    #[error("not a finite number: {0:?}")]
    Number(String),
    #[error("cannot parse {input:?}, expected {expected}")]
    Syntax { input: String, expected: &'static str },
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
}

fn syntax(input: &str, expected: &'static str) -> ParseError {
    ParseError::Syntax {
        input: input.to_string(),
        expected,
    }
}

/// A finite decimal. Rejects `inf`, `nan` and anything else `f64::from_str`
/// would accept that is not an ordinary number.
pub fn parse_number(s: &str) -> Result<f64, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseError::Empty);
    }
    let numeric = s
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    match s.parse::<f64>() {
        Ok(v) if numeric && v.is_finite() => Ok(v),
        _ => Err(ParseError::Number(s.to_string())),
    }
}

fn strip_star(s: &str) -> (&str, bool) {
    let s = s.trim_end();
    match s.strip_suffix('*') {
        Some(rest) => (rest.trim_end(), true),
        None => (s, false),
    }
}

/// A momentum, either a plain decimal or a multiple of π: `30pi`, `-2.5pi`,
/// `30*pi`, `pi`, `-π`. The multiple is applied as one product `k·π`.
pub fn parse_momentum(s: &str) -> Result<f64, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    let stripped = t
        .strip_suffix("pi")
        .or_else(|| t.strip_suffix("PI"))
        .or_else(|| t.strip_suffix('π'));
    let Some(prefix) = stripped else {
        return parse_number(t);
    };
    let (prefix, starred) = strip_star(prefix);
    let multiple = match prefix {
        "" | "+" if !starred => 1.0,
        "-" if !starred => -1.0,
        _ if prefix.ends_with(|c: char| c.is_ascii_digit() || c == '.') => parse_number(prefix)?,
        _ => return Err(syntax(t, "a number, optionally followed by pi")),
    };
    Ok(multiple * PI)
}

/// `WxH` with both sides positive, e.g. `512x512`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), ParseError> {
    let t = s.trim();
    let (w, h) = t
        .split_once(['x', 'X'])
        .ok_or_else(|| syntax(t, "WIDTHxHEIGHT"))?;
    let side = |v: &str| match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(syntax(t, "WIDTHxHEIGHT with positive integers")),
    };
    Ok((side(w)?, side(h)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnit {
    Absolute,
    Revival,
    Classical,
}

/// `numer / denom` multiples of a unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeExpr {
    pub numer: f64,
    pub denom: f64,
    pub unit: TimeUnit,
}

impl TimeExpr {
    /// Converts to an absolute time; `None` when the unit is `Tcl` and the
    /// classical period is undefined.
    pub fn resolve(&self, t_rev: f64, t_cl: Option<f64>) -> Option<f64> {
        let scale = match self.unit {
            TimeUnit::Absolute => return Some(self.numer / self.denom),
            TimeUnit::Revival => t_rev,
            TimeUnit::Classical => t_cl?,
        };
        Some(scale * self.numer / self.denom)
    }
}

impl fmt::Display for TimeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.unit {
            TimeUnit::Absolute => "",
            TimeUnit::Revival => "Trev",
            TimeUnit::Classical => "Tcl",
        };
        let (n, d) = (self.numer, self.denom);
        match self.unit {
            TimeUnit::Absolute if d == 1.0 => write!(f, "{n}"),
            TimeUnit::Absolute => write!(f, "{n}/{d}"),
            _ if n == 1.0 && d == 1.0 => write!(f, "{unit}"),
            _ if n == 1.0 => write!(f, "{unit}/{d}"),
            _ if d == 1.0 => write!(f, "{n}*{unit}"),
            _ => write!(f, "{n}/{d}*{unit}"),
        }
    }
}

/// `START:END`, each a [`parse_time`] term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub start: TimeExpr,
    pub end: TimeExpr,
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

pub fn parse_window(s: &str) -> Result<WindowSpec, ParseError> {
    let t = s.trim();
    let (start, end) = t.split_once(':').ok_or_else(|| syntax(t, "START:END"))?;
    Ok(WindowSpec {
        start: parse_time(start)?,
        end: parse_time(end)?,
    })
}

fn parse_ratio(s: &str) -> Result<(f64, f64), ParseError> {
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (parse_number(n)?, parse_number(d)?),
        None => (parse_number(s)?, 1.0),
    };
    if denom == 0.0 {
        return Err(syntax(s, "a nonzero denominator"));
    }
    Ok((numer, denom))
}

/// A time: `1.5`, `Trev`, `Trev/2`, `3*Tcl`, `3Tcl`, `1/4*Trev`, `0.25*Trev`.
pub fn parse_time(s: &str) -> Result<TimeExpr, ParseError> {
    const EXPECTED: &str = "a number or [FACTOR*]Trev|Tcl[/DIVISOR]";
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    let found = [("Trev", TimeUnit::Revival), ("Tcl", TimeUnit::Classical)]
        .into_iter()
        .find_map(|(name, unit)| t.find(name).map(|at| (at, name.len(), unit)));
    let Some((at, len, unit)) = found else {
        let (numer, denom) = parse_ratio(t)?;
        return Ok(TimeExpr {
            numer,
            denom,
            unit: TimeUnit::Absolute,
        });
    };
    let (prefix, starred) = strip_star(&t[..at]);
    if starred && prefix.is_empty() {
        return Err(syntax(t, EXPECTED));
    }
    let suffix = t[at + len..].trim_start();
    let (mut numer, mut denom) = if prefix.is_empty() {
        (1.0, 1.0)
    } else {
        parse_ratio(prefix).map_err(|_| syntax(t, EXPECTED))?
    };
    if !suffix.is_empty() {
        let divisor = suffix
            .strip_prefix('/')
            .ok_or_else(|| syntax(t, EXPECTED))
            .and_then(|d| parse_number(d).map_err(|_| syntax(t, EXPECTED)))?;
        if divisor == 0.0 {
            return Err(syntax(t, "a nonzero divisor"));
        }
        denom *= divisor;
    }
    if !(numer.is_finite() && denom.is_finite() && denom != 0.0) {
        return Err(ParseError::Number(t.to_string()));
    }
    if denom < 0.0 {
        numer = -numer;
        denom = -denom;
    }
    Ok(TimeExpr { numer, denom, unit })
}

/// One `key = value` line of a config file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Flat `key = value` lines. `#` starts a comment anywhere on a line; blank
/// lines are skipped. Keys must be unique.
pub fn parse_config(text: &str) -> Result<Vec<ConfigEntry>, ParseError> {
    let mut entries: Vec<ConfigEntry> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ParseError::Line {
            line,
            reason: "expected key = value".into(),
        })?;
        let key = key.trim();
        let valid_key = !key.is_empty()
            && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if !valid_key {
            return Err(ParseError::Line {
                line,
                reason: format!("malformed key {key:?}"),
            });
        }
        if let Some(previous) = entries.iter().find(|e| e.key == key) {
            return Err(ParseError::Line {
                line,
                reason: format!("duplicate key {key:?}, first set on line {}", previous.line),
            });
        }
        entries.push(ConfigEntry {
            line,
            key: key.to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn momentum_forms() {
        assert_eq!(parse_momentum("30pi").unwrap(), 30.0 * PI);
        assert_eq!(parse_momentum("30*pi").unwrap(), 30.0 * PI);
        assert_eq!(parse_momentum(" 30 * pi ").unwrap(), 30.0 * PI);
        assert_eq!(parse_momentum("pi").unwrap(), PI);
        assert_eq!(parse_momentum("-pi").unwrap(), -PI);
        assert_eq!(parse_momentum("-2.5pi").unwrap(), -2.5 * PI);
        assert_eq!(parse_momentum("15π").unwrap(), 15.0 * PI);
        assert_eq!(parse_momentum("0").unwrap(), 0.0);
        assert_eq!(parse_momentum("94.2").unwrap(), 94.2);
    }

    #[test]
    fn momentum_rejects() {
        for bad in ["", "pie", "30 pi pi", "inf", "NaN", "infpi", "1e400", "x30pi", "30pi2", "*pi", "-*pi"] {
            assert!(parse_momentum(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("512x256").unwrap(), (512, 256));
        assert_eq!(parse_grid(" 3X4 ").unwrap(), (3, 4));
        for bad in ["512", "0x5", "5x0", "ax5", "5x", "-1x4", "5x5x5"] {
            assert!(parse_grid(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn window_terms_resolve() {
        let t_rev = 4.0 / PI;
        let period = t_rev / 60.0;
        let end = |s: &str| parse_window(s).unwrap().end.resolve(t_rev, Some(period)).unwrap();
        assert_eq!(end("0:Trev"), t_rev);
        assert_eq!(end("0:Trev/2"), t_rev / 2.0);
        assert_eq!(end("0:1/4*Trev"), t_rev / 4.0);
        assert_eq!(end("0:3*Tcl"), period * 3.0);
        assert_eq!(end("0:3Tcl"), period * 3.0);
        assert_eq!(end("0:1.5"), 1.5);
        assert_eq!(end("0 : 0.25 * Trev"), t_rev * 0.25);
        let w = parse_window("Trev/4:Trev/2").unwrap();
        assert_eq!(w.start.resolve(t_rev, Some(period)).unwrap(), t_rev / 4.0);
    }

    #[test]
    fn window_display_round_trips() {
        for s in ["0:Trev", "0:Trev/2", "0:3*Tcl", "0.5:Trev/4", "0:1.5/4*Trev", "1:2"] {
            let w = parse_window(s).unwrap();
            assert_eq!(w.to_string(), s);
            assert_eq!(parse_window(&w.to_string()).unwrap(), w);
        }
    }

    #[test]
    fn classical_unit_needs_a_period() {
        let w = parse_window("0:2*Tcl").unwrap();
        assert_eq!(w.end.resolve(1.0, None), None);
    }

    #[test]
    fn window_rejects() {
        for bad in ["", "0", "0:", ":1", "0:Trev/0", "0:Trevx", "0:Tr", "0:2**Trev", "0:*Trev", "0:Trev/2/2", "0:nan", "1/0:2"] {
            assert!(parse_window(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn config_lines() {
        let text = "# reference\np0 = 30pi\n\nwindow=0:Trev/2  # half\n  sigma =0.1\n";
        let entries = parse_config(text).unwrap();
        let keys: Vec<_> = entries.iter().map(|e| (e.line, e.key.as_str(), e.value.as_str())).collect();
        assert_eq!(keys, [(2, "p0", "30pi"), (4, "window", "0:Trev/2"), (5, "sigma", "0.1")]);
    }

    #[test]
    fn config_errors_carry_lines() {
        assert_eq!(
            parse_config("p0 = 1\nnonsense\n"),
            Err(ParseError::Line { line: 2, reason: "expected key = value".into() })
        );
        assert!(matches!(parse_config("a = 1\na = 2"), Err(ParseError::Line { line: 2, .. })));
        assert!(matches!(parse_config(" = 2"), Err(ParseError::Line { line: 1, .. })));
        assert!(matches!(parse_config("a b = 2"), Err(ParseError::Line { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn parsers_never_panic(s in "\\PC{0,24}") {
            let _ = parse_momentum(&s);
            let _ = parse_window(&s);
            let _ = parse_grid(&s);
            let _ = parse_config(&s);
        }

        #[test]
        fn decimal_momenta_round_trip(v in -1e6f64..1e6) {
            prop_assert_eq!(parse_momentum(&v.to_string()).unwrap(), v);
            prop_assert_eq!(parse_momentum(&format!("{v}pi")).unwrap(), v * PI);
        }

        #[test]
        fn config_round_trips(pairs in prop::collection::btree_map("[a-z_]{1,8}", "[a-zA-Z0-9:/. *]{0,12}", 0..8)) {
            let text: String = pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
            let entries = parse_config(&text).unwrap();
            prop_assert_eq!(entries.len(), pairs.len());
            for (e, (k, v)) in entries.iter().zip(&pairs) {
                prop_assert_eq!(&e.key, k);
                prop_assert_eq!(&e.value, v.trim());
            }
        }
    }
}
