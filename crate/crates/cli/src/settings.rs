//! Run settings gathered from flags, an optional key-value file, and defaults.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use modegate::detection::{Basis, DetectorModel};
use modegate::sweep::{Axis, Output, Parameter, Preset};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMode {
    /// Detection densities at the click times.
    Pointwise,
    /// Detectors integrating over all time.
    Full,
    /// Windows of width `t_w` starting at the click times.
    Finite,
}

impl FromStr for WindowMode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "pointwise" => Ok(WindowMode::Pointwise),
            "full" => Ok(WindowMode::Full),
            "finite" => Ok(WindowMode::Finite),
            _ => Err(CliError::invalid(format!(
                "unknown window '{s}' (expected pointwise, full or finite)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::invalid(format!(
                "unknown format '{s}' (expected csv or json)"
            ))),
        }
    }
}

/// `PARAM:START:STOP:N`.
pub fn parse_axis(s: &str) -> Result<Axis, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [param, start, stop, n] = parts[..] else {
        return Err(CliError::invalid(format!(
            "axis '{s}' must look like PARAM:START:STOP:N"
        )));
    };
    let parameter: Parameter = param.parse().map_err(CliError::from)?;
    let start = parse_real("axis start", start)?;
    let stop = parse_real("axis stop", stop)?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| CliError::invalid(format!("axis point count '{n}' is not an integer")))?;
    Ok(Axis::linspace(parameter, start, stop, n)?)
}

fn parse_real(name: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::invalid(format!("{name} '{s}' is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::invalid(format!("{name} must be finite, got {s}")));
    }
    Ok(v)
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, CliError>
where
    CliError: From<T::Err>,
{
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(CliError::from))
        .collect()
}

/// Every overridable setting; `None` means "not given at this level".
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub tau: Option<f64>,
    pub omega: Option<f64>,
    pub t_c: Option<f64>,
    pub t_t: Option<f64>,
    pub t_w: Option<f64>,
    pub window: Option<WindowMode>,
    pub model: Option<DetectorModel>,
    pub basis: Option<Basis>,
    pub format: Option<Format>,
    pub preset: Option<Preset>,
    pub axes: Option<Vec<Axis>>,
    pub outputs: Option<Vec<Output>>,
    pub bins: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

impl Settings {
    /// Fills every unset field from `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        Settings {
            tau: self.tau.or(lower.tau),
            omega: self.omega.or(lower.omega),
            t_c: self.t_c.or(lower.t_c),
            t_t: self.t_t.or(lower.t_t),
            t_w: self.t_w.or(lower.t_w),
            window: self.window.or(lower.window),
            model: self.model.or(lower.model),
            basis: self.basis.or(lower.basis),
            format: self.format.or(lower.format),
            preset: self.preset.or(lower.preset),
            axes: self.axes.or(lower.axes),
            outputs: self.outputs.or(lower.outputs),
            bins: self.bins.or(lower.bins),
            samples: self.samples.or(lower.samples),
            seed: self.seed.or(lower.seed),
            tolerance: self.tolerance.or(lower.tolerance),
        }
    }

    /// Applies one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key.trim() {
            "tau" => self.tau = Some(parse_real(key, value)?),
            "omega" => self.omega = Some(parse_real(key, value)?),
            "tc" | "t_c" => self.t_c = Some(parse_real(key, value)?),
            "tt" | "t_t" => self.t_t = Some(parse_real(key, value)?),
            "tw" | "t_w" => self.t_w = Some(parse_real(key, value)?),
            "window" => self.window = Some(value.parse()?),
            "model" => self.model = Some(value.parse()?),
            "basis" => self.basis = Some(value.parse()?),
            "format" => self.format = Some(value.parse()?),
            "preset" => self.preset = Some(value.parse()?),
            "outputs" => self.outputs = Some(parse_list(value)?),
            "axis" => self
                .axes
                .get_or_insert_with(Vec::new)
                .push(parse_axis(value)?),
            "bins" => self.bins = Some(parse_count(key, value)?),
            "samples" => self.samples = Some(parse_count(key, value)?),
            "seed" => {
                self.seed =
                    Some(value.parse().map_err(|_| {
                        CliError::invalid(format!("seed '{value}' is not an integer"))
                    })?)
            }
            "tolerance" => self.tolerance = Some(parse_real(key, value)?),
            other => return Err(CliError::invalid(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Reads a file of `key = value` lines; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::invalid(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut settings = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::invalid(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    n + 1
                ))
            })?;
            settings
                .set(key, value)
                .map_err(|e| CliError::invalid(format!("{}:{}: {e}", path.display(), n + 1)))?;
        }
        Ok(settings)
    }

    /// Range checks that do not depend on the subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(w) = self.t_w {
            if w <= 0.0 {
                return Err(CliError::invalid(format!(
                    "window width must be positive, got {w}"
                )));
            }
        }
        if let Some(b) = self.bins {
            if b < modegate::oracle::MIN_BINS {
                return Err(CliError::invalid(format!(
                    "need at least {} bins, got {b}",
                    modegate::oracle::MIN_BINS
                )));
            }
        }
        if self.samples == Some(0) {
            return Err(CliError::invalid("samples must be at least 1"));
        }
        if let Some(t) = self.tolerance {
            if t <= 0.0 {
                return Err(CliError::invalid(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        if self.window == Some(WindowMode::Finite) && self.t_w.is_none() {
            return Err(CliError::invalid("finite windows need --tw"));
        }
        Ok(())
    }
}

fn parse_count(key: &str, value: &str) -> Result<usize, CliError> {
    value
        .parse()
        .map_err(|_| CliError::invalid(format!("{key} '{value}' is not a non-negative integer")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let flags = Settings {
            tau: Some(1.0),
            ..Settings::default()
        };
        let file = Settings {
            tau: Some(2.0),
            omega: Some(3.0),
            ..Settings::default()
        };
        let preset = Settings {
            omega: Some(9.0),
            t_c: Some(4.0),
            ..Settings::default()
        };
        let s = flags.over(file).over(preset);
        assert_eq!(
            (s.tau, s.omega, s.t_c, s.t_t),
            (Some(1.0), Some(3.0), Some(4.0), None)
        );
    }

    #[test]
    fn key_values() {
        let mut s = Settings::default();
        s.set("tw", "0.5").unwrap();
        s.set("model", "gated").unwrap();
        s.set("outputs", "similarity, p_min").unwrap();
        s.set("axis", "tau:0:1:3").unwrap();
        assert_eq!(s.t_w, Some(0.5));
        assert_eq!(s.model, Some(DetectorModel::Gated));
        assert_eq!(s.outputs, Some(vec![Output::Similarity, Output::PMin]));
        assert_eq!(s.axes.as_ref().unwrap()[0].values(), &[0.0, 0.5, 1.0]);
        assert!(s.set("tau", "inf").is_err());
        assert!(s.set("colour", "red").is_err());
        assert!(s.set("window", "wide").is_err());
    }

    #[test]
    fn axis_syntax() {
        assert!(parse_axis("omega:0:6.283185307179586:5").is_ok());
        assert!(parse_axis("omega:0:1").is_err());
        assert!(parse_axis("phase:0:1:3").is_err());
        assert!(parse_axis("tau:0:1:1").is_err());
        assert!(parse_axis("tau:a:1:3").is_err());
    }

    #[test]
    fn range_checks() {
        assert!(Settings {
            t_w: Some(0.0),
            ..Settings::default()
        }
        .validate()
        .is_err());
        assert!(Settings {
            bins: Some(10),
            ..Settings::default()
        }
        .validate()
        .is_err());
        assert!(Settings {
            window: Some(WindowMode::Finite),
            ..Settings::default()
        }
        .validate()
        .is_err());
        assert!(Settings {
            tolerance: Some(-1.0),
            ..Settings::default()
        }
        .validate()
        .is_err());
    }
}
