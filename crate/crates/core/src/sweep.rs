//! Parameter sweeps over the detection model, with named presets.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{
    success_probabilities, windowed_truth_table, Basis, DetectionConfig, DetectorModel, TruthTable,
    Window,
};
use crate::error::{Error, Result};
use crate::metrics::{ideal_cnot_table, p_min, similarity};
use crate::network::coincidence_cnot_network;
use crate::twophoton::PhotonPair;

/// Window widths drawn as separate lines by the presets.
pub const DEFAULT_WINDOW_LINES: [f64; 4] = [0.01, 0.5, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parameter {
    Tau,
    Omega,
    TControl,
    TTarget,
    TWindow,
}

impl Parameter {
    pub const ALL: [Parameter; 5] = [
        Parameter::Tau,
        Parameter::Omega,
        Parameter::TControl,
        Parameter::TTarget,
        Parameter::TWindow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Tau => "tau",
            Parameter::Omega => "omega",
            Parameter::TControl => "t_c",
            Parameter::TTarget => "t_t",
            Parameter::TWindow => "t_w",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(Parameter::Tau),
            "omega" => Ok(Parameter::Omega),
            "t_c" | "tc" => Ok(Parameter::TControl),
            "t_t" | "tt" => Ok(Parameter::TTarget),
            "t_w" | "tw" => Ok(Parameter::TWindow),
            _ => Err(Error::Unknown {
                kind: "parameter",
                name: s.to_string(),
            }),
        }
    }
}

/// One point in parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub tau: f64,
    pub omega: f64,
    pub t_c: f64,
    pub t_t: f64,
    pub window: Window,
}

impl Default for Point {
    fn default() -> Self {
        Self {
            tau: 0.0,
            omega: 0.0,
            t_c: 0.0,
            t_t: 0.0,
            window: Window::Finite(0.01),
        }
    }
}

impl Point {
    pub fn with(mut self, parameter: Parameter, value: f64) -> Self {
        match parameter {
            Parameter::Tau => self.tau = value,
            Parameter::Omega => self.omega = value,
            Parameter::TControl => self.t_c = value,
            Parameter::TTarget => self.t_t = value,
            Parameter::TWindow => self.window = Window::Finite(value),
        }
        self
    }

    pub fn photons(&self) -> PhotonPair {
        PhotonPair::mismatched(self.tau, self.omega)
    }

    pub fn detection(&self, model: DetectorModel) -> DetectionConfig {
        DetectionConfig {
            model,
            t_c: self.t_c,
            t_t: self.t_t,
            window: self.window,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    parameter: Parameter,
    values: Vec<f64>,
}

impl Axis {
    /// `n` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(parameter: Parameter, start: f64, stop: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSweep(format!(
                "axis {parameter} needs at least 2 points, got {n}"
            )));
        }
        let step = (stop - start) / (n - 1) as f64;
        let values = (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + step * i as f64
                }
            })
            .collect();
        Self::explicit(parameter, values)
    }

    pub fn explicit(parameter: Parameter, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSweep(format!(
                "axis {parameter} needs at least 2 points"
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSweep(format!(
                "axis {parameter} has non-finite value {v}"
            )));
        }
        Ok(Self { parameter, values })
    }

    pub fn parameter(&self) -> Parameter {
        self.parameter
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Output {
    Similarity,
    TruthTable,
    PMin,
    SuccessProbs,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::Similarity => "similarity",
            Output::TruthTable => "truth_table",
            Output::PMin => "p_min",
            Output::SuccessProbs => "success_probs",
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "similarity" => Ok(Output::Similarity),
            "truth_table" | "truth-table" => Ok(Output::TruthTable),
            "p_min" | "p-min" => Ok(Output::PMin),
            "success_probs" | "success-probs" => Ok(Output::SuccessProbs),
            _ => Err(Error::Unknown {
                kind: "output",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    axes: Vec<Axis>,
    fixed: Point,
    model: DetectorModel,
    basis: Basis,
    outputs: Vec<Output>,
}

impl SweepSpec {
    /// Gated detectors share one gate, so `t_t` follows `t_c` and may not be
    /// swept on its own.
    pub fn new(
        axes: Vec<Axis>,
        fixed: Point,
        model: DetectorModel,
        basis: Basis,
        outputs: Vec<Output>,
    ) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidSweep(format!(
                "expected 1 or 2 axes, got {}",
                axes.len()
            )));
        }
        if axes.len() == 2 && axes[0].parameter == axes[1].parameter {
            return Err(Error::InvalidSweep(format!(
                "axis {} given twice",
                axes[0].parameter
            )));
        }
        if outputs.is_empty() {
            return Err(Error::InvalidSweep("no outputs requested".into()));
        }
        let mut fixed = fixed;
        if model == DetectorModel::Gated {
            if axes.iter().any(|a| a.parameter == Parameter::TTarget) {
                return Err(Error::InvalidSweep(
                    "gated detection cannot sweep t_t; sweep t_c instead".into(),
                ));
            }
            fixed.t_t = fixed.t_c;
        }
        let probe = fixed.detection(model);
        probe.validate()?;
        if axes
            .iter()
            .any(|a| a.parameter == Parameter::TWindow && a.values.iter().any(|&w| w <= 0.0))
        {
            return Err(Error::InvalidSweep("window widths must be positive".into()));
        }
        Ok(Self {
            axes,
            fixed,
            model,
            basis,
            outputs,
        })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn fixed(&self) -> &Point {
        &self.fixed
    }

    pub fn model(&self) -> DetectorModel {
        self.model
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in row-major order (first axis slowest).
    pub fn points(&self) -> Vec<Point> {
        let mut points = vec![self.fixed];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| axis.values.iter().map(move |&v| p.with(axis.parameter, v)))
                .collect();
        }
        if self.model == DetectorModel::Gated {
            points.iter_mut().for_each(|p| p.t_t = p.t_c);
        }
        points
    }
}

/// Requested outputs at one grid point; unrequested ones are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RowValues {
    pub similarity: Option<f64>,
    pub truth_table: Option<TruthTable>,
    pub p_min: Option<f64>,
    pub success_probs: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: Point,
    pub model: DetectorModel,
    pub basis: Basis,
    pub values: Result<RowValues>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub outputs: Vec<Output>,
    pub rows: Vec<SweepRow>,
}

impl Dataset {
    /// Appends another dataset with the same output columns.
    pub fn extend(&mut self, other: Dataset) -> Result<()> {
        if other.outputs != self.outputs {
            return Err(Error::InvalidSweep(
                "datasets have different output columns".into(),
            ));
        }
        self.rows.extend(other.rows);
        Ok(())
    }
}

fn evaluate(
    point: &Point,
    model: DetectorModel,
    basis: Basis,
    outputs: &[Output],
) -> Result<RowValues> {
    let u = coincidence_cnot_network();
    let photons = point.photons();
    let cfg = point.detection(model);
    let mut row = RowValues::default();
    let needs_table = outputs.iter().any(|o| {
        matches!(
            o,
            Output::Similarity | Output::TruthTable | Output::SuccessProbs
        )
    });
    let table = if needs_table {
        Some(windowed_truth_table(&u, &photons, &cfg, basis)?)
    } else {
        None
    };
    for output in outputs {
        match output {
            Output::Similarity => {
                row.similarity =
                    Some(similarity(&ideal_cnot_table(basis), table.as_ref().unwrap())?.value)
            }
            Output::TruthTable => row.truth_table = table,
            Output::SuccessProbs => {
                row.success_probs = Some(success_probabilities(table.as_ref().unwrap())?)
            }
            // the bound is defined over computational-basis inputs
            Output::PMin => row.p_min = Some(p_min(&u, &photons, &cfg)?),
        }
    }
    Ok(row)
}

/// Evaluates every grid point in parallel. Rows keep grid order and a failing
/// point carries its error instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Dataset {
    let rows = spec
        .points()
        .into_par_iter()
        .map(|point| SweepRow {
            point,
            model: spec.model,
            basis: spec.basis,
            values: evaluate(&point, spec.model, spec.basis, &spec.outputs),
        })
        .collect();
    Dataset {
        outputs: spec.outputs.clone(),
        rows,
    }
}

/// Named sweep layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    /// Similarity against frequency shift, time-resolved clicks at 0 and 1.
    Fig2a,
    /// Similarity against frequency shift, gate at 0.
    Fig2b,
    /// Similarity against time shift, time-resolved clicks at 0 and 1.
    Fig3a,
    /// Similarity against time shift, gate at 0.
    Fig3b,
    /// Time and frequency shift surface, for both detector models.
    Fig4,
    /// Frequency shift against target click time.
    Fig5,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4,
        Preset::Fig5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    pub const DEFAULT_OUTPUTS: [Output; 2] = [Output::Similarity, Output::PMin];

    /// Specs making up the preset, in output order.
    pub fn specs(self, basis: Basis, outputs: &[Output]) -> Result<Vec<SweepSpec>> {
        use std::f64::consts::PI;
        let lines = || Axis::explicit(Parameter::TWindow, DEFAULT_WINDOW_LINES.to_vec());
        let omega_line = || Axis::linspace(Parameter::Omega, 0.0, 4.0 * PI, 201);
        let tau_line = || Axis::linspace(Parameter::Tau, 0.0, 3.0, 61);
        let resolved = Point {
            t_c: 0.0,
            t_t: 1.0,
            ..Point::default()
        };
        let gated = Point {
            t_c: 0.0,
            t_t: 0.0,
            ..Point::default()
        };
        let tr = DetectorModel::TimeResolved;
        let g = DetectorModel::Gated;
        let spec = |axes, fixed, model| SweepSpec::new(axes, fixed, model, basis, outputs.to_vec());
        match self {
            Preset::Fig2a => Ok(vec![spec(vec![lines()?, omega_line()?], resolved, tr)?]),
            Preset::Fig2b => Ok(vec![spec(vec![lines()?, omega_line()?], gated, g)?]),
            Preset::Fig3a => Ok(vec![spec(vec![lines()?, tau_line()?], resolved, tr)?]),
            Preset::Fig3b => Ok(vec![spec(vec![lines()?, tau_line()?], gated, g)?]),
            Preset::Fig4 => {
                let surface = || -> Result<Vec<Axis>> {
                    Ok(vec![
                        Axis::linspace(Parameter::Tau, 0.0, 2.0, 41)?,
                        Axis::linspace(Parameter::Omega, 0.0, 10.0, 41)?,
                    ])
                };
                Ok(vec![
                    spec(surface()?, resolved, tr)?,
                    spec(surface()?, gated, g)?,
                ])
            }
            Preset::Fig5 => Ok(vec![spec(
                vec![
                    Axis::linspace(Parameter::Omega, 0.0, 10.0, 41)?,
                    Axis::linspace(Parameter::TTarget, -2.0, 2.0, 41)?,
                ],
                Point {
                    t_c: 0.0,
                    ..Point::default()
                },
                tr,
            )?]),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "preset",
                name: s.to_string(),
            })
    }
}
