//! Detector models and coincidence truth tables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{diagonal_readout, ModeUnitary};
use crate::twophoton::{propagate_logical, LogicalState, PhotonPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorModel {
    /// Detectors report click times; control and target may differ.
    TimeResolved,
    /// Both detectors open in one shared window.
    Gated,
}

impl DetectorModel {
    pub fn name(self) -> &'static str {
        match self {
            DetectorModel::TimeResolved => "time-resolved",
            DetectorModel::Gated => "gated",
        }
    }
}

impl fmt::Display for DetectorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "time-resolved" | "time_resolved" | "resolved" => Ok(DetectorModel::TimeResolved),
            "gated" => Ok(DetectorModel::Gated),
            _ => Err(Error::Unknown {
                kind: "detector model",
                name: s.to_string(),
            }),
        }
    }
}

/// Logical basis in which the gate is prepared and read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    /// Labels of the four logical states, in table order.
    pub fn labels(self) -> [&'static str; 4] {
        match self {
            Basis::Z => ["00", "01", "10", "11"],
            Basis::X => ["++", "+-", "-+", "--"],
        }
    }

    pub(crate) fn input_state(self, index: usize) -> LogicalState {
        match self {
            Basis::Z => LogicalState::basis(index / 2, index % 2),
            Basis::X => LogicalState::diagonal(index / 2 == 1, index % 2 == 1),
        }
    }

    pub(crate) fn readout(self, u: &ModeUnitary) -> ModeUnitary {
        match self {
            Basis::Z => u.clone(),
            Basis::X => u.then(&diagonal_readout()),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
        })
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Basis::Z),
            "X" | "x" => Ok(Basis::X),
            _ => Err(Error::Unknown {
                kind: "basis",
                name: s.to_string(),
            }),
        }
    }
}

/// Detector integration window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Window {
    /// Integrate over the whole real line.
    Full,
    /// Integrate over `[t, t + width]` from each detector's click time.
    Finite(f64),
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Full => f.write_str("full"),
            Window::Finite(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub model: DetectorModel,
    pub t_c: f64,
    pub t_t: f64,
    pub window: Window,
}

impl DetectionConfig {
    pub fn time_resolved(t_c: f64, t_t: f64, window: Window) -> Result<Self> {
        let cfg = Self {
            model: DetectorModel::TimeResolved,
            t_c,
            t_t,
            window,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn gated(t: f64, window: Window) -> Result<Self> {
        let cfg = Self {
            model: DetectorModel::Gated,
            t_c: t,
            t_t: t,
            window,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Detectors integrating over all time.
    pub fn full_line() -> Self {
        Self {
            model: DetectorModel::TimeResolved,
            t_c: 0.0,
            t_t: 0.0,
            window: Window::Full,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t_c.is_finite() || !self.t_t.is_finite() {
            return Err(Error::InvalidDetection(format!(
                "click times must be finite (t_c={}, t_t={})",
                self.t_c, self.t_t
            )));
        }
        if let Window::Finite(w) = self.window {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidDetection(format!(
                    "window width must be positive, got {w}"
                )));
            }
        }
        if self.model == DetectorModel::Gated && self.t_c != self.t_t {
            return Err(Error::InvalidDetection(format!(
                "gated detectors share one gate time (t_c={}, t_t={})",
                self.t_c, self.t_t
            )));
        }
        Ok(())
    }

    fn interval(&self, start: f64) -> (f64, f64) {
        match self.window {
            Window::Full => (f64::NEG_INFINITY, f64::INFINITY),
            Window::Finite(w) => (start, start + w),
        }
    }

    pub fn control_window(&self) -> (f64, f64) {
        self.interval(self.t_c)
    }

    pub fn target_window(&self) -> (f64, f64) {
        self.interval(self.t_t)
    }
}

/// Whether table entries are densities (per unit time²) or probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    Density,
    Probability,
}

/// Coincidence truth table: rows are logical inputs, columns logical outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    entries: [[f64; 4]; 4],
    kind: TableKind,
}

impl TruthTable {
    /// Builds a table, rejecting negative or non-finite entries.
    pub fn new(entries: [[f64; 4]; 4], kind: TableKind) -> Result<Self> {
        if entries
            .iter()
            .flatten()
            .any(|e| !(e.is_finite() && *e >= 0.0))
        {
            return Err(Error::InvalidDetection(
                "truth table entries must be finite and non-negative".into(),
            ));
        }
        Ok(Self { entries, kind })
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, input: usize, output: usize) -> f64 {
        self.entries[input][output]
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().flatten().sum()
    }

    pub fn row_sums(&self) -> [f64; 4] {
        self.entries.map(|row| row.iter().sum())
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().flatten().fold(0.0, |m, &e| m.max(e))
    }
}

/// Ideal time-resolving detection at click times `t_c` (control) and `t_t`
/// (target): entry (k, m) is the joint density for input k to be detected as
/// output m.
pub fn pointwise_truth_table(
    u: &ModeUnitary,
    photons: &PhotonPair,
    t_c: f64,
    t_t: f64,
    basis: Basis,
) -> TruthTable {
    let network = basis.readout(u);
    let mut entries = [[0.0; 4]; 4];
    for (k, row) in entries.iter_mut().enumerate() {
        let amp = propagate_logical(&network, photons, &basis.input_state(k));
        for (m, e) in row.iter_mut().enumerate() {
            *e = amp.joint_density(m / 2, m % 2, t_c, t_t);
        }
    }
    TruthTable {
        entries,
        kind: TableKind::Density,
    }
}

/// Truth table with each detector integrating its window. Entries are
/// probabilities: densities are integrated, amplitudes never are.
pub fn windowed_truth_table(
    u: &ModeUnitary,
    photons: &PhotonPair,
    cfg: &DetectionConfig,
    basis: Basis,
) -> Result<TruthTable> {
    cfg.validate()?;
    let network = basis.readout(u);
    let (w1, w2) = (cfg.control_window(), cfg.target_window());
    let mut entries = [[0.0; 4]; 4];
    for (k, row) in entries.iter_mut().enumerate() {
        let amp = propagate_logical(&network, photons, &basis.input_state(k));
        for (m, e) in row.iter_mut().enumerate() {
            *e = amp.window_probability(m / 2, m % 2, w1, w2)?;
        }
    }
    Ok(TruthTable {
        entries,
        kind: TableKind::Probability,
    })
}

/// Post-selection success probability of each logical input (row sums).
pub fn success_probabilities(table: &TruthTable) -> Result<[f64; 4]> {
    if table.kind != TableKind::Probability {
        return Err(Error::NotWindowed);
    }
    Ok(table.row_sums())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::coincidence_cnot_network;
    use std::f64::consts::PI;

    const STRUCTURAL_ZEROS: [(usize, usize); 10] = [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 0),
        (1, 2),
        (1, 3),
        (2, 0),
        (2, 1),
        (3, 0),
        (3, 1),
    ];

    // Closed forms for the Z-basis CNOT densities. Rows 00 and 01 only have the
    // direct path, the flip entries only the exchange path, and the non-flip
    // entries of rows 10 and 11 interfere both.
    fn direct_only(tau: f64, tc: f64, tt: f64) -> f64 {
        2.0 * (-2.0 * (tc * tc + (tau - tt).powi(2))).exp() / (9.0 * PI)
    }
    fn exchange_only(tau: f64, tc: f64, tt: f64) -> f64 {
        2.0 * (-2.0 * ((tau - tc).powi(2) + tt * tt)).exp() / (9.0 * PI)
    }
    fn interfering(tau: f64, omega: f64, tc: f64, tt: f64) -> f64 {
        let a =
            num_complex::Complex64::from_polar((-tc * tc - (tau - tt).powi(2)).exp(), -omega * tt);
        let b =
            num_complex::Complex64::from_polar((-(tau - tc).powi(2) - tt * tt).exp(), -omega * tc);
        2.0 * (a - b).norm_sqr() / (9.0 * PI)
    }

    #[test]
    fn config_validation() {
        assert!(DetectionConfig::time_resolved(0.0, 1.0, Window::Finite(0.5)).is_ok());
        assert!(DetectionConfig::time_resolved(0.0, 1.0, Window::Finite(0.0)).is_err());
        assert!(DetectionConfig::time_resolved(0.0, 1.0, Window::Finite(-1.0)).is_err());
        assert!(DetectionConfig::time_resolved(f64::NAN, 1.0, Window::Full).is_err());
        let mut gated = DetectionConfig::gated(0.2, Window::Finite(0.01)).unwrap();
        assert_eq!(gated.t_c, gated.t_t);
        gated.t_t = 0.3;
        assert!(gated.validate().is_err());
    }

    #[test]
    fn pointwise_at_zero_mismatch_and_origin() {
        let t = pointwise_truth_table(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(0.0, 0.0),
            0.0,
            0.0,
            Basis::Z,
        );
        let a = 2.0 / (9.0 * PI);
        assert!((a - 0.07074).abs() < 1e-5);
        assert!((t.get(0, 0) - a).abs() < 1e-15);
        assert!((t.get(1, 1) - a).abs() < 1e-15);
        assert!((t.get(2, 3) - a).abs() < 1e-15);
        assert!((t.get(3, 2) - a).abs() < 1e-15);
        assert!(t.get(2, 2) < 1e-30 && t.get(3, 3) < 1e-30);
        assert_eq!(t.kind(), TableKind::Density);
    }

    #[test]
    fn pointwise_matches_closed_forms() {
        let u = coincidence_cnot_network();
        let cases = [
            (0.4, 2.0, -0.3, 0.8),
            (1.5, -3.2, 0.2, 0.1),
            (-0.7, 6.0, 1.1, -0.9),
            (0.0, 1.0, 0.5, 0.5),
        ];
        for (tau, omega, tc, tt) in cases {
            let t =
                pointwise_truth_table(&u, &PhotonPair::mismatched(tau, omega), tc, tt, Basis::Z);
            let (d, x, i) = (
                direct_only(tau, tc, tt),
                exchange_only(tau, tc, tt),
                interfering(tau, omega, tc, tt),
            );
            let expected = [
                [d, 0.0, 0.0, 0.0],
                [0.0, d, 0.0, 0.0],
                [0.0, 0.0, i, x],
                [0.0, 0.0, x, i],
            ];
            for r in 0..4 {
                for m in 0..4 {
                    assert!(
                        (t.get(r, m) - expected[r][m]).abs() < 1e-12,
                        "({r},{m}) at {tau},{omega},{tc},{tt}"
                    );
                }
            }
            for (r, m) in STRUCTURAL_ZEROS {
                assert!(t.get(r, m) < 1e-12);
            }
        }
    }

    #[test]
    fn equal_click_times_give_ideal_pattern() {
        let u = coincidence_cnot_network();
        for (tau, omega, t) in [(1.2, 5.0, 0.3), (-2.0, 0.7, -1.0), (0.5, -9.0, 0.0)] {
            let table =
                pointwise_truth_table(&u, &PhotonPair::mismatched(tau, omega), t, t, Basis::Z);
            assert!(
                table.get(2, 2) < 1e-15 * table.max_entry()
                    && table.get(3, 3) < 1e-15 * table.max_entry()
            );
        }
    }

    #[test]
    fn full_window_ideal_table() {
        let t = windowed_truth_table(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(0.0, 0.0),
            &DetectionConfig::full_line(),
            Basis::Z,
        )
        .unwrap();
        let probs = success_probabilities(&t).unwrap();
        for p in probs {
            assert!((p - 1.0 / 9.0).abs() < 1e-9);
        }
        for (r, m) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            assert!((t.get(r, m) - 1.0 / 9.0).abs() < 1e-9);
        }
    }

    #[test]
    fn x_basis_full_window_table() {
        let t = windowed_truth_table(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(0.0, 0.0),
            &DetectionConfig::full_line(),
            Basis::X,
        )
        .unwrap();
        let ideal = [(0, 0), (1, 3), (2, 2), (3, 1)];
        for r in 0..4 {
            for m in 0..4 {
                let expected = if ideal.contains(&(r, m)) {
                    1.0 / 9.0
                } else {
                    0.0
                };
                assert!((t.get(r, m) - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn narrow_window_is_density_times_area() {
        let tw = 0.01;
        let cfg = DetectionConfig::gated(0.0, Window::Finite(tw)).unwrap();
        let t = windowed_truth_table(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(0.0, 0.0),
            &cfg,
            Basis::Z,
        )
        .unwrap();
        let first_order = 2.0 / (9.0 * PI) * tw * tw;
        assert!((t.get(0, 0) - first_order).abs() / first_order < 1e-3);
        let photons = PhotonPair::mismatched(0.0, 0.0);
        let amp =
            crate::twophoton::propagate_basis_pair(&coincidence_cnot_network(), &photons, 0, 0);
        let quad = crate::quadrature::integrate_real(
            |t1| {
                crate::quadrature::integrate_real(
                    |t2| amp.joint_density(0, 0, t1, t2),
                    0.0,
                    tw,
                    1e-18,
                )
                .unwrap()
            },
            0.0,
            tw,
            1e-18,
        )
        .unwrap();
        assert!((t.get(0, 0) - quad).abs() / quad < 1e-9);
    }

    #[test]
    fn success_probabilities_require_windowed_table() {
        let t = pointwise_truth_table(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(0.0, 0.0),
            0.0,
            0.0,
            Basis::Z,
        );
        assert_eq!(success_probabilities(&t), Err(Error::NotWindowed));
    }

    #[test]
    fn mismatched_photons_rarely_share_a_narrow_gate() {
        let cfg = DetectionConfig::gated(0.0, Window::Finite(0.1)).unwrap();
        let t = windowed_truth_table(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(3.0, 0.0),
            &cfg,
            Basis::Z,
        )
        .unwrap();
        let p = success_probabilities(&t).unwrap();
        for (k, row) in t.entries().iter().enumerate() {
            assert_eq!(p[k], row.iter().sum::<f64>());
        }
        // Every input needs both photons inside [0, 0.1] while the target is
        // centered at 3, so all rows collapse far below the ideal 1/9. Within
        // the narrow gate ψ_c and ψ_t are nearly proportional, which suppresses
        // the interfering entries and keeps the rows comparable.
        for q in p {
            assert!(q < 1e-9 * (1.0 / 9.0));
        }
        assert!((p[2] - p[0]).abs() < 0.1 * p[0]);
        assert!(t.get(2, 2) < 0.1 * t.get(2, 3));
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "gated".parse::<DetectorModel>().unwrap(),
            DetectorModel::Gated
        );
        assert_eq!(
            "time-resolved".parse::<DetectorModel>().unwrap(),
            DetectorModel::TimeResolved
        );
        assert_eq!("x".parse::<Basis>().unwrap(), Basis::X);
        assert!("y".parse::<Basis>().is_err());
    }
}
