//! Spatial-mode unitaries for the six-mode coincidence CNOT.
//!
//! Modes are ordered `(a_c, c0, c1, t0, t1, a_t)`: the two dual-rail qubits
//! between two vacuum ancillas. All matrices act on single-photon mode
//! operators, `a_out[i] = Σ_j U[i][j] a_in[j]`.

use std::fmt;

use nalgebra::Matrix6;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of spatial modes in the gate.
pub const MODE_COUNT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    AncillaControl,
    Control0,
    Control1,
    Target0,
    Target1,
    AncillaTarget,
}

impl Mode {
    pub const ALL: [Mode; MODE_COUNT] = [
        Mode::AncillaControl,
        Mode::Control0,
        Mode::Control1,
        Mode::Target0,
        Mode::Target1,
        Mode::AncillaTarget,
    ];

    pub const CONTROL_RAILS: [Mode; 2] = [Mode::Control0, Mode::Control1];
    pub const TARGET_RAILS: [Mode; 2] = [Mode::Target0, Mode::Target1];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::AncillaControl => "a_c",
            Mode::Control0 => "c0",
            Mode::Control1 => "c1",
            Mode::Target0 => "t0",
            Mode::Target1 => "t1",
            Mode::AncillaTarget => "a_t",
        }
    }

    /// Control rail carrying logical value `bit`.
    pub fn control_rail(bit: usize) -> Mode {
        Self::CONTROL_RAILS[bit]
    }

    /// Target rail carrying logical value `bit`.
    pub fn target_rail(bit: usize) -> Mode {
        Self::TARGET_RAILS[bit]
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A 6×6 unitary over the gate's spatial modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary {
    matrix: Matrix6<Complex64>,
}

/// Unitarity tolerance (Frobenius norm of U†U − I).
pub const UNITARITY_TOL: f64 = 1e-12;

impl ModeUnitary {
    pub fn identity() -> Self {
        Self {
            matrix: Matrix6::identity(),
        }
    }

    /// Wraps a matrix, rejecting it if it is not unitary to [`UNITARITY_TOL`].
    pub fn from_matrix(matrix: Matrix6<Complex64>) -> Result<Self> {
        let u = Self { matrix };
        let defect = u.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(u)
    }

    pub fn matrix(&self) -> &Matrix6<Complex64> {
        &self.matrix
    }

    /// Amplitude for a photon entering `input` to leave in `output`.
    pub fn get(&self, output: Mode, input: Mode) -> Complex64 {
        self.matrix[(output.index(), input.index())]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// ‖U†U − I‖_F.
    pub fn unitarity_defect(&self) -> f64 {
        (self.matrix.adjoint() * self.matrix - Matrix6::identity()).norm()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ModeUnitary) -> ModeUnitary {
        ModeUnitary {
            matrix: next.matrix * self.matrix,
        }
    }
}

/// A two-mode beamsplitter embedded in the six-mode space.
///
/// `reflectivity` is the intensity coupled from one mode into the other. The
/// light reflected off the dotted face (the face seen by `dotted_side`) picks
/// up a π phase, so the embedded block is real:
///
/// ```text
///            from a      from b
/// to a   [ √(1-η)      ±√η    ]
/// to b   [ ∓√η        √(1-η)  ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamsplitterSpec {
    pub mode_a: Mode,
    pub mode_b: Mode,
    pub reflectivity: f64,
    pub dotted_side: Mode,
}

impl BeamsplitterSpec {
    pub fn new(mode_a: Mode, mode_b: Mode, reflectivity: f64, dotted_side: Mode) -> Self {
        Self {
            mode_a,
            mode_b,
            reflectivity,
            dotted_side,
        }
    }
}

pub fn beamsplitter_unitary(spec: &BeamsplitterSpec) -> Result<ModeUnitary> {
    let BeamsplitterSpec {
        mode_a,
        mode_b,
        reflectivity,
        dotted_side,
    } = *spec;
    if mode_a == mode_b {
        return Err(Error::InvalidBeamsplitter(format!(
            "both ports are {mode_a}"
        )));
    }
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(Error::InvalidBeamsplitter(format!(
            "reflectivity {reflectivity} outside [0, 1]"
        )));
    }
    if dotted_side != mode_a && dotted_side != mode_b {
        return Err(Error::InvalidBeamsplitter(format!(
            "dotted side {dotted_side} is not a port"
        )));
    }

    let t = Complex64::new((1.0 - reflectivity).sqrt(), 0.0);
    let r = Complex64::new(reflectivity.sqrt(), 0.0);
    let (a, b) = (mode_a.index(), mode_b.index());
    let mut m = Matrix6::identity();
    m[(a, a)] = t;
    m[(b, b)] = t;
    if dotted_side == mode_a {
        m[(b, a)] = -r;
        m[(a, b)] = r;
    } else {
        m[(b, a)] = r;
        m[(a, b)] = -r;
    }
    Ok(ModeUnitary { matrix: m })
}

/// Composes stages in application order: the first stage acts first.
pub fn compose(stages: &[ModeUnitary]) -> ModeUnitary {
    stages
        .iter()
        .fold(ModeUnitary::identity(), |acc, s| acc.then(s))
}

fn splitter(a: Mode, b: Mode, reflectivity: f64, dotted: Mode) -> ModeUnitary {
    beamsplitter_unitary(&BeamsplitterSpec::new(a, b, reflectivity, dotted))
        .expect("valid fixed beamsplitter")
}

/// The coincidence-basis CNOT.
///
/// The target qubit is sandwiched between two balanced splitters. In between,
/// three 1/3 splitters act in parallel: c0 with the control ancilla, c1 with t0
/// (the central splitter where the photons interfere), and t1 with the target
/// ancilla. Each rail leaves a 1/3 splitter through its reflected port, so in
/// the rail-labelled picture those splitters couple 2/3 of the intensity across.
pub fn coincidence_cnot_network() -> ModeUnitary {
    use Mode::*;
    const CROSS: f64 = 2.0 / 3.0;
    compose(&[
        splitter(Target0, Target1, 0.5, Target1),
        splitter(AncillaControl, Control0, CROSS, AncillaControl),
        splitter(Control1, Target0, CROSS, Control1),
        splitter(Target1, AncillaTarget, CROSS, Target1),
        splitter(Target0, Target1, 0.5, Target0),
    ])
}

/// Balanced splitters across each qubit's rails, mapping |+⟩ to rail 0 and |−⟩
/// to rail 1. Appended before detection to read out in the diagonal basis.
pub fn diagonal_readout() -> ModeUnitary {
    use Mode::*;
    compose(&[
        splitter(Control0, Control1, 0.5, Control0),
        splitter(Target0, Target1, 0.5, Target0),
    ])
}

/// Coincidence amplitudes for indistinguishable photons:
/// `action[2c+t][2c'+t']` is the amplitude for |c t⟩ → |c' t'⟩, summing the
/// direct and exchange photon paths.
pub fn ideal_logical_action(u: &ModeUnitary) -> [[Complex64; 4]; 4] {
    let mut action = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (input, row) in action.iter_mut().enumerate() {
        let (c_in, t_in) = (Mode::control_rail(input / 2), Mode::target_rail(input % 2));
        for (output, entry) in row.iter_mut().enumerate() {
            let (c_out, t_out) = (
                Mode::control_rail(output / 2),
                Mode::target_rail(output % 2),
            );
            *entry =
                u.get(c_out, c_in) * u.get(t_out, t_in) + u.get(t_out, c_in) * u.get(c_out, t_in);
        }
    }
    action
}
