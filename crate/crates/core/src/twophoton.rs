//! Propagation of the two-photon dual-rail input state through a mode unitary.
//!
//! One photon (temporal amplitude ψ_c) is injected into a control rail and one
//! (ψ_t) into a target rail. Since the unitary only acts on spatial modes, the
//! joint temporal amplitude at output modes (i, j) is always a combination of
//! two photon-assignment paths,
//!
//! ```text
//! A_ij(t1, t2) = u_ij · ψ_c(t1) ψ_t(t2) + v_ij · ψ_c(t2) ψ_t(t1),
//! ```
//!
//! where t1 is the detection time in mode i and t2 in mode j. The direct
//! coefficient u_ij routes the control photon to i; the exchange coefficient
//! v_ij routes it to j. All distinguishability effects come from the
//! interference of these two terms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{Mode, ModeUnitary, MODE_COUNT};
use crate::wavepacket::{window_integral, GaussianWavepacket};

const NORM_TOL: f64 = 1e-12;

/// Amplitudes λ_{ct} of the logical basis states |c t⟩, indexed by 2c + t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalState {
    amplitudes: [Complex64; 4],
}

impl LogicalState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state |c t⟩.
    pub fn basis(control: usize, target: usize) -> Self {
        let mut amplitudes = [Complex64::new(0.0, 0.0); 4];
        amplitudes[2 * control + target] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Diagonal basis state |± ±⟩: `control_minus` / `target_minus` select |−⟩.
    pub fn diagonal(control_minus: bool, target_minus: bool) -> Self {
        let sign = |minus: bool, bit: usize| if minus && bit == 1 { -1.0 } else { 1.0 };
        let mut amplitudes = [Complex64::new(0.0, 0.0); 4];
        for (k, a) in amplitudes.iter_mut().enumerate() {
            *a = Complex64::new(
                0.5 * sign(control_minus, k / 2) * sign(target_minus, k % 2),
                0.0,
            );
        }
        Self { amplitudes }
    }

    pub fn amplitude(&self, control: usize, target: usize) -> Complex64 {
        self.amplitudes[2 * control + target]
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }
}

/// The two photons' temporal modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonPair {
    pub control: GaussianWavepacket,
    pub target: GaussianWavepacket,
}

impl PhotonPair {
    pub fn new(control: GaussianWavepacket, target: GaussianWavepacket) -> Self {
        Self { control, target }
    }

    /// Reference control photon and a target displaced by `tau` in time and
    /// `omega` in frequency.
    pub fn mismatched(tau: f64, omega: f64) -> Self {
        Self::new(
            GaussianWavepacket::reference(),
            GaussianWavepacket::new(tau, omega),
        )
    }

    /// Both photons shifted by a common center frequency offset.
    pub fn common_frequency_shift(self, shift: f64) -> Self {
        Self::new(
            self.control.frequency_shifted(shift),
            self.target.frequency_shifted(shift),
        )
    }

    /// ⟨ψ_c|ψ_t⟩.
    pub fn overlap(&self) -> Complex64 {
        self.control.overlap(&self.target)
    }
}

/// Direct and exchange coefficients for one output mode pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathAmplitudes {
    pub direct: Complex64,
    pub exchange: Complex64,
}

impl PathAmplitudes {
    /// Full-line probability of finding one photon in each of two distinct modes.
    fn total_probability(&self, overlap_sqr: f64) -> f64 {
        self.direct.norm_sqr()
            + self.exchange.norm_sqr()
            + 2.0 * (self.direct * self.exchange.conj()).re * overlap_sqr
    }
}

/// Coincidence-rail amplitudes of a propagated two-photon state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonRailAmplitude {
    /// Indexed by [control output bit][target output bit].
    rails: [[PathAmplitudes; 2]; 2],
    photons: PhotonPair,
    non_coincidence: f64,
}

fn path_amplitudes(u: &ModeUnitary, input: &LogicalState, i: Mode, j: Mode) -> PathAmplitudes {
    let mut out = PathAmplitudes::default();
    for c in 0..2 {
        for t in 0..2 {
            let lambda = input.amplitude(c, t);
            if lambda == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (c_in, t_in) = (Mode::control_rail(c), Mode::target_rail(t));
            out.direct += lambda * u.get(i, c_in) * u.get(j, t_in);
            out.exchange += lambda * u.get(j, c_in) * u.get(i, t_in);
        }
    }
    out
}

/// Propagates the computational basis input |c_in t_in⟩.
pub fn propagate_basis_pair(
    u: &ModeUnitary,
    photons: &PhotonPair,
    control_bit: usize,
    target_bit: usize,
) -> TwoPhotonRailAmplitude {
    propagate_logical(u, photons, &LogicalState::basis(control_bit, target_bit))
}

/// Propagates a logical superposition. Both control rails carry ψ_c and both
/// target rails carry ψ_t, so the coefficients are linear in λ.
pub fn propagate_logical(
    u: &ModeUnitary,
    photons: &PhotonPair,
    input: &LogicalState,
) -> TwoPhotonRailAmplitude {
    let mut rails = [[PathAmplitudes::default(); 2]; 2];
    for (c, row) in rails.iter_mut().enumerate() {
        for (t, entry) in row.iter_mut().enumerate() {
            *entry = path_amplitudes(u, input, Mode::control_rail(c), Mode::target_rail(t));
        }
    }

    let overlap_sqr = photons.overlap().norm_sqr();
    let coincidence: f64 = rails
        .iter()
        .flatten()
        .map(|p| p.total_probability(overlap_sqr))
        .sum();
    let non_coincidence = output_total_probability(u, input, overlap_sqr) - coincidence;

    TwoPhotonRailAmplitude {
        rails,
        photons: *photons,
        non_coincidence,
    }
}

/// Sum of probabilities over every unordered output mode pair, including both
/// photons in the same mode. Equals one for a unitary network.
fn output_total_probability(u: &ModeUnitary, input: &LogicalState, overlap_sqr: f64) -> f64 {
    let mut total = 0.0;
    for a in 0..MODE_COUNT {
        for b in a..MODE_COUNT {
            let paths = path_amplitudes(u, input, Mode::ALL[a], Mode::ALL[b]);
            let p = paths.total_probability(overlap_sqr);
            // a doubly occupied mode is counted once instead of for both orderings
            total += if a == b { 0.5 * p } else { p };
        }
    }
    total
}

impl TwoPhotonRailAmplitude {
    /// Coefficients at control output `c_out` and target output `t_out` (bits).
    pub fn paths(&self, c_out: usize, t_out: usize) -> PathAmplitudes {
        self.rails[c_out][t_out]
    }

    pub fn photons(&self) -> &PhotonPair {
        &self.photons
    }

    /// Probability that the photons do not end up one in each qubit's rails.
    pub fn non_coincidence_probability(&self) -> f64 {
        self.non_coincidence
    }

    /// Full-line coincidence probability at rails (c_out, t_out).
    pub fn coincidence_probability(&self, c_out: usize, t_out: usize) -> f64 {
        self.paths(c_out, t_out)
            .total_probability(self.photons.overlap().norm_sqr())
    }

    /// Joint detection density at control rail `c_out` (time t1) and target
    /// rail `t_out` (time t2).
    pub fn joint_density(&self, c_out: usize, t_out: usize, t1: f64, t2: f64) -> f64 {
        let p = self.paths(c_out, t_out);
        let (psi_c, psi_t) = (&self.photons.control, &self.photons.target);
        (p.direct * psi_c.amplitude(t1) * psi_t.amplitude(t2)
            + p.exchange * psi_c.amplitude(t2) * psi_t.amplitude(t1))
        .norm_sqr()
    }

    /// ∫_{w1}∫_{w2} joint_density dt1 dt2 for windows `(lo, hi)` on the control
    /// and target detectors. Infinite bounds select the full line.
    pub fn window_probability(
        &self,
        c_out: usize,
        t_out: usize,
        w1: (f64, f64),
        w2: (f64, f64),
    ) -> Result<f64> {
        let p = self.paths(c_out, t_out);
        let (psi_c, psi_t) = (&self.photons.control, &self.photons.target);

        let pc1 = psi_c.window_probability(w1.0, w1.1)?;
        let pc2 = psi_c.window_probability(w2.0, w2.1)?;
        let pt1 = psi_t.window_probability(w1.0, w1.1)?;
        let pt2 = psi_t.window_probability(w2.0, w2.1)?;
        // ∫_W conj(ψ_t) ψ_c
        let cross = psi_t.conj_product(psi_c);
        let x1 = window_integral(&cross, w1.0, w1.1)?;
        let x2 = window_integral(&cross, w2.0, w2.1)?;

        let value = p.direct.norm_sqr() * pc1 * pt2
            + p.exchange.norm_sqr() * pc2 * pt1
            + 2.0 * (p.direct * p.exchange.conj() * x1 * x2.conj()).re;
        // cancellation can leave a tiny negative residue
        Ok(value.max(0.0))
    }
}
