//! Brute-force validator. Time is cut into bins, each photon becomes a vector
//! of bin amplitudes, and detection probabilities are plain sums of squared
//! two-photon amplitudes over (rail, bin) pairs. No closed-form integral is
//! used, so agreement with [`crate::detection`] is a genuine cross-check.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{Basis, DetectionConfig, TableKind, TruthTable, Window};
use crate::error::{Error, Result};
use crate::network::{Mode, ModeUnitary, MODE_COUNT};
use crate::twophoton::{LogicalState, PhotonPair};
use crate::wavepacket::GaussianWavepacket;

pub const DEFAULT_BINS: usize = 600;
/// Wavepacket widths kept on either side of the photon centers.
pub const DEFAULT_MARGIN: f64 = 8.0;
pub const MIN_BINS: usize = 100;
/// Minimum captured norm accepted by [`discretize`].
pub const COVERAGE_THRESHOLD: f64 = 0.999;

/// Uniform midpoint grid on `[t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_min: f64,
    t_max: f64,
    n_bins: usize,
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, n_bins: usize) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(Error::InvalidGrid(format!("bad range [{t_min}, {t_max}]")));
        }
        if n_bins < MIN_BINS {
            return Err(Error::InvalidGrid(format!(
                "{n_bins} bins, need at least {MIN_BINS}"
            )));
        }
        Ok(Self {
            t_min,
            t_max,
            n_bins,
        })
    }

    /// Grid reaching [`DEFAULT_MARGIN`] widths past both photon centers.
    pub fn covering(photons: &PhotonPair, n_bins: usize) -> Result<Self> {
        let (a, b) = (photons.control.center_time, photons.target.center_time);
        Self::new(a.min(b) - DEFAULT_MARGIN, a.max(b) + DEFAULT_MARGIN, n_bins)
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn bin_width(&self) -> f64 {
        (self.t_max - self.t_min) / self.n_bins as f64
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        let dt = self.bin_width();
        (0..self.n_bins).map(move |k| self.t_min + (k as f64 + 0.5) * dt)
    }

    /// Same spacing rule as this grid, aligned to `[lo, lo + width]`.
    fn window_bins(&self, lo: f64, width: f64) -> Vec<f64> {
        let n = (width / self.bin_width()).ceil().max(1.0) as usize;
        let dt = width / n as f64;
        (0..n).map(|k| lo + (k as f64 + 0.5) * dt).collect()
    }
}

/// Bin amplitudes ψ(center)·√Δt.
pub fn discretize(wp: &GaussianWavepacket, grid: &TimeGrid) -> Result<Vec<Complex64>> {
    let v = sample(wp, &grid.centers().collect::<Vec<_>>(), grid.bin_width());
    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    if norm < COVERAGE_THRESHOLD {
        return Err(Error::InsufficientCoverage(norm));
    }
    Ok(v)
}

fn sample(wp: &GaussianWavepacket, centers: &[f64], dt: f64) -> Vec<Complex64> {
    let s = dt.sqrt();
    centers.iter().map(|&t| wp.amplitude(t) * s).collect()
}

/// Products of mode-matrix entries feeding output rails (i, j), weighted by the
/// logical amplitudes: `direct` sends the control photon to i, `exchange` to j.
#[derive(Clone, Copy)]
struct RailPair {
    direct: Complex64,
    exchange: Complex64,
}

fn rail_pair(u: &ModeUnitary, input: &LogicalState, i: Mode, j: Mode) -> RailPair {
    let mut direct = Complex64::new(0.0, 0.0);
    let mut exchange = Complex64::new(0.0, 0.0);
    for c in 0..2 {
        for t in 0..2 {
            let lambda = input.amplitude(c, t);
            let (rc, rt) = (Mode::control_rail(c), Mode::target_rail(t));
            direct += lambda * u.get(i, rc) * u.get(j, rt);
            exchange += lambda * u.get(j, rc) * u.get(i, rt);
        }
    }
    RailPair { direct, exchange }
}

/// Bin-sampled photons on the detector at rail i (`first`) and rail j (`second`).
struct Samples<'a> {
    control_first: &'a [Complex64],
    target_first: &'a [Complex64],
    control_second: &'a [Complex64],
    target_second: &'a [Complex64],
}

/// Σ_k Σ_l |A(i,k; j,l)|² with
/// A = direct·c₁[k]·t₂[l] + exchange·c₂[l]·t₁[k].
fn pair_sum(r: RailPair, s: &Samples) -> f64 {
    s.control_first
        .par_iter()
        .zip(s.target_first.par_iter())
        .map(|(&c1, &t1)| {
            s.target_second
                .iter()
                .zip(s.control_second)
                .map(|(&t2, &c2)| (r.direct * c1 * t2 + r.exchange * c2 * t1).norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

/// Truth table computed by summing squared bin amplitudes. Full windows sum the
/// whole grid; finite windows are cut into bins of at most the grid spacing.
pub fn brute_force_table(
    u: &ModeUnitary,
    photons: &PhotonPair,
    cfg: &DetectionConfig,
    grid: &TimeGrid,
    basis: Basis,
) -> Result<TruthTable> {
    cfg.validate()?;
    let network = basis.readout(u);
    // coverage check on the global grid even when windows resample
    let full_c = discretize(&photons.control, grid)?;
    let full_t = discretize(&photons.target, grid)?;

    let (ctl_c, ctl_t, tgt_c, tgt_t) = match cfg.window {
        Window::Full => (full_c.clone(), full_t.clone(), full_c, full_t),
        Window::Finite(w) => {
            let (bc, bt) = (grid.window_bins(cfg.t_c, w), grid.window_bins(cfg.t_t, w));
            let (dc, dt) = (w / bc.len() as f64, w / bt.len() as f64);
            (
                sample(&photons.control, &bc, dc),
                sample(&photons.target, &bc, dc),
                sample(&photons.control, &bt, dt),
                sample(&photons.target, &bt, dt),
            )
        }
    };
    let samples = Samples {
        control_first: &ctl_c,
        target_first: &ctl_t,
        control_second: &tgt_c,
        target_second: &tgt_t,
    };

    let mut entries = [[0.0; 4]; 4];
    for (k, row) in entries.iter_mut().enumerate() {
        let input = basis.input_state(k);
        for (m, e) in row.iter_mut().enumerate() {
            let r = rail_pair(
                &network,
                &input,
                Mode::control_rail(m / 2),
                Mode::target_rail(m % 2),
            );
            *e = pair_sum(r, &samples);
        }
    }
    TruthTable::new(entries, TableKind::Probability)
}

/// Probability summed over every output configuration: all unordered pairs of
/// (mode, bin) cells, a doubly occupied cell weighted by one half.
pub fn total_probability(
    u: &ModeUnitary,
    photons: &PhotonPair,
    grid: &TimeGrid,
    input: &LogicalState,
) -> Result<f64> {
    let vc = discretize(&photons.control, grid)?;
    let vt = discretize(&photons.target, grid)?;
    let samples = Samples {
        control_first: &vc,
        target_first: &vt,
        control_second: &vc,
        target_second: &vt,
    };
    // summing ordered pairs counts distinct cells twice and shared cells once
    // at full |A|², which is twice their weight
    let ordered: f64 = (0..MODE_COUNT)
        .flat_map(|i| (0..MODE_COUNT).map(move |j| (i, j)))
        .map(|(i, j)| pair_sum(rail_pair(u, input, Mode::ALL[i], Mode::ALL[j]), &samples))
        .sum();
    Ok(0.5 * ordered)
}

/// Entries of the reference table below this fraction of its largest entry are
/// compared on that floor instead of their own size; they arise from
/// cancellation and carry no relative precision.
pub const RELATIVE_FLOOR: f64 = 1e-9;

/// Largest entrywise |a − b| / max(|b|, floor·max b).
pub fn max_relative_discrepancy(a: &TruthTable, reference: &TruthTable) -> f64 {
    let floor = RELATIVE_FLOOR * reference.max_entry();
    a.entries()
        .iter()
        .flatten()
        .zip(reference.entries().iter().flatten())
        .map(|(x, y)| (x - y).abs() / y.abs().max(floor))
        .fold(0.0, f64::max)
}
