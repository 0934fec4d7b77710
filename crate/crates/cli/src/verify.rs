//! Cross-checks of the closed-form model against the brute-force bin oracle.

use modegate::detection::{
    pointwise_truth_table, windowed_truth_table, Basis, DetectionConfig, Window,
};
use modegate::network::coincidence_cnot_network;
use modegate::oracle::{brute_force_table, max_relative_discrepancy, total_probability, TimeGrid};
use modegate::twophoton::{LogicalState, PhotonPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::output::real;
use crate::settings::Format;
use crate::CliError;

/// Full-window and total-probability checks compare Riemann sums of smooth
/// Gaussians, which converge far faster than the windowed midpoint rule.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-4;
/// Error reduction required when the bin count doubles.
pub const CONVERGENCE_FACTOR: f64 = 3.0;
/// Window width used for the randomized comparison.
pub const RANDOM_WINDOW: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub bound: Bound,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost(t) => self.value <= t,
            Bound::AtLeast(t) => self.value >= t,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub bins: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

/// Random (τ, ω, t_c, t_t) with a fixed window width.
pub fn random_configs(n: usize, seed: u64) -> Vec<(PhotonPair, DetectionConfig)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let photons =
                PhotonPair::mismatched(rng.gen_range(-2.0..2.0), rng.gen_range(-8.0..8.0));
            let (tc, tt) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let cfg = DetectionConfig::time_resolved(tc, tt, Window::Finite(RANDOM_WINDOW))
                .expect("valid detection");
            (photons, cfg)
        })
        .collect()
}

/// Worst relative discrepancy over `configs` in both bases at `bins`.
pub fn windowed_discrepancy(
    configs: &[(PhotonPair, DetectionConfig)],
    bins: usize,
) -> Result<f64, CliError> {
    let u = coincidence_cnot_network();
    let mut worst: f64 = 0.0;
    for (photons, cfg) in configs {
        let grid = TimeGrid::covering(photons, bins)?;
        for basis in [Basis::Z, Basis::X] {
            let brute = brute_force_table(&u, photons, cfg, &grid, basis)?;
            let exact = windowed_truth_table(&u, photons, cfg, basis)?;
            worst = worst.max(max_relative_discrepancy(&brute, &exact));
        }
    }
    Ok(worst)
}

pub fn run(opts: &VerifyOptions) -> Result<Vec<Check>, CliError> {
    let u = coincidence_cnot_network();
    let mut checks = Vec::new();

    // ideal photons, detectors open forever
    let ideal = PhotonPair::mismatched(0.0, 0.0);
    let grid = TimeGrid::covering(&ideal, opts.bins)?;
    let mut worst: f64 = 0.0;
    for basis in [Basis::Z, Basis::X] {
        let brute = brute_force_table(&u, &ideal, &DetectionConfig::full_line(), &grid, basis)?;
        let exact = windowed_truth_table(&u, &ideal, &DetectionConfig::full_line(), basis)?;
        for (a, b) in brute
            .entries()
            .iter()
            .flatten()
            .zip(exact.entries().iter().flatten())
        {
            worst = worst.max((a - b).abs());
        }
    }
    checks.push(Check {
        name: "full_window",
        value: worst,
        bound: Bound::AtMost(NORMALIZATION_TOLERANCE),
    });

    // single-bin windows against densities at the bin centers
    let mut worst: f64 = 0.0;
    for (photons, cfg) in random_configs(opts.samples, opts.seed ^ 0x5eed) {
        let grid = TimeGrid::covering(&photons, opts.bins)?;
        let dt = grid.bin_width();
        let bin = DetectionConfig::time_resolved(cfg.t_c, cfg.t_t, Window::Finite(dt))?;
        let brute = brute_force_table(&u, &photons, &bin, &grid, Basis::Z)?;
        let density = pointwise_truth_table(
            &u,
            &photons,
            cfg.t_c + 0.5 * dt,
            cfg.t_t + 0.5 * dt,
            Basis::Z,
        );
        for (a, b) in brute
            .entries()
            .iter()
            .flatten()
            .zip(density.entries().iter().flatten())
        {
            worst = worst.max((a / (dt * dt) - b).abs());
        }
    }
    checks.push(Check {
        name: "pointwise_density",
        value: worst,
        bound: Bound::AtMost(opts.tolerance),
    });

    let mut worst: f64 = 0.0;
    for (photons, input) in [
        (PhotonPair::mismatched(0.0, 0.0), LogicalState::basis(1, 0)),
        (
            PhotonPair::mismatched(0.8, -4.0),
            LogicalState::diagonal(false, true),
        ),
    ] {
        let grid = TimeGrid::covering(&photons, opts.bins)?;
        worst = worst.max((total_probability(&u, &photons, &grid, &input)? - 1.0).abs());
    }
    checks.push(Check {
        name: "total_probability",
        value: worst,
        bound: Bound::AtMost(NORMALIZATION_TOLERANCE),
    });

    let configs = random_configs(opts.samples, opts.seed);
    let coarse = windowed_discrepancy(&configs, opts.bins)?;
    checks.push(Check {
        name: "windowed_random",
        value: coarse,
        bound: Bound::AtMost(opts.tolerance),
    });

    let fine = windowed_discrepancy(&configs, 2 * opts.bins)?;
    checks.push(Check {
        name: "convergence_ratio",
        value: coarse / fine,
        bound: Bound::AtLeast(CONVERGENCE_FACTOR),
    });

    Ok(checks)
}

pub fn report(checks: &[Check], format: Format) -> String {
    let bound_parts = |b: Bound| match b {
        Bound::AtMost(t) => ("max", t),
        Bound::AtLeast(t) => ("min", t),
    };
    match format {
        Format::Csv => {
            let mut out = String::from("check,value,bound,limit,status\n");
            for c in checks {
                let (kind, limit) = bound_parts(c.bound);
                let status = if c.passed() { "pass" } else { "fail" };
                out.push_str(&format!(
                    "{},{},{kind},{},{status}\n",
                    c.name,
                    real(c.value),
                    real(limit)
                ));
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| {
                    let (kind, limit) = bound_parts(c.bound);
                    json!({ "check": c.name, "value": c.value, "bound": kind, "limit": limit, "passed": c.passed() })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("json values serialize");
            s.push('\n');
            s
        }
    }
}
