//! Truth-table similarity and success-probability bounds.

use serde::{Deserialize, Serialize};

use crate::detection::{windowed_truth_table, Basis, DetectionConfig, TableKind, TruthTable};
use crate::error::{Error, Result};
use crate::network::ModeUnitary;
use crate::twophoton::PhotonPair;

/// Entries below this are treated as exact zeros under the square root.
const ZERO_FLOOR: f64 = 1e-300;

/// Ideal CNOT truth table (0/1 entries) in the given basis. In the diagonal
/// basis the roles of control and target swap: |++⟩→|++⟩, |+−⟩→|−−⟩,
/// |−+⟩→|−+⟩, |−−⟩→|+−⟩.
pub fn ideal_cnot_table(basis: Basis) -> TruthTable {
    let targets = match basis {
        Basis::Z => [0, 1, 3, 2],
        Basis::X => [0, 3, 2, 1],
    };
    let mut entries = [[0.0; 4]; 4];
    for (row, &col) in targets.iter().enumerate() {
        entries[row][col] = 1.0;
    }
    TruthTable::new(entries, TableKind::Probability).expect("ideal table is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityResult {
    pub value: f64,
    pub first_total: f64,
    pub second_total: f64,
}

/// Classical fidelity of two truth tables after normalizing each,
/// (Σ √(M_ij M'_ij))² / (Σ M_ij · Σ M'_ij).
pub fn similarity(first: &TruthTable, second: &TruthTable) -> Result<SimilarityResult> {
    let first_total = first.total();
    let second_total = second.total();
    // entries are validated finite and nonnegative
    if first_total <= 0.0 || second_total <= 0.0 {
        return Err(Error::ZeroTable);
    }
    let mut overlap = 0.0;
    for (a, b) in first
        .entries()
        .iter()
        .flatten()
        .zip(second.entries().iter().flatten())
    {
        if *a > ZERO_FLOOR && *b > ZERO_FLOOR {
            overlap += (a * b).sqrt();
        }
    }
    let value = (overlap * overlap / (first_total * second_total)).min(1.0);
    Ok(SimilarityResult {
        value,
        first_total,
        second_total,
    })
}

/// Closed-form similarity of the CNOT's pointwise Z-basis table with the ideal
/// table, for a target photon displaced by (τ, ω) and clicks at (t_c, t_t).
///
/// Exponentials are scaled by the larger of e^{2τt_c}, e^{2τt_t} so that large
/// |τ·t| does not overflow.
pub fn closed_form_similarity(tau: f64, omega: f64, t_c: f64, t_t: f64) -> f64 {
    let (xc, xt) = (2.0 * tau * t_c, 2.0 * tau * t_t);
    let m = xc.max(xt);
    let a = (xc - m).exp();
    let b = (xt - m).exp();
    let numerator = (a + b) * (a + b);
    let denominator = 4.0 * (a * a + b * b - a * b * (omega * (t_c - t_t)).cos());
    numerator / denominator
}

/// Worst-case post-selection success probability over the Z-basis inputs: the
/// smaller of the windowed direct-only row and the windowed interfering row.
pub fn p_min(u: &ModeUnitary, photons: &PhotonPair, cfg: &DetectionConfig) -> Result<f64> {
    let table = windowed_truth_table(u, photons, cfg, Basis::Z)?;
    Ok(table.row_sums().into_iter().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{pointwise_truth_table, success_probabilities, Window};
    use crate::network::coincidence_cnot_network;
    use std::f64::consts::PI;

    fn windowed_similarity(tau: f64, omega: f64, cfg: &DetectionConfig, basis: Basis) -> f64 {
        let t = windowed_truth_table(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(tau, omega),
            cfg,
            basis,
        )
        .unwrap();
        similarity(&ideal_cnot_table(basis), &t).unwrap().value
    }

    #[test]
    fn similarity_basics() {
        let ideal = ideal_cnot_table(Basis::Z);
        assert_eq!(similarity(&ideal, &ideal).unwrap().value, 1.0);

        let mut e = [[0.0; 4]; 4];
        e[0][1] = 0.3;
        e[2][2] = 0.7;
        let disjoint = TruthTable::new(e, TableKind::Probability).unwrap();
        assert_eq!(similarity(&ideal, &disjoint).unwrap().value, 0.0);

        let mut scaled = *ideal.entries();
        scaled.iter_mut().flatten().for_each(|x| *x *= 0.037);
        let scaled = TruthTable::new(scaled, TableKind::Probability).unwrap();
        let s = similarity(&ideal, &scaled).unwrap();
        assert!((s.value - 1.0).abs() < 1e-15);
        assert_eq!(s.first_total, 4.0);

        let zero = TruthTable::new([[0.0; 4]; 4], TableKind::Probability).unwrap();
        assert_eq!(similarity(&ideal, &zero), Err(Error::ZeroTable));
    }

    #[test]
    fn closed_form_examples() {
        assert!((closed_form_similarity(1.3, 4.0, 0.7, 0.7) - 1.0).abs() < 1e-15);
        assert!((closed_form_similarity(0.0, 2.0 * PI, 0.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((closed_form_similarity(0.0, PI, 0.0, 1.0) - 1.0 / 3.0).abs() < 1e-15);
        // independently from the pointwise table
        let t = pointwise_truth_table(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(0.0, PI),
            0.0,
            1.0,
            Basis::Z,
        );
        let s = similarity(&ideal_cnot_table(Basis::Z), &t).unwrap().value;
        assert!((s - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_survives_large_exponents() {
        let s = closed_form_similarity(40.0, 1.0, 10.0, -10.0);
        assert!(s.is_finite() && (0.0..=1.0).contains(&s));
        assert!((s - 0.25).abs() < 1e-12);
    }

    #[test]
    fn p_min_full_window_is_one_ninth() {
        let p = p_min(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(0.0, 0.0),
            &DetectionConfig::full_line(),
        )
        .unwrap();
        assert!((p - 1.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn p_min_bounds_success_probabilities() {
        let u = coincidence_cnot_network();
        for (tau, omega, tc, tt, tw) in [
            (0.5, 3.0, 0.0, 1.0, 0.5),
            (1.5, -2.0, -0.3, 0.4, 2.0),
            (0.0, 8.0, 0.2, 0.2, 0.1),
        ] {
            let photons = PhotonPair::mismatched(tau, omega);
            let cfg = DetectionConfig::time_resolved(tc, tt, Window::Finite(tw)).unwrap();
            let pm = p_min(&u, &photons, &cfg).unwrap();
            let probs =
                success_probabilities(&windowed_truth_table(&u, &photons, &cfg, Basis::Z).unwrap())
                    .unwrap();
            assert!(probs.iter().all(|&p| pm <= p));
            assert!(probs.contains(&pm));
        }
    }

    #[test]
    fn p_min_narrow_gate_matches_quadrature() {
        let tw = 0.01;
        let cfg = DetectionConfig::gated(0.0, Window::Finite(tw)).unwrap();
        let pm = p_min(
            &coincidence_cnot_network(),
            &PhotonPair::mismatched(0.0, 0.0),
            &cfg,
        )
        .unwrap();
        let density = |t1: f64, t2: f64| 2.0 / (9.0 * PI) * (-2.0 * (t1 * t1 + t2 * t2)).exp();
        let quad = crate::quadrature::integrate_real(
            |t1| crate::quadrature::integrate_real(|t2| density(t1, t2), 0.0, tw, 1e-18).unwrap(),
            0.0,
            tw,
            1e-18,
        )
        .unwrap();
        assert!((pm - quad).abs() / quad < 1e-3);
        assert!((pm - 2.0 / (9.0 * PI) * tw * tw).abs() / pm < 1e-3);
    }

    #[test]
    fn similarity_decays_monotonically_with_time_shift() {
        for tw in [0.01, 0.5, 1.0, 2.0] {
            let cfg = DetectionConfig::time_resolved(0.0, 1.0, Window::Finite(tw)).unwrap();
            let mut prev = f64::INFINITY;
            for i in 0..=60 {
                let s = windowed_similarity(0.05 * i as f64, 0.0, &cfg, Basis::Z);
                assert!(s <= prev, "t_w={tw}, tau={}", 0.05 * i as f64);
                prev = s;
            }
        }
    }

    #[test]
    fn similarity_oscillates_with_frequency_shift() {
        let cfg = DetectionConfig::time_resolved(0.0, 1.0, Window::Finite(1e-4)).unwrap();
        for n in 0..=2 {
            let peak = 2.0 * PI * n as f64;
            assert!(windowed_similarity(0.0, peak, &cfg, Basis::Z) >= 1.0 - 1e-6);
        }
        for n in 0..=1 {
            let trough = (2 * n + 1) as f64 * PI;
            let s = windowed_similarity(0.0, trough, &cfg, Basis::Z);
            assert!(s < windowed_similarity(0.0, trough - 0.2, &cfg, Basis::Z));
            assert!(s < windowed_similarity(0.0, trough + 0.2, &cfg, Basis::Z));
            assert!((s - 1.0 / 3.0).abs() < 1e-4);
        }
    }

    #[test]
    fn wide_windows_damp_the_oscillation() {
        let narrow = DetectionConfig::time_resolved(0.0, 1.0, Window::Finite(0.01)).unwrap();
        let wide = DetectionConfig::time_resolved(0.0, 1.0, Window::Finite(2.0)).unwrap();
        assert!(
            windowed_similarity(0.0, PI, &wide, Basis::Z)
                > windowed_similarity(0.0, PI, &narrow, Basis::Z)
        );
    }

    #[test]
    fn x_basis_ideal_table_is_hadamard_conjugate() {
        // conjugating CNOT by H⊗H swaps control and target roles
        let z = ideal_cnot_table(Basis::Z);
        let x = ideal_cnot_table(Basis::X);
        let swap = |k: usize| (k % 2) * 2 + k / 2;
        for r in 0..4 {
            for m in 0..4 {
                assert_eq!(x.get(r, m), z.get(swap(r), swap(m)));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn table(entries: [f64; 16]) -> TruthTable {
            let mut e = [[0.0; 4]; 4];
            e.iter_mut()
                .flatten()
                .zip(entries)
                .for_each(|(d, s)| *d = s);
            TruthTable::new(e, TableKind::Probability).unwrap()
        }

        proptest! {
            #[test]
            fn closed_form_matches_table_similarity(
                tau in -2.0..2.0f64, omega in -8.0..8.0f64, tc in -2.0..2.0f64, tt in -2.0..2.0f64,
            ) {
                let t = pointwise_truth_table(
                    &coincidence_cnot_network(), &PhotonPair::mismatched(tau, omega), tc, tt, Basis::Z,
                );
                let s = similarity(&ideal_cnot_table(Basis::Z), &t).unwrap().value;
                prop_assert!((s - closed_form_similarity(tau, omega, tc, tt)).abs() < 1e-10);
            }

            #[test]
            fn similarity_is_bounded_and_symmetric(
                a in proptest::array::uniform16(0.0..1.0f64), b in proptest::array::uniform16(0.0..1.0f64),
            ) {
                let (ta, tb) = (table(a), table(b));
                let s = similarity(&ta, &tb).unwrap().value;
                prop_assert!((0.0..=1.0).contains(&s));
                prop_assert!((s - similarity(&tb, &ta).unwrap().value).abs() < 1e-14);
            }

            #[test]
            fn similarity_ignores_scale(a in proptest::array::uniform16(0.01..1.0f64), c in 1e-6..1e6f64) {
                let scaled = a.map(|x| x * c);
                let s = similarity(&table(a), &table(scaled)).unwrap().value;
                prop_assert!((s - 1.0).abs() < 1e-12);
            }

            #[test]
            fn equal_click_times_are_ideal(tau in -3.0..3.0f64, omega in -10.0..10.0f64, t in -2.0..2.0f64) {
                prop_assert!((closed_form_similarity(tau, omega, t, t) - 1.0).abs() < 1e-12);
            }
        }
    }
}
