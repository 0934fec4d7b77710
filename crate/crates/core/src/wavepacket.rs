//! Single-photon temporal wavepackets and closed-form Gaussian window integrals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_kronrod_15;
use crate::special::faddeeva;

/// Normalization constant (2/π)^{1/4} of a unit-width Gaussian amplitude.
pub fn amplitude_norm() -> f64 {
    (2.0 / std::f64::consts::PI).powf(0.25)
}

/// A unit-norm Gaussian temporal amplitude
/// ψ(t) = (2/π)^{1/4} · exp(-iωt) · exp(-(t-τ)²).
///
/// The width is fixed to one time unit; only the center time τ and the center
/// frequency offset ω vary between photons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWavepacket {
    pub center_time: f64,
    pub center_frequency: f64,
}

impl GaussianWavepacket {
    pub fn new(center_time: f64, center_frequency: f64) -> Self {
        Self {
            center_time,
            center_frequency,
        }
    }

    /// The undisplaced reference packet (τ = 0, ω = 0).
    pub fn reference() -> Self {
        Self::new(0.0, 0.0)
    }

    /// Same packet with its center frequency shifted by `shift`.
    pub fn frequency_shifted(self, shift: f64) -> Self {
        Self::new(self.center_time, self.center_frequency + shift)
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        let dt = t - self.center_time;
        Complex64::from_polar(
            amplitude_norm() * (-dt * dt).exp(),
            -self.center_frequency * t,
        )
    }

    /// |ψ(t)|².
    pub fn density(&self, t: f64) -> f64 {
        let dt = t - self.center_time;
        (2.0 / std::f64::consts::PI).sqrt() * (-2.0 * dt * dt).exp()
    }

    /// The integrand conj(ψ_self(t)) · ψ_other(t) in Gaussian form.
    pub fn conj_product(&self, other: &Self) -> ComplexGaussianIntegrand {
        let (ta, wa) = (self.center_time, self.center_frequency);
        let (tb, wb) = (other.center_time, other.center_frequency);
        ComplexGaussianIntegrand {
            quadratic: Complex64::new(2.0, 0.0),
            linear: Complex64::new(2.0 * (ta + tb), wa - wb),
            scale: Complex64::new(
                (2.0 / std::f64::consts::PI).sqrt() * (-ta * ta - tb * tb).exp(),
                0.0,
            ),
        }
    }

    /// Mode overlap ∫ conj(ψ_self) ψ_other dt over the real line.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        window_integral(&self.conj_product(other), f64::NEG_INFINITY, f64::INFINITY)
            .expect("wavepacket products are always integrable")
    }

    /// Probability that a detector integrating over `[lo, hi]` registers this photon.
    pub fn window_probability(&self, lo: f64, hi: f64) -> Result<f64> {
        window_integral(&self.conj_product(self), lo, hi).map(|v| v.re)
    }
}

/// The integrand c · exp(-p t² + q t) with Re(p) > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGaussianIntegrand {
    /// p
    pub quadratic: Complex64,
    /// q
    pub linear: Complex64,
    /// c
    pub scale: Complex64,
}

impl ComplexGaussianIntegrand {
    pub fn new(quadratic: Complex64, linear: Complex64, scale: Complex64) -> Result<Self> {
        if quadratic.re.is_nan() || quadratic.re <= 0.0 {
            return Err(Error::NotIntegrable(quadratic.re));
        }
        Ok(Self {
            quadratic,
            linear,
            scale,
        })
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.scale * (-self.quadratic * t * t + self.linear * t).exp()
    }
}

// Below this many local variation lengths a window is integrated with the fixed
// Kronrod rule; the error-function difference would lose digits to cancellation.
const NARROW_WINDOW: f64 = 0.1;

/// ∫_lo^hi c·exp(-p t² + q t) dt.
///
/// Infinite limits are given as `f64::NEG_INFINITY` / `f64::INFINITY` and are
/// resolved analytically. The closed form is written in terms of the scaled
/// complement erfcx(z) = w(iz), evaluated only on the half-plane where it is
/// bounded, so no intermediate quantity overflows.
pub fn window_integral(g: &ComplexGaussianIntegrand, lo: f64, hi: f64) -> Result<Complex64> {
    let p = g.quadratic;
    let q = g.linear;
    if p.re.is_nan() || p.re <= 0.0 {
        return Err(Error::NotIntegrable(p.re));
    }
    if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
        return Err(Error::InvalidInterval { lo, hi });
    }
    if lo == hi {
        return Ok(Complex64::new(0.0, 0.0));
    }

    if lo.is_finite() && hi.is_finite() {
        let rate = (q - 2.0 * p * lo).norm().max((q - 2.0 * p * hi).norm()) + p.norm().sqrt();
        if (hi - lo) * rate < NARROW_WINDOW {
            let (v, _) = gauss_kronrod_15(&|t| g.eval(t), lo, hi);
            return Ok(v);
        }
    }

    let sp = p.sqrt();
    let shift = q / (2.0 * sp);
    let z = |t: f64| sp * t - shift;
    let gauss = |t: f64| (-p * t * t + q * t).exp();
    // exp(q²/4p)·erfc(z(t)) for Re z(t) >= 0, zero at +∞
    let upper = |t: f64| {
        if t == f64::INFINITY {
            Complex64::new(0.0, 0.0)
        } else {
            let zt = z(t);
            gauss(t) * faddeeva(Complex64::new(-zt.im, zt.re))
        }
    };
    // exp(q²/4p)·erfc(-z(t)) for Re z(t) < 0, zero at -∞
    let lower = |t: f64| {
        if t == f64::NEG_INFINITY {
            Complex64::new(0.0, 0.0)
        } else {
            let zt = z(t);
            gauss(t) * faddeeva(Complex64::new(zt.im, -zt.re))
        }
    };
    let re_z = |t: f64| {
        if t.is_infinite() {
            t
        } else {
            z(t).re
        }
    };

    let bracket = if re_z(lo) >= 0.0 {
        upper(lo) - upper(hi)
    } else if re_z(hi) < 0.0 {
        lower(hi) - lower(lo)
    } else {
        2.0 * (q * q / (4.0 * p)).exp() - upper(hi) - lower(lo)
    };

    Ok(g.scale * std::f64::consts::PI.sqrt() / (2.0 * sp) * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_real, DEFAULT_ABS_TOL};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn amplitude_examples() {
        let wp = GaussianWavepacket::reference();
        assert!((wp.amplitude(0.0).re - 0.893244).abs() < 1e-6);
        assert!((wp.amplitude(0.0).re - amplitude_norm()).abs() < 1e-15);
        for t in [0.1, 0.7, 2.3] {
            assert!((wp.amplitude(t) - wp.amplitude(-t)).norm() < 1e-15);
        }
        let shifted = GaussianWavepacket::new(1.0, 0.0);
        assert!((shifted.amplitude(1.0) - c(amplitude_norm(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalization_by_quadrature() {
        for (tau, omega) in [(0.0, 0.0), (1.7, -3.0), (-2.5, 12.0)] {
            let wp = GaussianWavepacket::new(tau, omega);
            let norm = integrate_real(
                |t| wp.amplitude(t).norm_sqr(),
                tau - 8.0,
                tau + 8.0,
                DEFAULT_ABS_TOL,
            )
            .unwrap();
            assert!((norm - 1.0).abs() < 1e-9, "norm {norm}");
            assert!(
                (wp.window_probability(f64::NEG_INFINITY, f64::INFINITY)
                    .unwrap()
                    - 1.0)
                    .abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn overlap_of_identical_packets_is_one() {
        let wp = GaussianWavepacket::new(0.4, 2.0);
        assert!((wp.overlap(&wp) - c(1.0, 0.0)).norm() < 1e-13);
    }

    fn overlap_by_quadrature(a: &GaussianWavepacket, b: &GaussianWavepacket) -> Complex64 {
        let lo = a.center_time.min(b.center_time) - 10.0;
        let hi = a.center_time.max(b.center_time) + 10.0;
        integrate(
            |t| a.amplitude(t).conj() * b.amplitude(t),
            lo,
            hi,
            DEFAULT_ABS_TOL,
        )
        .unwrap()
        .value
    }

    #[test]
    fn overlap_under_time_shift() {
        let a = GaussianWavepacket::reference();
        for tau in [0.3, 1.0, 2.2] {
            let b = GaussianWavepacket::new(tau, 0.0);
            let quad = overlap_by_quadrature(&a, &b);
            assert!((quad.re - (-tau * tau / 2.0).exp()).abs() < 1e-12);
            assert!((a.overlap(&b) - quad).norm() < 1e-12);
        }
    }

    #[test]
    fn overlap_under_frequency_shift() {
        let a = GaussianWavepacket::reference();
        for omega in [0.5, 2.0, 5.0] {
            let b = GaussianWavepacket::new(0.0, omega);
            let quad = overlap_by_quadrature(&a, &b);
            assert!((quad.norm() - (-omega * omega / 8.0).exp()).abs() < 1e-12);
            assert!((a.overlap(&b) - quad).norm() < 1e-12);
        }
    }

    #[test]
    fn standard_gaussian_integrals() {
        let g = ComplexGaussianIntegrand::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let full = window_integral(&g, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!((full - c(PI.sqrt(), 0.0)).norm() < 1e-15);
        let half = window_integral(&g, 0.0, f64::INFINITY).unwrap();
        assert!((half - c(PI.sqrt() / 2.0, 0.0)).norm() < 1e-15);
        let other_half = window_integral(&g, f64::NEG_INFINITY, 0.0).unwrap();
        assert!((other_half - c(PI.sqrt() / 2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn complex_linear_term_matches_quadrature() {
        let g = ComplexGaussianIntegrand::new(c(1.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)).unwrap();
        let closed = window_integral(&g, -1.0, 1.0).unwrap();
        let quad = integrate(|t| g.eval(t), -1.0, 1.0, DEFAULT_ABS_TOL)
            .unwrap()
            .value;
        assert!((closed - quad).norm() < 1e-9);
        // frozen oracle value ∫_{-1}^{1} e^{-t²} cos 2t dt
        assert!((quad.re - 0.8581955642701693).abs() < 1e-12, "{}", quad.re);
        assert!(quad.im.abs() < 1e-14);
    }

    #[test]
    fn truncated_window_converges_to_full_line() {
        let g = ComplexGaussianIntegrand::new(c(1.0, 0.0), c(0.3, -0.8), c(1.0, 0.0)).unwrap();
        let full = window_integral(&g, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        let cut = window_integral(&g, -10.0, 10.0).unwrap();
        assert!((full - cut).norm() / full.norm() < 1e-12);
    }

    #[test]
    fn closed_form_agrees_with_quadrature_on_mixed_windows() {
        let cases = [
            (c(2.0, 0.0), c(1.4, 7.5), -0.3, 0.9),
            (c(2.0, 0.0), c(-3.0, 40.0), 0.5, 2.5),
            (c(2.0, 0.0), c(4.0, -1.0), 2.0, 2.5),
            (c(2.0, 0.0), c(0.0, 3.0), 0.0, 0.01),
            (c(1.5, 0.7), c(0.2, -1.1), -2.0, 1.0),
            (c(2.0, 0.0), c(-6.0, 0.0), -4.0, -1.0),
        ];
        for (p, q, lo, hi) in cases {
            let g = ComplexGaussianIntegrand::new(p, q, c(0.8, 0.0)).unwrap();
            let closed = window_integral(&g, lo, hi).unwrap();
            let quad = integrate(|t| g.eval(t), lo, hi, 1e-14).unwrap().value;
            let scale = quad.norm().max(1e-300);
            assert!(
                (closed - quad).norm() / scale < 1e-10,
                "p={p} q={q} [{lo},{hi}]: {closed} vs {quad}"
            );
        }
    }

    #[test]
    fn large_frequency_offsets_stay_finite() {
        let a = GaussianWavepacket::new(0.5, 0.0);
        let b = GaussianWavepacket::new(-0.2, 150.0);
        let v = window_integral(&a.conj_product(&b), -0.4, 1.3).unwrap();
        let quad = integrate(|t| a.amplitude(t).conj() * b.amplitude(t), -0.4, 1.3, 1e-14)
            .unwrap()
            .value;
        assert!(v.re.is_finite() && v.im.is_finite());
        assert!((v - quad).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_integrable_and_bad_bounds() {
        assert!(ComplexGaussianIntegrand::new(c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)).is_err());
        let bad = ComplexGaussianIntegrand {
            quadratic: c(-1.0, 0.0),
            linear: c(0.0, 0.0),
            scale: c(1.0, 0.0),
        };
        assert_eq!(
            window_integral(&bad, 0.0, 1.0),
            Err(Error::NotIntegrable(-1.0))
        );
        let g = ComplexGaussianIntegrand::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(window_integral(&g, 1.0, 0.0).is_err());
        assert!(window_integral(&g, f64::NAN, 0.0).is_err());
    }
}
