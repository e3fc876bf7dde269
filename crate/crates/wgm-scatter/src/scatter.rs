//! Closed-form single-photon scattering amplitudes.
//!
//! The model: two whispering-gallery resonators, each hosting a Zeeman-split
//! quantum dot, side-couple to a fiber at two points separated by the
//! propagation phase `theta`. A probe photon detuned by `delta` from the dot
//! reference frequency scatters into forward/backward reflection and
//! transmission amplitudes `r_f, r_b, t_f, t_b`.
//!
//! With the shorthand `dg = delta + i*gamma` the building blocks are
//!
//! ```text
//! A      = dg^2 - omega1^2                B = dg^2 - omega2^2
//! C{A,B}± = -g^4 + {A,B}[h^2 + (gamma ± eta)^2] + 2i g^2 dg (gamma ± eta)
//! D{A,B}± =  g^4 - {A,B}(h^2 + gamma^2 - eta^2)
//!                 - 2i g^2 (gamma*dg ± eta*omega_{1,2})
//! denom  = 4 A B e^{2i theta} h^2 eta^2 + CA+ CB+
//! ```
//!
//! and the amplitudes are
//!
//! ```text
//! r_f = 2i h eta (B e^{2i theta} CA- + A CB+) / denom
//! r_b = 2i h eta (A e^{2i theta} CB- + B CA+) / denom
//! t_f = DA- DB- / denom
//! t_b = DA+ DB+ / denom
//! ```
//!
//! Every product in numerator and denominator has total frequency degree 8,
//! so the formulas are invariant under a uniform rescaling of all frequency
//! parameters (tested) and cyclic-GHz units need no 2pi factors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Degeneracy threshold for the common denominator. With any loss
/// (`gamma > 0`) the denominator stays far from zero; this guards lossless
/// corner cases like `eta = g = h = gamma = 0` where it vanishes identically.
pub const DENOM_DEGENERACY_THRESHOLD: f64 = 1e-300;

/// The shared building blocks of all four amplitudes at one detuning.
///
/// Field names follow the algebra above; `exp_2i_theta` carries the phase
/// factor so it is computed exactly once per evaluation.
#[derive(Debug, Clone, Copy)]
pub struct IntermediateTerms {
    pub a: Complex64,
    pub b: Complex64,
    pub ca_plus: Complex64,
    pub ca_minus: Complex64,
    pub cb_plus: Complex64,
    pub cb_minus: Complex64,
    pub da_plus: Complex64,
    pub da_minus: Complex64,
    pub db_plus: Complex64,
    pub db_minus: Complex64,
    /// `4 A B e^{2i theta} h^2 eta^2 + CA+ CB+`, the common denominator.
    pub denom: Complex64,
    /// Cached `e^{2i theta}` (needed again by the reflection numerators).
    pub exp_2i_theta: Complex64,
}

/// Complex scattering amplitudes at one detuning.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringAmplitudes {
    pub r_f: Complex64,
    pub r_b: Complex64,
    pub t_f: Complex64,
    pub t_b: Complex64,
}

/// Squared-modulus powers and the direction contrasts.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringPowers {
    pub r_f: f64,
    pub r_b: f64,
    pub t_f: f64,
    pub t_b: f64,
    /// `|R_f - R_b|`.
    pub contrast_r: f64,
    /// `|T_f - T_b|`.
    pub contrast_t: f64,
}

/// Evaluate the building blocks `A, B, C±, D±` and the common denominator.
///
/// Errors with [`Error::DegenerateDenominator`] when `|denom|` falls below
/// [`DENOM_DEGENERACY_THRESHOLD`].
pub fn intermediate_terms(params: &SystemParams, delta: f64) -> Result<IntermediateTerms> {
    let i = Complex64::i();
    let (eta, g, h, gamma) = (params.eta(), params.g(), params.h(), params.gamma());
    let (w1, w2) = (params.omega1(), params.omega2());

    let dg = Complex64::new(delta, gamma);
    let dg2 = dg * dg;
    let a = dg2 - w1 * w1;
    let b = dg2 - w2 * w2;

    let g2 = g * g;
    let g4 = g2 * g2;
    let h2 = h * h;
    let plus2 = h2 + (gamma + eta) * (gamma + eta);
    let minus2 = h2 + (gamma - eta) * (gamma - eta);
    let cross = h2 + gamma * gamma - eta * eta;

    let ca_plus = -g4 + a * plus2 + 2.0 * i * g2 * dg * (gamma + eta);
    let ca_minus = -g4 + a * minus2 + 2.0 * i * g2 * dg * (gamma - eta);
    let cb_plus = -g4 + b * plus2 + 2.0 * i * g2 * dg * (gamma + eta);
    let cb_minus = -g4 + b * minus2 + 2.0 * i * g2 * dg * (gamma - eta);

    let da_plus = g4 - a * cross - 2.0 * i * g2 * (gamma * dg + eta * w1);
    let da_minus = g4 - a * cross - 2.0 * i * g2 * (gamma * dg - eta * w1);
    let db_plus = g4 - b * cross - 2.0 * i * g2 * (gamma * dg + eta * w2);
    let db_minus = g4 - b * cross - 2.0 * i * g2 * (gamma * dg - eta * w2);

    let exp_2i_theta = (2.0 * i * params.theta()).exp();
    let denom = 4.0 * a * b * exp_2i_theta * h2 * eta * eta + ca_plus * cb_plus;

    if denom.norm() < DENOM_DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateDenominator {
            delta,
            magnitude: denom.norm(),
        });
    }

    Ok(IntermediateTerms {
        a,
        b,
        ca_plus,
        ca_minus,
        cb_plus,
        cb_minus,
        da_plus,
        da_minus,
        db_plus,
        db_minus,
        denom,
        exp_2i_theta,
    })
}

/// Closed-form amplitudes `r_f, r_b, t_f, t_b` at one detuning.
pub fn amplitudes(params: &SystemParams, delta: f64) -> Result<ScatteringAmplitudes> {
    let t = intermediate_terms(params, delta)?;
    let prefactor = 2.0 * Complex64::i() * params.h() * params.eta();
    Ok(ScatteringAmplitudes {
        r_f: prefactor * (t.b * t.exp_2i_theta * t.ca_minus + t.a * t.cb_plus) / t.denom,
        r_b: prefactor * (t.a * t.exp_2i_theta * t.cb_minus + t.b * t.ca_plus) / t.denom,
        t_f: t.da_minus * t.db_minus / t.denom,
        t_b: t.da_plus * t.db_plus / t.denom,
    })
}

/// Squared moduli and contrasts of a set of amplitudes.
pub fn powers(amps: &ScatteringAmplitudes) -> ScatteringPowers {
    let r_f = amps.r_f.norm_sqr();
    let r_b = amps.r_b.norm_sqr();
    let t_f = amps.t_f.norm_sqr();
    let t_b = amps.t_b.norm_sqr();
    ScatteringPowers {
        r_f,
        r_b,
        t_f,
        t_b,
        contrast_r: (r_f - r_b).abs(),
        contrast_t: (t_f - t_b).abs(),
    }
}

/// Convenience: amplitudes and powers in one call.
pub fn powers_at(params: &SystemParams, delta: f64) -> Result<ScatteringPowers> {
    Ok(powers(&amplitudes(params, delta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const PI: f64 = std::f64::consts::PI;

    fn params(eta: f64, g: f64, h: f64, w1: f64, w2: f64, gamma: f64, theta: f64) -> SystemParams {
        SystemParams::new(eta, g, h, w1, w2, gamma, theta).unwrap()
    }

    /// Reference configuration used by the frozen-value regression tests:
    /// eta=3.8, g=h=1, omega1=2, omega2=3.5, gamma=0.2, theta=pi.
    fn reference() -> SystemParams {
        params(3.8, 1.0, 1.0, 2.0, 3.5, 0.2, PI)
    }

    fn draw(rng: &mut ChaCha8Rng) -> (SystemParams, f64) {
        let eta = rng.gen::<f64>() * 10.0;
        let g = rng.gen::<f64>() * 10.0;
        let h = rng.gen::<f64>() * 10.0;
        let w1 = -5.0 + rng.gen::<f64>() * 10.0;
        let w2 = -5.0 + rng.gen::<f64>() * 10.0;
        let gamma = rng.gen::<f64>();
        let theta = rng.gen::<f64>() * 2.0 * PI;
        let delta = -10.0 + rng.gen::<f64>() * 20.0;
        (params(eta, g, h, w1, w2, gamma, theta), delta)
    }

    fn rel_close(z: Complex64, re: f64, im: f64, tol: f64) -> bool {
        let want = Complex64::new(re, im);
        (z - want).norm() <= tol * want.norm().max(1.0)
    }

    #[test]
    fn lossless_uncoupled_terms_collapse() {
        // g = h = gamma = 0 removes every term except the bare eta ones:
        // CA+ = A*eta^2, DA- = A*eta^2, denom = A*B*eta^4.
        let p = params(1.0, 0.0, 0.0, 1.3, -0.4, 0.0, 0.9);
        let t = intermediate_terms(&p, 0.7).unwrap();
        let a = Complex64::new(0.7 * 0.7 - 1.3 * 1.3, 0.0);
        let b = Complex64::new(0.7 * 0.7 - 0.4 * 0.4, 0.0);
        assert_eq!(t.a, a);
        assert_eq!(t.ca_plus, a);
        assert_eq!(t.da_minus, a);
        assert_eq!(t.denom, a * b);
    }

    #[test]
    fn equal_splittings_make_a_equal_b() {
        let p = params(2.0, 0.7, 0.3, 2.0, 2.0, 0.1, 1.1);
        let t = intermediate_terms(&p, -0.35).unwrap();
        assert_eq!(t.a, t.b);
    }

    #[test]
    fn frozen_intermediate_terms_at_reference_point() {
        // All ten terms plus the denominator at delta = -2, frozen from an
        // independent high-precision evaluation of the same algebra.
        let t = intermediate_terms(&reference(), -2.0).unwrap();
        let tol = 1e-12;
        assert!(
            rel_close(t.a, -0.040000000000000036, -0.8, tol),
            "A = {}",
            t.a
        );
        assert!(rel_close(t.b, -8.29, -0.8, tol), "B = {}", t.b);
        assert!(
            rel_close(t.ca_plus, -3.2800000000000007, -29.6, tol),
            "CA+ = {}",
            t.ca_plus
        );
        assert!(
            rel_close(t.ca_minus, -0.11840000000000028, 3.2319999999999993, tol),
            "CA- = {}",
            t.ca_minus
        );
        assert!(
            rel_close(t.cb_plus, -143.52999999999997, -29.6, tol),
            "CB+ = {}",
            t.cb_plus
        );
        assert!(
            rel_close(t.cb_minus, -115.28839999999997, 3.2319999999999993, tol),
            "CB- = {}",
            t.cb_minus
        );
        assert!(
            rel_close(t.da_plus, 0.5439999999999996, -25.119999999999997, tol),
            "DA+ = {}",
            t.da_plus
        );
        assert!(
            rel_close(t.da_minus, 0.5439999999999996, 5.280000000000001, tol),
            "DA- = {}",
            t.da_minus
        );
        assert!(
            rel_close(t.db_plus, -110.00599999999997, -36.519999999999996, tol),
            "DB+ = {}",
            t.db_plus
        );
        assert!(
            rel_close(t.db_minus, -110.00599999999997, 16.68, tol),
            "DB- = {}",
            t.db_minus
        );
        assert!(
            rel_close(t.denom, -423.19478399999997, 4730.488639999999, tol),
            "denom = {}",
            t.denom
        );
    }

    #[test]
    fn frozen_amplitudes_at_reference_point() {
        let amps = amplitudes(&reference(), -2.0).unwrap();
        let tol = 1e-12;
        assert!(rel_close(
            amps.r_f,
            -0.010171815897604722,
            0.14439447072251602,
            tol
        ));
        assert!(rel_close(
            amps.r_b,
            0.06556259600453296,
            0.5405543042051112,
            tol
        ));
        assert!(rel_close(
            amps.t_f,
            -0.11713180857164507,
            0.04174689962430745,
            tol
        ));
        assert!(rel_close(
            amps.t_b,
            0.593687261763572,
            0.15346835533134556,
            tol
        ));

        // Power-level consequences: deep forward transmission dip, large
        // backward excess at the same detuning.
        let pw = powers(&amps);
        assert!((pw.t_f - 0.015462664207506508).abs() < 1e-12);
        assert!(pw.t_f < 0.05);
        assert!(pw.t_b - pw.t_f > 0.3);
    }

    #[test]
    fn zero_intermode_rate_kills_both_reflections_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (p, delta) = draw(&mut rng);
            let p = params(
                p.eta(),
                p.g(),
                0.0,
                p.omega1(),
                p.omega2(),
                p.gamma(),
                p.theta(),
            );
            let amps = amplitudes(&p, delta).unwrap();
            assert_eq!(amps.r_f, Complex64::new(0.0, 0.0));
            assert_eq!(amps.r_b, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn equal_magnitude_splittings_equalize_reflections() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let (p, delta) = draw(&mut rng);
            for sign in [1.0, -1.0] {
                let p = params(
                    p.eta(),
                    p.g(),
                    p.h(),
                    p.omega1(),
                    sign * p.omega1(),
                    p.gamma(),
                    p.theta(),
                );
                let amps = amplitudes(&p, delta).unwrap();
                let scale = amps.r_f.norm().max(1.0);
                assert!(
                    (amps.r_f - amps.r_b).norm() <= 1e-12 * scale,
                    "r_f = {}, r_b = {}",
                    amps.r_f,
                    amps.r_b
                );
            }
        }
    }

    #[test]
    fn zero_splittings_equalize_transmissions() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let (p, delta) = draw(&mut rng);
            let p = params(p.eta(), p.g(), p.h(), 0.0, 0.0, p.gamma(), p.theta());
            let amps = amplitudes(&p, delta).unwrap();
            let scale = amps.t_f.norm().max(1.0);
            assert!((amps.t_f - amps.t_b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn powers_arithmetic() {
        let amps = ScatteringAmplitudes {
            r_f: Complex64::new(0.0, 0.0),
            r_b: Complex64::new(0.0, 0.0),
            t_f: Complex64::new(0.0, 1.0),
            t_b: Complex64::new(0.0, -1.0),
        };
        let pw = powers(&amps);
        assert_eq!(pw.r_f, 0.0);
        assert_eq!(pw.r_b, 0.0);
        assert_eq!(pw.t_f, 1.0);
        assert_eq!(pw.t_b, 1.0);
        assert_eq!(pw.contrast_r, 0.0);
        assert_eq!(pw.contrast_t, 0.0);
    }

    #[test]
    fn lossless_scattering_conserves_flux() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..1000 {
            let (p, delta) = draw(&mut rng);
            let p = params(
                p.eta(),
                p.g(),
                p.h(),
                p.omega1(),
                p.omega2(),
                0.0,
                p.theta(),
            );
            let pw = powers_at(&p, delta).unwrap();
            assert!(
                (pw.r_f + pw.t_f - 1.0).abs() <= 1e-10,
                "forward flux violated"
            );
            assert!(
                (pw.r_b + pw.t_b - 1.0).abs() <= 1e-10,
                "backward flux violated"
            );
        }
    }

    #[test]
    fn outputs_are_exactly_two_pi_periodic_in_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..100 {
            let (p, delta) = draw(&mut rng);
            let shifted = params(
                p.eta(),
                p.g(),
                p.h(),
                p.omega1(),
                p.omega2(),
                p.gamma(),
                p.theta() + 2.0 * PI,
            );
            let a0 = amplitudes(&p, delta).unwrap();
            let a1 = amplitudes(&shifted, delta).unwrap();
            for (x, y) in [
                (a0.r_f, a1.r_f),
                (a0.r_b, a1.r_b),
                (a0.t_f, a1.t_f),
                (a0.t_b, a1.t_b),
            ] {
                assert!((x - y).norm() <= 1e-12 * x.norm().max(1.0));
            }
        }
    }

    #[test]
    fn denominator_is_symmetric_under_splitting_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..100 {
            let (p, delta) = draw(&mut rng);
            let swapped = params(
                p.eta(),
                p.g(),
                p.h(),
                p.omega2(),
                p.omega1(),
                p.gamma(),
                p.theta(),
            );
            let d0 = intermediate_terms(&p, delta).unwrap().denom;
            let d1 = intermediate_terms(&swapped, delta).unwrap().denom;
            assert!((d0 - d1).norm() <= 1e-12 * d0.norm().max(1.0));
        }
    }

    #[test]
    fn amplitudes_invariant_under_uniform_frequency_rescaling() {
        // Numerators and denominator share total frequency degree 8, so
        // scaling every frequency-like parameter (and delta) by the same
        // factor leaves the amplitudes unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let (p, delta) = draw(&mut rng);
            let s = 0.25 + rng.gen::<f64>() * 4.0;
            let scaled = params(
                s * p.eta(),
                s * p.g(),
                s * p.h(),
                s * p.omega1(),
                s * p.omega2(),
                s * p.gamma(),
                p.theta(),
            );
            let a0 = amplitudes(&p, delta).unwrap();
            let a1 = amplitudes(&scaled, s * delta).unwrap();
            for (x, y) in [
                (a0.r_f, a1.r_f),
                (a0.r_b, a1.r_b),
                (a0.t_f, a1.t_f),
                (a0.t_b, a1.t_b),
            ] {
                assert!((x - y).norm() <= 1e-9 * x.norm().max(1.0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn fully_degenerate_lossless_point_reports_denominator() {
        let p = params(0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.3);
        let err = intermediate_terms(&p, 0.5).unwrap_err();
        assert!(matches!(err, Error::DegenerateDenominator { .. }));
        assert_eq!(err.exit_code(), 3);
    }
}
