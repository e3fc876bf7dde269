//! Independent cross-check of the closed forms: assemble and solve the
//! stationary single-excitation linear system for the full 12-component
//! internal state, then compare the extracted reflection/transmission
//! amplitudes against the closed-form evaluation.
//!
//! The stationary state carries four fiber segment amplitudes (reflected,
//! transmitted, and the two inter-resonator segments), four resonator mode
//! amplitudes (CCW/CW in each resonator), and four exciton amplitudes (two
//! Zeeman branches per dot). Projecting the eigenvalue problem onto each
//! component yields, in units where the group velocity is 1 and the raw
//! fiber coupling is `sqrt(eta)`:
//!
//! * four jump conditions from integrating the fiber equation across each
//!   delta-function coupling point,
//! * four resonator-mode rows `-i*gamma*eps + g*xi + h*eps_partner +
//!   sqrt(eta)*Phi(x_j) = 0` (the resonator frequencies track the probe, so
//!   their self-energy reduces to `-i*gamma`),
//! * four exciton rows `-(delta ± omega_j + i*gamma)*xi + g*eps = 0`, with
//!   `+omega_j` for the branch driven by the CCW mode and `-omega_j` for the
//!   CW-driven branch.
//!
//! Two conventions are forced by requiring agreement with the closed forms
//! (verified to ~1e-15 during development, enforced at 1e-9 by the test
//! suite):
//!
//! 1. **Coupling-point field**: the step function at the origin takes the
//!    value 1, so the field multiplying each delta coupling is the *sum*
//!    `Phi(x_j^-) + Phi(x_j^+)` of the one-sided limits, not their average.
//!    (The midpoint average is equivalent to halving `eta` and does not
//!    reproduce the closed forms.)
//! 2. **Backward reflection reference plane**: the backward solve returns
//!    the reflected amplitude referenced at `x = 0`; the closed form
//!    references it at the backward input port `x = d`, so the raw value is
//!    multiplied by `e^{2i*theta}`. This same convention makes the
//!    equal-splitting identity `r_f = r_b` hold.
//!
//! The unknown ordering is `[r, t, a, b, eps_a1, eps_b1, eps_a2, eps_b2,
//! xi_r1, xi_l1, xi_r2, xi_l2]`; columns 0..4 are fiber amplitudes, 4..8
//! resonator modes, 8..12 excitons. Only `r` and `t` are convention-free;
//! the internal amplitudes depend on the ansatz normalization and are
//! exposed for inspection, not for comparison against external formulas.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::scatter::{self, ScatteringAmplitudes};

/// Matrix dimension of the stationary system.
pub const SYSTEM_DIM: usize = 12;

/// Pivot threshold below which the solve reports a singular system.
pub const PIVOT_THRESHOLD: f64 = 1e-300;

/// Required bound on the max row residual of a successful solve.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Relative agreement required between closed forms and the solve.
pub const AGREEMENT_REL_TOL: f64 = 1e-9;

/// Absolute agreement floor near zeros.
pub const AGREEMENT_ABS_TOL: f64 = 1e-12;

type Matrix = [[Complex64; SYSTEM_DIM]; SYSTEM_DIM];
type Vector = [Complex64; SYSTEM_DIM];

/// Incidence direction of the probe photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Incident from the fiber side before the first resonator, moving right.
    Forward,
    /// Incident from beyond the second resonator, moving left.
    Backward,
}

/// Full internal state extracted from one linear solve.
#[derive(Debug, Clone, Copy)]
pub struct OracleSolution {
    /// Reflection amplitude (backward case already re-referenced to the
    /// backward input port, so it is directly comparable to the closed form).
    pub r: Complex64,
    /// Transmission amplitude.
    pub t: Complex64,
    /// Right-moving inter-resonator segment amplitude.
    pub a: Complex64,
    /// Left-moving inter-resonator segment amplitude.
    pub b: Complex64,
    /// CCW mode of resonator 1.
    pub eps_a1: Complex64,
    /// CW mode of resonator 1.
    pub eps_b1: Complex64,
    /// CCW mode of resonator 2.
    pub eps_a2: Complex64,
    /// CW mode of resonator 2.
    pub eps_b2: Complex64,
    /// CCW-driven exciton branch of dot 1.
    pub xi_r1: Complex64,
    /// CW-driven exciton branch of dot 1.
    pub xi_l1: Complex64,
    /// CCW-driven exciton branch of dot 2.
    pub xi_r2: Complex64,
    /// CW-driven exciton branch of dot 2.
    pub xi_l2: Complex64,
    /// Max row residual of the solved system.
    pub residual: f64,
}

/// Assemble the 12x12 system and right-hand side for one direction.
///
/// Row layout: 0..4 fiber jump conditions, 4..8 resonator-mode stationarity,
/// 8..12 exciton stationarity. The unit incident wave enters the right-hand
/// side. All position dependence reduces to the phases `e^{±i*theta}`.
pub fn build_system(params: &SystemParams, delta: f64, dir: Direction) -> (Matrix, Vector) {
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let mut m: Matrix = [[zero; SYSTEM_DIM]; SYSTEM_DIM];
    let mut rhs: Vector = [zero; SYSTEM_DIM];

    let sq = params.eta().sqrt();
    let g = params.g();
    let h = params.h();
    let gamma = params.gamma();
    let (w1, w2) = (params.omega1(), params.omega2());
    let eip = (i * params.theta()).exp();
    let eim = (-i * params.theta()).exp();

    // Column indices, in ansatz order.
    const R: usize = 0;
    const T: usize = 1;
    const A: usize = 2;
    const B: usize = 3;
    const EA1: usize = 4;
    const EB1: usize = 5;
    const EA2: usize = 6;
    const EB2: usize = 7;
    const XR1: usize = 8;
    const XL1: usize = 9;
    const XR2: usize = 10;
    const XL2: usize = 11;

    match dir {
        Direction::Forward => {
            // Right-moving field: 1 (x<0), a (between), t (beyond);
            // left-moving field: r (x<0), b (between), 0 (beyond).
            // Jump conditions at x=0 and x=d for each direction:
            m[0][A] = 1.0.into();
            m[0][EA1] = i * sq;
            rhs[0] = 1.0.into(); // a - 1 = -i*sq*eps_a1
            m[1][T] = eip;
            m[1][A] = -eip;
            m[1][EA2] = i * sq; // (t - a)e^{i theta} = -i*sq*eps_a2
            m[2][B] = 1.0.into();
            m[2][R] = (-1.0).into();
            m[2][EB1] = -i * sq; // b - r = i*sq*eps_b1
            m[3][B] = -eim;
            m[3][EB2] = -i * sq; // -b e^{-i theta} = i*sq*eps_b2
                                 // Resonator rows; coupling-point fields are one-sided sums:
                                 // Phi_R(0) = 1 + a, Phi_L(0) = r + b,
                                 // Phi_R(d) = (a + t)e^{i theta}, Phi_L(d) = b e^{-i theta}.
            m[4][EA1] = -i * gamma;
            m[4][XR1] = g.into();
            m[4][EB1] = h.into();
            m[4][A] = sq.into();
            rhs[4] = (-sq).into();
            m[5][EB1] = -i * gamma;
            m[5][XL1] = g.into();
            m[5][EA1] = h.into();
            m[5][R] = sq.into();
            m[5][B] = sq.into();
            m[6][EA2] = -i * gamma;
            m[6][XR2] = g.into();
            m[6][EB2] = h.into();
            m[6][A] = sq * eip;
            m[6][T] = sq * eip;
            m[7][EB2] = -i * gamma;
            m[7][XL2] = g.into();
            m[7][EA2] = h.into();
            m[7][B] = sq * eim;
        }
        Direction::Backward => {
            // Right-moving field: 0 (x<0), a (between), r (beyond, raw);
            // left-moving field: t (x<0), b (between), 1 (beyond).
            m[0][A] = 1.0.into();
            m[0][EA1] = i * sq; // a - 0 = -i*sq*eps_a1
            m[1][R] = eip;
            m[1][A] = -eip;
            m[1][EA2] = i * sq; // (r - a)e^{i theta} = -i*sq*eps_a2
            m[2][B] = 1.0.into();
            m[2][T] = (-1.0).into();
            m[2][EB1] = -i * sq; // b - t = i*sq*eps_b1
            m[3][B] = -eim;
            m[3][EB2] = -i * sq;
            rhs[3] = -eim; // (1 - b)e^{-i theta} = i*sq*eps_b2
                           // Phi_R(0) = a, Phi_L(0) = t + b,
                           // Phi_R(d) = (a + r)e^{i theta}, Phi_L(d) = (b + 1)e^{-i theta}.
            m[4][EA1] = -i * gamma;
            m[4][XR1] = g.into();
            m[4][EB1] = h.into();
            m[4][A] = sq.into();
            m[5][EB1] = -i * gamma;
            m[5][XL1] = g.into();
            m[5][EA1] = h.into();
            m[5][T] = sq.into();
            m[5][B] = sq.into();
            m[6][EA2] = -i * gamma;
            m[6][XR2] = g.into();
            m[6][EB2] = h.into();
            m[6][A] = sq * eip;
            m[6][R] = sq * eip;
            m[7][EB2] = -i * gamma;
            m[7][XL2] = g.into();
            m[7][EA2] = h.into();
            m[7][B] = sq * eim;
            rhs[7] = -sq * eim;
        }
    }

    // Exciton rows are direction-independent. The CCW-driven branch sits at
    // +omega_j, the CW-driven branch at -omega_j.
    m[8][XR1] = -Complex64::new(delta + w1, gamma);
    m[8][EA1] = g.into();
    m[9][XL1] = -Complex64::new(delta - w1, gamma);
    m[9][EB1] = g.into();
    m[10][XR2] = -Complex64::new(delta + w2, gamma);
    m[10][EA2] = g.into();
    m[11][XL2] = -Complex64::new(delta - w2, gamma);
    m[11][EB2] = g.into();

    (m, rhs)
}

/// Dense LU solve with partial pivoting by maximum modulus.
///
/// The system is tiny (12x12), so a straightforward in-repo implementation
/// is used; determinism and correctness outrank performance here.
// Indexed loops throughout: the elimination reads row `col` while writing
// row `row` of the same matrix, which iterator adapters cannot express
// without `split_at_mut` contortions.
#[allow(clippy::needless_range_loop)]
fn solve_dense(mut m: Matrix, mut rhs: Vector) -> Result<Vector> {
    let n = SYSTEM_DIM;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = m[col][col].norm();
        for row in (col + 1)..n {
            let mag = m[row][col].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag < PIVOT_THRESHOLD {
            return Err(Error::SingularSystem(pivot_mag));
        }
        if pivot_row != col {
            m.swap(col, pivot_row);
            rhs.swap(col, pivot_row);
        }
        let pivot = m[col][col];
        for row in (col + 1)..n {
            let factor = m[row][col] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            m[row][col] = Complex64::new(0.0, 0.0);
            for k in (col + 1)..n {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); SYSTEM_DIM];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

fn max_row_residual(m: &Matrix, rhs: &Vector, x: &Vector) -> f64 {
    let mut worst = 0.0f64;
    for row in 0..SYSTEM_DIM {
        let mut acc = -rhs[row];
        for col in 0..SYSTEM_DIM {
            acc += m[row][col] * x[col];
        }
        worst = worst.max(acc.norm());
    }
    worst
}

/// Solve the stationary system for one direction and extract the state.
pub fn oracle_solve(params: &SystemParams, delta: f64, dir: Direction) -> Result<OracleSolution> {
    let (m, rhs) = build_system(params, delta, dir);
    let x = solve_dense(m, rhs)?;
    let residual = max_row_residual(&m, &rhs, &x);
    let r = match dir {
        Direction::Forward => x[0],
        // Re-reference the reflected wave to the backward input port x = d.
        Direction::Backward => x[0] * (Complex64::i() * 2.0 * params.theta()).exp(),
    };
    Ok(OracleSolution {
        r,
        t: x[1],
        a: x[2],
        b: x[3],
        eps_a1: x[4],
        eps_b1: x[5],
        eps_a2: x[6],
        eps_b2: x[7],
        xi_r1: x[8],
        xi_l1: x[9],
        xi_r2: x[10],
        xi_l2: x[11],
        residual,
    })
}

/// `{re, im}` rendering of a complex number for JSON reports.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexRepr {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexRepr {
    fn from(z: Complex64) -> Self {
        ComplexRepr { re: z.re, im: z.im }
    }
}

/// Per-coefficient deviation between closed form and linear solve.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientError {
    /// One of `r_f`, `t_f`, `r_b`, `t_b`.
    pub name: &'static str,
    pub closed_form: ComplexRepr,
    pub linear_solve: ComplexRepr,
    pub abs_err: f64,
    /// Absent when the reference magnitude is below the absolute floor.
    pub rel_err: Option<f64>,
}

/// Full comparison of closed forms vs the solve at one evaluation point.
#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyReport {
    pub delta: f64,
    pub coefficients: Vec<CoefficientError>,
    pub residual_forward: f64,
    pub residual_backward: f64,
    /// Max of the defined per-coefficient relative errors (0 if none).
    pub max_rel_err: f64,
    pub max_abs_err: f64,
    /// Max deviation of `R + T` from 1, reported only for lossless
    /// parameters where flux conservation must hold.
    pub flux_dev: Option<f64>,
    /// True when every coefficient satisfies
    /// `abs_err <= max(AGREEMENT_REL_TOL * |reference|, AGREEMENT_ABS_TOL)`.
    pub passed: bool,
}

/// Evaluate both the closed forms and the linear solve for both directions
/// and report the per-coefficient discrepancies.
pub fn compare(params: &SystemParams, delta: f64) -> Result<DiscrepancyReport> {
    let closed: ScatteringAmplitudes = scatter::amplitudes(params, delta)?;
    let fwd = oracle_solve(params, delta, Direction::Forward)?;
    let bwd = oracle_solve(params, delta, Direction::Backward)?;

    let pairs: [(&'static str, Complex64, Complex64); 4] = [
        ("r_f", closed.r_f, fwd.r),
        ("t_f", closed.t_f, fwd.t),
        ("r_b", closed.r_b, bwd.r),
        ("t_b", closed.t_b, bwd.t),
    ];

    let mut coefficients = Vec::with_capacity(4);
    let mut max_rel_err = 0.0f64;
    let mut max_abs_err = 0.0f64;
    let mut passed = true;
    for (name, cf, or) in pairs {
        let abs_err = (cf - or).norm();
        let magnitude = or.norm();
        let rel_err = if magnitude >= AGREEMENT_ABS_TOL {
            Some(abs_err / magnitude)
        } else {
            None
        };
        if let Some(r) = rel_err {
            max_rel_err = max_rel_err.max(r);
        }
        max_abs_err = max_abs_err.max(abs_err);
        if abs_err > (AGREEMENT_REL_TOL * magnitude).max(AGREEMENT_ABS_TOL) {
            passed = false;
        }
        coefficients.push(CoefficientError {
            name,
            closed_form: cf.into(),
            linear_solve: or.into(),
            abs_err,
            rel_err,
        });
    }

    let flux_dev = (params.gamma() == 0.0).then(|| {
        let fwd_dev = (fwd.r.norm_sqr() + fwd.t.norm_sqr() - 1.0).abs();
        let bwd_dev = (bwd.r.norm_sqr() + bwd.t.norm_sqr() - 1.0).abs();
        fwd_dev.max(bwd_dev)
    });

    Ok(DiscrepancyReport {
        delta,
        coefficients,
        residual_forward: fwd.residual,
        residual_backward: bwd.residual,
        max_rel_err,
        max_abs_err,
        flux_dev,
        passed,
    })
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

    #[test]
    // Indexed loops: the assertion message wants both coordinates.
    #[allow(clippy::needless_range_loop)]
    fn decoupled_dots_leave_exciton_columns_only_in_exciton_rows() {
        let p = params(2.0, 0.0, 0.7, 1.0, -2.0, 0.1, 0.8);
        for dir in [Direction::Forward, Direction::Backward] {
            let (m, _) = build_system(&p, 0.3, dir);
            for row in 0..8 {
                for col in 8..12 {
                    assert_eq!(m[row][col].norm(), 0.0, "row {row}, col {col}");
                }
            }
            for (row, col) in [(8, 8), (9, 9), (10, 10), (11, 11)] {
                assert!(m[row][col].norm() > 0.0);
            }
        }
    }

    #[test]
    fn zero_phase_makes_both_coupling_points_identical() {
        let p = params(2.25, 0.5, 0.7, 1.0, -2.0, 0.1, 0.0);
        let (m, _) = build_system(&p, 0.3, Direction::Forward);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(m[1][1], one); // e^{i theta} = 1 on the transmitted jump
        assert_eq!(m[3][3], -one); // e^{-i theta} = 1 on the left-mover jump
        assert_eq!(m[6][2], Complex64::new(1.5, 0.0)); // sqrt(eta) * e^{i theta}
        assert_eq!(m[7][3], Complex64::new(1.5, 0.0)); // sqrt(eta) * e^{-i theta}
    }

    #[test]
    fn lossless_uncoupled_chain_is_all_pass() {
        let p = params(1.0, 0.0, 0.0, 1.3, -0.4, 0.0, 0.9);
        for dir in [Direction::Forward, Direction::Backward] {
            let sol = oracle_solve(&p, 0.37, dir).unwrap();
            assert!(
                (sol.t.norm() - 1.0).abs() <= 1e-12,
                "|t| = {}",
                sol.t.norm()
            );
            assert!(sol.r.norm() <= 1e-12, "|r| = {}", sol.r.norm());
            assert!(sol.residual < RESIDUAL_TOLERANCE);
        }
    }

    #[test]
    fn no_intermode_conversion_means_no_reflection() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
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
            for dir in [Direction::Forward, Direction::Backward] {
                let sol = oracle_solve(&p, delta, dir).unwrap();
                assert!(sol.r.norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn frozen_solution_at_reference_point() {
        // Forward and backward solves at delta = -2, frozen from an
        // independent implementation of the same linear system.
        let fwd = oracle_solve(&reference(), -2.0, Direction::Forward).unwrap();
        let tol = 1e-12;
        let close = |z: Complex64, re: f64, im: f64| (z - Complex64::new(re, im)).norm() <= tol;
        assert!(
            close(fwd.r, -0.010171815897604738, 0.1443944707225159),
            "r = {}",
            fwd.r
        );
        assert!(
            close(fwd.t, -0.11713180857164518, 0.0417468996243075),
            "t = {}",
            fwd.t
        );
        assert!(
            close(fwd.a, 0.16377523768097293, 0.001881170074018424),
            "a = {}",
            fwd.a
        );
        assert!(
            close(fwd.b, 0.006758714768561063, 0.07041733159376146),
            "b = {}",
            fwd.b
        );
        assert!(close(
            fwd.eps_a1,
            -0.0009650198862666637,
            -0.42897425180843757
        ));
        assert!(close(
            fwd.eps_b1,
            -0.037949471647646844,
            -0.008685178976399978
        ));
        assert!(close(fwd.eps_a2, 0.02045068775433903, 0.14410227420168467));
        assert!(close(
            fwd.eps_b2,
            0.0361233289134006,
            -0.0034671475202309324
        ));
        assert!(close(fwd.xi_r1, -2.1448712590421883, 0.004825099431333323));
        assert!(close(fwd.xi_l1, 0.009355414638111454, 0.002639065476005567));
        assert!(close(fwd.xi_r2, 0.02598099845932117, 0.0926040496732136));
        assert!(close(
            fwd.xi_l2,
            -0.0065820976734153,
            0.00039104145191779503
        ));
        assert!(fwd.residual < RESIDUAL_TOLERANCE);

        let bwd = oracle_solve(&reference(), -2.0, Direction::Backward).unwrap();
        assert!(
            close(bwd.r, 0.06556259600453296, 0.5405543042051111),
            "r = {}",
            bwd.r
        );
        assert!(
            close(bwd.t, 0.5936872617635721, 0.15346835533134562),
            "t = {}",
            bwd.t
        );
        assert!(bwd.residual < RESIDUAL_TOLERANCE);
    }

    #[test]
    fn matched_splittings_give_direction_symmetric_reflection() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let (p, delta) = draw(&mut rng);
            let p = params(
                p.eta(),
                p.g(),
                p.h(),
                p.omega1(),
                p.omega1(),
                p.gamma(),
                p.theta(),
            );
            let fwd = oracle_solve(&p, delta, Direction::Forward).unwrap();
            let bwd = oracle_solve(&p, delta, Direction::Backward).unwrap();
            let scale = fwd.r.norm().max(1.0);
            assert!(
                (fwd.r - bwd.r).norm() <= 1e-12 * scale,
                "{} vs {}",
                fwd.r,
                bwd.r
            );
        }
    }

    #[test]
    fn lossless_solves_conserve_flux() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
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
            for dir in [Direction::Forward, Direction::Backward] {
                let sol = oracle_solve(&p, delta, dir).unwrap();
                let flux = sol.r.norm_sqr() + sol.t.norm_sqr();
                assert!((flux - 1.0).abs() <= 1e-10, "flux = {flux}");
            }
        }
    }

    #[test]
    fn compare_confirms_agreement_at_reference_point() {
        let report = compare(&reference(), 2.0).unwrap();
        assert!(report.passed);
        assert!(
            report.max_rel_err < AGREEMENT_REL_TOL,
            "max rel {}",
            report.max_rel_err
        );
        assert!(report.residual_forward < RESIDUAL_TOLERANCE);
        assert!(report.residual_backward < RESIDUAL_TOLERANCE);
        assert!(report.flux_dev.is_none(), "lossy point must not flag flux");
        assert_eq!(report.coefficients.len(), 4);
    }

    #[test]
    fn compare_flags_flux_conservation_for_lossless_params() {
        let p = params(3.8, 1.0, 1.0, 2.0, 3.5, 0.0, PI);
        let report = compare(&p, 2.0).unwrap();
        let dev = report
            .flux_dev
            .expect("lossless point must report flux deviation");
        assert!(dev < 1e-10, "flux deviation {dev}");
    }

    #[test]
    fn report_serializes_with_complex_fields_as_re_im() {
        let report = compare(&reference(), -2.0).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        let rf = &json["coefficients"][0];
        assert_eq!(rf["name"], "r_f");
        assert!(rf["closed_form"]["re"].is_f64());
        assert!(rf["closed_form"]["im"].is_f64());
        assert!(json["max_rel_err"].as_f64().unwrap() < 1e-9);
    }

    #[test]
    fn singular_system_is_reported_not_panicked() {
        // eta = g = h = 0 disconnects everything; the mode rows with
        // gamma = 0 are identically zero, so the pivot search must fail.
        let p = params(0.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.3);
        let err = oracle_solve(&p, 0.5, Direction::Forward).unwrap_err();
        assert!(matches!(err, Error::SingularSystem(_)));
        assert_eq!(err.exit_code(), 3);
    }
}
