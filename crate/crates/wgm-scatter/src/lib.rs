//! Single-photon transport through an optical fiber side-coupled to two
//! whispering-gallery-mode resonators, each hosting a magnetically split
//! quantum dot.
//!
//! # Model
//!
//! A photon travels along a fiber that evanescently couples, with rate
//! `eta`, to two ring resonators separated by a propagation phase `theta`.
//! Each resonator carries degenerate counter-propagating modes (CCW/CW)
//! that are mixed at rate `h` by surface-roughness backscattering. A
//! quantum dot in resonator `j` couples with strength `g` to both modes,
//! but a magnetic field splits its transitions by `±omega_j`: the CCW mode
//! talks to the transition at `+omega_j`, the CW mode to the one at
//! `-omega_j`. Every mode and transition decays at rate `gamma`. All rates
//! are cyclic frequencies in GHz (angular value over 2*pi); `theta` is in
//! radians.
//!
//! Because a forward-moving photon enters a resonator through its CCW mode
//! and a backward-moving photon through its CW mode, the Zeeman splitting
//! makes transport direction-dependent: the forward reflection dips at
//! detunings `±omega1`, the backward reflection at `±omega2`, and the
//! transmissions dip on one branch each (`-omega_j` forward, `+omega_j`
//! backward). Sweeping the fiber coupling `eta` moves the device between a
//! unidirectional-reflector regime and a unidirectional-transmitter
//! regime.
//!
//! Scattering is solved in closed form ([`scatter`]); an independent
//! 12-unknown stationary linear system ([`oracle`]) cross-checks every
//! amplitude. Both are invariant under a uniform rescaling of all
//! frequencies (the amplitudes are ratios of same-degree polynomials in
//! the rates), which is why no `2*pi` factors appear in the formulas.
//!
//! # Quantities
//!
//! For each detuning the crate reports `R_f`, `R_b`, `T_f`, `T_b` (powers
//! of the forward/backward reflection and transmission) plus the direction
//! contrasts `contrast_R = |R_f - R_b|` and `contrast_T = |T_f - T_b|`.
//!
//! # Example
//!
//! ```
//! use wgm_scatter::{powers_at, SystemParams};
//!
//! let params = SystemParams::new(3.8, 1.0, 1.0, 2.0, 3.5, 0.2,
//!                                std::f64::consts::PI).unwrap();
//! let p = powers_at(&params, -2.0).unwrap();
//! assert!((p.r_f - 0.020953229013890302).abs() < 1e-12);
//! assert!((p.r_b - 0.29649740978952543).abs() < 1e-12);
//! assert!((p.t_f - 0.015462664207506508).abs() < 1e-12);
//! assert!((p.t_b - 0.37601710086843615).abs() < 1e-12);
//! ```
//!
//! # Modules
//!
//! * [`params`] — validated system parameters and sweepable knobs.
//! * [`scatter`] — closed-form amplitudes and powers.
//! * [`oracle`] — independent linear-system solve and comparison.
//! * [`sweep`] — parallel 1D/2D parameter sweeps.
//! * [`analysis`] — dip detection, contrasts, regime classification.
//! * [`csvio`] / [`svg`] — self-describing CSV files and SVG plots.
//! * [`config`] / [`commands`] — INI run configs and the CLI entry points.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod oracle;
pub mod params;
pub mod scatter;
pub mod svg;
pub mod sweep;

pub use analysis::{
    classify_regime, classify_regime_with, contrast_metrics, dip_correspondence,
    expected_positions, find_dips, find_dips_xy, interp_at, is_unidirectional_dip,
    opposite_direction, ContrastMetrics, CorrespondenceReport, Dip, DipMatch, RegimeLabel,
    RegimeReport, RegimeThresholds, DEFAULT_MATCH_TOLERANCE, DEFAULT_MIN_PROMINENCE,
};
pub use error::{Error, Result};
pub use oracle::{
    build_system, compare, oracle_solve, Direction, DiscrepancyReport, OracleSolution,
};
pub use params::{eta_from_raw, SweepParam, SystemParams};
pub use scatter::{
    amplitudes, intermediate_terms, powers, powers_at, IntermediateTerms, ScatteringAmplitudes,
    ScatteringPowers,
};
pub use sweep::{sweep1d, sweep2d, AxisSpec, GridTable, Provenance, Quantity, SpectrumTable};
