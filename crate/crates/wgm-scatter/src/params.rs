//! Physical parameter set of the two-resonator scattering model.
//!
//! Every frequency-like quantity is stored as a *cyclic* frequency in GHz,
//! i.e. the quoted laboratory value `x/2pi`. The closed-form amplitudes are
//! ratios of polynomials that are homogeneous of the same total degree in the
//! frequency variables (degree 8 over degree 8), so any uniform frequency
//! unit works without 2pi factors; see the crate-level documentation for the
//! degree count.

use crate::error::{Error, Result};

/// Immutable parameter set for one physical configuration.
///
/// Fields (all cyclic frequencies in GHz except `theta`):
///
/// * `eta`    — effective resonator–fiber coupling rate, `eta = G^2 / v_g`,
/// * `g`      — quantum-dot–resonator coupling strength (equal for both dots),
/// * `h`      — intermode (CW <-> CCW) backscattering rate (equal for both),
/// * `omega1` — Zeeman half-splitting of dot 1 (may be negative),
/// * `omega2` — Zeeman half-splitting of dot 2 (may be negative),
/// * `gamma`  — uniform loss rate of resonator modes and dot excitons,
/// * `theta`  — propagation phase (radians) accumulated between the two
///   resonator coupling points.
///
/// Both resonator mode frequencies track the probe frequency (the model fixes
/// them equal to it), so they carry no field; the detuning `delta` is the
/// argument of the evaluation functions, not part of the parameter set.
///
/// Negative rates are rejected at construction. `theta` is stored as given —
/// never reduced modulo 2pi — and every output is exactly 2pi-periodic in it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    eta: f64,
    g: f64,
    h: f64,
    omega1: f64,
    omega2: f64,
    gamma: f64,
    theta: f64,
}

impl SystemParams {
    /// Validate and build a parameter set. Rates must be non-negative and
    /// every field must be finite; Zeeman splittings may have either sign.
    pub fn new(
        eta: f64,
        g: f64,
        h: f64,
        omega1: f64,
        omega2: f64,
        gamma: f64,
        theta: f64,
    ) -> Result<Self> {
        for (name, value) in [("eta", eta), ("g", g), ("h", h), ("gamma", gamma)] {
            if value < 0.0 {
                return Err(Error::NegativeRate { name, value });
            }
        }
        for (name, value) in [
            ("eta", eta),
            ("g", g),
            ("h", h),
            ("omega1", omega1),
            ("omega2", omega2),
            ("gamma", gamma),
            ("theta", theta),
        ] {
            if !value.is_finite() {
                return Err(Error::Config(format!("parameter {name} is not finite")));
            }
        }
        Ok(Self {
            eta,
            g,
            h,
            omega1,
            omega2,
            gamma,
            theta,
        })
    }

    /// Resonator–fiber coupling rate (GHz).
    pub fn eta(&self) -> f64 {
        self.eta
    }
    /// Dot–resonator coupling strength (GHz).
    pub fn g(&self) -> f64 {
        self.g
    }
    /// Intermode backscattering rate (GHz).
    pub fn h(&self) -> f64 {
        self.h
    }
    /// Zeeman half-splitting of dot 1 (GHz).
    pub fn omega1(&self) -> f64 {
        self.omega1
    }
    /// Zeeman half-splitting of dot 2 (GHz).
    pub fn omega2(&self) -> f64 {
        self.omega2
    }
    /// Uniform loss rate (GHz).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    /// Inter-resonator propagation phase (radians).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Return a copy with one named parameter replaced (re-validated).
    ///
    /// [`SweepParam::Delta`] is not a stored field; asking for it here is an
    /// axis-specification error (the sweep engine special-cases it).
    pub fn with(&self, param: SweepParam, value: f64) -> Result<Self> {
        let mut p = *self;
        match param {
            SweepParam::Delta => {
                return Err(Error::InvalidAxis(
                    "delta is the evaluation argument, not a stored parameter".into(),
                ))
            }
            SweepParam::Eta => p.eta = value,
            SweepParam::G => p.g = value,
            SweepParam::H => p.h = value,
            SweepParam::Omega1 => p.omega1 = value,
            SweepParam::Omega2 => p.omega2 = value,
            SweepParam::Gamma => p.gamma = value,
            SweepParam::Theta => p.theta = value,
        }
        SystemParams::new(p.eta, p.g, p.h, p.omega1, p.omega2, p.gamma, p.theta)
    }

    /// `(name, value, unit-suffixed key)` triples for metadata emission.
    pub fn metadata_fields(&self) -> [(&'static str, f64); 7] {
        [
            ("eta_GHz", self.eta),
            ("g_GHz", self.g),
            ("h_GHz", self.h),
            ("omega1_GHz", self.omega1),
            ("omega2_GHz", self.omega2),
            ("gamma_GHz", self.gamma),
            ("theta_rad", self.theta),
        ]
    }
}

/// Sweepable parameter axes. `Delta` is the detuning argument; the rest name
/// [`SystemParams`] fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Delta,
    Theta,
    Eta,
    G,
    H,
    Omega1,
    Omega2,
    Gamma,
}

impl SweepParam {
    /// Canonical lowercase name used in configs and CSV metadata.
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::Delta => "delta",
            SweepParam::Theta => "theta",
            SweepParam::Eta => "eta",
            SweepParam::G => "g",
            SweepParam::H => "h",
            SweepParam::Omega1 => "omega1",
            SweepParam::Omega2 => "omega2",
            SweepParam::Gamma => "gamma",
        }
    }

    /// Unit suffix for column headers and metadata keys.
    pub fn unit(&self) -> &'static str {
        match self {
            SweepParam::Theta => "rad",
            _ => "GHz",
        }
    }

    /// Column header for a 1D sweep over this parameter, e.g. `delta_GHz`.
    pub fn column_header(&self) -> String {
        format!("{}_{}", self.as_str(), self.unit())
    }
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "delta" => SweepParam::Delta,
            "theta" => SweepParam::Theta,
            "eta" => SweepParam::Eta,
            "g" => SweepParam::G,
            "h" => SweepParam::H,
            "omega1" => SweepParam::Omega1,
            "omega2" => SweepParam::Omega2,
            "gamma" => SweepParam::Gamma,
            other => {
                return Err(Error::InvalidAxis(format!(
                    "unknown parameter name '{other}' (expected one of: delta, theta, eta, g, h, omega1, omega2, gamma)"
                )))
            }
        })
    }
}

/// Effective coupling rate from the raw coupling amplitude and group
/// velocity: `eta = G^2 / v_g`.
///
/// The division carries whatever frequency convention `G^2 / v_g` carries.
/// [`SystemParams`] stores cyclic GHz, so a `G` expressed in angular units
/// must be converted by dividing the result by 2pi: for any `v_g > 0`,
/// `eta_from_raw(sqrt(2*pi*3.8*v_g), v_g) / (2*pi) == 3.8`.
pub fn eta_from_raw(big_g: f64, v_g: f64) -> Result<f64> {
    // `!(v_g > 0.0)` rather than `v_g <= 0.0`: a NaN velocity must also be
    // rejected, and NaN fails every ordered comparison.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(v_g > 0.0) {
        return Err(Error::NonpositiveVelocity(v_g));
    }
    Ok(big_g * big_g / v_g)
}
