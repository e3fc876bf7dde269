//! Spectrum analysis: dip detection, direction-contrast metrics, regime
//! classification, and matching of detected dips against the positions the
//! level structure predicts.
//!
//! The physical signatures of interest are narrow dips in the four power
//! spectra. Forward reflection dips sit at detunings `±omega1`, backward
//! reflection dips at `±omega2`, forward transmission dips at `-omega1` and
//! `-omega2`, and backward transmission dips at `+omega1` and `+omega2`.
//! When a dip is deep in one direction and absent (or shallow) in the
//! other, the device acts as a unidirectional reflector (UR) or
//! unidirectional transmitter (UT); the classifier reports which behavior
//! dominates over a detuning band.

use serde::Serialize;

use crate::error::Result;
use crate::params::{SweepParam, SystemParams};
use crate::sweep::{self, AxisSpec, Quantity, SpectrumTable};

/// Default prominence floor for dip detection.
pub const DEFAULT_MIN_PROMINENCE: f64 = 0.01;

/// Default tolerance when matching dips to predicted positions.
pub const DEFAULT_MATCH_TOLERANCE: f64 = 0.15;

/// One detected spectral dip.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Dip {
    /// Detuning of the minimum, refined below grid resolution.
    pub location: f64,
    /// Value of the swept quantity at the refined minimum (clamped at 0).
    pub depth: f64,
    /// Height of the lower enclosing barrier above the minimum.
    pub prominence: f64,
    /// Distance between the half-prominence crossings around the minimum.
    pub width_at_half_prominence: f64,
}

/// Detect dips in a sampled curve.
///
/// A dip is a strict local minimum (endpoints excluded). Its prominence is
/// measured by walking outward in each direction until a sample lower than
/// the minimum (or the curve end) is reached, recording the highest sample
/// encountered; the lower of the two barriers, minus the minimum, is the
/// prominence. Dips with prominence below `min_prominence` are dropped.
///
/// The reported location and depth are refined with a three-point parabola
/// through the minimum and its neighbors; the width is measured where the
/// curve crosses half prominence above the minimum, using linear
/// interpolation between samples (truncated at the curve ends if the level
/// is never reached).
pub fn find_dips_xy(x: &[f64], y: &[f64], min_prominence: f64) -> Vec<Dip> {
    assert_eq!(x.len(), y.len(), "axis and values must have equal length");
    let n = y.len();
    let mut dips = Vec::new();
    if n < 3 {
        return dips;
    }
    for i in 1..(n - 1) {
        if !(y[i] < y[i - 1] && y[i] < y[i + 1]) {
            continue;
        }

        let mut left_barrier = f64::NEG_INFINITY;
        let mut j = i;
        while j > 0 {
            j -= 1;
            left_barrier = left_barrier.max(y[j]);
            if y[j] < y[i] {
                break;
            }
        }
        let mut right_barrier = f64::NEG_INFINITY;
        let mut j = i;
        while j + 1 < n {
            j += 1;
            right_barrier = right_barrier.max(y[j]);
            if y[j] < y[i] {
                break;
            }
        }
        let prominence = left_barrier.min(right_barrier) - y[i];
        if prominence < min_prominence {
            continue;
        }

        // Parabolic refinement. For a strict minimum the curvature term is
        // positive and the offset lies in (-1/2, 1/2); the clamp only
        // guards against pathological floating-point input.
        let curvature = y[i - 1] - 2.0 * y[i] + y[i + 1];
        let offset = if curvature != 0.0 {
            (0.5 * (y[i - 1] - y[i + 1]) / curvature).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        let location = x[i] + offset * (x[i + 1] - x[i - 1]) / 2.0;
        let depth = (y[i] - 0.25 * (y[i - 1] - y[i + 1]) * offset).max(0.0);

        let level = y[i] + 0.5 * prominence;
        let left_x = half_prominence_crossing(x, y, i, level, false);
        let right_x = half_prominence_crossing(x, y, i, level, true);
        let width_at_half_prominence = right_x - left_x;

        dips.push(Dip {
            location,
            depth,
            prominence,
            width_at_half_prominence,
        });
    }
    dips
}

/// Walk outward from the minimum until the curve reaches `level`, and
/// linearly interpolate the crossing position. Falls back to the curve end
/// if the level is never reached on that side.
fn half_prominence_crossing(x: &[f64], y: &[f64], i: usize, level: f64, rightward: bool) -> f64 {
    let n = y.len();
    let mut prev = i;
    loop {
        let next = if rightward {
            if prev + 1 >= n {
                return x[n - 1];
            }
            prev + 1
        } else {
            if prev == 0 {
                return x[0];
            }
            prev - 1
        };
        if y[next] >= level {
            let below = y[prev];
            let above = y[next];
            let t = if above == below {
                0.0
            } else {
                (level - below) / (above - below)
            };
            return x[prev] + t * (x[next] - x[prev]);
        }
        prev = next;
    }
}

/// Detect dips in one quantity of a swept spectrum.
pub fn find_dips(table: &SpectrumTable, quantity: Quantity, min_prominence: f64) -> Vec<Dip> {
    find_dips_xy(&table.axis_values, &table.column(quantity), min_prominence)
}

/// Direction-contrast summary of a spectrum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContrastMetrics {
    /// Largest `|R_f - R_b|` over the band.
    pub max_contrast_r: f64,
    /// Largest `|T_f - T_b|` over the band.
    pub max_contrast_t: f64,
    /// Trapezoid average of `|R_f - R_b|` over the band.
    pub mean_contrast_r: f64,
    /// Trapezoid average of `|T_f - T_b|` over the band.
    pub mean_contrast_t: f64,
}

/// Compute max and band-average direction contrasts from a swept spectrum.
pub fn contrast_metrics(table: &SpectrumTable) -> ContrastMetrics {
    let cr = table.column(Quantity::ContrastReflection);
    let ct = table.column(Quantity::ContrastTransmission);
    ContrastMetrics {
        max_contrast_r: cr.iter().copied().fold(0.0, f64::max),
        max_contrast_t: ct.iter().copied().fold(0.0, f64::max),
        mean_contrast_r: trapezoid_mean(&table.axis_values, &cr),
        mean_contrast_t: trapezoid_mean(&table.axis_values, &ct),
    }
}

fn trapezoid_mean(x: &[f64], y: &[f64]) -> f64 {
    if x.len() < 2 {
        return y.first().copied().unwrap_or(0.0);
    }
    let mut integral = 0.0;
    for i in 0..(x.len() - 1) {
        integral += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    }
    integral / (x[x.len() - 1] - x[0])
}

/// Which unidirectional behavior dominates over a band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeLabel {
    /// Reflection contrast clears its threshold, transmission does not.
    #[serde(rename = "UR_dominant")]
    UnidirectionalReflection,
    /// Transmission contrast clears its threshold, reflection does not.
    #[serde(rename = "UT_dominant")]
    UnidirectionalTransmission,
    /// Both contrasts clear their thresholds.
    #[serde(rename = "UR_and_UT")]
    Both,
    /// Neither contrast clears its threshold.
    #[serde(rename = "neither")]
    Neither,
}

impl RegimeLabel {
    /// Canonical name, as used in JSON reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::UnidirectionalReflection => "UR_dominant",
            RegimeLabel::UnidirectionalTransmission => "UT_dominant",
            RegimeLabel::Both => "UR_and_UT",
            RegimeLabel::Neither => "neither",
        }
    }
}

/// Thresholds and sampling used by the regime classifier.
#[derive(Debug, Clone, Copy)]
pub struct RegimeThresholds {
    /// Minimum max reflection contrast to call the reflection behavior on.
    pub tau_r: f64,
    /// Minimum max transmission contrast to call the transmission behavior on.
    pub tau_t: f64,
    /// Number of detuning samples across the band.
    pub resolution: usize,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            tau_r: 0.3,
            tau_t: 0.3,
            resolution: 601,
        }
    }
}

/// Classification outcome with the numbers that produced it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegimeReport {
    pub label: RegimeLabel,
    pub metrics: ContrastMetrics,
    pub tau_r: f64,
    pub tau_t: f64,
    pub band_start: f64,
    pub band_stop: f64,
}

/// Classify with default thresholds (0.3 / 0.3) at default resolution.
pub fn classify_regime(base: &SystemParams, band: (f64, f64)) -> Result<RegimeReport> {
    classify_regime_with(base, band, &RegimeThresholds::default())
}

/// Sweep the detuning across `band` and compare the max direction
/// contrasts against the thresholds.
pub fn classify_regime_with(
    base: &SystemParams,
    band: (f64, f64),
    thresholds: &RegimeThresholds,
) -> Result<RegimeReport> {
    let axis = AxisSpec::new(SweepParam::Delta, band.0, band.1, thresholds.resolution)?;
    let table = sweep::sweep1d(base, 0.0, &axis)?;
    let metrics = contrast_metrics(&table);
    let ur = metrics.max_contrast_r >= thresholds.tau_r;
    let ut = metrics.max_contrast_t >= thresholds.tau_t;
    let label = match (ur, ut) {
        (true, false) => RegimeLabel::UnidirectionalReflection,
        (false, true) => RegimeLabel::UnidirectionalTransmission,
        (true, true) => RegimeLabel::Both,
        (false, false) => RegimeLabel::Neither,
    };
    Ok(RegimeReport {
        label,
        metrics,
        tau_r: thresholds.tau_r,
        tau_t: thresholds.tau_t,
        band_start: band.0,
        band_stop: band.1,
    })
}

/// Detunings at which the level structure predicts dips for a quantity.
///
/// Reflection dips track the splitting of the resonator the probe meets
/// first in its travel direction (`omega1` forward, `omega2` backward) on
/// both Zeeman branches; transmission dips appear on the branch matching
/// the circulation sense, which selects `-omega` for the forward direction
/// and `+omega` for the backward one, for both resonators. Contrast
/// quantities inherit the union of their two directions. The list is
/// sorted and deduplicated.
pub fn expected_positions(quantity: Quantity, omega1: f64, omega2: f64) -> Vec<f64> {
    let mut positions = match quantity {
        Quantity::ReflectionForward => vec![-omega1, omega1],
        Quantity::ReflectionBackward => vec![-omega2, omega2],
        Quantity::TransmissionForward => vec![-omega1, -omega2],
        Quantity::TransmissionBackward => vec![omega1, omega2],
        Quantity::ContrastReflection => vec![-omega1, omega1, -omega2, omega2],
        Quantity::ContrastTransmission => vec![-omega1, -omega2, omega1, omega2],
    };
    positions.sort_by(f64::total_cmp);
    positions.dedup();
    positions
}

/// Deepest a dip may be while still counting as unidirectional.
pub const UNIDIRECTIONAL_MAX_DEPTH: f64 = 0.05;

/// How far above the dip floor the opposite direction must stay.
pub const UNIDIRECTIONAL_MIN_EXCESS: f64 = 0.3;

/// Linear interpolation of a sampled curve, clamped at the ends.
pub fn interp_at(x: &[f64], y: &[f64], x0: f64) -> f64 {
    assert_eq!(x.len(), y.len());
    assert!(!x.is_empty());
    if x0 <= x[0] {
        return y[0];
    }
    if x0 >= x[x.len() - 1] {
        return y[y.len() - 1];
    }
    let k = x.partition_point(|&v| v < x0);
    let (x_lo, x_hi) = (x[k - 1], x[k]);
    let t = if x_hi == x_lo {
        0.0
    } else {
        (x0 - x_lo) / (x_hi - x_lo)
    };
    y[k - 1] + t * (y[k] - y[k - 1])
}

/// The same observable probed from the other direction.
pub fn opposite_direction(quantity: Quantity) -> Option<Quantity> {
    match quantity {
        Quantity::ReflectionForward => Some(Quantity::ReflectionBackward),
        Quantity::ReflectionBackward => Some(Quantity::ReflectionForward),
        Quantity::TransmissionForward => Some(Quantity::TransmissionBackward),
        Quantity::TransmissionBackward => Some(Quantity::TransmissionForward),
        Quantity::ContrastReflection | Quantity::ContrastTransmission => None,
    }
}

/// Design rule for a unidirectional dip: the dip floor is nearly dark
/// (depth below [`UNIDIRECTIONAL_MAX_DEPTH`]) while the opposite direction
/// stays more than [`UNIDIRECTIONAL_MIN_EXCESS`] above it at the same
/// detuning.
pub fn is_unidirectional_dip(table: &SpectrumTable, quantity: Quantity, dip: &Dip) -> bool {
    let Some(opposite) = opposite_direction(quantity) else {
        return false;
    };
    let other = interp_at(&table.axis_values, &table.column(opposite), dip.location);
    dip.depth < UNIDIRECTIONAL_MAX_DEPTH && other > dip.depth + UNIDIRECTIONAL_MIN_EXCESS
}

/// One dip paired with the predicted position it accounts for.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DipMatch {
    pub expected: f64,
    pub dip: Dip,
    /// `dip.location - expected`.
    pub offset: f64,
}

/// Outcome of matching detected dips against predicted positions.
#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    /// Pairs accepted by the greedy matching, sorted by expected position.
    pub matched: Vec<DipMatch>,
    /// Predicted positions no dip fell within tolerance of.
    pub unmatched_expected: Vec<f64>,
    /// Detected dips not accounted for by any prediction.
    pub unmatched_dips: Vec<Dip>,
}

/// Greedily pair dips with predicted positions.
///
/// Candidate pairs within `tolerance` are taken best-first by absolute
/// offset; exact ties prefer the smaller signed offset, then the lower dip
/// location. Each dip and each prediction is used at most once.
pub fn dip_correspondence(dips: &[Dip], expected: &[f64], tolerance: f64) -> CorrespondenceReport {
    let mut candidates: Vec<(f64, f64, f64, usize, usize)> = Vec::new();
    for (ei, &e) in expected.iter().enumerate() {
        for (di, dip) in dips.iter().enumerate() {
            let offset = dip.location - e;
            if offset.abs() <= tolerance {
                candidates.push((offset.abs(), offset, dip.location, ei, di));
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let mut expected_used = vec![false; expected.len()];
    let mut dip_used = vec![false; dips.len()];
    let mut matched = Vec::new();
    for (_, offset, _, ei, di) in candidates {
        if expected_used[ei] || dip_used[di] {
            continue;
        }
        expected_used[ei] = true;
        dip_used[di] = true;
        matched.push(DipMatch {
            expected: expected[ei],
            dip: dips[di],
            offset,
        });
    }
    matched.sort_by(|a, b| a.expected.total_cmp(&b.expected));

    let unmatched_expected = expected
        .iter()
        .zip(&expected_used)
        .filter(|(_, used)| !**used)
        .map(|(e, _)| *e)
        .collect();
    let unmatched_dips = dips
        .iter()
        .zip(&dip_used)
        .filter(|(_, used)| !**used)
        .map(|(d, _)| *d)
        .collect();

    CorrespondenceReport {
        matched,
        unmatched_expected,
        unmatched_dips,
    }
}
