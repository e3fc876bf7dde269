//! Parameter sweeps: evaluate the scattering powers over a 1D axis or a 2D
//! grid, in parallel, with deterministic output ordering.
//!
//! Any of the eight knobs (`delta`, `theta`, `eta`, `g`, `h`, `omega1`,
//! `omega2`, `gamma`) can serve as an axis. Grids always include both
//! endpoints: point `i` of `count` is `start + i * (stop - start) /
//! (count - 1)`, with the final point forced to `stop` exactly.
//!
//! Sweeps are fail-fast: the first grid point (in row-major order) whose
//! evaluation fails aborts the sweep, and the error reports that point's
//! flat index. Parallel execution preserves this: all points are evaluated
//! into an ordered buffer and the scan for the first failure is sequential,
//! so the reported index never depends on thread scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{SweepParam, SystemParams};
use crate::scatter::{self, ScatteringPowers};

/// One of the six scalar outputs of a scattering evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    #[serde(rename = "R_f")]
    ReflectionForward,
    #[serde(rename = "R_b")]
    ReflectionBackward,
    #[serde(rename = "T_f")]
    TransmissionForward,
    #[serde(rename = "T_b")]
    TransmissionBackward,
    #[serde(rename = "contrast_R")]
    ContrastReflection,
    #[serde(rename = "contrast_T")]
    ContrastTransmission,
}

impl Quantity {
    /// All six quantities, in canonical column order.
    pub const ALL: [Quantity; 6] = [
        Quantity::ReflectionForward,
        Quantity::ReflectionBackward,
        Quantity::TransmissionForward,
        Quantity::TransmissionBackward,
        Quantity::ContrastReflection,
        Quantity::ContrastTransmission,
    ];

    /// Canonical name, used in CSV headers, config files, and JSON keys.
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::ReflectionForward => "R_f",
            Quantity::ReflectionBackward => "R_b",
            Quantity::TransmissionForward => "T_f",
            Quantity::TransmissionBackward => "T_b",
            Quantity::ContrastReflection => "contrast_R",
            Quantity::ContrastTransmission => "contrast_T",
        }
    }

    /// Pull this quantity out of one evaluated point.
    pub fn extract(&self, powers: &ScatteringPowers) -> f64 {
        match self {
            Quantity::ReflectionForward => powers.r_f,
            Quantity::ReflectionBackward => powers.r_b,
            Quantity::TransmissionForward => powers.t_f,
            Quantity::TransmissionBackward => powers.t_b,
            Quantity::ContrastReflection => powers.contrast_r,
            Quantity::ContrastTransmission => powers.contrast_t,
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown quantity `{s}` (expected one of R_f, R_b, T_f, T_b, contrast_R, contrast_T)"
                ))
            })
    }
}

/// A validated 1D sweep axis: which knob to vary and the inclusive grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    param: SweepParam,
    start: f64,
    stop: f64,
    count: usize,
}

impl AxisSpec {
    /// Validate an axis. Requires finite bounds, `stop > start`, and at
    /// least two points (both endpoints are always included).
    pub fn new(param: SweepParam, start: f64, stop: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidAxis(format!(
                "{} axis bounds must be finite, got [{start}, {stop}]",
                param.as_str()
            )));
        }
        if stop <= start {
            return Err(Error::InvalidAxis(format!(
                "{} axis needs stop > start, got [{start}, {stop}]",
                param.as_str()
            )));
        }
        if count < 2 {
            return Err(Error::InvalidAxis(format!(
                "{} axis needs at least 2 points, got {count}",
                param.as_str()
            )));
        }
        Ok(AxisSpec {
            param,
            start,
            stop,
            count,
        })
    }

    pub fn param(&self) -> SweepParam {
        self.param
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Materialize the grid. Both endpoints are exact.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / ((self.count - 1) as f64);
        let mut values: Vec<f64> = (0..self.count)
            .map(|i| self.start + (i as f64) * step)
            .collect();
        *values.last_mut().expect("count >= 2") = self.stop;
        values
    }
}

/// Who produced a table and when; embedded in every output file.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    /// Producing tool and version.
    pub tool: String,
    /// RFC 3339 UTC timestamp. Honors `SOURCE_DATE_EPOCH` (seconds since
    /// the Unix epoch) for reproducible output; otherwise the current time.
    pub timestamp: String,
}

impl Provenance {
    pub fn capture() -> Self {
        let epoch = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.parse::<i64>().ok());
        Provenance {
            tool: format!("wgm-scatter {}", env!("CARGO_PKG_VERSION")),
            timestamp: timestamp_string(epoch),
        }
    }
}

fn timestamp_string(epoch: Option<i64>) -> String {
    use chrono::{DateTime, SecondsFormat, Utc};
    let now: DateTime<Utc> = match epoch.and_then(|secs| DateTime::from_timestamp(secs, 0)) {
        Some(pinned) => pinned,
        None => Utc::now(),
    };
    now.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Result of a 1D sweep: all six quantities at every grid point.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub axis: AxisSpec,
    /// Parameters held fixed (the axis value overrides one of them, or the
    /// detuning, per point).
    pub base: SystemParams,
    /// Detuning used when the axis is not the detuning itself.
    pub base_delta: f64,
    pub axis_values: Vec<f64>,
    pub powers: Vec<ScatteringPowers>,
    pub provenance: Provenance,
}

impl SpectrumTable {
    pub fn len(&self) -> usize {
        self.axis_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis_values.is_empty()
    }

    /// One quantity as a dense column, aligned with `axis_values`.
    pub fn column(&self, quantity: Quantity) -> Vec<f64> {
        self.powers.iter().map(|p| quantity.extract(p)).collect()
    }
}

/// Result of a 2D sweep: one quantity over a row-major grid.
#[derive(Debug, Clone)]
pub struct GridTable {
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
    pub quantity: Quantity,
    pub base: SystemParams,
    pub base_delta: f64,
    /// Row-major: the value at `(i, j)` is `values[i * axis2.count() + j]`.
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl GridTable {
    /// Value at axis1 index `i`, axis2 index `j`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axis2.count() + j]
    }
}

/// Evaluate one grid point: apply the axis assignments to the base
/// configuration (the detuning axis overrides the evaluation detuning, any
/// other axis overrides the corresponding parameter) and compute powers.
fn eval_point(
    base: &SystemParams,
    base_delta: f64,
    assignments: &[(SweepParam, f64)],
) -> Result<ScatteringPowers> {
    let mut params = *base;
    let mut delta = base_delta;
    for &(param, value) in assignments {
        match param {
            SweepParam::Delta => delta = value,
            other => params = params.with(other, value)?,
        }
    }
    scatter::powers_at(&params, delta)
}

/// Turn an ordered buffer of per-point results into a fail-fast outcome:
/// the first error (by grid index) wins, independent of thread scheduling.
fn collect_fail_fast<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    let mut values = Vec::with_capacity(results.len());
    for (index, result) in results.into_iter().enumerate() {
        match result {
            Ok(v) => values.push(v),
            Err(source) => {
                return Err(Error::SweepPoint {
                    index,
                    source: Box::new(source),
                })
            }
        }
    }
    Ok(values)
}

/// Sweep one axis, computing all six quantities at every point in parallel.
pub fn sweep1d(base: &SystemParams, base_delta: f64, axis: &AxisSpec) -> Result<SpectrumTable> {
    let axis_values = axis.grid();
    let results: Vec<Result<ScatteringPowers>> = axis_values
        .par_iter()
        .map(|&value| eval_point(base, base_delta, &[(axis.param(), value)]))
        .collect();
    let powers = collect_fail_fast(results)?;
    Ok(SpectrumTable {
        axis: *axis,
        base: *base,
        base_delta,
        axis_values,
        powers,
        provenance: Provenance::capture(),
    })
}

/// Sweep two distinct axes, keeping one quantity on a row-major grid.
pub fn sweep2d(
    base: &SystemParams,
    base_delta: f64,
    axis1: &AxisSpec,
    axis2: &AxisSpec,
    quantity: Quantity,
) -> Result<GridTable> {
    if axis1.param() == axis2.param() {
        return Err(Error::InvalidAxis(format!(
            "the two map axes must differ, both are `{}`",
            axis1.param().as_str()
        )));
    }
    let values1 = axis1.grid();
    let values2 = axis2.grid();
    let count2 = values2.len();
    let results: Vec<Result<f64>> = (0..values1.len() * count2)
        .into_par_iter()
        .map(|flat| {
            let i = flat / count2;
            let j = flat % count2;
            eval_point(
                base,
                base_delta,
                &[(axis1.param(), values1[i]), (axis2.param(), values2[j])],
            )
            .map(|p| quantity.extract(&p))
        })
        .collect();
    let values = collect_fail_fast(results)?;
    Ok(GridTable {
        axis1: *axis1,
        axis2: *axis2,
        quantity,
        base: *base,
        base_delta,
        values,
        provenance: Provenance::capture(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn base() -> SystemParams {
        SystemParams::new(3.8, 1.0, 1.0, 2.0, 3.5, 0.2, PI).unwrap()
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.as_str().parse::<Quantity>().unwrap(), q);
        }
        let err = "R_x".parse::<Quantity>().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("R_x"));
    }

    #[test]
    fn axis_grid_includes_exact_endpoints() {
        let axis = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 601).unwrap();
        let grid = axis.grid();
        assert_eq!(grid.len(), 601);
        assert_eq!(grid[0], -6.0);
        assert_eq!(grid[600], 6.0);
        assert_eq!(grid[300], 0.0);

        let two = AxisSpec::new(SweepParam::G, 0.1, 0.3, 2).unwrap().grid();
        assert_eq!(two, vec![0.1, 0.3]);
    }

    #[test]
    fn axis_validation_rejects_bad_specs() {
        for bad in [
            AxisSpec::new(SweepParam::Delta, 0.0, 1.0, 1),
            AxisSpec::new(SweepParam::Delta, 1.0, 1.0, 10),
            AxisSpec::new(SweepParam::Delta, 2.0, -2.0, 10),
            AxisSpec::new(SweepParam::Delta, f64::NAN, 1.0, 10),
            AxisSpec::new(SweepParam::Delta, 0.0, f64::INFINITY, 10),
        ] {
            let err = bad.unwrap_err();
            assert!(matches!(err, Error::InvalidAxis(_)));
            assert_eq!(err.exit_code(), 2);
        }
    }

    #[test]
    fn detuning_sweep_matches_pointwise_evaluation() {
        let axis = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 41).unwrap();
        let table = sweep1d(&base(), 0.0, &axis).unwrap();
        assert_eq!(table.len(), 41);
        for (value, powers) in table.axis_values.iter().zip(&table.powers) {
            let direct = scatter::powers_at(&base(), *value).unwrap();
            assert_eq!(powers.r_f, direct.r_f);
            assert_eq!(powers.r_b, direct.r_b);
            assert_eq!(powers.t_f, direct.t_f);
            assert_eq!(powers.t_b, direct.t_b);
            assert_eq!(powers.contrast_r, direct.contrast_r);
            assert_eq!(powers.contrast_t, direct.contrast_t);
        }
    }

    #[test]
    fn parameter_axis_overrides_that_parameter_only() {
        let axis = AxisSpec::new(SweepParam::Theta, 0.0, 2.0 * PI, 17).unwrap();
        let table = sweep1d(&base(), 2.0, &axis).unwrap();
        for (value, powers) in table.axis_values.iter().zip(&table.powers) {
            let p = base().with(SweepParam::Theta, *value).unwrap();
            let direct = scatter::powers_at(&p, 2.0).unwrap();
            assert_eq!(powers.r_f, direct.r_f);
            assert_eq!(powers.t_b, direct.t_b);
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let axis = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 301).unwrap();
        let serial_pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let parallel_pool = rayon::ThreadPoolBuilder::new()
            .num_threads(2)
            .build()
            .unwrap();
        let serial = serial_pool
            .install(|| sweep1d(&base(), 0.0, &axis))
            .unwrap();
        let parallel = parallel_pool
            .install(|| sweep1d(&base(), 0.0, &axis))
            .unwrap();
        assert_eq!(serial.axis_values, parallel.axis_values);
        for (a, b) in serial.powers.iter().zip(&parallel.powers) {
            assert_eq!(a.r_f, b.r_f);
            assert_eq!(a.r_b, b.r_b);
            assert_eq!(a.t_f, b.t_f);
            assert_eq!(a.t_b, b.t_b);
        }
    }

    #[test]
    fn failing_point_reports_its_grid_index() {
        // A fully degenerate base makes every point fail; the reported
        // index must be the first one regardless of parallel scheduling.
        let degenerate = SystemParams::new(0.0, 0.0, 0.0, 2.0, 3.5, 0.0, PI).unwrap();
        let axis = AxisSpec::new(SweepParam::Delta, -1.0, 1.0, 64).unwrap();
        let err = sweep1d(&degenerate, 0.0, &axis).unwrap_err();
        match &err {
            Error::SweepPoint { index, source } => {
                assert_eq!(*index, 0);
                assert!(matches!(**source, Error::DegenerateDenominator { .. }));
            }
            other => panic!("expected SweepPoint, got {other:?}"),
        }
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn map_axes_must_differ() {
        let a = AxisSpec::new(SweepParam::Delta, -1.0, 1.0, 3).unwrap();
        let b = AxisSpec::new(SweepParam::Delta, 0.0, 2.0, 3).unwrap();
        let err = sweep2d(&base(), 0.0, &a, &b, Quantity::ReflectionForward).unwrap_err();
        assert!(matches!(err, Error::InvalidAxis(_)));
    }

    #[test]
    fn map_is_row_major_over_axis1_then_axis2() {
        let a = AxisSpec::new(SweepParam::Delta, -2.0, 2.0, 2).unwrap();
        let b = AxisSpec::new(SweepParam::Eta, 1.0, 6.0, 3).unwrap();
        let grid = sweep2d(&base(), 0.0, &a, &b, Quantity::TransmissionForward).unwrap();
        assert_eq!(grid.values.len(), 6);
        let deltas = a.grid();
        let etas = b.grid();
        for (i, &delta) in deltas.iter().enumerate() {
            for (j, &eta) in etas.iter().enumerate() {
                let p = base().with(SweepParam::Eta, eta).unwrap();
                let direct = scatter::powers_at(&p, delta).unwrap();
                assert_eq!(grid.value(i, j), direct.t_f, "({i}, {j})");
            }
        }
    }

    #[test]
    fn pinned_epoch_gives_fixed_timestamp() {
        assert_eq!(timestamp_string(Some(0)), "1970-01-01T00:00:00Z");
        assert_eq!(timestamp_string(Some(86400)), "1970-01-02T00:00:00Z");
        let live = timestamp_string(None);
        assert!(
            live.ends_with('Z') && live.len() == 20,
            "unexpected format: {live}"
        );
    }
}
