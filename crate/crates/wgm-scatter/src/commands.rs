//! Command implementations shared by the CLI binary and integration tests.
//!
//! Each command takes a fully-resolved config, does its computation and
//! file I/O, and (for `verify` and `analyze`) prints a JSON report to
//! stdout. Nothing here reads the process arguments; that stays in the
//! binary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    classify_regime_with, contrast_metrics, dip_correspondence, expected_positions, find_dips,
    ContrastMetrics, CorrespondenceReport, Dip, RegimeReport,
};
use crate::config::{AnalyzeConfig, MapConfig, SpectrumConfig, VerifyConfig};
use crate::csvio;
use crate::error::{Error, Result};
use crate::oracle::{self, DiscrepancyReport};
use crate::params::SystemParams;
use crate::svg;
use crate::sweep::{self, Provenance, Quantity};

/// Environment variable consulted when `--threads` is not given.
pub const THREADS_ENV_VAR: &str = "WGM_SCATTER_THREADS";

/// Decide the worker thread count: explicit flag first, then the
/// environment variable, then the library default.
pub fn resolve_threads(cli: Option<usize>) -> Result<Option<usize>> {
    threads_from(cli, std::env::var(THREADS_ENV_VAR).ok().as_deref())
}

fn threads_from(cli: Option<usize>, env: Option<&str>) -> Result<Option<usize>> {
    if let Some(n) = cli {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        return Ok(Some(n));
    }
    match env {
        None => Ok(None),
        Some(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::Config(format!(
                "{THREADS_ENV_VAR} must be a positive integer, got `{raw}`"
            ))),
        },
    }
}

/// Run a closure inside a dedicated thread pool of the given size, or on
/// the default pool when no size is requested.
pub fn run_with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match threads {
        None => f(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
            pool.install(f)
        }
    }
}

fn ensure_parent_dir(path: &std::path::Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(())
}

/// Compute a 1D spectrum and write it out. Without a CSV path the document
/// goes to stdout.
pub fn cmd_spectrum(cfg: &SpectrumConfig) -> Result<()> {
    let table = sweep::sweep1d(&cfg.params, cfg.base_delta, &cfg.axis)?;
    match &cfg.outputs.csv {
        Some(path) => {
            ensure_parent_dir(path)?;
            csvio::write_spectrum_csv(path, &table)?;
        }
        None => print!("{}", csvio::spectrum_csv_string(&table)),
    }
    if let Some(path) = &cfg.outputs.svg {
        ensure_parent_dir(path)?;
        std::fs::write(path, svg::line_plot(&table))?;
    }
    Ok(())
}

/// Compute a 2D map and write it out. Without a CSV path the document goes
/// to stdout.
pub fn cmd_map(cfg: &MapConfig) -> Result<()> {
    let grid = sweep::sweep2d(
        &cfg.params,
        cfg.base_delta,
        &cfg.axis1,
        &cfg.axis2,
        cfg.quantity,
    )?;
    match &cfg.outputs.csv {
        Some(path) => {
            ensure_parent_dir(path)?;
            csvio::write_grid_csv(path, &grid)?;
        }
        None => print!("{}", csvio::grid_csv_string(&grid)),
    }
    if let Some(path) = &cfg.outputs.svg {
        ensure_parent_dir(path)?;
        std::fs::write(path, svg::heatmap(&grid))?;
    }
    Ok(())
}

/// System parameters as they appear in JSON reports, with unit suffixes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamsReport {
    #[serde(rename = "eta_GHz")]
    pub eta: f64,
    #[serde(rename = "g_GHz")]
    pub g: f64,
    #[serde(rename = "h_GHz")]
    pub h: f64,
    #[serde(rename = "omega1_GHz")]
    pub omega1: f64,
    #[serde(rename = "omega2_GHz")]
    pub omega2: f64,
    #[serde(rename = "gamma_GHz")]
    pub gamma: f64,
    #[serde(rename = "theta_rad")]
    pub theta: f64,
}

impl From<&SystemParams> for ParamsReport {
    fn from(p: &SystemParams) -> Self {
        ParamsReport {
            eta: p.eta(),
            g: p.g(),
            h: p.h(),
            omega1: p.omega1(),
            omega2: p.omega2(),
            gamma: p.gamma(),
            theta: p.theta(),
        }
    }
}

/// One randomly drawn comparison, kept when it ranks among the worst.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyCase {
    pub params: ParamsReport,
    #[serde(rename = "delta_GHz")]
    pub delta: f64,
    /// Largest per-coefficient error relative to its acceptance bound;
    /// below 1 means the case passed.
    pub score: f64,
    pub report: DiscrepancyReport,
}

/// Outcome of comparing the closed forms against the independent linear
/// solve on randomly drawn parameter sets.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub draws: usize,
    pub seed: u64,
    pub passed: bool,
    pub failures: usize,
    pub max_rel_err: f64,
    pub max_abs_err: f64,
    pub max_residual: f64,
    pub rel_tolerance: f64,
    pub abs_tolerance: f64,
    pub worst_cases: Vec<VerifyCase>,
    pub provenance: Provenance,
}

fn draw_case(rng: &mut ChaCha8Rng) -> Result<(SystemParams, f64)> {
    let eta = rng.gen::<f64>() * 10.0;
    let g = rng.gen::<f64>() * 10.0;
    let h = rng.gen::<f64>() * 10.0;
    let omega1 = -5.0 + rng.gen::<f64>() * 10.0;
    let omega2 = -5.0 + rng.gen::<f64>() * 10.0;
    let gamma = rng.gen::<f64>();
    let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
    let delta = -10.0 + rng.gen::<f64>() * 20.0;
    Ok((
        SystemParams::new(eta, g, h, omega1, omega2, gamma, theta)?,
        delta,
    ))
}

/// Run the random-draw equivalence check between the closed forms and the
/// stationary linear system.
///
/// The draw sequence is fixed by the seed, and evaluation is sequential,
/// so the report is identical regardless of thread configuration.
pub fn verify_report(draws: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Vec<VerifyCase> = Vec::new();
    let mut failures = 0usize;
    let mut max_rel_err = 0.0f64;
    let mut max_abs_err = 0.0f64;
    let mut max_residual = 0.0f64;

    for _ in 0..draws {
        let (params, delta) = draw_case(&mut rng)?;
        let report = oracle::compare(&params, delta)?;
        if !report.passed {
            failures += 1;
        }
        max_rel_err = max_rel_err.max(report.max_rel_err);
        max_abs_err = max_abs_err.max(report.max_abs_err);
        max_residual = max_residual.max(report.residual_forward.max(report.residual_backward));

        let score = report
            .coefficients
            .iter()
            .map(|c| {
                let bound = (oracle::AGREEMENT_REL_TOL
                    * (c.linear_solve.re.hypot(c.linear_solve.im)))
                .max(oracle::AGREEMENT_ABS_TOL);
                c.abs_err / bound
            })
            .fold(0.0f64, f64::max);
        let case = VerifyCase {
            params: ParamsReport::from(&params),
            delta,
            score,
            report,
        };
        worst.push(case);
        worst.sort_by(|a, b| b.score.total_cmp(&a.score));
        worst.truncate(5);
    }

    Ok(VerifyReport {
        draws,
        seed,
        passed: failures == 0,
        failures,
        max_rel_err,
        max_abs_err,
        max_residual,
        rel_tolerance: oracle::AGREEMENT_REL_TOL,
        abs_tolerance: oracle::AGREEMENT_ABS_TOL,
        worst_cases: worst,
        provenance: Provenance::capture(),
    })
}

fn emit_json<T: Serialize>(report: &T, path: Option<&std::path::Path>) -> Result<String> {
    let mut json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Config(format!("cannot serialize report: {e}")))?;
    json.push('\n');
    if let Some(path) = path {
        ensure_parent_dir(path)?;
        std::fs::write(path, &json)?;
    }
    Ok(json)
}

/// Run the verification procedure, print the JSON report to stdout, and
/// return whether every draw passed.
pub fn cmd_verify(cfg: &VerifyConfig) -> Result<bool> {
    let report = verify_report(cfg.draws, cfg.seed)?;
    let json = emit_json(&report, cfg.outputs.json.as_deref())?;
    print!("{json}");
    Ok(report.passed)
}

/// The four directional power quantities, used to group per-quantity
/// results under their canonical names in JSON.
#[derive(Debug, Clone, Serialize)]
pub struct PerQuantity<T> {
    #[serde(rename = "R_f")]
    pub r_f: T,
    #[serde(rename = "R_b")]
    pub r_b: T,
    #[serde(rename = "T_f")]
    pub t_f: T,
    #[serde(rename = "T_b")]
    pub t_b: T,
}

impl<T> PerQuantity<T> {
    fn build(mut f: impl FnMut(Quantity) -> T) -> Self {
        PerQuantity {
            r_f: f(Quantity::ReflectionForward),
            r_b: f(Quantity::ReflectionBackward),
            t_f: f(Quantity::TransmissionForward),
            t_b: f(Quantity::TransmissionBackward),
        }
    }
}

/// Axis description in JSON reports.
#[derive(Debug, Clone, Serialize)]
pub struct AxisReport {
    pub param: &'static str,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

/// Full analysis of one stored spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub input: String,
    pub params: ParamsReport,
    #[serde(rename = "base_delta_GHz")]
    pub base_delta: f64,
    pub axis: AxisReport,
    pub min_prominence: f64,
    pub tolerance: f64,
    pub dips: PerQuantity<Vec<Dip>>,
    pub contrast: ContrastMetrics,
    pub regime: RegimeReport,
    pub correspondence: PerQuantity<CorrespondenceReport>,
    /// Tool and timestamp recorded in the input file.
    pub source_provenance: Provenance,
    pub provenance: Provenance,
}

/// Analyze a stored spectrum file: dips, contrast metrics, regime label,
/// and dip/prediction correspondence for all four directional quantities.
pub fn analyze_report(cfg: &AnalyzeConfig) -> Result<AnalyzeReport> {
    let table = csvio::read_spectrum_csv(&cfg.input)?;
    let dips = PerQuantity::build(|q| find_dips(&table, q, cfg.min_prominence));
    let correspondence = PerQuantity::build(|q| {
        let expected = expected_positions(q, table.base.omega1(), table.base.omega2());
        let found = find_dips(&table, q, cfg.min_prominence);
        dip_correspondence(&found, &expected, cfg.tolerance)
    });
    let regime = classify_regime_with(
        &table.base,
        (table.axis.start(), table.axis.stop()),
        &cfg.thresholds,
    )?;
    Ok(AnalyzeReport {
        input: cfg.input.display().to_string(),
        params: ParamsReport::from(&table.base),
        base_delta: table.base_delta,
        axis: AxisReport {
            param: table.axis.param().as_str(),
            start: table.axis.start(),
            stop: table.axis.stop(),
            count: table.axis.count(),
        },
        min_prominence: cfg.min_prominence,
        tolerance: cfg.tolerance,
        dips,
        contrast: contrast_metrics(&table),
        regime,
        correspondence,
        source_provenance: table.provenance.clone(),
        provenance: Provenance::capture(),
    })
}

/// Analyze a stored spectrum and print the JSON report to stdout.
pub fn cmd_analyze(cfg: &AnalyzeConfig) -> Result<()> {
    let report = analyze_report(cfg)?;
    let json = emit_json(&report, cfg.outputs.json.as_deref())?;
    print!("{json}");
    Ok(())
}

// Re-exported so binary and tests can name the analysis entry points from
// one place.
pub use crate::analysis::is_unidirectional_dip;
