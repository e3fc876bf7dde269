//! INI-style run configuration.
//!
//! A config file has up to four sections. `[system]` holds the physical
//! parameters (either `eta` directly, or the raw coupling `G` together with
//! the group velocity `v_g`), `[sweep]` defines the 1D axis or 2D grid,
//! `[analysis]` configures dip detection / verification, and `[output]`
//! names the files to write. Full-line comments start with `#`. Parsing is
//! strict: duplicate keys, keys outside a section, unsupported keys, and
//! sections a command does not use are all rejected with the offending name
//! in the message.
//!
//! Values can be overridden from the command line with
//! `--set section.key=value`, applied after the file is parsed.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::analysis::{RegimeThresholds, DEFAULT_MATCH_TOLERANCE, DEFAULT_MIN_PROMINENCE};
use crate::error::{Error, Result};
use crate::params::{eta_from_raw, SweepParam, SystemParams};
use crate::sweep::{AxisSpec, Quantity};

/// Default number of grid points per sweep axis.
pub const DEFAULT_AXIS_COUNT: usize = 601;

/// A parsed config file: ordered sections of ordered `key = value` pairs.
#[derive(Debug, Clone, Default)]
pub struct Ini {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Ini {
    fn section(&self, name: &str) -> Option<&[(String, String)]> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e.as_slice())
    }

    fn has_section(&self, name: &str) -> bool {
        self.section(name).is_some()
    }

    /// Apply one `section.key=value` override, replacing or inserting.
    pub fn apply_override(&mut self, raw: &str) -> Result<()> {
        let (path, value) = raw.split_once('=').ok_or_else(|| {
            Error::Config(format!("--set expects section.key=value, got `{raw}`"))
        })?;
        let (section, key) = path.split_once('.').ok_or_else(|| {
            Error::Config(format!("--set expects section.key=value, got `{raw}`"))
        })?;
        let (section, key, value) = (section.trim(), key.trim(), value.trim());
        if section.is_empty() || key.is_empty() {
            return Err(Error::Config(format!(
                "--set expects section.key=value, got `{raw}`"
            )));
        }
        let entries = match self.sections.iter_mut().find(|(n, _)| n == section) {
            Some((_, entries)) => entries,
            None => {
                self.sections.push((section.to_string(), Vec::new()));
                &mut self.sections.last_mut().expect("just pushed").1
            }
        };
        match entries.iter_mut().find(|(k, _)| k == key) {
            Some((_, v)) => *v = value.to_string(),
            None => entries.push((key.to_string(), value.to_string())),
        }
        Ok(())
    }
}

/// Parse INI text. Comments (`#` first) and blank lines are skipped;
/// everything else must be a `[section]` header or a `key = value` pair
/// inside one.
pub fn parse_ini(text: &str) -> Result<Ini> {
    let mut ini = Ini::default();
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let name = inner.strip_suffix(']').ok_or_else(|| {
                Error::Config(format!("line {no}: unterminated section header `{line}`"))
            })?;
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::Config(format!("line {no}: empty section name")));
            }
            if ini.has_section(name) {
                return Err(Error::Config(format!(
                    "line {no}: duplicate section [{name}]"
                )));
            }
            ini.sections.push((name.to_string(), Vec::new()));
        } else if let Some((key, value)) = line.split_once('=') {
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(Error::Config(format!("line {no}: empty key")));
            }
            let Some((section, entries)) = ini.sections.last_mut() else {
                return Err(Error::Config(format!(
                    "line {no}: key `{key}` appears before any [section]"
                )));
            };
            if entries.iter().any(|(k, _)| k == key) {
                return Err(Error::Config(format!(
                    "line {no}: duplicate key `{key}` in [{section}]"
                )));
            }
            entries.push((key.to_string(), value.to_string()));
        } else {
            return Err(Error::Config(format!(
                "line {no}: expected `key = value` or `[section]`, got `{line}`"
            )));
        }
    }
    Ok(ini)
}

/// One section's keys, consumed as they are read so that leftovers can be
/// rejected by name.
struct Reader {
    section: &'static str,
    map: BTreeMap<String, String>,
}

impl Reader {
    fn new(ini: &Ini, section: &'static str) -> Reader {
        let map = ini
            .section(section)
            .map(|entries| entries.iter().cloned().collect())
            .unwrap_or_default();
        Reader { section, map }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<String> {
        self.take(key).ok_or_else(|| {
            Error::Config(format!(
                "[{}] is missing required key `{key}`",
                self.section
            ))
        })
    }

    fn parse_f64(&self, key: &str, raw: &str) -> Result<f64> {
        raw.parse::<f64>().map_err(|_| {
            Error::Config(format!(
                "[{}] key `{key}` is not a number: `{raw}`",
                self.section
            ))
        })
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            Some(raw) => Ok(Some(self.parse_f64(key, &raw)?)),
            None => Ok(None),
        }
    }

    fn require_f64(&mut self, key: &str) -> Result<f64> {
        let raw = self.require(key)?;
        self.parse_f64(key, &raw)
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.take(key) {
            Some(raw) => raw.parse::<usize>().map(Some).map_err(|_| {
                Error::Config(format!(
                    "[{}] key `{key}` is not a non-negative integer: `{raw}`",
                    self.section
                ))
            }),
            None => Ok(None),
        }
    }

    fn require_u64(&mut self, key: &str) -> Result<u64> {
        let raw = self.require(key)?;
        raw.parse::<u64>().map_err(|_| {
            Error::Config(format!(
                "[{}] key `{key}` is not a non-negative integer: `{raw}`",
                self.section
            ))
        })
    }

    fn finish(self) -> Result<()> {
        if self.map.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&str> = self.map.keys().map(String::as_str).collect();
            Err(Error::Config(format!(
                "[{}] has unsupported key(s): {}",
                self.section,
                keys.join(", ")
            )))
        }
    }
}

fn ensure_sections(ini: &Ini, command: &str, allowed: &[&str]) -> Result<()> {
    for (name, _) in &ini.sections {
        if !allowed.iter().any(|a| a == name) {
            return Err(Error::Config(format!(
                "section [{name}] is not used by the {command} command (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn require_section(ini: &Ini, command: &str, name: &str) -> Result<()> {
    if ini.has_section(name) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "the {command} command needs a [{name}] section"
        )))
    }
}

/// Extract the system parameters and evaluation detuning from `[system]`.
fn system_from(ini: &Ini) -> Result<(SystemParams, f64)> {
    let mut r = Reader::new(ini, "system");
    let eta_direct = r.take_f64("eta")?;
    let big_g = r.take_f64("G")?;
    let v_g = r.take_f64("v_g")?;
    let eta = match (eta_direct, big_g, v_g) {
        (Some(eta), None, None) => eta,
        // The raw coupling pair is quoted in angular units; the model works
        // in cyclic units, hence the 2*pi.
        (None, Some(gg), Some(vg)) => eta_from_raw(gg, vg)? / std::f64::consts::TAU,
        (Some(_), _, _) => {
            return Err(Error::Config(
                "[system] key `eta` is mutually exclusive with `G`/`v_g`".into(),
            ));
        }
        (None, Some(_), None) => {
            return Err(Error::Config("[system] key `G` requires `v_g`".into()));
        }
        (None, None, Some(_)) => {
            return Err(Error::Config("[system] key `v_g` requires `G`".into()));
        }
        (None, None, None) => {
            return Err(Error::Config(
                "[system] is missing required key `eta` (or `G` together with `v_g`)".into(),
            ));
        }
    };
    let g = r.require_f64("g")?;
    let h = r.require_f64("h")?;
    let omega1 = r.require_f64("omega1")?;
    let omega2 = r.require_f64("omega2")?;
    let gamma = r.require_f64("gamma")?;
    let theta = r.require_f64("theta")?;
    let delta = r.take_f64("delta")?.unwrap_or(0.0);
    r.finish()?;
    let params = SystemParams::new(eta, g, h, omega1, omega2, gamma, theta)?;
    Ok((params, delta))
}

fn axis_from(r: &mut Reader, suffix: &str, default_param: Option<SweepParam>) -> Result<AxisSpec> {
    let axis_key = format!("axis{suffix}");
    let param = match (r.take(&axis_key), default_param) {
        (Some(raw), _) => raw.parse::<SweepParam>()?,
        (None, Some(default)) => default,
        (None, None) => {
            return Err(Error::Config(format!(
                "[{}] is missing required key `{axis_key}`",
                r.section
            )));
        }
    };
    let start = r.require_f64(&format!("start{suffix}"))?;
    let stop = r.require_f64(&format!("stop{suffix}"))?;
    let count = r
        .take_usize(&format!("count{suffix}"))?
        .unwrap_or(DEFAULT_AXIS_COUNT);
    AxisSpec::new(param, start, stop, count)
}

/// Output file paths named in `[output]`.
#[derive(Debug, Clone, Default)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

fn outputs_from(ini: &Ini, csv: bool, json: bool, svg: bool) -> Result<OutputPaths> {
    let mut r = Reader::new(ini, "output");
    let mut paths = OutputPaths::default();
    if csv {
        paths.csv = r.take("csv").map(PathBuf::from);
    }
    if json {
        paths.json = r.take("json").map(PathBuf::from);
    }
    if svg {
        paths.svg = r.take("svg").map(PathBuf::from);
    }
    r.finish()?;
    Ok(paths)
}

/// Fully-resolved configuration for a 1D spectrum run.
#[derive(Debug, Clone)]
pub struct SpectrumConfig {
    pub params: SystemParams,
    pub base_delta: f64,
    pub axis: AxisSpec,
    pub outputs: OutputPaths,
}

pub fn spectrum_config(ini: &Ini) -> Result<SpectrumConfig> {
    ensure_sections(ini, "spectrum", &["system", "sweep", "output"])?;
    require_section(ini, "spectrum", "system")?;
    require_section(ini, "spectrum", "sweep")?;
    let (params, base_delta) = system_from(ini)?;
    let mut r = Reader::new(ini, "sweep");
    let axis = axis_from(&mut r, "", Some(SweepParam::Delta))?;
    r.finish()?;
    let outputs = outputs_from(ini, true, false, true)?;
    Ok(SpectrumConfig {
        params,
        base_delta,
        axis,
        outputs,
    })
}

/// Fully-resolved configuration for a 2D map run.
#[derive(Debug, Clone)]
pub struct MapConfig {
    pub params: SystemParams,
    pub base_delta: f64,
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
    pub quantity: Quantity,
    pub outputs: OutputPaths,
}

pub fn map_config(ini: &Ini) -> Result<MapConfig> {
    ensure_sections(ini, "map", &["system", "sweep", "output"])?;
    require_section(ini, "map", "system")?;
    require_section(ini, "map", "sweep")?;
    let (params, base_delta) = system_from(ini)?;
    let mut r = Reader::new(ini, "sweep");
    let axis1 = axis_from(&mut r, "1", None)?;
    let axis2 = axis_from(&mut r, "2", None)?;
    let quantity = r.require("quantity")?.parse::<Quantity>()?;
    r.finish()?;
    let outputs = outputs_from(ini, true, false, true)?;
    Ok(MapConfig {
        params,
        base_delta,
        axis1,
        axis2,
        quantity,
        outputs,
    })
}

/// Fully-resolved configuration for a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub draws: usize,
    pub seed: u64,
    pub outputs: OutputPaths,
}

pub fn verify_config(ini: &Ini) -> Result<VerifyConfig> {
    ensure_sections(ini, "verify", &["analysis", "output"])?;
    require_section(ini, "verify", "analysis")?;
    let mut r = Reader::new(ini, "analysis");
    let draws = r
        .take_usize("draws")?
        .ok_or_else(|| Error::Config("[analysis] is missing required key `draws`".into()))?;
    if draws == 0 {
        return Err(Error::Config(
            "[analysis] key `draws` must be at least 1".into(),
        ));
    }
    let seed = r.require_u64("seed")?;
    r.finish()?;
    let outputs = outputs_from(ini, false, true, false)?;
    Ok(VerifyConfig {
        draws,
        seed,
        outputs,
    })
}

/// Fully-resolved configuration for analyzing an existing spectrum file.
#[derive(Debug, Clone)]
pub struct AnalyzeConfig {
    pub input: PathBuf,
    pub min_prominence: f64,
    pub tolerance: f64,
    pub thresholds: RegimeThresholds,
    pub outputs: OutputPaths,
}

pub fn analyze_config(ini: &Ini) -> Result<AnalyzeConfig> {
    ensure_sections(ini, "analyze", &["analysis", "output"])?;
    require_section(ini, "analyze", "analysis")?;
    let mut r = Reader::new(ini, "analysis");
    let input = PathBuf::from(r.require("input")?);
    let min_prominence = r
        .take_f64("min_prominence")?
        .unwrap_or(DEFAULT_MIN_PROMINENCE);
    let tolerance = r.take_f64("tolerance")?.unwrap_or(DEFAULT_MATCH_TOLERANCE);
    let defaults = RegimeThresholds::default();
    let thresholds = RegimeThresholds {
        tau_r: r.take_f64("tau_r")?.unwrap_or(defaults.tau_r),
        tau_t: r.take_f64("tau_t")?.unwrap_or(defaults.tau_t),
        resolution: r.take_usize("resolution")?.unwrap_or(defaults.resolution),
    };
    r.finish()?;
    let outputs = outputs_from(ini, false, true, false)?;
    Ok(AnalyzeConfig {
        input,
        min_prominence,
        tolerance,
        thresholds,
        outputs,
    })
}
