//! CSV serialization of sweep results.
//!
//! Both formats open with a `#`-prefixed metadata block that makes the file
//! self-describing: tool and timestamp, every system parameter with a unit
//! suffix, the evaluation detuning, and the axis definitions. Floats are
//! written with Rust's shortest round-trip formatting, so reading a file
//! back reproduces every value bit for bit.
//!
//! 1D spectrum files carry one row per grid point with all six quantities:
//!
//! ```text
//! # wgm-scatter spectrum v1
//! # generated_by = wgm-scatter 0.1.0
//! # timestamp = 1970-01-01T00:00:00Z
//! # eta_GHz = 1
//! ...
//! # axis = delta
//! # axis_start = -6
//! # axis_stop = 6
//! # axis_count = 601
//! delta_GHz,R_f,R_b,T_f,T_b,contrast_R,contrast_T
//! -6,0.0123,...
//! ```
//!
//! 2D map files carry one row per grid point of a single quantity, in
//! row-major order (axis1 outer, axis2 inner), under the fixed header
//! `axis1,axis2,value`; the axis identities live in the metadata block.

use std::path::Path;

use crate::error::{Error, Result};
use crate::params::{SweepParam, SystemParams};
use crate::scatter::ScatteringPowers;
use crate::sweep::{AxisSpec, GridTable, Provenance, SpectrumTable};

const SPECTRUM_MAGIC: &str = "# wgm-scatter spectrum v1";
const MAP_MAGIC: &str = "# wgm-scatter map v1";

fn push_metadata(out: &mut String, key: &str, value: impl std::fmt::Display) {
    out.push_str("# ");
    out.push_str(key);
    out.push_str(" = ");
    out.push_str(&value.to_string());
    out.push('\n');
}

fn push_common_metadata(
    out: &mut String,
    provenance: &Provenance,
    base: &SystemParams,
    base_delta: f64,
) {
    push_metadata(out, "generated_by", &provenance.tool);
    push_metadata(out, "timestamp", &provenance.timestamp);
    for (key, value) in base.metadata_fields() {
        push_metadata(out, key, value);
    }
    push_metadata(out, "base_delta_GHz", base_delta);
}

fn push_axis_metadata(out: &mut String, prefix: &str, axis: &AxisSpec) {
    push_metadata(out, prefix, axis.param().as_str());
    push_metadata(out, &format!("{prefix}_start"), axis.start());
    push_metadata(out, &format!("{prefix}_stop"), axis.stop());
    push_metadata(out, &format!("{prefix}_count"), axis.count());
}

/// Header line of a 1D spectrum file for a given axis.
pub fn spectrum_header(axis_param: SweepParam) -> String {
    format!(
        "{},R_f,R_b,T_f,T_b,contrast_R,contrast_T",
        axis_param.column_header()
    )
}

/// Render a 1D sweep as a CSV document.
pub fn spectrum_csv_string(table: &SpectrumTable) -> String {
    let mut out = String::new();
    out.push_str(SPECTRUM_MAGIC);
    out.push('\n');
    push_common_metadata(&mut out, &table.provenance, &table.base, table.base_delta);
    push_axis_metadata(&mut out, "axis", &table.axis);
    out.push_str(&spectrum_header(table.axis.param()));
    out.push('\n');
    for (value, p) in table.axis_values.iter().zip(&table.powers) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            value, p.r_f, p.r_b, p.t_f, p.t_b, p.contrast_r, p.contrast_t
        ));
    }
    out
}

/// Render a 2D sweep as a CSV document.
pub fn grid_csv_string(table: &GridTable) -> String {
    let mut out = String::new();
    out.push_str(MAP_MAGIC);
    out.push('\n');
    push_common_metadata(&mut out, &table.provenance, &table.base, table.base_delta);
    push_axis_metadata(&mut out, "axis1", &table.axis1);
    push_axis_metadata(&mut out, "axis2", &table.axis2);
    push_metadata(&mut out, "quantity", table.quantity.as_str());
    out.push_str("axis1,axis2,value\n");
    let values1 = table.axis1.grid();
    let values2 = table.axis2.grid();
    for (i, v1) in values1.iter().enumerate() {
        for (j, v2) in values2.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", v1, v2, table.value(i, j)));
        }
    }
    out
}

/// Write a 1D sweep to a CSV file.
pub fn write_spectrum_csv(path: &Path, table: &SpectrumTable) -> Result<()> {
    std::fs::write(path, spectrum_csv_string(table))?;
    Ok(())
}

/// Write a 2D sweep to a CSV file.
pub fn write_grid_csv(path: &Path, table: &GridTable) -> Result<()> {
    std::fs::write(path, grid_csv_string(table))?;
    Ok(())
}

struct MetadataBlock {
    entries: Vec<(String, String)>,
}

impl MetadataBlock {
    fn get(&self, key: &str) -> Result<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::CsvFormat(format!("missing metadata key `{key}`")))
    }

    fn get_f64(&self, key: &str) -> Result<f64> {
        let raw = self.get(key)?;
        raw.parse::<f64>()
            .map_err(|_| Error::CsvFormat(format!("metadata key `{key}` is not a number: `{raw}`")))
    }

    fn get_usize(&self, key: &str) -> Result<usize> {
        let raw = self.get(key)?;
        raw.parse::<usize>()
            .map_err(|_| Error::CsvFormat(format!("metadata key `{key}` is not a count: `{raw}`")))
    }
}

fn parse_field(line_no: usize, raw: &str) -> Result<f64> {
    raw.parse::<f64>()
        .map_err(|_| Error::CsvFormat(format!("line {line_no}: field `{raw}` is not a number")))
}

/// Parse a 1D spectrum CSV document produced by [`spectrum_csv_string`].
///
/// The metadata block is used to reconstruct the system parameters and the
/// axis; the header is checked verbatim; data values (including the
/// contrast columns) are taken from the file rather than recomputed.
pub fn read_spectrum_csv_str(content: &str) -> Result<SpectrumTable> {
    let mut lines = content.lines().enumerate().peekable();

    match lines.next() {
        Some((_, line)) if line == SPECTRUM_MAGIC => {}
        Some((_, line)) => {
            return Err(Error::CsvFormat(format!(
                "not a spectrum file: first line is `{line}`, expected `{SPECTRUM_MAGIC}`"
            )));
        }
        None => return Err(Error::CsvFormat("empty file".into())),
    }

    let mut entries = Vec::new();
    while let Some((_, line)) = lines.peek() {
        let Some(rest) = line.strip_prefix("# ") else {
            break;
        };
        let (key, value) = rest
            .split_once(" = ")
            .ok_or_else(|| Error::CsvFormat(format!("malformed metadata line `{line}`")))?;
        entries.push((key.to_string(), value.to_string()));
        lines.next();
    }
    let meta = MetadataBlock { entries };

    let base = SystemParams::new(
        meta.get_f64("eta_GHz")?,
        meta.get_f64("g_GHz")?,
        meta.get_f64("h_GHz")?,
        meta.get_f64("omega1_GHz")?,
        meta.get_f64("omega2_GHz")?,
        meta.get_f64("gamma_GHz")?,
        meta.get_f64("theta_rad")?,
    )?;
    let base_delta = meta.get_f64("base_delta_GHz")?;
    let axis_param: SweepParam = meta.get("axis")?.parse()?;
    let axis = AxisSpec::new(
        axis_param,
        meta.get_f64("axis_start")?,
        meta.get_f64("axis_stop")?,
        meta.get_usize("axis_count")?,
    )?;
    let provenance = Provenance {
        tool: meta.get("generated_by").unwrap_or("unknown").to_string(),
        timestamp: meta.get("timestamp").unwrap_or("").to_string(),
    };

    let expected_header = spectrum_header(axis_param);
    match lines.next() {
        Some((_, line)) if line == expected_header => {}
        Some((no, line)) => {
            return Err(Error::CsvFormat(format!(
                "line {}: bad header `{line}`, expected `{expected_header}`",
                no + 1
            )));
        }
        None => return Err(Error::CsvFormat("missing header line".into())),
    }

    let mut axis_values = Vec::new();
    let mut powers = Vec::new();
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::CsvFormat(format!(
                "line {}: expected 7 fields, found {}",
                no + 1,
                fields.len()
            )));
        }
        axis_values.push(parse_field(no + 1, fields[0])?);
        powers.push(ScatteringPowers {
            r_f: parse_field(no + 1, fields[1])?,
            r_b: parse_field(no + 1, fields[2])?,
            t_f: parse_field(no + 1, fields[3])?,
            t_b: parse_field(no + 1, fields[4])?,
            contrast_r: parse_field(no + 1, fields[5])?,
            contrast_t: parse_field(no + 1, fields[6])?,
        });
    }
    if axis_values.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if axis_values.len() != axis.count() {
        return Err(Error::CsvFormat(format!(
            "metadata declares {} rows but file has {}",
            axis.count(),
            axis_values.len()
        )));
    }

    Ok(SpectrumTable {
        axis,
        base,
        base_delta,
        axis_values,
        powers,
        provenance,
    })
}

/// Read a 1D spectrum CSV file.
pub fn read_spectrum_csv(path: &Path) -> Result<SpectrumTable> {
    read_spectrum_csv_str(&std::fs::read_to_string(path)?)
}
