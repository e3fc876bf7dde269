//! Self-contained SVG rendering for sweep results: a four-curve line plot
//! for 1D spectra and a viridis heatmap for 2D maps.
//!
//! Output is deterministic: geometry is formatted with two decimal places,
//! colors come from a fixed lookup table, and nothing depends on the
//! environment. Forward quantities are drawn solid, backward quantities
//! dashed; reflection is red, transmission near-black.

use crate::sweep::{GridTable, SpectrumTable};

const REFLECTION_COLOR: &str = "#c62828";
const TRANSMISSION_COLOR: &str = "#111111";
const DASH: &str = "6 4";

/// Ten anchor colors of the viridis map, interpolated to 256 entries.
const VIRIDIS_ANCHORS: [(u8, u8, u8); 10] = [
    (0x44, 0x01, 0x54),
    (0x48, 0x28, 0x78),
    (0x3e, 0x49, 0x89),
    (0x31, 0x68, 0x8e),
    (0x26, 0x82, 0x8e),
    (0x1f, 0x9e, 0x89),
    (0x35, 0xb7, 0x79),
    (0x6e, 0xce, 0x58),
    (0xb5, 0xde, 0x2b),
    (0xfd, 0xe7, 0x25),
];

/// Interpolated viridis entry for an index in `0..256`.
fn viridis(index: usize) -> String {
    let t = index as f64 / 255.0;
    let scaled = t * 9.0;
    let lo = scaled.floor() as usize;
    let hi = (lo + 1).min(9);
    let frac = scaled - lo as f64;
    let lerp = |a: u8, b: u8| -> u8 { (a as f64 + (b as f64 - a as f64) * frac).round() as u8 };
    let (r0, g0, b0) = VIRIDIS_ANCHORS[lo];
    let (r1, g1, b1) = VIRIDIS_ANCHORS[hi];
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(r0, r1),
        lerp(g0, g1),
        lerp(b0, b1)
    )
}

/// Indices used to downsample `count` grid points to at most `cap` cells,
/// nearest-neighbor, always including both ends.
fn sample_indices(count: usize, cap: usize) -> Vec<usize> {
    if count <= cap {
        return (0..count).collect();
    }
    (0..cap)
        .map(|k| ((k as f64) * ((count - 1) as f64) / ((cap - 1) as f64)).round() as usize)
        .collect()
}

/// Compact tick label: fixed three decimals with trailing zeros trimmed.
fn tick_label(value: f64) -> String {
    let mut s = format!("{value:.3}");
    while s.contains('.') && (s.ends_with('0') || s.ends_with('.')) {
        s.pop();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        self.left + (v - self.x_min) / (self.x_max - self.x_min) * self.width
    }

    fn y(&self, v: f64) -> f64 {
        self.top + self.height - (v - self.y_min) / (self.y_max - self.y_min) * self.height
    }
}

fn push_axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    out.push_str(&format!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#444444\"/>\n",
        f.left, f.top, f.width, f.height
    ));
    let divisions = 6;
    for k in 0..=divisions {
        let value = f.x_min + (f.x_max - f.x_min) * (k as f64) / (divisions as f64);
        let x = f.x(value);
        let y0 = f.top + f.height;
        out.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#444444\"/>\n",
            y0 + 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
            y0 + 18.0,
            tick_label(value)
        ));
    }
    let divisions = 5;
    for k in 0..=divisions {
        let value = f.y_min + (f.y_max - f.y_min) * (k as f64) / (divisions as f64);
        let y = f.y(value);
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#444444\"/>\n",
            f.left - 5.0,
            f.left
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
            f.left - 9.0,
            y + 4.0,
            tick_label(value)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">{x_label}</text>\n",
        f.left + f.width / 2.0,
        f.top + f.height + 40.0
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\" transform=\"rotate(-90 {:.2} {:.2})\">{y_label}</text>\n",
        f.left - 50.0,
        f.top + f.height / 2.0,
        f.left - 50.0,
        f.top + f.height / 2.0
    ));
}

/// Render a 1D spectrum as a four-curve SVG line plot.
///
/// Solid red: forward reflection; dashed red: backward reflection;
/// solid black: forward transmission; dashed black: backward transmission.
pub fn line_plot(table: &SpectrumTable) -> String {
    let (width, height) = (800.0, 500.0);
    let frame = Frame {
        left: 70.0,
        top: 30.0,
        width: width - 100.0,
        height: height - 100.0,
        x_min: table.axis.start(),
        x_max: table.axis.stop(),
        y_min: 0.0,
        y_max: {
            let mut max = 0.0f64;
            for p in &table.powers {
                max = max.max(p.r_f).max(p.r_b).max(p.t_f).max(p.t_b);
            }
            // Round up to the next 0.1 so curves never touch the frame top.
            ((max * 10.0).floor() + 1.0).min(11.0) / 10.0
        },
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    let x_label = format!(
        "{} ({})",
        table.axis.param().as_str(),
        table.axis.param().unit()
    );
    push_axes(&mut out, &frame, &x_label, "power");

    let curves: [(&str, &str, bool, Vec<f64>); 4] = [
        (
            "R_f",
            REFLECTION_COLOR,
            false,
            table.powers.iter().map(|p| p.r_f).collect(),
        ),
        (
            "R_b",
            REFLECTION_COLOR,
            true,
            table.powers.iter().map(|p| p.r_b).collect(),
        ),
        (
            "T_f",
            TRANSMISSION_COLOR,
            false,
            table.powers.iter().map(|p| p.t_f).collect(),
        ),
        (
            "T_b",
            TRANSMISSION_COLOR,
            true,
            table.powers.iter().map(|p| p.t_b).collect(),
        ),
    ];
    for (_, color, dashed, values) in &curves {
        let mut points = String::new();
        for (x, y) in table.axis_values.iter().zip(values) {
            points.push_str(&format!("{:.2},{:.2} ", frame.x(*x), frame.y(*y)));
        }
        let dash_attr = if *dashed {
            format!(" stroke-dasharray=\"{DASH}\"")
        } else {
            String::new()
        };
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash_attr}/>\n",
            points.trim_end()
        ));
    }

    // Legend, top-right inside the frame.
    let legend_x = frame.left + frame.width - 120.0;
    for (k, (name, color, dashed, _)) in curves.iter().enumerate() {
        let y = frame.top + 16.0 + 18.0 * (k as f64);
        let dash_attr = if *dashed {
            format!(" stroke-dasharray=\"{DASH}\"")
        } else {
            String::new()
        };
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"{dash_attr}/>\n",
            legend_x,
            legend_x + 34.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">{name}</text>\n",
            legend_x + 42.0,
            y + 4.0
        ));
    }

    out.push_str("</svg>\n");
    out
}

/// Largest cell count per axis in a rendered heatmap.
const HEATMAP_CELL_CAP: usize = 241;

/// Render a 2D map as a viridis heatmap with a colorbar.
///
/// Axis 1 runs horizontally, axis 2 vertically (increasing upward). Grids
/// larger than [`HEATMAP_CELL_CAP`] per axis are downsampled by nearest
/// neighbor; the color scale spans the sampled data range.
pub fn heatmap(grid: &GridTable) -> String {
    let (width, height) = (780.0, 640.0);
    let frame = Frame {
        left: 80.0,
        top: 40.0,
        width: 560.0,
        height: 540.0,
        x_min: grid.axis1.start(),
        x_max: grid.axis1.stop(),
        y_min: grid.axis2.start(),
        y_max: grid.axis2.stop(),
    };

    let rows = sample_indices(grid.axis1.count(), HEATMAP_CELL_CAP);
    let cols = sample_indices(grid.axis2.count(), HEATMAP_CELL_CAP);

    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    for &i in &rows {
        for &j in &cols {
            let v = grid.value(i, j);
            v_min = v_min.min(v);
            v_max = v_max.max(v);
        }
    }
    let span = v_max - v_min;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    let cell_w = frame.width / rows.len() as f64;
    let cell_h = frame.height / cols.len() as f64;
    for (kx, _) in rows.iter().enumerate() {
        for (ky, _) in cols.iter().enumerate() {
            let v = grid.value(rows[kx], cols[ky]);
            let t = if span > 0.0 { (v - v_min) / span } else { 0.5 };
            let index = (t * 255.0).round().clamp(0.0, 255.0) as usize;
            let x = frame.left + cell_w * kx as f64;
            // ky = 0 is the bottom row.
            let y = frame.top + frame.height - cell_h * (ky + 1) as f64;
            out.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
                cell_w + 0.3,
                cell_h + 0.3,
                viridis(index)
            ));
        }
    }

    let x_label = format!(
        "{} ({})",
        grid.axis1.param().as_str(),
        grid.axis1.param().unit()
    );
    let y_label = format!(
        "{} ({})",
        grid.axis2.param().as_str(),
        grid.axis2.param().unit()
    );
    push_axes(&mut out, &frame, &x_label, &y_label);

    // Title names the mapped quantity.
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">{}</text>\n",
        frame.left + frame.width / 2.0,
        grid.quantity.as_str()
    ));

    // Colorbar: 64 sampled swatches, max at the top.
    let bar_x = frame.left + frame.width + 24.0;
    let bar_w = 18.0;
    let swatches = 64;
    let swatch_h = frame.height / swatches as f64;
    for s in 0..swatches {
        let t = s as f64 / (swatches - 1) as f64;
        let index = (t * 255.0).round() as usize;
        let y = frame.top + frame.height - swatch_h * (s + 1) as f64;
        out.push_str(&format!(
            "<rect x=\"{bar_x:.2}\" y=\"{y:.2}\" width=\"{bar_w:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
            swatch_h + 0.3,
            viridis(index)
        ));
    }
    out.push_str(&format!(
        "<rect x=\"{bar_x:.2}\" y=\"{:.2}\" width=\"{bar_w:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#444444\"/>\n",
        frame.top, frame.height
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
        bar_x + bar_w + 6.0,
        frame.top + 8.0,
        tick_label(v_max)
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
        bar_x + bar_w + 6.0,
        frame.top + frame.height,
        tick_label(v_min)
    ));

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{SweepParam, SystemParams};
    use crate::sweep::{sweep1d, sweep2d, AxisSpec, Quantity};

    const PI: f64 = std::f64::consts::PI;

    fn base() -> SystemParams {
        SystemParams::new(1.0, 1.0, 1.0, 2.0, 3.5, 0.2, PI).unwrap()
    }

    #[test]
    fn viridis_endpoints_match_the_anchor_table() {
        assert_eq!(viridis(0), "#440154");
        assert_eq!(viridis(255), "#fde725");
        // Interior entries are valid hex and change across the range.
        assert_ne!(viridis(80), viridis(180));
        for idx in [0, 64, 128, 192, 255] {
            let c = viridis(idx);
            assert_eq!(c.len(), 7);
            assert!(c.starts_with('#'));
        }
    }

    #[test]
    fn downsampling_keeps_ends_and_caps_length() {
        assert_eq!(sample_indices(100, 241), (0..100).collect::<Vec<_>>());
        let sampled = sample_indices(601, 241);
        assert_eq!(sampled.len(), 241);
        assert_eq!(sampled[0], 0);
        assert_eq!(*sampled.last().unwrap(), 600);
        assert!(sampled.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tick_labels_are_trimmed() {
        assert_eq!(tick_label(1.0), "1");
        assert_eq!(tick_label(0.25), "0.25");
        assert_eq!(tick_label(-3.5), "-3.5");
        assert_eq!(tick_label(5.6789), "5.679");
        assert_eq!(tick_label(-0.0001), "0");
    }

    #[test]
    fn line_plot_draws_four_styled_curves() {
        let axis = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 61).unwrap();
        let table = sweep1d(&base(), 0.0, &axis).unwrap();
        let svg = line_plot(&table);
        assert_eq!(svg.matches("<polyline").count(), 4);
        // Two dashed curves plus two dashed legend keys.
        assert_eq!(svg.matches("stroke-dasharray").count(), 4);
        assert_eq!(svg.matches(REFLECTION_COLOR).count(), 4);
        assert!(svg.contains("delta (GHz)"));
        for name in ["R_f", "R_b", "T_f", "T_b"] {
            assert!(
                svg.contains(&format!(">{name}</text>")),
                "legend entry {name}"
            );
        }
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let axis = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 31).unwrap();
        let table = sweep1d(&base(), 0.0, &axis).unwrap();
        assert_eq!(line_plot(&table), line_plot(&table));

        let a2 = AxisSpec::new(SweepParam::Eta, 0.5, 6.0, 7).unwrap();
        let grid = sweep2d(&base(), 0.0, &axis, &a2, Quantity::TransmissionForward).unwrap();
        assert_eq!(heatmap(&grid), heatmap(&grid));
    }

    #[test]
    fn heatmap_draws_every_cell_and_a_colorbar() {
        let a1 = AxisSpec::new(SweepParam::Delta, -2.0, 2.0, 5).unwrap();
        let a2 = AxisSpec::new(SweepParam::Theta, 0.0, 2.0 * PI, 4).unwrap();
        let grid = sweep2d(&base(), 0.0, &a1, &a2, Quantity::ReflectionForward).unwrap();
        let svg = heatmap(&grid);
        // 20 data cells + 64 colorbar swatches + background + 2 frames.
        assert_eq!(svg.matches("<rect").count(), 20 + 64 + 1 + 2);
        assert!(svg.contains(">R_f</text>"));
        assert!(svg.contains("delta (GHz)"));
        assert!(svg.contains("theta (rad)"));
    }
}
