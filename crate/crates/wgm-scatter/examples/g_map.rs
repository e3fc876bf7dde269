//! Forward transmission over detuning and dot-resonator coupling.
//!
//! Sweeps the detuning against the coupling between each quantum dot and
//! its resonator mode, writes the grid as CSV plus an SVG heatmap, and
//! prints where the transmission dips sit for a few coupling values — the
//! dips track the dressed Zeeman branches of the dots.
//!
//! Run with: `cargo run --example g_map`

use std::fs;
use std::path::Path;

use wgm_scatter::csvio;
use wgm_scatter::{
    find_dips, svg, sweep1d, sweep2d, AxisSpec, Quantity, SweepParam, SystemParams,
    DEFAULT_MIN_PROMINENCE,
};

fn main() -> wgm_scatter::Result<()> {
    let out = Path::new("out");
    fs::create_dir_all(out)?;

    let params = SystemParams::new(3.8, 1.0, 1.0, 2.0, 3.5, 0.2, std::f64::consts::PI)?;
    let delta_axis = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 301)?;
    let g_axis = AxisSpec::new(SweepParam::G, 0.0, 2.0, 301)?;

    let grid = sweep2d(
        &params,
        0.0,
        &delta_axis,
        &g_axis,
        Quantity::TransmissionForward,
    )?;
    let csv_path = out.join("map_delta_g.csv");
    let svg_path = out.join("map_delta_g.svg");
    csvio::write_grid_csv(&csv_path, &grid)?;
    fs::write(&svg_path, svg::heatmap(&grid))?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    println!();

    let fine = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 601)?;
    println!("forward-transmission dip locations vs dot-resonator coupling:");
    for g in [0.5, 1.0, 1.5, 2.0] {
        let p = params.with(SweepParam::G, g)?;
        let table = sweep1d(&p, 0.0, &fine)?;
        let dips = find_dips(
            &table,
            Quantity::TransmissionForward,
            DEFAULT_MIN_PROMINENCE,
        );
        let locations: Vec<String> = dips.iter().map(|d| format!("{:+.3}", d.location)).collect();
        println!("  g = {g:>3}  dips at [{}]", locations.join(", "));
    }
    Ok(())
}
