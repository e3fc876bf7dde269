//! Forward reflection over detuning and intra-resonator backscattering.
//!
//! Sweeps the detuning against the backscattering rate that couples the
//! co- and counter-propagating resonator modes, writes the grid as CSV plus
//! an SVG heatmap, and prints how the reflection contrast grows once the
//! backscattering channel opens — with no backscattering the fiber photon
//! cannot reverse direction at all.
//!
//! Run with: `cargo run --example h_map`

use std::fs;
use std::path::Path;

use wgm_scatter::csvio;
use wgm_scatter::{
    contrast_metrics, svg, sweep1d, sweep2d, AxisSpec, Quantity, SweepParam, SystemParams,
};

fn main() -> wgm_scatter::Result<()> {
    let out = Path::new("out");
    fs::create_dir_all(out)?;

    let params = SystemParams::new(3.8, 1.0, 1.0, 2.0, 3.5, 0.2, std::f64::consts::PI)?;
    let delta_axis = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 301)?;
    let h_axis = AxisSpec::new(SweepParam::H, 0.0, 2.0, 301)?;

    let grid = sweep2d(
        &params,
        0.0,
        &delta_axis,
        &h_axis,
        Quantity::ReflectionForward,
    )?;
    let csv_path = out.join("map_delta_h.csv");
    let svg_path = out.join("map_delta_h.svg");
    csvio::write_grid_csv(&csv_path, &grid)?;
    fs::write(&svg_path, svg::heatmap(&grid))?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    println!();

    let fine = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 601)?;
    println!("reflection strength and direction contrast vs backscattering:");
    for h in [0.0, 0.3, 0.6, 0.9, 1.2, 1.5, 2.0] {
        let p = params.with(SweepParam::H, h)?;
        let table = sweep1d(&p, 0.0, &fine)?;
        let r_f = table.column(Quantity::ReflectionForward);
        let peak = r_f.iter().cloned().fold(0.0_f64, f64::max);
        let metrics = contrast_metrics(&table);
        println!(
            "  h = {h:>3}  max R_f = {peak:.4}  max |R_f - R_b| = {:.4}",
            metrics.max_contrast_r
        );
    }
    Ok(())
}
