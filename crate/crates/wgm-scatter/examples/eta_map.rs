//! Forward transmission over detuning and fiber-resonator coupling.
//!
//! Sweeps the detuning against the fiber coupling rate, writes the grid as
//! CSV plus an SVG heatmap, and prints how deep the forward transmission
//! drops at the Zeeman branches as the coupling grows — the crossover from
//! reflection-dominated to transmission-dominated direction asymmetry.
//!
//! Run with: `cargo run --example eta_map`

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
    let eta_axis = AxisSpec::new(SweepParam::Eta, 0.0, 7.5, 301)?;

    let grid = sweep2d(
        &params,
        0.0,
        &delta_axis,
        &eta_axis,
        Quantity::TransmissionForward,
    )?;
    let csv_path = out.join("map_delta_eta.csv");
    let svg_path = out.join("map_delta_eta.svg");
    csvio::write_grid_csv(&csv_path, &grid)?;
    fs::write(&svg_path, svg::heatmap(&grid))?;
    println!("wrote {} and {}", csv_path.display(), svg_path.display());
    println!();

    let fine = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 601)?;
    println!("transmission floor and direction contrast vs coupling:");
    for eta in [0.5, 1.5, 2.5, 3.8, 5.0, 6.0, 7.5] {
        let p = params.with(SweepParam::Eta, eta)?;
        let table = sweep1d(&p, 0.0, &fine)?;
        let t_f = table.column(Quantity::TransmissionForward);
        let floor = t_f.iter().cloned().fold(f64::INFINITY, f64::min);
        let metrics = contrast_metrics(&table);
        println!(
            "  eta = {eta:>4}  min T_f = {floor:.4}  max |T_f - T_b| = {:.4}",
            metrics.max_contrast_t
        );
    }
    Ok(())
}
