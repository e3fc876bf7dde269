//! Locate the spectral dips and match them to the Zeeman branches.
//!
//! For the weak-coupling operating point this runs the full analysis
//! pipeline by hand: sweep the detuning, detect dips in all four power
//! curves, pair each dip with the branch position predicted from the two
//! Zeeman splittings, and test which dips are one-directional (deep in one
//! propagation direction while the opposite direction stays high).
//!
//! Run with: `cargo run --example dip_study`

use wgm_scatter::{
    dip_correspondence, expected_positions, find_dips, is_unidirectional_dip, sweep1d, AxisSpec,
    Quantity, SweepParam, SystemParams, DEFAULT_MATCH_TOLERANCE, DEFAULT_MIN_PROMINENCE,
};

fn main() -> wgm_scatter::Result<()> {
    let params = SystemParams::new(1.0, 1.0, 1.0, 2.0, 3.5, 0.2, std::f64::consts::PI)?;
    let axis = AxisSpec::new(SweepParam::Delta, -6.0, 6.0, 601)?;
    let table = sweep1d(&params, 0.0, &axis)?;

    println!(
        "Zeeman splittings: omega1 = {}, omega2 = {}",
        params.omega1(),
        params.omega2()
    );
    println!(
        "dip detection: min prominence {DEFAULT_MIN_PROMINENCE}, \
         match tolerance {DEFAULT_MATCH_TOLERANCE}"
    );

    for quantity in [
        Quantity::ReflectionForward,
        Quantity::ReflectionBackward,
        Quantity::TransmissionForward,
        Quantity::TransmissionBackward,
    ] {
        let dips = find_dips(&table, quantity, DEFAULT_MIN_PROMINENCE);
        let expected = expected_positions(quantity, params.omega1(), params.omega2());
        let report = dip_correspondence(&dips, &expected, DEFAULT_MATCH_TOLERANCE);

        println!();
        println!(
            "{}: {} dip(s), predicted branches at {:?}",
            quantity.as_str(),
            dips.len(),
            expected
        );
        for m in &report.matched {
            let one_way = is_unidirectional_dip(&table, quantity, &m.dip);
            println!(
                "  predicted {:+.2} -> dip at {:+.4} (offset {:+.4}), \
                 depth {:.4}, prominence {:.4}, width {:.3}{}",
                m.expected,
                m.dip.location,
                m.offset,
                m.dip.depth,
                m.dip.prominence,
                m.dip.width_at_half_prominence,
                if one_way { ", one-directional" } else { "" }
            );
        }
        for e in &report.unmatched_expected {
            println!("  predicted {e:+.2} -> no dip within tolerance");
        }
        for d in &report.unmatched_dips {
            println!(
                "  extra dip at {:+.4} (depth {:.4}) matches no branch",
                d.location, d.depth
            );
        }
    }
    Ok(())
}
