//! Cross-check the closed-form amplitudes against an independent solve.
//!
//! The closed forms are algebraic solutions of a 12-unknown stationary
//! scattering system. This example rebuilds that system coefficient by
//! coefficient, solves it with LU elimination, and compares the two routes
//! at a handful of named operating points plus a batch of random draws.
//!
//! Run with: `cargo run --example oracle_check`

use wgm_scatter::{compare, SystemParams};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> wgm_scatter::Result<()> {
    println!("named operating points:");
    let pi = std::f64::consts::PI;
    let named = [
        (
            "weak coupling",
            SystemParams::new(1.0, 1.0, 1.0, 2.0, 3.5, 0.2, pi)?,
            -2.0,
        ),
        (
            "intermediate",
            SystemParams::new(3.8, 1.0, 1.0, 2.0, 3.5, 0.2, pi)?,
            -2.0,
        ),
        (
            "strong coupling",
            SystemParams::new(6.0, 1.0, 1.0, 2.0, 3.5, 0.2, pi)?,
            3.5,
        ),
        (
            "lossless",
            SystemParams::new(2.0, 0.7, 0.4, 1.0, 2.0, 0.0, 1.3)?,
            0.8,
        ),
    ];
    for (label, params, delta) in named {
        let report = compare(&params, delta)?;
        print!(
            "  {label:<16} delta = {delta:>4}  max rel err = {:.3e}  residual = {:.3e}",
            report.max_rel_err,
            report.residual_forward.max(report.residual_backward),
        );
        if let Some(flux) = report.flux_dev {
            print!("  flux dev = {flux:.3e}");
        }
        println!("  {}", if report.passed { "agree" } else { "DISAGREE" });
    }

    println!();
    println!("random draws:");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_rel = 0.0_f64;
    let mut worst_abs = 0.0_f64;
    let mut failures = 0usize;
    let draws = 500;
    for _ in 0..draws {
        let params = SystemParams::new(
            rng.gen::<f64>() * 10.0,
            rng.gen::<f64>() * 10.0,
            rng.gen::<f64>() * 10.0,
            -5.0 + rng.gen::<f64>() * 10.0,
            -5.0 + rng.gen::<f64>() * 10.0,
            rng.gen::<f64>(),
            rng.gen::<f64>() * std::f64::consts::TAU,
        )?;
        let delta = -10.0 + rng.gen::<f64>() * 20.0;
        let report = compare(&params, delta)?;
        worst_rel = worst_rel.max(report.max_rel_err);
        worst_abs = worst_abs.max(report.max_abs_err);
        if !report.passed {
            failures += 1;
        }
    }
    println!("  {draws} draws, {failures} disagreements");
    println!("  worst relative error = {worst_rel:.3e}");
    println!("  worst absolute error = {worst_abs:.3e}");
    Ok(())
}
