//! Suitable set for the Möbius disk from the dense subgroup generated by
//! `0.5` and `0.5i`, refined along the default radius schedule.

use std::time::Instant;

use gyrolab::instances::{MobiusDisk, MobiusPoint};
use gyrolab::suitable::{suitable_precompact_disk, ConstructionConfig};
use num_complex::Complex64;

fn main() -> gyrolab::Result<()> {
    let disk = MobiusDisk::new();
    let gens = [
        MobiusPoint::new(Complex64::new(0.5, 0.0))?,
        MobiusPoint::new(Complex64::new(0.0, 0.5))?,
    ];
    let cfg = ConstructionConfig::default();
    let start = Instant::now();
    let result = suitable_precompact_disk(&disk, &gens, &cfg)?;
    for step in &result.trace {
        let failed: Vec<&str> = step
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        println!(
            "k={} r={:?} added={} failed={:?}",
            step.k,
            step.radius,
            step.added.len(),
            failed
        );
    }
    println!("|L| = {}", result.points.len());
    println!(
        "density {:.4} at {} (closure elements {}), separation min {:.3e}",
        result.density_report.fraction,
        result.density_report.delta,
        result.density_report.set_size,
        result.separation_report.min_separation
    );
    println!("verified: {}", result.verified);
    println!("elapsed: {:.2?}", start.elapsed());
    Ok(())
}
