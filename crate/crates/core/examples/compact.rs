//! Nested refinement with `U_{k+1} ⊕ U_{k+1} ⊂ U_k`: on a finite table with a
//! greedy generating set, and on the disk down to the density resolution.

use gyrolab::instances::{MobiusDisk, MobiusPoint, TableGyro};
use gyrolab::suitable::{suitable_compact_metrizable, ConstructionConfig};

fn main() -> gyrolab::Result<()> {
    let t = TableGyro::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/gyro8.json"))?;
    let cfg = ConstructionConfig {
        radius_schedule: vec![0.5],
        word_cap: 2,
        ..ConstructionConfig::default()
    };
    let r = suitable_compact_metrizable(&t, None, &cfg)?;
    println!("table: S = {:?}, verified {}", r.points, r.verified);

    let schedule = ConstructionConfig::halving_schedule(0.4, 0.05);
    let cfg = ConstructionConfig {
        word_cap: schedule.len() + 1,
        radius_schedule: schedule,
        ..ConstructionConfig::default()
    };
    let gens = [
        MobiusPoint::from_parts(0.5, 0.0)?,
        MobiusPoint::from_parts(0.0, 0.5)?,
    ];
    let r = suitable_compact_metrizable(&MobiusDisk::new(), Some(&gens), &cfg)?;
    println!(
        "disk: |S| = {} over {} radii, density {:.3}, verified {}",
        r.points.len(),
        r.trace.len(),
        r.density_report.fraction,
        r.verified
    );
    Ok(())
}
