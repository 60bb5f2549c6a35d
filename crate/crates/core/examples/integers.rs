//! The non-precompact construction on `ℤ`: a separated family `A` from the
//! enumeration `0, 1, −1, 2, …`, each member paired with a small shift.

use gyrolab::instances::{Integers, MobiusDisk};
use gyrolab::suitable::{suitable_nonprecompact, ConstructionConfig};

fn main() -> gyrolab::Result<()> {
    let cfg = ConstructionConfig::default();
    let r = suitable_nonprecompact(&Integers::new(), 0.5, 12, &cfg)?;
    println!("S = {:?}", r.points);
    if let Some(last) = r.trace.last() {
        for c in &last.checks {
            println!("  {}: {} {}", c.name, c.passed, c.detail);
        }
    }
    println!("verified {}", r.verified);

    // the disk has no enumeration; the error reports a finite cover instead
    if let Err(e) = suitable_nonprecompact(&MobiusDisk::new(), 0.5, 12, &cfg) {
        println!("disk: {e}");
    }
    Ok(())
}
