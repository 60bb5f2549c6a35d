//! Exhaustive validation of a gyrogroup table, a corrupted copy, and the
//! left coset decomposition over an L-subgyrogroup.

use gyrolab::instances::{coset_decompose, lsub_check, validate_table, TableGyro};

fn main() -> gyrolab::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/gyro8.json");
    let t = TableGyro::load(path)?;
    let v = validate_table(&t);
    println!(
        "order {} group-induced {} valid {}",
        t.order(),
        t.is_group_induced(),
        v.passed()
    );

    let mutant = t.with_add_entry(3, 5, (t.op(3, 5) + 1) % t.order())?;
    for c in validate_table(&mutant).failures() {
        println!("  mutant fails {} at {}", c.axiom, c.witness);
    }

    let z8 = TableGyro::cyclic(8)?;
    for h in [vec![0, 4], vec![0, 2, 4, 6], vec![0, 3]] {
        match lsub_check(&z8, &h) {
            Ok(true) => {
                let p = coset_decompose(&z8, &h)?;
                println!("H = {h:?}: {} cosets {:?}", p.len(), p.blocks);
            }
            Ok(false) => println!("H = {h:?}: not an L-subgyrogroup"),
            Err(e) => println!("H = {h:?}: {e}"),
        }
    }
    Ok(())
}
