//! Suitable sets on finite tables: the direct construction, the inductive
//! trace along an enumeration, and the two extensions from a subgyrogroup.

use gyrolab::instances::TableGyro;
use gyrolab::suitable::{
    extend_via_enumeration, extend_via_open_subgyro, suitable_countable_trace, suitable_finite,
};

fn main() -> gyrolab::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/gyro8.json");
    let g8 = TableGyro::load(path)?;
    let z4 = TableGyro::cyclic(4)?;

    let s = suitable_finite(&g8)?;
    println!("finite: S = {:?}, verified {}", s.points, s.verified);

    let order: Vec<usize> = (0..g8.order()).collect();
    let trace = suitable_countable_trace(&g8, &order)?;
    for step in &trace.trace {
        println!(
            "  k={} g_k={:?} S_k={:?} removed={:?}",
            step.k, step.target, step.added, step.removed
        );
        for w in &step.witnesses {
            let word = w.word.as_ref().map(|w| w.to_string());
            println!("    g_k = {} over {}", word.unwrap_or_default(), w.over);
        }
    }
    println!("countable: S = {:?}", trace.points);

    let open = extend_via_open_subgyro(&z4, &[0, 2], &[2])?;
    println!("open subgroup: S = {:?}", open.points);
    let listed = extend_via_enumeration(&z4, &[0, 2], &[2], &[0, 3, 2, 1])?;
    println!("enumeration: S = {:?}", listed.points);
    Ok(())
}
