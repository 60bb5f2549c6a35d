//! Bracketed words: the Catalan family of parenthesizations, parsing and
//! evaluating a word, and the spread of values over all bracketings.

use gyrolab::instances::{association_gap, Integers, MobiusDisk, MobiusPoint};
use gyrolab::words::{enumerate_trees, eval_word, r_set, tree_count, Sign, WordSpec};

fn main() -> gyrolab::Result<()> {
    for n in 1..=8 {
        print!("{} ", tree_count(n));
    }
    println!();
    for t in enumerate_trees(4)? {
        println!("  f_{} = {}", t.index(), t.render());
    }

    // group-induced: every bracketing agrees
    let w: WordSpec = "(+0 ⊕ −1) ⊕ (+2 ⊕ −0)".parse()?;
    println!(
        "{w} on (7, 3, 5) = {}",
        eval_word(&Integers::new(), &w, &[7, 3, 5])?
    );

    // the disk: bracketings of three leaves disagree
    let x = MobiusPoint::from_parts(0.5, 0.0)?;
    let y = MobiusPoint::from_parts(0.0, 0.5)?;
    let z = MobiusPoint::from_parts(-0.5, 0.0)?;
    let gap = association_gap(x, y, z)?;
    println!("(x ⊕ y) ⊕ z = {:.6}", gap.lhs.value());
    println!("x ⊕ (y ⊕ z) = {:.6}", gap.rhs.value());
    println!("gap {:.6}", gap.gap);
    let values = r_set(&MobiusDisk::new(), &[Sign::Plus; 3], &[x, y, z], 1e-12)?;
    println!("{} distinct values over 2 bracketings", values.len());
    Ok(())
}
