//! Sampled axiom residuals for the two continuous carriers, plus the check
//! that gyrations keep each norm ball about 0 in place.

use gyrolab::axioms::{check_all, check_strong_ball_invariance, DEFAULT_TOLERANCE};
use gyrolab::instances::{EinsteinBall, MobiusDisk};
use gyrolab::Gyrogroup;

fn report<G: Gyrogroup>(g: &G) -> gyrolab::Result<()> {
    println!("{}", g.name());
    let mut reports = check_all(g, 20_000, DEFAULT_TOLERANCE, 0)?;
    reports.push(check_strong_ball_invariance(
        g,
        &[0.25, 0.5, 0.9],
        5_000,
        DEFAULT_TOLERANCE,
        0,
    )?);
    for r in &reports {
        let verdict = if r.passed() { "ok" } else { "FAIL" };
        println!(
            "  {:<24} {:>9.2e} over {:>6} samples  {verdict}",
            r.axiom, r.residual, r.samples
        );
    }
    Ok(())
}

fn main() -> gyrolab::Result<()> {
    report(&MobiusDisk::new())?;
    report(&EinsteinBall::new(1.0)?)?;
    Ok(())
}
