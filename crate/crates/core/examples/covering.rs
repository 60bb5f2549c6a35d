//! Finite covers `F ⊕ U` of the disk, a greedy `U`-separated family, and the
//! translate-count check for a verified radius chain `V, W, U`.

use gyrolab::instances::MobiusDisk;
use gyrolab::metric::{
    ball_arithmetic_check, discrete_family_check, greedy_separated_family, precompact_witness,
    u_disjoint_check, Ball, Candidates, SampleCloud,
};

fn main() -> gyrolab::Result<()> {
    let disk = MobiusDisk::new();
    let cloud = SampleCloud::random(&disk, 10_000, 0)?;
    for r in [0.9, 0.5, 0.25] {
        let u = Ball::at_identity(&disk, r)?;
        let w = precompact_witness(&disk, &u, &cloud, &Candidates::FromCloud)?;
        println!(
            "r = {r}: |F| = {:>4}, covered {}",
            w.f.len(),
            w.covered_fraction
        );
    }

    let (v, w, u) = (
        Ball::at_identity(&disk, 0.1)?,
        Ball::at_identity(&disk, 0.21)?,
        Ball::at_identity(&disk, 0.42)?,
    );
    let chain = ball_arithmetic_check(&disk, &v, &w, &u, 5_000, 0.0, 0)?;
    println!(
        "V ⊕ V ⊂ W, W ⊕ W ⊂ U: {} (excess {:.3})",
        chain.passed, chain.worst_excess
    );

    let a = greedy_separated_family(&disk, &u, 50, &cloud)?;
    println!(
        "|A| = {}, U-disjoint {}",
        a.len(),
        u_disjoint_check(&disk, &a, &u)?.disjoint
    );
    let probes = SampleCloud::random(&disk, 1_000, 1)?;
    let family = discrete_family_check(&disk, &a, &v, &probes, 64, 0)?;
    println!(
        "largest number of translates met by a probe: {}",
        family.max_count
    );
    Ok(())
}
