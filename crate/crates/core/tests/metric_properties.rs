use gyrolab::instances::{EinsteinBall, MobiusDisk, MobiusPoint, TableGyro};
use gyrolab::metric::{
    ball_arithmetic_check, greedy_separated_family, maximal_v_disjoint, precompact_witness,
    u_disjoint_check, Ball, Candidates, SampleCloud,
};
use gyrolab::{stream_rng, Gyrogroup};
use num_complex::Complex64;
use rand::Rng;

fn pt(re: f64, im: f64) -> MobiusPoint {
    MobiusPoint::from_parts(re, im).unwrap()
}

/// Pseudo-hyperbolic distance `|b − a| / |1 − ā b|`, written out directly.
fn rho(a: MobiusPoint, b: MobiusPoint) -> f64 {
    let (a, b) = (a.value(), b.value());
    (b - a).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm()
}

fn cover_size(g: &MobiusDisk, r: f64, cloud: &SampleCloud<MobiusPoint>) -> usize {
    let u = Ball::at_identity(g, r).unwrap();
    let w = precompact_witness(g, &u, cloud, &Candidates::FromCloud).unwrap();
    assert!(w.complete());
    w.f.len()
}

#[test]
fn cover_grows_when_radius_halves() {
    // greedy centers at r are r-separated, so each r/2-ball holds at most one
    let g = MobiusDisk::new();
    let cloud = SampleCloud::random(&g, 3000, 11).unwrap();
    for r in [0.8, 0.6, 0.4, 0.3, 0.2] {
        for shrink in [0.5, 0.35, 0.2] {
            let coarse = cover_size(&g, r, &cloud);
            let fine = cover_size(&g, r * shrink, &cloud);
            assert!(
                fine >= coarse,
                "r = {r}, r' = {}: {fine} < {coarse}",
                r * shrink
            );
        }
    }
}

#[test]
fn cover_size_is_monotone_on_a_radius_grid() {
    let g = MobiusDisk::new();
    let cloud = SampleCloud::random(&g, 3000, 12).unwrap();
    let radii = [0.9, 0.8, 0.7, 0.6, 0.5, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2];
    let sizes: Vec<usize> = radii.iter().map(|&r| cover_size(&g, r, &cloud)).collect();
    for w in sizes.windows(2) {
        assert!(w[1] >= w[0], "{sizes:?}");
    }
}

#[test]
fn cover_centers_leave_no_point_uncovered() {
    let g = MobiusDisk::new();
    let cloud = SampleCloud::random(&g, 2000, 13).unwrap();
    let u = Ball::at_identity(&g, 0.3).unwrap();
    let w = precompact_witness(&g, &u, &cloud, &Candidates::FromCloud).unwrap();
    for p in &cloud.points {
        assert!(w.f.iter().any(|&c| rho(c, *p) < 0.3));
    }
}

#[test]
fn u_disjoint_agrees_with_direct_distance() {
    let g = MobiusDisk::new();
    let mut rng = stream_rng(14, 0);
    for _ in 0..300 {
        let n = rng.random_range(2..8);
        let a: Vec<MobiusPoint> = (0..n).map(|_| g.sample(&mut rng).unwrap()).collect();
        let r = rng.random_range(0.05..0.95);
        let u = Ball::at_identity(&g, r).unwrap();
        let direct = a
            .iter()
            .enumerate()
            .all(|(i, &x)| a.iter().enumerate().all(|(j, &y)| i == j || rho(x, y) >= r));
        assert_eq!(u_disjoint_check(&g, &a, &u).unwrap().disjoint, direct);
    }
}

#[test]
fn symmetric_pair_is_disjoint_at_small_radius() {
    let g = MobiusDisk::new();
    let a = [pt(-0.6, 0.0), pt(0.6, 0.0)];
    let report = u_disjoint_check(&g, &a, &Ball::at_identity(&g, 0.2).unwrap()).unwrap();
    assert!(report.disjoint && report.violation.is_none());
    // ρ(−0.6, 0.6) = 1.2 / 1.36
    let big = u_disjoint_check(&g, &a, &Ball::at_identity(&g, 0.9).unwrap()).unwrap();
    assert!(!big.disjoint);
    assert!((rho(a[0], a[1]) - 1.2 / 1.36).abs() < 1e-15);
}

#[test]
fn greedy_families_are_disjoint_on_every_carrier() {
    let m = MobiusDisk::new();
    let e = EinsteinBall::new(2.0).unwrap();
    let t = TableGyro::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/gyro8.json")).unwrap();
    for seed in 0..40 {
        let r = 0.1 + 0.02 * seed as f64;
        let cloud = SampleCloud::random(&m, 200, seed).unwrap();
        let u = Ball::at_identity(&m, r).unwrap();
        let a = greedy_separated_family(&m, &u, 100, &cloud).unwrap();
        assert!(u_disjoint_check(&m, &a, &u).unwrap().disjoint);

        let cloud = SampleCloud::random(&e, 200, seed).unwrap();
        let u = Ball::at_identity(&e, 2.0 * r).unwrap();
        let a = greedy_separated_family(&e, &u, 100, &cloud).unwrap();
        assert!(u_disjoint_check(&e, &a, &u).unwrap().disjoint);
    }
    let cloud = SampleCloud::for_carrier(&t, 8, 0).unwrap();
    let u = Ball::at_identity(&t, 0.5).unwrap();
    let a = greedy_separated_family(&t, &u, 8, &cloud).unwrap();
    assert_eq!(a.len(), 8);
    assert!(u_disjoint_check(&t, &a, &u).unwrap().disjoint);
}

#[test]
fn singleton_neighborhood_on_tables_needs_every_element() {
    for t in [TableGyro::cyclic(6).unwrap(), TableGyro::klein()] {
        let n = t.order();
        let cloud = SampleCloud::for_carrier(&t, n, 0).unwrap();
        let u = Ball::at_identity(&t, 0.5).unwrap();
        let w = precompact_witness(&t, &u, &cloud, &Candidates::FromCloud).unwrap();
        assert_eq!(w.f.len(), n);
        let fam = maximal_v_disjoint(&t, &u, &u, &cloud, 16, 0).unwrap();
        assert_eq!(fam.family.len(), n);
        assert!(fam.cover.complete());
    }
}

#[test]
fn radius_chains() {
    let g = MobiusDisk::new();
    let ball = |r| Ball::at_identity(&g, r).unwrap();
    let ok = ball_arithmetic_check(&g, &ball(0.05), &ball(0.15), &ball(0.4), 5000, 0.0, 1).unwrap();
    assert!(ok.passed, "{}", ok.worst_excess);
    let flat = ball_arithmetic_check(&g, &ball(0.3), &ball(0.3), &ball(0.3), 5000, 0.0, 1).unwrap();
    assert!(!flat.passed);
    assert_eq!(flat.witness.len(), 2);
}

#[test]
fn translated_cloud_cover_size_is_stable() {
    // left translation is a ρ-isometry on the disk
    let g = MobiusDisk::new();
    let cloud = SampleCloud::random_in_ball(&g, 0.6, 1500, 15).unwrap();
    let x = pt(0.3, -0.2);
    let moved = gyrolab::metric::left_translate(&g, &x, &cloud).unwrap();
    for (p, q) in cloud.points.iter().zip(&moved.points) {
        for (p2, q2) in cloud.points.iter().zip(&moved.points).take(20) {
            assert!((rho(*p, *p2) - rho(*q, *q2)).abs() < 1e-9);
        }
    }
    assert_eq!(cover_size(&g, 0.3, &cloud), cover_size(&g, 0.3, &moved));
}
