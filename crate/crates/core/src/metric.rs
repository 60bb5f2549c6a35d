//! Balls, point clouds, covers and separated families.
//!
//! Neighborhoods of 0 are ambient balls. A point `b` lies in the translate
//! `a ⊕ U` exactly when the left-cancelled `u = (⊖a) ⊕ b` lies in `U`; every
//! membership test below is decided that way, never by sampling `a ⊕ U`.

use serde::Serialize;

use crate::carrier::{stream_rng, Gyrogroup};
use crate::error::{GyroError, Result};
use crate::spatial::GridIndex;

const STREAM_CLOUD: u64 = 11;
const STREAM_BALL_ARITH: u64 = 12;
const STREAM_BALL_PROBES: u64 = 13;

/// How many sampled-example points reports keep.
const EXAMPLES: usize = 10;

/// Fractions of the radius used for directional probes.
const DIRECTIONAL: [f64; 8] = [0.25, 0.5, 0.75, 0.9, 0.99, 0.999, 0.999_999, 0.999_999_999];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball<E> {
    pub center: E,
    pub radius: f64,
}

impl<E: Clone> Ball<E> {
    pub fn new(center: E, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GyroError::Precondition(format!(
                "ball radius {radius} must be positive"
            )));
        }
        Ok(Ball { center, radius })
    }

    /// The neighborhood `U_r` of the identity.
    pub fn at_identity<G: Gyrogroup<Element = E>>(g: &G, radius: f64) -> Result<Self> {
        Self::new(g.identity(), radius)
    }

    pub fn contains<G: Gyrogroup<Element = E>>(&self, g: &G, u: &E) -> bool {
        g.distance(u, &self.center) < self.radius
    }
}

/// Whether `b ∈ a ⊕ U`, decided by `(⊖a) ⊕ b ∈ U`.
pub fn in_translate<G: Gyrogroup>(
    g: &G,
    a: &G::Element,
    b: &G::Element,
    u: &Ball<G::Element>,
) -> Result<bool> {
    let cancelled = g.add(&g.neg(a)?, b)?;
    Ok(u.contains(g, &cancelled))
}

/// Distance of `(⊖a) ⊕ b` from the ball center.
fn cancelled_distance<G: Gyrogroup>(
    g: &G,
    a: &G::Element,
    b: &G::Element,
    u: &Ball<G::Element>,
) -> Result<f64> {
    let cancelled = g.add(&g.neg(a)?, b)?;
    Ok(g.distance(&cancelled, &u.center))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleCloud<E> {
    pub points: Vec<E>,
    /// `grid`, `random(seed=…)`, `elements`, `loaded(…)` or a derivation.
    pub description: String,
}

impl<E: Clone> SampleCloud<E> {
    pub fn loaded(points: Vec<E>, source: &str) -> Self {
        SampleCloud {
            points,
            description: format!("loaded({source})"),
        }
    }

    /// `n` draws from the carrier's sampling distribution.
    pub fn random<G: Gyrogroup<Element = E>>(g: &G, n: usize, seed: u64) -> Result<Self> {
        Self::random_stream(g, n, seed, STREAM_CLOUD)
    }

    /// As [`SampleCloud::random`], on an explicit sub-stream of `seed`.
    pub fn random_stream<G: Gyrogroup<Element = E>>(
        g: &G,
        n: usize,
        seed: u64,
        stream: u64,
    ) -> Result<Self> {
        let mut rng = stream_rng(seed, stream);
        let points = (0..n).map(|_| g.sample(&mut rng)).collect::<Result<_>>()?;
        Ok(SampleCloud {
            points,
            description: format!("random(seed={seed}, stream={stream})"),
        })
    }

    /// `n` draws from the ball `U_radius` about the identity.
    pub fn random_in_ball<G: Gyrogroup<Element = E>>(
        g: &G,
        radius: f64,
        n: usize,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = stream_rng(seed, STREAM_CLOUD);
        let points = (0..n)
            .map(|_| g.sample_ball(&mut rng, radius))
            .collect::<Result<_>>()?;
        Ok(SampleCloud {
            points,
            description: format!("random(seed={seed}, radius={radius})"),
        })
    }

    /// Every element of a finite carrier, the first `n` enumerated elements
    /// of a countable exact carrier, or `n` random draws otherwise.
    pub fn for_carrier<G: Gyrogroup<Element = E>>(g: &G, n: usize, seed: u64) -> Result<Self> {
        Self::for_carrier_stream(g, n, seed, STREAM_CLOUD)
    }

    pub fn for_carrier_stream<G: Gyrogroup<Element = E>>(
        g: &G,
        n: usize,
        seed: u64,
        stream: u64,
    ) -> Result<Self> {
        if let Some(points) = g.elements() {
            return Ok(SampleCloud {
                points,
                description: "elements".to_string(),
            });
        }
        if g.is_exact() {
            if let Some(points) = g.enumerate(n) {
                return Ok(SampleCloud {
                    points,
                    description: format!("enumeration({n})"),
                });
            }
        }
        Self::random_stream(g, n, seed, stream)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `{x ⊕ p : p ∈ P}`.
pub fn left_translate<G: Gyrogroup>(
    g: &G,
    x: &G::Element,
    cloud: &SampleCloud<G::Element>,
) -> Result<SampleCloud<G::Element>> {
    let points = cloud
        .points
        .iter()
        .map(|p| g.add(x, p))
        .collect::<Result<_>>()?;
    Ok(SampleCloud {
        points,
        description: format!("left_translate({})", cloud.description),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisjointReport<E> {
    pub disjoint: bool,
    /// First ordered pair `(a, b)` with `b ∈ a ⊕ U`.
    pub violation: Option<(E, E)>,
}

/// Checks that no member of `A` lies in another member's translate `a ⊕ U`.
pub fn u_disjoint_check<G: Gyrogroup>(
    g: &G,
    a: &[G::Element],
    u: &Ball<G::Element>,
) -> Result<DisjointReport<G::Element>> {
    for (i, x) in a.iter().enumerate() {
        let nx = g.neg(x)?;
        for (j, y) in a.iter().enumerate() {
            if i != j && u.contains(g, &g.add(&nx, y)?) {
                return Ok(DisjointReport {
                    disjoint: false,
                    violation: Some((x.clone(), y.clone())),
                });
            }
        }
    }
    Ok(DisjointReport {
        disjoint: true,
        violation: None,
    })
}

/// Sample points of a ball about the identity, always including the center.
fn ball_probes<G: Gyrogroup>(
    g: &G,
    v: &Ball<G::Element>,
    count: usize,
    seed: u64,
) -> Result<Vec<G::Element>> {
    let mut rng = stream_rng(seed, STREAM_BALL_PROBES);
    let mut out = vec![v.center.clone()];
    for _ in 0..count {
        let p = g.sample_ball(&mut rng, v.radius)?;
        if v.contains(g, &p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Points of `V` on the ray from 0 toward `w`, when the carrier can scale.
fn directional_probes<G: Gyrogroup>(
    g: &G,
    v: &Ball<G::Element>,
    w: &G::Element,
) -> Vec<G::Element> {
    let size = g.size(w);
    if !(size > 0.0) {
        return Vec::new();
    }
    DIRECTIONAL
        .iter()
        .filter_map(|t| g.scale(w, t * v.radius / size))
        .filter(|p| v.contains(g, p))
        .collect()
}

/// Whether `(x ⊕ V) ∩ (a ⊕ V)` contains a probe point `x ⊕ v`.
///
/// A `true` answer is exact (the intersection point is exhibited); `false`
/// means no probe found one.
fn translates_meet<G: Gyrogroup>(
    g: &G,
    x: &G::Element,
    a: &G::Element,
    v: &Ball<G::Element>,
    probes: &[G::Element],
) -> Result<bool> {
    let na = g.neg(a)?;
    let member = |p: &G::Element| -> Result<bool> {
        let xp = g.add(x, p)?;
        Ok(v.contains(g, &g.add(&na, &xp)?))
    };
    for p in probes {
        if member(p)? {
            return Ok(true);
        }
    }
    let toward = g.add(&g.neg(x)?, a)?;
    for p in directional_probes(g, v, &toward) {
        if member(&p)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteFamilyReport<E> {
    pub max_count: usize,
    /// Probe attaining the maximum, with the members it meets.
    pub worst_probe: Option<E>,
    pub worst_members: Vec<E>,
    pub probes: usize,
    pub ball_samples: usize,
    pub passed: bool,
}

/// For each probe `x`, counts members `a` whose translate `a ⊕ V` meets
/// `x ⊕ V`; passes when no probe meets more than one.
pub fn discrete_family_check<G: Gyrogroup>(
    g: &G,
    a: &[G::Element],
    v: &Ball<G::Element>,
    probes: &SampleCloud<G::Element>,
    ball_samples: usize,
    seed: u64,
) -> Result<DiscreteFamilyReport<G::Element>> {
    if probes.is_empty() {
        return Err(GyroError::Precondition("probe cloud is empty".into()));
    }
    let vs = ball_probes(g, v, ball_samples, seed)?;
    let mut report = DiscreteFamilyReport {
        max_count: 0,
        worst_probe: None,
        worst_members: Vec::new(),
        probes: probes.len(),
        ball_samples: vs.len(),
        passed: true,
    };
    for x in &probes.points {
        let mut met = Vec::new();
        for m in a {
            if translates_meet(g, x, m, v, &vs)? {
                met.push(m.clone());
            }
        }
        if met.len() > report.max_count || report.worst_probe.is_none() {
            report.max_count = met.len();
            report.worst_probe = Some(x.clone());
            report.worst_members = met;
        }
    }
    report.passed = report.max_count <= 1;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallArithmeticReport<E> {
    pub passed: bool,
    /// Largest `size(p ⊕ q) − outer radius` over both inclusions.
    pub worst_excess: f64,
    /// `[p, q]` attaining the worst excess.
    pub witness: Vec<E>,
    pub samples: usize,
    pub seed: u64,
}

fn sum_inclusion<G: Gyrogroup>(
    g: &G,
    inner: &Ball<G::Element>,
    outer: &Ball<G::Element>,
    n: usize,
    rng: &mut crate::GyroRng,
    report: &mut BallArithmeticReport<G::Element>,
) -> Result<()> {
    let near_edge = |p: G::Element| -> G::Element {
        let s = g.size(&p);
        if s > 0.0 {
            g.scale(&p, 0.999_999 * inner.radius / s)
                .filter(|q| inner.contains(g, q))
                .unwrap_or(p)
        } else {
            p
        }
    };
    for k in 0..n {
        let mut p = g.sample_ball(rng, inner.radius)?;
        let mut q = g.sample_ball(rng, inner.radius)?;
        // every other pair is pushed to the rim, where sums are largest
        if k % 2 == 1 {
            p = near_edge(p);
            q = near_edge(q);
        }
        if !(inner.contains(g, &p) && inner.contains(g, &q)) {
            continue;
        }
        let excess = g.distance(&g.add(&p, &q)?, &outer.center) - outer.radius;
        report.samples += 1;
        if excess > report.worst_excess || report.witness.is_empty() {
            report.worst_excess = excess;
            report.witness = vec![p, q];
        }
    }
    Ok(())
}

fn empty_arith_report<E>(seed: u64) -> BallArithmeticReport<E> {
    BallArithmeticReport {
        passed: false,
        worst_excess: f64::NEG_INFINITY,
        witness: Vec::new(),
        samples: 0,
        seed,
    }
}

/// Samples the single inclusion `inner ⊕ inner ⊂ outer`.
pub fn sum_inclusion_check<G: Gyrogroup>(
    g: &G,
    inner: &Ball<G::Element>,
    outer: &Ball<G::Element>,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<BallArithmeticReport<G::Element>> {
    if n == 0 {
        return Err(GyroError::Precondition(
            "sample count must be at least 1".into(),
        ));
    }
    let mut rng = stream_rng(seed, STREAM_BALL_ARITH);
    let mut report = empty_arith_report(seed);
    sum_inclusion(g, inner, outer, n, &mut rng, &mut report)?;
    report.passed = report.worst_excess < -tol;
    Ok(report)
}

/// Samples `V ⊕ V ⊂ W` and `W ⊕ W ⊂ U`; a sum counts as inside when its
/// distance from the center is below the outer radius minus `tol`.
pub fn ball_arithmetic_check<G: Gyrogroup>(
    g: &G,
    v: &Ball<G::Element>,
    w: &Ball<G::Element>,
    u: &Ball<G::Element>,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<BallArithmeticReport<G::Element>> {
    if n == 0 {
        return Err(GyroError::Precondition(
            "sample count must be at least 1".into(),
        ));
    }
    let mut rng = stream_rng(seed, STREAM_BALL_ARITH);
    let mut report = empty_arith_report(seed);
    sum_inclusion(g, v, w, n, &mut rng, &mut report)?;
    sum_inclusion(g, w, u, n, &mut rng, &mut report)?;
    report.passed = report.worst_excess < -tol;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverWitness<E> {
    #[serde(rename = "F")]
    pub f: Vec<E>,
    #[serde(rename = "U")]
    pub u: Ball<E>,
    pub covered_fraction: f64,
    pub uncovered_examples: Vec<E>,
    pub cloud_size: usize,
}

impl<E> CoverWitness<E> {
    pub fn complete(&self) -> bool {
        self.uncovered_examples.is_empty()
    }
}

/// Where cover centers come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Candidates<E> {
    /// Each uncovered cloud point becomes a center.
    FromCloud,
    /// The covering candidate with the smallest cancelled distance is used.
    Given(Vec<E>),
}

/// Candidates that may cover points, with an ambient prefilter when the
/// carrier bounds how far translated balls reach.
pub(crate) struct CenterIndex<'a, E> {
    centers: &'a [E],
    grid: Option<(GridIndex, f64)>,
}

impl<'a, E: Clone> CenterIndex<'a, E> {
    pub(crate) fn new<G: Gyrogroup<Element = E>>(g: &G, centers: &'a [E], radius: f64) -> Self {
        let grid = g
            .translate_reach(radius)
            .filter(|r| r.is_finite() && *r > 0.0 && !g.is_exact())
            .map(|reach| {
                let dim = g.coords(&g.identity()).len();
                let mut grid = GridIndex::new(reach, dim);
                for c in centers {
                    grid.insert(g.coords(c));
                }
                (grid, reach)
            });
        CenterIndex { centers, grid }
    }

    fn candidates<G: Gyrogroup<Element = E>>(&self, g: &G, p: &E) -> Vec<usize> {
        match &self.grid {
            Some((grid, reach)) => grid.within(&g.coords(p), *reach),
            None => (0..self.centers.len()).collect(),
        }
    }

    /// The center `c` minimizing the distance of `(⊖c) ⊕ p` from the ball
    /// center, among those with `p ∈ c ⊕ U`. Ties go to the smaller index.
    pub(crate) fn best<G: Gyrogroup<Element = E>>(
        &self,
        g: &G,
        p: &E,
        u: &Ball<E>,
    ) -> Result<Option<(usize, f64)>> {
        let mut best: Option<(usize, f64)> = None;
        for i in self.candidates(g, p) {
            let d = match cancelled_distance(g, &self.centers[i], p, u) {
                Ok(d) => d,
                Err(GyroError::Domain(_)) => continue,
                Err(e) => return Err(e),
            };
            if d < u.radius && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        Ok(best)
    }
}

/// Greedy cover `F ⊕ U ⊇ cloud`.
///
/// When the identity alone covers the cloud, `F = {0}`. Otherwise the cloud
/// is scanned in order and each point not yet covered receives a center.
pub fn precompact_witness<G: Gyrogroup>(
    g: &G,
    u: &Ball<G::Element>,
    cloud: &SampleCloud<G::Element>,
    candidates: &Candidates<G::Element>,
) -> Result<CoverWitness<G::Element>> {
    if cloud.is_empty() {
        return Err(GyroError::Precondition("cloud is empty".into()));
    }
    let zero = g.identity();
    let n = cloud.len();
    let witness = |f: Vec<G::Element>, uncovered: Vec<usize>| CoverWitness {
        covered_fraction: (n - uncovered.len()) as f64 / n as f64,
        uncovered_examples: uncovered
            .iter()
            .take(EXAMPLES)
            .map(|&i| cloud.points[i].clone())
            .collect(),
        f,
        u: u.clone(),
        cloud_size: n,
    };
    let mut by_zero = true;
    for p in &cloud.points {
        if !u.contains(g, &g.add(&zero, p)?) {
            by_zero = false;
            break;
        }
    }
    if by_zero {
        return Ok(witness(vec![zero], Vec::new()));
    }
    let mut covered = vec![false; n];
    let mut f: Vec<G::Element> = Vec::new();
    let mut uncovered = Vec::new();
    let given = match candidates {
        Candidates::Given(c) => Some(CenterIndex::new(g, c, u.radius)),
        Candidates::FromCloud => None,
    };
    let reach = g.translate_reach(u.radius).filter(|_| !g.is_exact());
    let cloud_grid = reach.map(|r| {
        let mut grid = GridIndex::new(r, g.coords(&zero).len());
        for p in &cloud.points {
            grid.insert(g.coords(p));
        }
        (grid, r)
    });
    for i in 0..n {
        if covered[i] {
            continue;
        }
        let p = &cloud.points[i];
        let center = match (&given, candidates) {
            (Some(index), Candidates::Given(c)) => match index.best(g, p, u)? {
                Some((k, _)) => c[k].clone(),
                None => {
                    uncovered.push(i);
                    continue;
                }
            },
            _ => p.clone(),
        };
        let nc = g.neg(&center)?;
        let nearby: Vec<usize> = match &cloud_grid {
            Some((grid, r)) => grid.within(&g.coords(&center), *r),
            None => (i..n).collect(),
        };
        for j in nearby {
            if j >= i && !covered[j] && u.contains(g, &g.add(&nc, &cloud.points[j])?) {
                covered[j] = true;
            }
        }
        if !covered[i] {
            // the chosen center must cover the point that requested it
            return Err(GyroError::construction(
                f.len(),
                "cover center does not contain its own point",
            ));
        }
        f.push(center);
    }
    Ok(witness(f, uncovered))
}

/// Cloud points chosen in scan order, each outside every earlier translate
/// `p ⊕ U` and with no earlier point inside its own translate. Stops at
/// `count` points or when the cloud is exhausted.
pub fn greedy_separated_family<G: Gyrogroup>(
    g: &G,
    u: &Ball<G::Element>,
    count: usize,
    cloud: &SampleCloud<G::Element>,
) -> Result<Vec<G::Element>> {
    if count == 0 {
        return Err(GyroError::Precondition(
            "family size must be at least 1".into(),
        ));
    }
    let mut family: Vec<G::Element> = Vec::new();
    let mut negs: Vec<G::Element> = Vec::new();
    for p in &cloud.points {
        if family.len() >= count {
            break;
        }
        let np = g.neg(p)?;
        let mut free = true;
        for (f, nf) in family.iter().zip(&negs) {
            if u.contains(g, &g.add(nf, p)?) || u.contains(g, &g.add(&np, f)?) {
                free = false;
                break;
            }
        }
        if free {
            family.push(p.clone());
            negs.push(np);
        }
    }
    Ok(family)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalFamily<E> {
    pub family: Vec<E>,
    /// `V ⊕ V ⊂ U` at sample resolution.
    pub chain: BallArithmeticReport<E>,
    /// Cover of the cloud by `A ⊕ U`.
    pub cover: CoverWitness<E>,
}

/// Greedy maximal family whose translates `a ⊕ V` are pairwise disjoint
/// (sample-decided), then the cover of the cloud by `A ⊕ U`.
pub fn maximal_v_disjoint<G: Gyrogroup>(
    g: &G,
    v: &Ball<G::Element>,
    u: &Ball<G::Element>,
    cloud: &SampleCloud<G::Element>,
    ball_samples: usize,
    seed: u64,
) -> Result<MaximalFamily<G::Element>> {
    if cloud.is_empty() {
        return Err(GyroError::Precondition("cloud is empty".into()));
    }
    let vs = ball_probes(g, v, ball_samples, seed)?;
    let mut family: Vec<G::Element> = Vec::new();
    for p in &cloud.points {
        let mut free = true;
        for a in &family {
            if translates_meet(g, p, a, v, &vs)? || translates_meet(g, a, p, v, &vs)? {
                free = false;
                break;
            }
        }
        if free {
            family.push(p.clone());
        }
    }
    let chain = sum_inclusion_check(g, v, u, ball_samples.max(1), 0.0, seed)?;
    let cover = precompact_witness(g, u, cloud, &Candidates::Given(family.clone()))?;
    Ok(MaximalFamily {
        family,
        chain,
        cover,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport<E> {
    pub delta: f64,
    pub fraction: f64,
    pub covered: usize,
    pub cloud_size: usize,
    pub set_size: usize,
    pub uncovered_examples: Vec<E>,
    pub passed: bool,
}

/// Fraction of cloud points within ambient distance `delta` of `S`.
pub fn density_check<G: Gyrogroup>(
    g: &G,
    s: &[G::Element],
    cloud: &SampleCloud<G::Element>,
    delta: f64,
) -> Result<DensityReport<G::Element>> {
    if !(delta > 0.0) {
        return Err(GyroError::Precondition(format!(
            "density radius {delta} must be positive"
        )));
    }
    // ambient distance is Euclidean in coordinates for continuous carriers
    let grid = (!g.is_exact() && !s.is_empty()).then(|| {
        let mut grid = GridIndex::new(delta, g.coords(&s[0]).len());
        for x in s {
            grid.insert(g.coords(x));
        }
        grid
    });
    let near = |p: &G::Element| match &grid {
        Some(grid) => !grid.within(&g.coords(p), delta).is_empty(),
        None => s.iter().any(|x| g.distance(x, p) <= delta),
    };
    let mut covered = 0;
    let mut examples = Vec::new();
    for p in &cloud.points {
        if near(p) {
            covered += 1;
        } else if examples.len() < EXAMPLES {
            examples.push(p.clone());
        }
    }
    let n = cloud.len();
    Ok(DensityReport {
        delta,
        fraction: if n == 0 {
            1.0
        } else {
            covered as f64 / n as f64
        },
        covered,
        cloud_size: n,
        set_size: s.len(),
        uncovered_examples: examples,
        passed: covered == n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedDiscreteReport<E> {
    pub passed: bool,
    /// Distance from each point to its nearest other point (∞ when alone).
    pub separation_radii: Vec<f64>,
    pub min_separation: f64,
    /// Points in the compact core `size ≤ R − boundary_margin`.
    pub core_count: usize,
    pub core_min_separation: f64,
    pub duplicate: Option<(E, E)>,
}

/// Per-point separation, plus finiteness and separation inside the compact
/// core away from the carrier boundary. Points closer than `tol` count as
/// duplicates.
pub fn closed_discrete_check<G: Gyrogroup>(
    g: &G,
    l: &[G::Element],
    boundary_margin: f64,
    tol: f64,
) -> Result<ClosedDiscreteReport<G::Element>> {
    let core_limit = g.boundary_radius().map(|r| r - boundary_margin);
    let in_core = |e: &G::Element| core_limit.is_none_or(|lim| g.size(e) <= lim);
    let n = l.len();
    let mut sep = vec![f64::INFINITY; n];
    let mut duplicate = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = g.distance(&l[i], &l[j]);
            sep[i] = sep[i].min(d);
            sep[j] = sep[j].min(d);
            let same = if g.is_exact() { l[i] == l[j] } else { d <= tol };
            if same && duplicate.is_none() {
                duplicate = Some((l[i].clone(), l[j].clone()));
            }
        }
    }
    let min_separation = sep.iter().copied().fold(f64::INFINITY, f64::min);
    let mut core_count = 0;
    let mut core_min_separation = f64::INFINITY;
    for (i, e) in l.iter().enumerate() {
        if in_core(e) {
            core_count += 1;
            for (j, f) in l.iter().enumerate() {
                if i != j && in_core(f) {
                    core_min_separation = core_min_separation.min(g.distance(e, f));
                }
            }
        }
    }
    Ok(ClosedDiscreteReport {
        passed: duplicate.is_none() && core_min_separation > tol,
        separation_radii: sep,
        min_separation,
        core_count,
        core_min_separation,
        duplicate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{MobiusDisk, MobiusPoint, TableGyro};

    fn p(re: f64, im: f64) -> MobiusPoint {
        MobiusPoint::from_parts(re, im).unwrap()
    }

    fn zero_ball(g: &MobiusDisk, r: f64) -> Ball<MobiusPoint> {
        Ball::at_identity(g, r).unwrap()
    }

    #[test]
    fn translate_by_identity_is_identity() {
        let g = MobiusDisk::new();
        let c = SampleCloud::random(&g, 50, 1).unwrap();
        assert_eq!(
            left_translate(&g, &g.identity(), &c).unwrap().points,
            c.points
        );
    }

    #[test]
    fn table_translates_are_permutations() {
        let t = TableGyro::cyclic(4).unwrap();
        let c = SampleCloud::for_carrier(&t, 0, 0).unwrap();
        for x in 0..4 {
            let mut out = left_translate(&t, &x, &c).unwrap().points;
            out.sort();
            assert_eq!(out, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn translates_toward_the_rim_stay_inside() {
        let g = MobiusDisk::new();
        let c = SampleCloud::random_in_ball(&g, 0.1, 200, 2).unwrap();
        let out = left_translate(&g, &p(0.9, 0.0), &c).unwrap();
        assert!(out.points.iter().all(|q| q.modulus() < 1.0));
        assert!(out
            .points
            .iter()
            .all(|q| (q.value() - p(0.9, 0.0).value()).norm() < 0.1));
    }

    #[test]
    fn disjointness_examples() {
        let g = MobiusDisk::new();
        let u = zero_ball(&g, 0.2);
        assert!(u_disjoint_check(&g, &[p(0.3, 0.0)], &u).unwrap().disjoint);
        let r = u_disjoint_check(&g, &[g.identity(), p(0.1, 0.0)], &u).unwrap();
        assert!(!r.disjoint);
        assert_eq!(r.violation, Some((g.identity(), p(0.1, 0.0))));
        // (0.6 + 0.6)/(1 + 0.36) ≈ 0.882 > 0.2
        assert!(
            u_disjoint_check(&g, &[p(-0.6, 0.0), p(0.6, 0.0)], &u)
                .unwrap()
                .disjoint
        );
    }

    #[test]
    fn membership_agrees_with_sampled_translates() {
        // b ∈ a ⊕ U iff some u ∈ U has a ⊕ u = b; compare with a dense search
        let g = MobiusDisk::new();
        let u = zero_ball(&g, 0.3);
        let mut rng = stream_rng(5, 99);
        for _ in 0..200 {
            let a = g.sample(&mut rng).unwrap();
            let inside = g.sample_ball(&mut rng, 0.3).unwrap();
            let b = g.add(&a, &inside).unwrap();
            assert!(in_translate(&g, &a, &b, &u).unwrap());
        }
    }

    #[test]
    fn ball_chain_on_the_disk() {
        let g = MobiusDisk::new();
        let (v, w, u) = (zero_ball(&g, 0.05), zero_ball(&g, 0.15), zero_ball(&g, 0.4));
        assert!(
            ball_arithmetic_check(&g, &v, &w, &u, 2_000, 0.0, 1)
                .unwrap()
                .passed
        );
        let r = ball_arithmetic_check(&g, &u, &u, &u, 2_000, 0.0, 1).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witness.len(), 2);
    }

    #[test]
    fn group_balls_are_closed_under_sums() {
        let t = TableGyro::cyclic(4).unwrap();
        let b = Ball::at_identity(&t, 0.5).unwrap();
        assert!(
            ball_arithmetic_check(&t, &b, &b, &b, 100, 0.0, 1)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn cover_examples() {
        let t = TableGyro::cyclic(4).unwrap();
        let cloud = SampleCloud::for_carrier(&t, 0, 0).unwrap();
        let big = Ball::at_identity(&t, 1.5).unwrap();
        let w = precompact_witness(&t, &big, &cloud, &Candidates::FromCloud).unwrap();
        assert_eq!(w.f, vec![0]);
        let point = Ball::at_identity(&t, 0.5).unwrap();
        let w = precompact_witness(&t, &point, &cloud, &Candidates::FromCloud).unwrap();
        assert_eq!(w.f, vec![0, 1, 2, 3]);

        let g = MobiusDisk::new();
        let inner = SampleCloud::random_in_ball(&g, 0.3, 100, 3).unwrap();
        let w =
            precompact_witness(&g, &zero_ball(&g, 0.5), &inner, &Candidates::FromCloud).unwrap();
        assert_eq!(w.f, vec![g.identity()]);
        let cloud = SampleCloud::random(&g, 2_000, 3).unwrap();
        let w =
            precompact_witness(&g, &zero_ball(&g, 0.5), &cloud, &Candidates::FromCloud).unwrap();
        assert_eq!(w.covered_fraction, 1.0);
        assert!(w.f.len() > 1 && w.f.len() < 200);
    }

    #[test]
    fn uncoverable_points_are_reported() {
        let g = MobiusDisk::new();
        let cloud = SampleCloud::random(&g, 200, 4).unwrap();
        let w = precompact_witness(
            &g,
            &zero_ball(&g, 0.2),
            &cloud,
            &Candidates::Given(vec![g.identity()]),
        )
        .unwrap();
        assert!(w.covered_fraction < 1.0);
        assert!(!w.complete());
    }

    #[test]
    fn separated_family_is_disjoint() {
        let g = MobiusDisk::new();
        let u = zero_ball(&g, 0.3);
        let cloud = SampleCloud::random(&g, 500, 6).unwrap();
        let fam = greedy_separated_family(&g, &u, 1_000, &cloud).unwrap();
        assert!(u_disjoint_check(&g, &fam, &u).unwrap().disjoint);
        assert_eq!(greedy_separated_family(&g, &u, 1, &cloud).unwrap().len(), 1);
        let t = TableGyro::cyclic(4).unwrap();
        let tc = SampleCloud::for_carrier(&t, 0, 0).unwrap();
        let tu = Ball::at_identity(&t, 0.5).unwrap();
        assert_eq!(
            greedy_separated_family(&t, &tu, 3, &tc).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn maximal_family_covers_with_doubled_ball() {
        let g = MobiusDisk::new();
        let cloud = SampleCloud::random(&g, 1_000, 8).unwrap();
        // (0.2 + 0.2)/(1 + 0.04) ≈ 0.385 < 0.4
        let m = maximal_v_disjoint(&g, &zero_ball(&g, 0.2), &zero_ball(&g, 0.4), &cloud, 64, 8)
            .unwrap();
        assert!(m.chain.passed);
        assert_eq!(m.cover.covered_fraction, 1.0);
        let inner = SampleCloud::random_in_ball(&g, 0.05, 50, 9).unwrap();
        let m = maximal_v_disjoint(&g, &zero_ball(&g, 0.2), &zero_ball(&g, 0.4), &inner, 16, 9)
            .unwrap();
        assert_eq!(m.family.len(), 1);
        let t = TableGyro::cyclic(4).unwrap();
        let tc = SampleCloud::for_carrier(&t, 0, 0).unwrap();
        let tb = Ball::at_identity(&t, 0.5).unwrap();
        assert_eq!(
            maximal_v_disjoint(&t, &tb, &tb, &tc, 8, 1).unwrap().family,
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn discrete_family_counts() {
        let g = MobiusDisk::new();
        let probes = SampleCloud::random(&g, 300, 10).unwrap();
        let v = zero_ball(&g, 0.05);
        let r = discrete_family_check(&g, &[g.identity()], &v, &probes, 16, 1).unwrap();
        assert!(r.passed);
        let close = [p(0.3, 0.0), p(0.31, 0.0)];
        let with_hit = SampleCloud::loaded(vec![p(0.3, 0.0)], "test");
        let r = discrete_family_check(&g, &close, &v, &with_hit, 16, 1).unwrap();
        assert_eq!(r.max_count, 2);
        assert!(!r.passed);
    }

    #[test]
    fn density_examples() {
        let g = MobiusDisk::new();
        let cloud = SampleCloud::random(&g, 500, 12).unwrap();
        assert!(
            density_check(&g, &cloud.points, &cloud, 1e-9)
                .unwrap()
                .passed
        );
        let r = density_check(&g, &[g.identity()], &cloud, 0.01).unwrap();
        assert!(r.fraction < 0.01);
        let r = density_check(&g, &[], &cloud, 0.01).unwrap();
        assert_eq!(r.fraction, 0.0);
    }

    #[test]
    fn closed_discrete_examples() {
        let g = MobiusDisk::new();
        assert!(
            closed_discrete_check(&g, &[p(0.1, 0.0)], 0.01, 1e-12)
                .unwrap()
                .passed
        );
        let r = closed_discrete_check(&g, &[p(0.1, 0.0), p(0.2, 0.0), p(0.1, 0.0)], 0.01, 1e-12)
            .unwrap();
        assert!(!r.passed);
        assert!(r.duplicate.is_some());
    }
}
