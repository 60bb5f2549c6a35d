//! Sampled verification of the gyrogroup axioms.
//!
//! Every check draws its inputs from a seeded sub-stream, evaluates both
//! sides of an identity and keeps the worst residual together with the
//! input tuple that produced it, so that any failure can be replayed.

use serde::Serialize;
use serde_json::Value;

use crate::carrier::{stream_rng, GyroRng, Gyrogroup};
use crate::error::{GyroError, Result};

/// Default equality tolerance for continuous carriers.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub residual: f64,
    pub tolerance: f64,
    /// Worst-case input tuple, serialized element by element.
    pub witness: Value,
    pub samples: usize,
    /// `None` for exhaustive (table) checks.
    pub seed: Option<u64>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.residual >= 0.0 && self.residual <= self.tolerance
    }
}

/// Tracks the maximum residual and its witness.
#[derive(Debug)]
pub(crate) struct Worst {
    residual: f64,
    witness: Value,
    samples: usize,
}

impl Worst {
    pub(crate) fn new() -> Self {
        Worst {
            residual: 0.0,
            witness: Value::Null,
            samples: 0,
        }
    }

    pub(crate) fn record<T: Serialize>(&mut self, residual: f64, witness: &[T]) {
        self.samples += 1;
        // NaN residuals count as failures
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if residual > self.residual || self.witness.is_null() {
            self.residual = residual;
            self.witness = serde_json::to_value(witness).unwrap_or(Value::Null);
        }
    }

    /// Records without touching the witness unless the residual is worse.
    pub(crate) fn record_lazy<F: FnOnce() -> Value>(&mut self, residual: f64, witness: F) {
        self.samples += 1;
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if residual > self.residual || self.witness.is_null() {
            self.residual = residual;
            self.witness = witness();
        }
    }

    pub(crate) fn finish(self, axiom: &str, tolerance: f64, seed: Option<u64>) -> AxiomReport {
        AxiomReport {
            axiom: axiom.to_string(),
            residual: self.residual,
            tolerance,
            witness: self.witness,
            samples: self.samples,
            seed,
        }
    }
}

// sub-stream ids, one per check
const STREAM_IDENTITY: u64 = 1;
const STREAM_GYROASSOC: u64 = 2;
const STREAM_LEFT_LOOP: u64 = 3;
const STREAM_AUTOMORPHISM: u64 = 4;
const STREAM_RIGHT_CANCEL: u64 = 5;
const STREAM_BALL: u64 = 6;
const STREAM_GYR_IDENTITY: u64 = 7;

fn check_args(n: usize, tol: f64) -> Result<()> {
    if n == 0 {
        return Err(GyroError::Precondition(
            "sample count must be at least 1".into(),
        ));
    }
    // exact carriers are checked at tolerance 0
    if !(tol >= 0.0) {
        return Err(GyroError::Precondition(format!(
            "tolerance {tol} must be non-negative"
        )));
    }
    Ok(())
}

fn draw<G: Gyrogroup>(g: &G, rng: &mut GyroRng) -> Result<G::Element> {
    g.sample(rng)
}

/// Identity and inverses: `0 ⊕ a = a = a ⊕ 0` and `⊖a ⊕ a = 0 = a ⊕ ⊖a`.
pub fn check_identity_inverse<G: Gyrogroup>(
    g: &G,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    check_args(n, tol)?;
    let mut rng = stream_rng(seed, STREAM_IDENTITY);
    let zero = g.identity();
    let mut worst = Worst::new();
    for _ in 0..n {
        let a = draw(g, &mut rng)?;
        let na = g.neg(&a)?;
        let r = g
            .distance(&g.add(&zero, &a)?, &a)
            .max(g.distance(&g.add(&a, &zero)?, &a))
            .max(g.distance(&g.add(&na, &a)?, &zero))
            .max(g.distance(&g.add(&a, &na)?, &zero));
        worst.record(r, std::slice::from_ref(&a));
    }
    Ok(worst.finish("identity_inverse", tol, Some(seed)))
}

/// Left gyroassociativity: `x ⊕ (y ⊕ z) = (x ⊕ y) ⊕ gyr[x, y](z)`.
pub fn check_gyroassociativity<G: Gyrogroup>(
    g: &G,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    check_args(n, tol)?;
    let mut rng = stream_rng(seed, STREAM_GYROASSOC);
    let mut worst = Worst::new();
    for _ in 0..n {
        let x = draw(g, &mut rng)?;
        let y = draw(g, &mut rng)?;
        let z = draw(g, &mut rng)?;
        let lhs = g.add(&x, &g.add(&y, &z)?)?;
        let rhs = g.add(&g.add(&x, &y)?, &g.gyr(&x, &y, &z)?)?;
        worst.record(g.distance(&lhs, &rhs), &[x, y, z]);
    }
    Ok(worst.finish("gyroassociativity", tol, Some(seed)))
}

/// Left loop property: `gyr[x ⊕ y, y] = gyr[x, y]`, compared pointwise on `n_probes`
/// sampled arguments per pair.
pub fn check_left_loop<G: Gyrogroup>(
    g: &G,
    n_pairs: usize,
    n_probes: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    check_args(n_pairs, tol)?;
    check_args(n_probes, tol)?;
    let mut rng = stream_rng(seed, STREAM_LEFT_LOOP);
    let mut worst = Worst::new();
    for _ in 0..n_pairs {
        let x = draw(g, &mut rng)?;
        let y = draw(g, &mut rng)?;
        let xy = g.add(&x, &y)?;
        for _ in 0..n_probes {
            let z = draw(g, &mut rng)?;
            let lhs = g.gyr(&xy, &y, &z)?;
            let rhs = g.gyr(&x, &y, &z)?;
            worst.record(g.distance(&lhs, &rhs), &[x.clone(), y.clone(), z]);
        }
    }
    Ok(worst.finish("left_loop", tol, Some(seed)))
}

/// Each gyration is a groupoid homomorphism:
/// `gyr[a, b](x ⊕ y) = gyr[a, b](x) ⊕ gyr[a, b](y)`.
pub fn check_gyr_automorphism<G: Gyrogroup>(
    g: &G,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    check_args(n, tol)?;
    let mut rng = stream_rng(seed, STREAM_AUTOMORPHISM);
    let mut worst = Worst::new();
    for _ in 0..n {
        let a = draw(g, &mut rng)?;
        let b = draw(g, &mut rng)?;
        let x = draw(g, &mut rng)?;
        let y = draw(g, &mut rng)?;
        let lhs = g.gyr(&a, &b, &g.add(&x, &y)?)?;
        let rhs = g.add(&g.gyr(&a, &b, &x)?, &g.gyr(&a, &b, &y)?)?;
        worst.record(g.distance(&lhs, &rhs), &[a, b, x, y]);
    }
    Ok(worst.finish("gyr_automorphism", tol, Some(seed)))
}

/// Right cancellation: `a = (a ⊕ v) ⊕ gyr[a, v](⊖v)`.
pub fn check_right_cancellation<G: Gyrogroup>(
    g: &G,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    check_args(n, tol)?;
    let mut rng = stream_rng(seed, STREAM_RIGHT_CANCEL);
    let mut worst = Worst::new();
    for _ in 0..n {
        let a = draw(g, &mut rng)?;
        let v = draw(g, &mut rng)?;
        let back = g.add(&g.add(&a, &v)?, &g.gyr(&a, &v, &g.neg(&v)?)?)?;
        worst.record(g.distance(&a, &back), &[a, v]);
    }
    Ok(worst.finish("right_cancellation", tol, Some(seed)))
}

/// `gyr[a, 0]` and `gyr[0, b]` act as the identity map.
pub fn check_trivial_gyrations<G: Gyrogroup>(
    g: &G,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    check_args(n, tol)?;
    let mut rng = stream_rng(seed, STREAM_GYR_IDENTITY);
    let zero = g.identity();
    let mut worst = Worst::new();
    for _ in 0..n {
        let a = draw(g, &mut rng)?;
        let z = draw(g, &mut rng)?;
        let r = g
            .distance(&g.gyr(&a, &zero, &z)?, &z)
            .max(g.distance(&g.gyr(&zero, &a, &z)?, &z));
        worst.record(r, &[a, z]);
    }
    Ok(worst.finish("trivial_gyrations", tol, Some(seed)))
}

/// Gyrations map each norm ball `U_r` about 0 onto itself.
///
/// For sampled `x, y` and `u ∈ U_r` the residual is the larger of
/// `|‖gyr[x,y](u)‖ − ‖u‖|` and the round-trip error of the preimage
/// `gyr[y,x](u)`; a sample whose image or preimage leaves `U_r` by more than
/// the tolerance counts as an infinite residual.
pub fn check_strong_ball_invariance<G: Gyrogroup>(
    g: &G,
    radii: &[f64],
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    check_args(n, tol)?;
    let zero = g.identity();
    if g.declared_norm(&zero).is_none() {
        return Err(GyroError::Unsupported(format!(
            "carrier {} declares no ambient norm",
            g.name()
        )));
    }
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(GyroError::Precondition(
            "radii must be non-empty and positive".into(),
        ));
    }
    let norm = |e: &G::Element| g.declared_norm(e).expect("norm declared");
    let mut rng = stream_rng(seed, STREAM_BALL);
    let mut worst = Worst::new();
    for &r in radii {
        for _ in 0..n {
            let x = draw(g, &mut rng)?;
            let y = draw(g, &mut rng)?;
            let u = g.sample_ball(&mut rng, r)?;
            let image = g.gyr(&x, &y, &u)?;
            let pre = g.gyr(&y, &x, &u)?;
            let round_trip = g.gyr(&x, &y, &pre)?;
            let nu = norm(&u);
            let mut res = (norm(&image) - nu).abs().max(g.distance(&round_trip, &u));
            if norm(&image) >= r + tol || norm(&pre) >= r + tol {
                res = f64::INFINITY;
            }
            worst.record_lazy(
                res,
                || serde_json::json!({ "radius": r, "x": x, "y": y, "u": u }),
            );
        }
    }
    Ok(worst.finish("strong_ball_invariance", tol, Some(seed)))
}

/// Runs the five axiom checks with one seed and one sample budget.
pub fn check_all<G: Gyrogroup>(g: &G, n: usize, tol: f64, seed: u64) -> Result<Vec<AxiomReport>> {
    let probes = 8;
    let pairs = (n / probes).max(1);
    Ok(vec![
        check_identity_inverse(g, n, tol, seed)?,
        check_gyroassociativity(g, n, tol, seed)?,
        check_left_loop(g, pairs, probes, tol, seed)?,
        check_gyr_automorphism(g, n, tol, seed)?,
        check_right_cancellation(g, n, tol, seed)?,
    ])
}
