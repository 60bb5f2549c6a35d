//! Einstein velocity addition on the ball of admissible velocities `‖v‖ < c`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::carrier::{GyroRng, Gyrogroup};
use crate::error::{GyroError, Result};

/// Relative margin below `c` at which a speed is treated as inadmissible.
const SPEED_GUARD: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EinsteinVec(pub [f64; 3]);

impl EinsteinVec {
    pub fn zero() -> Self {
        EinsteinVec([0.0; 3])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        dot(&self.0, &self.0).sqrt()
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// The ball `{v ∈ ℝ³ : ‖v‖ < c}` with Einstein addition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinsteinBall {
    c: f64,
    /// Fraction of `c` that bounds sampled speeds.
    pub sample_cap: f64,
}

impl EinsteinBall {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(GyroError::domain(format!(
                "speed parameter c = {c} must be positive"
            )));
        }
        Ok(EinsteinBall {
            c,
            sample_cap: 0.99,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Validates a raw vector as an admissible velocity.
    pub fn vector(&self, v: [f64; 3]) -> Result<EinsteinVec> {
        let u = EinsteinVec(v);
        self.admissible(&u)?;
        Ok(u)
    }

    fn admissible(&self, u: &EinsteinVec) -> Result<()> {
        let n = u.norm();
        if !n.is_finite() || n >= self.c * (1.0 - SPEED_GUARD) {
            return Err(GyroError::domain(format!(
                "speed {n} is not below c = {}",
                self.c
            )));
        }
        Ok(())
    }

    /// `γ_u = 1 / √(1 − ‖u‖²/c²)`.
    pub fn lorentz_gamma(&self, u: &EinsteinVec) -> Result<f64> {
        self.admissible(u)?;
        let beta2 = dot(&u.0, &u.0) / (self.c * self.c);
        Ok(1.0 / (1.0 - beta2).sqrt())
    }

    /// Einstein velocity addition
    /// `u ⊕ v = (u + v/γ_u + (γ_u/(1+γ_u)) ⟨u,v⟩ u / c²) / (1 + ⟨u,v⟩/c²)`.
    pub fn einstein_add(&self, u: &EinsteinVec, v: &EinsteinVec) -> Result<EinsteinVec> {
        self.admissible(v)?;
        let gamma = self.lorentz_gamma(u)?;
        let c2 = self.c * self.c;
        let uv = dot(&u.0, &v.0);
        let coeff_u = 1.0 + gamma / (1.0 + gamma) * uv / c2;
        let denom = 1.0 + uv / c2;
        let mut out = [0.0; 3];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (coeff_u * u.0[k] + v.0[k] / gamma) / denom;
        }
        let w = EinsteinVec(out);
        self.admissible(&w)?;
        Ok(w)
    }

    /// Gyration obtained from left gyroassociativity by left cancellation:
    /// `gyr[u, v](w) = ⊖(u ⊕ v) ⊕ (u ⊕ (v ⊕ w))`.
    pub fn einstein_gyr(
        &self,
        u: &EinsteinVec,
        v: &EinsteinVec,
        w: &EinsteinVec,
    ) -> Result<EinsteinVec> {
        let uv = self.einstein_add(u, v)?;
        let right = self.einstein_add(u, &self.einstein_add(v, w)?)?;
        self.einstein_add(&negate(&uv), &right)
    }
}

fn negate(u: &EinsteinVec) -> EinsteinVec {
    EinsteinVec([-u.0[0], -u.0[1], -u.0[2]])
}

impl Gyrogroup for EinsteinBall {
    type Element = EinsteinVec;

    fn name(&self) -> String {
        format!("einstein:c={}", self.c)
    }

    fn identity(&self) -> EinsteinVec {
        EinsteinVec::zero()
    }

    fn add(&self, a: &EinsteinVec, b: &EinsteinVec) -> Result<EinsteinVec> {
        self.einstein_add(a, b)
    }

    fn neg(&self, a: &EinsteinVec) -> Result<EinsteinVec> {
        Ok(negate(a))
    }

    fn gyr(&self, a: &EinsteinVec, b: &EinsteinVec, c: &EinsteinVec) -> Result<EinsteinVec> {
        self.einstein_gyr(a, b, c)
    }

    fn distance(&self, a: &EinsteinVec, b: &EinsteinVec) -> f64 {
        let d = [a.0[0] - b.0[0], a.0[1] - b.0[1], a.0[2] - b.0[2]];
        dot(&d, &d).sqrt()
    }

    fn sample(&self, rng: &mut GyroRng) -> Result<EinsteinVec> {
        self.sample_ball(rng, self.c)
    }

    fn sample_ball(&self, rng: &mut GyroRng, radius: f64) -> Result<EinsteinVec> {
        if radius <= 0.0 {
            return Err(GyroError::Sampling(format!(
                "ball radius {radius} is not positive"
            )));
        }
        let radius = radius.min(self.sample_cap * self.c);
        // rejection from the enclosing cube keeps the draw uniform in volume
        loop {
            let v = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let n2 = dot(&v, &v);
            if n2 < 1.0 {
                return self.vector([v[0] * radius, v[1] * radius, v[2] * radius]);
            }
        }
    }

    fn size(&self, e: &EinsteinVec) -> f64 {
        e.norm()
    }

    fn declared_norm(&self, e: &EinsteinVec) -> Option<f64> {
        Some(e.norm())
    }

    fn coords(&self, e: &EinsteinVec) -> Vec<f64> {
        e.0.to_vec()
    }

    fn scale(&self, e: &EinsteinVec, t: f64) -> Option<EinsteinVec> {
        self.vector([e.0[0] * t, e.0[1] * t, e.0[2] * t]).ok()
    }

    fn boundary_radius(&self) -> Option<f64> {
        Some(self.c)
    }
}
