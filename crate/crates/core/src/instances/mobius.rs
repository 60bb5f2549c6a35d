//! The Möbius gyrogroup on the open unit disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::carrier::{GyroRng, Gyrogroup};
use crate::error::{GyroError, Result};

/// Default sampling cap: formulas lose conditioning as |z| → 1.
pub const DISK_SAMPLE_CAP: f64 = 0.99;

/// A point strictly inside the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct MobiusPoint(Complex64);

impl MobiusPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(GyroError::domain(format!("non-finite disk point {z}")));
        }
        if z.norm_sqr() >= 1.0 {
            return Err(GyroError::domain(format!(
                "{z} is not inside the open unit disk (|z| = {})",
                z.norm()
            )));
        }
        Ok(MobiusPoint(z))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn zero() -> Self {
        MobiusPoint(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }
}

impl TryFrom<[f64; 2]> for MobiusPoint {
    type Error = GyroError;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        MobiusPoint::from_parts(v[0], v[1])
    }
}

impl From<MobiusPoint> for [f64; 2] {
    fn from(p: MobiusPoint) -> Self {
        [p.0.re, p.0.im]
    }
}

/// `a ⊕ b = (a + b) / (1 + ā b)`.
pub fn mobius_add(a: MobiusPoint, b: MobiusPoint) -> Result<MobiusPoint> {
    let sum = (a.0 + b.0) / (Complex64::new(1.0, 0.0) + a.0.conj() * b.0);
    MobiusPoint::new(sum)
}

/// `gyr[a, b](c) = (1 + a b̄) / (1 + ā b) · c`.
///
/// The factor is a unit complex number, so the result has the modulus of `c`.
pub fn mobius_gyr(a: MobiusPoint, b: MobiusPoint, c: MobiusPoint) -> Result<MobiusPoint> {
    let one = Complex64::new(1.0, 0.0);
    let factor = (one + a.0 * b.0.conj()) / (one + a.0.conj() * b.0);
    MobiusPoint::new(factor * c.0)
}

/// Both associations of a triple and the distance between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssociationGap {
    /// `(x ⊕ y) ⊕ z`
    pub lhs: MobiusPoint,
    /// `x ⊕ (y ⊕ z)`
    pub rhs: MobiusPoint,
    pub gap: f64,
}

pub fn association_gap(x: MobiusPoint, y: MobiusPoint, z: MobiusPoint) -> Result<AssociationGap> {
    let lhs = mobius_add(mobius_add(x, y)?, z)?;
    let rhs = mobius_add(x, mobius_add(y, z)?)?;
    Ok(AssociationGap {
        lhs,
        rhs,
        gap: (lhs.0 - rhs.0).norm(),
    })
}

/// The triple `(1/2, i/2, −1/2)`, on which the two associations differ.
pub fn mobius_nonassociativity_witness() -> AssociationGap {
    let x = MobiusPoint::from_parts(0.5, 0.0).expect("inside disk");
    let y = MobiusPoint::from_parts(0.0, 0.5).expect("inside disk");
    let z = MobiusPoint::from_parts(-0.5, 0.0).expect("inside disk");
    association_gap(x, y, z).expect("witness triple stays inside the disk")
}

/// The disk as a carrier. `sample_cap` bounds the modulus of sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusDisk {
    pub sample_cap: f64,
}

impl Default for MobiusDisk {
    fn default() -> Self {
        MobiusDisk {
            sample_cap: DISK_SAMPLE_CAP,
        }
    }
}

impl MobiusDisk {
    pub fn new() -> Self {
        Self::default()
    }

    fn draw(rng: &mut GyroRng, radius: f64) -> Result<MobiusPoint> {
        // uniform in modulus² and angle
        let r = radius * rng.random::<f64>().sqrt();
        let theta = TAU * rng.random::<f64>();
        MobiusPoint::new(Complex64::from_polar(r, theta))
    }
}

impl Gyrogroup for MobiusDisk {
    type Element = MobiusPoint;

    fn name(&self) -> String {
        "mobius".to_string()
    }

    fn identity(&self) -> MobiusPoint {
        MobiusPoint::zero()
    }

    fn add(&self, a: &MobiusPoint, b: &MobiusPoint) -> Result<MobiusPoint> {
        mobius_add(*a, *b)
    }

    fn neg(&self, a: &MobiusPoint) -> Result<MobiusPoint> {
        Ok(MobiusPoint(-a.0))
    }

    fn gyr(&self, a: &MobiusPoint, b: &MobiusPoint, c: &MobiusPoint) -> Result<MobiusPoint> {
        mobius_gyr(*a, *b, *c)
    }

    fn distance(&self, a: &MobiusPoint, b: &MobiusPoint) -> f64 {
        (a.0 - b.0).norm()
    }

    fn sample(&self, rng: &mut GyroRng) -> Result<MobiusPoint> {
        Self::draw(rng, self.sample_cap)
    }

    fn sample_ball(&self, rng: &mut GyroRng, radius: f64) -> Result<MobiusPoint> {
        if radius <= 0.0 {
            return Err(GyroError::Sampling(format!(
                "ball radius {radius} is not positive"
            )));
        }
        Self::draw(rng, radius.min(self.sample_cap))
    }

    fn size(&self, e: &MobiusPoint) -> f64 {
        e.0.norm()
    }

    fn declared_norm(&self, e: &MobiusPoint) -> Option<f64> {
        Some(e.0.norm())
    }

    fn coords(&self, e: &MobiusPoint) -> Vec<f64> {
        vec![e.0.re, e.0.im]
    }

    fn scale(&self, e: &MobiusPoint, t: f64) -> Option<MobiusPoint> {
        MobiusPoint::new(e.0 * t).ok()
    }

    fn boundary_radius(&self) -> Option<f64> {
        Some(1.0)
    }

    // |b − a| = |(⊖a) ⊕ b| · |1 − āb| < 2·radius
    fn translate_reach(&self, radius: f64) -> Option<f64> {
        Some((2.0 * radius).min(2.0))
    }
}
