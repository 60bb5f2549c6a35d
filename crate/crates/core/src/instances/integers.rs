//! The additive group of integers as a discrete, countably infinite carrier.

use rand::Rng;

use crate::carrier::{GyroRng, Gyrogroup};
use crate::error::{GyroError, Result};

/// `(ℤ, +)` with the discrete metric and trivial gyrations.
///
/// Sampling draws uniformly from `[-sample_bound, sample_bound]`; the lazy
/// enumeration is `0, 1, −1, 2, −2, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Integers {
    pub sample_bound: i64,
}

impl Default for Integers {
    fn default() -> Self {
        Integers {
            sample_bound: 1_000,
        }
    }
}

impl Integers {
    pub fn new() -> Self {
        Self::default()
    }

    /// The `k`-th element of the enumeration `0, 1, −1, 2, −2, …`.
    pub fn nth(k: u64) -> i64 {
        let half = k.div_ceil(2) as i64;
        if k % 2 == 1 {
            half
        } else {
            -half
        }
    }
}

impl Gyrogroup for Integers {
    type Element = i64;

    fn name(&self) -> String {
        "integers".to_string()
    }

    fn identity(&self) -> i64 {
        0
    }

    fn add(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_add(*b)
            .ok_or_else(|| GyroError::domain(format!("{a} + {b} overflows")))
    }

    fn neg(&self, a: &i64) -> Result<i64> {
        a.checked_neg()
            .ok_or_else(|| GyroError::domain(format!("−{a} overflows")))
    }

    fn gyr(&self, _a: &i64, _b: &i64, c: &i64) -> Result<i64> {
        Ok(*c)
    }

    fn distance(&self, a: &i64, b: &i64) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }

    fn sample(&self, rng: &mut GyroRng) -> Result<i64> {
        Ok(rng.random_range(-self.sample_bound..=self.sample_bound))
    }

    fn sample_ball(&self, rng: &mut GyroRng, radius: f64) -> Result<i64> {
        if radius <= 0.0 {
            return Err(GyroError::Sampling(format!(
                "ball radius {radius} is not positive"
            )));
        }
        if radius > 1.0 {
            self.sample(rng)
        } else {
            Ok(0)
        }
    }

    fn declared_norm(&self, e: &i64) -> Option<f64> {
        Some(self.size(e))
    }

    fn coords(&self, e: &i64) -> Vec<f64> {
        vec![*e as f64]
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn enumerate(&self, count: usize) -> Option<Vec<i64>> {
        Some((0..count as u64).map(Self::nth).collect())
    }
}
