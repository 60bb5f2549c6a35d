//! The abstract gyrogroup interface shared by every carrier.
//!
//! A carrier supplies the identity, addition, inversion and gyration, plus
//! the metric hooks that the covering and density machinery needs: an
//! ambient distance, ball sampling and coordinates for spatial indexing.

use std::fmt::Debug;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::io::PointRecord;

/// Seeded generator used for every sampling routine in the crate.
pub type GyroRng = ChaCha8Rng;

/// Derives an independent, reproducible sub-stream from a single seed.
pub fn stream_rng(seed: u64, stream: u64) -> GyroRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub trait Gyrogroup {
    type Element: Clone + Debug + PartialEq + Serialize + PointRecord;

    /// Short instance label used in reports.
    fn name(&self) -> String;

    fn identity(&self) -> Self::Element;

    fn add(&self, a: &Self::Element, b: &Self::Element) -> Result<Self::Element>;

    /// The inverse `⊖a`.
    fn neg(&self, a: &Self::Element) -> Result<Self::Element>;

    /// `gyr[a, b](c)`.
    fn gyr(&self, a: &Self::Element, b: &Self::Element, c: &Self::Element)
        -> Result<Self::Element>;

    /// Ambient distance. Exact 0/1 for discrete carriers.
    fn distance(&self, a: &Self::Element, b: &Self::Element) -> f64;

    /// Draws one element from the carrier's sampling distribution.
    fn sample(&self, rng: &mut GyroRng) -> Result<Self::Element>;

    /// Draws one element from the open ambient ball of `radius` about 0.
    fn sample_ball(&self, rng: &mut GyroRng, radius: f64) -> Result<Self::Element>;

    /// Size of an element as seen by neighborhoods of 0: distance to identity.
    fn size(&self, e: &Self::Element) -> f64 {
        self.distance(&self.identity(), e)
    }

    /// The ambient norm, when the carrier declares one. Raw tables do not.
    fn declared_norm(&self, e: &Self::Element) -> Option<f64>;

    /// Ambient coordinates for spatial indexing.
    fn coords(&self, e: &Self::Element) -> Vec<f64>;

    /// Exact carriers compare elements by identity, not by tolerance.
    fn is_exact(&self) -> bool {
        false
    }

    /// All elements, for finite carriers.
    fn elements(&self) -> Option<Vec<Self::Element>> {
        None
    }

    /// The first `count` elements of a fixed enumeration, for countable
    /// carriers.
    fn enumerate(&self, count: usize) -> Option<Vec<Self::Element>> {
        self.elements().map(|mut all| {
            all.truncate(count);
            all
        })
    }

    /// Scalar multiple in the ambient vector space, when there is one.
    fn scale(&self, _e: &Self::Element, _t: f64) -> Option<Self::Element> {
        None
    }

    /// Radius of the open ambient ball the carrier lives in (1 for the disk,
    /// `c` for the Einstein ball). `None` for discrete carriers.
    fn boundary_radius(&self) -> Option<f64> {
        None
    }

    /// An ambient radius `R` with `a ⊕ u` within `R` of `a` whenever
    /// `size(u) < radius`, used to prefilter covering searches.
    fn translate_reach(&self, _radius: f64) -> Option<f64> {
        None
    }

    fn approx_eq(&self, a: &Self::Element, b: &Self::Element, tol: f64) -> bool {
        if self.is_exact() {
            a == b
        } else {
            self.distance(a, b) <= tol
        }
    }
}
