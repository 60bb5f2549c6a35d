//! Uniform hash grid over ambient coordinates.
//!
//! Cells have side `cell`; a radius query scans every cell within
//! `⌈r / cell⌉` steps of the query cell, so answers are exact for the
//! Euclidean distance of the stored coordinates.

use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct GridIndex {
    cell: f64,
    dim: usize,
    cells: HashMap<Vec<i64>, Vec<usize>>,
    coords: Vec<Vec<f64>>,
}

impl GridIndex {
    /// `cell` must be positive and finite.
    pub fn new(cell: f64, dim: usize) -> Self {
        assert!(
            cell > 0.0 && cell.is_finite(),
            "grid cell {cell} must be positive"
        );
        GridIndex {
            cell,
            dim,
            cells: HashMap::new(),
            coords: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    fn key(&self, x: &[f64]) -> Vec<i64> {
        x.iter().map(|v| (v / self.cell).floor() as i64).collect()
    }

    /// Stores a point and returns its id (ids are consecutive from 0).
    pub fn insert(&mut self, x: Vec<f64>) -> usize {
        debug_assert_eq!(x.len(), self.dim);
        let id = self.coords.len();
        self.cells.entry(self.key(&x)).or_default().push(id);
        self.coords.push(x);
        id
    }

    pub fn coords(&self, id: usize) -> &[f64] {
        &self.coords[id]
    }

    /// Ids of stored points within Euclidean distance `r` (inclusive) of `x`,
    /// in ascending id order.
    pub fn within(&self, x: &[f64], r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.coords.is_empty() || !(r >= 0.0) {
            return out;
        }
        let center = self.key(x);
        let reach = (r / self.cell).ceil() as i64;
        let span = (2 * reach + 1) as usize;
        let total = span.pow(self.dim as u32);
        // large radii: a linear scan is cheaper than visiting empty cells
        if total > self.cells.len() {
            out.extend((0..self.coords.len()).filter(|&i| dist(&self.coords[i], x) <= r));
            return out;
        }
        let mut key = vec![0i64; self.dim];
        for flat in 0..total {
            let mut rem = flat;
            for (d, k) in key.iter_mut().enumerate() {
                *k = center[d] + (rem % span) as i64 - reach;
                rem /= span;
            }
            if let Some(ids) = self.cells.get(&key) {
                out.extend(
                    ids.iter()
                        .copied()
                        .filter(|&i| dist(&self.coords[i], x) <= r),
                );
            }
        }
        out.sort_unstable();
        out
    }

    /// The nearest stored point within `r`, ties broken by smaller id.
    pub fn nearest_within(&self, x: &[f64], r: f64) -> Option<(usize, f64)> {
        self.within(x, r)
            .into_iter()
            .map(|i| (i, dist(&self.coords[i], x)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
