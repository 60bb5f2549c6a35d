//! Finite gyrogroups given by an addition table and a gyration table.
//!
//! Element 0 is always the identity. A table without an explicit gyration
//! table is group-induced: every gyration is the identity permutation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::{AxiomReport, Worst};
use crate::carrier::{GyroRng, Gyrogroup};
use crate::error::{GyroError, Result};

/// On-disk table format. `gyr` defaults to identity permutations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableFile {
    pub order: usize,
    pub add: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gyr: Option<Vec<Vec<Vec<usize>>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableGyro {
    order: usize,
    add: Vec<Vec<usize>>,
    gyr: Vec<Vec<Vec<usize>>>,
    group_induced: bool,
    inverse: Vec<Option<usize>>,
}

impl TableGyro {
    /// Builds a table after checking dimensions and index ranges. Axioms are
    /// not assumed; see [`validate_table`].
    pub fn new(add: Vec<Vec<usize>>, gyr: Option<Vec<Vec<Vec<usize>>>>) -> Result<Self> {
        let n = add.len();
        if n == 0 {
            return Err(GyroError::Format("table order must be at least 1".into()));
        }
        for (i, row) in add.iter().enumerate() {
            if row.len() != n {
                return Err(GyroError::Format(format!(
                    "add row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(GyroError::Format(format!(
                    "add row {i} contains index {bad} ≥ {n}"
                )));
            }
        }
        let group_induced = gyr.is_none();
        let gyr = match gyr {
            Some(g) => {
                if g.len() != n || g.iter().any(|row| row.len() != n) {
                    return Err(GyroError::Format(format!("gyr table must be {n}×{n}")));
                }
                for (a, row) in g.iter().enumerate() {
                    for (b, perm) in row.iter().enumerate() {
                        if perm.len() != n || perm.iter().any(|&v| v >= n) {
                            return Err(GyroError::Format(format!(
                                "gyr[{a}][{b}] is not a length-{n} index list"
                            )));
                        }
                    }
                }
                g
            }
            None => vec![vec![(0..n).collect(); n]; n],
        };
        let inverse = (0..n)
            .map(|a| {
                let two_sided = (0..n).find(|&b| add[a][b] == 0 && add[b][a] == 0);
                two_sided.or_else(|| (0..n).find(|&b| add[a][b] == 0))
            })
            .collect();
        Ok(TableGyro {
            order: n,
            add,
            gyr,
            group_induced,
            inverse,
        })
    }

    /// A group table viewed as a gyrogroup with trivial gyrations.
    pub fn group_induced(add: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(add, None)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        let add = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n.max(1)).collect())
            .collect();
        Self::group_induced(add)
    }

    /// The Klein four-group `ℤ₂ × ℤ₂`, encoded as bitwise xor.
    pub fn klein() -> Self {
        let add = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        Self::group_induced(add).expect("valid dimensions")
    }

    pub fn from_file(file: TableFile) -> Result<Self> {
        if file.order != file.add.len() {
            return Err(GyroError::Format(format!(
                "declared order {} but add table has {} rows",
                file.order,
                file.add.len()
            )));
        }
        Self::new(file.add, file.gyr)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TableFile =
            serde_json::from_str(s).map_err(|e| GyroError::Format(format!("table JSON: {e}")))?;
        Self::from_file(file)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_file(&self) -> TableFile {
        TableFile {
            order: self.order,
            add: self.add.clone(),
            gyr: (!self.group_induced).then(|| self.gyr.clone()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn gyr_table(&self) -> &[Vec<Vec<usize>>] {
        &self.gyr
    }

    pub fn is_group_induced(&self) -> bool {
        self.group_induced
    }

    /// Replaces one addition entry; used to build mutants for validation tests.
    pub fn with_add_entry(&self, i: usize, j: usize, value: usize) -> Result<Self> {
        let mut add = self.add.clone();
        *add.get_mut(i)
            .and_then(|r| r.get_mut(j))
            .ok_or_else(|| GyroError::Format(format!("no entry ({i}, {j})")))? = value;
        Self::new(add, (!self.group_induced).then(|| self.gyr.clone()))
    }

    /// Replaces one gyration entry `gyr[a][b][c]`.
    pub fn with_gyr_entry(&self, a: usize, b: usize, c: usize, value: usize) -> Result<Self> {
        let mut gyr = self.gyr.clone();
        *gyr.get_mut(a)
            .and_then(|r| r.get_mut(b))
            .and_then(|p| p.get_mut(c))
            .ok_or_else(|| GyroError::Format(format!("no entry ({a}, {b}, {c})")))? = value;
        Self::new(self.add.clone(), Some(gyr))
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    #[inline]
    pub fn gyr_at(&self, a: usize, b: usize, c: usize) -> usize {
        self.gyr[a][b][c]
    }

    fn check_index(&self, a: usize) -> Result<()> {
        if a >= self.order {
            Err(GyroError::domain(format!(
                "index {a} outside table of order {}",
                self.order
            )))
        } else {
            Ok(())
        }
    }
}

impl Gyrogroup for TableGyro {
    type Element = usize;

    fn name(&self) -> String {
        if self.group_induced {
            format!("group:{}", self.order)
        } else {
            format!("table:{}", self.order)
        }
    }

    fn identity(&self) -> usize {
        0
    }

    fn add(&self, a: &usize, b: &usize) -> Result<usize> {
        self.check_index(*a)?;
        self.check_index(*b)?;
        Ok(self.add[*a][*b])
    }

    fn neg(&self, a: &usize) -> Result<usize> {
        self.check_index(*a)?;
        self.inverse[*a].ok_or_else(|| GyroError::domain(format!("element {a} has no inverse")))
    }

    fn gyr(&self, a: &usize, b: &usize, c: &usize) -> Result<usize> {
        self.check_index(*a)?;
        self.check_index(*b)?;
        self.check_index(*c)?;
        Ok(self.gyr[*a][*b][*c])
    }

    fn distance(&self, a: &usize, b: &usize) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }

    fn sample(&self, rng: &mut GyroRng) -> Result<usize> {
        Ok(rng.random_range(0..self.order))
    }

    fn sample_ball(&self, rng: &mut GyroRng, radius: f64) -> Result<usize> {
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

    fn declared_norm(&self, e: &usize) -> Option<f64> {
        self.group_induced.then(|| self.size(e))
    }

    fn coords(&self, e: &usize) -> Vec<f64> {
        vec![*e as f64]
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.order).collect())
    }
}

/// Outcome of the exhaustive table check: one report per axiom class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableValidation {
    pub order: usize,
    pub checks: Vec<AxiomReport>,
}

impl TableValidation {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomReport> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

fn exact_check(name: &str, tuples: impl Iterator<Item = (bool, Vec<usize>)>) -> AxiomReport {
    let mut worst = Worst::new();
    for (ok, tuple) in tuples {
        worst.record_lazy(if ok { 0.0 } else { 1.0 }, || {
            serde_json::to_value(&tuple).unwrap_or_default()
        });
    }
    worst.finish(name, 0.0, None)
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &v in p {
        if v >= p.len() || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    true
}

/// Exhaustive verification of identity, inverses, gyration bijectivity and
/// homomorphy, gyroassociativity and the left loop property.
///
/// Residuals are 0 (every tuple passes) or 1, with the first failing tuple as
/// the witness.
pub fn validate_table(t: &TableGyro) -> TableValidation {
    let n = t.order;
    let add = &t.add;
    let gyr = &t.gyr;
    let all = move || 0..n;

    let identity = exact_check(
        "identity",
        all()
            .map(|a| (add[0][a] == a && add[a][0] == a, vec![a]))
            .chain(all().skip(1).map(|e| {
                // no other two-sided identity
                let is_identity = all().all(|a| add[e][a] == a && add[a][e] == a);
                (!is_identity, vec![e])
            })),
    );
    let inverse = exact_check(
        "inverse",
        all().map(|a| {
            let count = all().filter(|&b| add[a][b] == 0 && add[b][a] == 0).count();
            (count == 1, vec![a])
        }),
    );
    let bijection = exact_check(
        "gyr_bijection",
        all().flat_map(|a| all().map(move |b| (is_permutation(&gyr[a][b]), vec![a, b]))),
    );
    let automorphism = exact_check(
        "gyr_automorphism",
        all().flat_map(|a| {
            all().flat_map(move |b| {
                all().flat_map(move |x| {
                    all().map(move |y| {
                        let g = &gyr[a][b];
                        (g[add[x][y]] == add[g[x]][g[y]], vec![a, b, x, y])
                    })
                })
            })
        }),
    );
    let gyroassoc = exact_check(
        "gyroassociativity",
        all().flat_map(|x| {
            all().flat_map(move |y| {
                all().map(move |z| {
                    let lhs = add[x][add[y][z]];
                    let rhs = add[add[x][y]][gyr[x][y][z]];
                    (lhs == rhs, vec![x, y, z])
                })
            })
        }),
    );
    let left_loop = exact_check(
        "left_loop",
        all().flat_map(|x| {
            all().flat_map(move |y| {
                all().map(move |z| (gyr[add[x][y]][y][z] == gyr[x][y][z], vec![x, y, z]))
            })
        }),
    );
    TableValidation {
        order: n,
        checks: vec![
            identity,
            inverse,
            bijection,
            automorphism,
            gyroassoc,
            left_loop,
        ],
    }
}

fn subset_mask(t: &TableGyro, h: &[usize]) -> Result<Vec<bool>> {
    if h.is_empty() {
        return Err(GyroError::Precondition("subset H is empty".into()));
    }
    let mut mask = vec![false; t.order];
    for &x in h {
        if x >= t.order {
            return Err(GyroError::Precondition(format!(
                "index {x} outside the carrier"
            )));
        }
        mask[x] = true;
    }
    Ok(mask)
}

/// Checks that `H` is closed under ⊕ and ⊖ and stable under its own
/// gyrations. Returns the membership mask.
pub fn check_subgyrogroup(t: &TableGyro, h: &[usize]) -> Result<Vec<bool>> {
    let mask = subset_mask(t, h)?;
    let members: Vec<usize> = (0..t.order).filter(|&x| mask[x]).collect();
    for &x in &members {
        let inv = t.neg(&x)?;
        if !mask[inv] {
            return Err(GyroError::Precondition(format!(
                "H is not closed under inverses: ⊖{x} = {inv} ∉ H"
            )));
        }
        for &y in &members {
            let s = t.op(x, y);
            if !mask[s] {
                return Err(GyroError::Precondition(format!(
                    "H is not closed under addition: {x} ⊕ {y} = {s} ∉ H"
                )));
            }
            for &z in &members {
                let g = t.gyr_at(x, y, z);
                if !mask[g] {
                    return Err(GyroError::Precondition(format!(
                        "H is not stable under its gyrations: gyr[{x},{y}]({z}) = {g} ∉ H"
                    )));
                }
            }
        }
    }
    Ok(mask)
}

/// Whether the subgyrogroup `H` satisfies `gyr[a, h](H) = H` for every
/// `a ∈ G`, `h ∈ H`.
pub fn lsub_check(t: &TableGyro, h: &[usize]) -> Result<bool> {
    let mask = check_subgyrogroup(t, h)?;
    let members: Vec<usize> = (0..t.order).filter(|&x| mask[x]).collect();
    for a in 0..t.order {
        for &hh in &members {
            // a permutation maps H onto H iff it maps H into H
            if members.iter().any(|&x| !mask[t.gyr_at(a, hh, x)]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Left cosets `g ⊕ H` with one representative each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetPartition {
    /// Sorted cosets, ordered by representative.
    pub blocks: Vec<Vec<usize>>,
    /// Smallest index in each block; the coset of 0 is represented by 0.
    pub representatives: Vec<usize>,
}

impl CosetPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }
}

/// Partitions the carrier into left cosets of `H`. Fails with the two
/// offending cosets when distinct cosets overlap.
pub fn coset_decompose(t: &TableGyro, h: &[usize]) -> Result<CosetPartition> {
    let mask = check_subgyrogroup(t, h)?;
    let members: Vec<usize> = (0..t.order).filter(|&x| mask[x]).collect();
    let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; t.order];
    for g in 0..t.order {
        let mut coset: Vec<usize> = members.iter().map(|&x| t.op(g, x)).collect();
        coset.sort_unstable();
        coset.dedup();
        if let Some((_, existing)) = blocks.iter().find(|(_, b)| *b == coset) {
            debug_assert!(existing.contains(&g) || !coset.contains(&g));
            continue;
        }
        for &x in &coset {
            if let Some(other) = owner[x] {
                return Err(GyroError::Precondition(format!(
                    "cosets {}⊕H and {g}⊕H overlap at {x} without being equal",
                    blocks[other].0
                )));
            }
        }
        for &x in &coset {
            owner[x] = Some(blocks.len());
        }
        blocks.push((g, coset));
    }
    if owner.iter().any(Option::is_none) {
        return Err(GyroError::Precondition(
            "cosets do not cover the carrier".into(),
        ));
    }
    let mut blocks: Vec<Vec<usize>> = blocks.into_iter().map(|(_, b)| b).collect();
    blocks.sort_by_key(|b| b[0]);
    let representatives = blocks.iter().map(|b| b[0]).collect();
    Ok(CosetPartition {
        blocks,
        representatives,
    })
}
