//! Suitable sets: closed discrete `S ∌ 0` whose generated subgyrogroup is
//! dense.
//!
//! Every construction returns a [`SuitableSetResult`] whose reports come
//! from [`verify_suitable`] at the construction's own configuration, so a
//! result and its re-verification always agree.
//!
//! On continuous carriers `⟨S⟩` is approximated by the values of words of
//! length `≤ word_cap`: the budgeted word closure together with words grown
//! greedily toward sample points. Every element used carries a word, so the
//! measured density is a lower bound for the density of `⟨S⟩`.

use std::fmt;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::carrier::Gyrogroup;
use crate::error::{GyroError, Result};
use crate::instances::{
    check_subgyrogroup, coset_decompose, lsub_check, validate_table, TableGyro,
};
use crate::metric::{
    closed_discrete_check, density_check, greedy_separated_family, precompact_witness,
    sum_inclusion_check, u_disjoint_check, Ball, Candidates, CenterIndex, ClosedDiscreteReport,
    DensityReport, SampleCloud,
};
use crate::spatial::GridIndex;
use crate::words::{
    closure_generate_with_budget, eval_word, word_membership_witness, ClosureBudget, ClosureSet,
    PointSet, Sign, WordSpec,
};

/// Sub-stream of `seed` for verification clouds, distinct from construction clouds.
const STREAM_VERIFY: u64 = 21;

/// Distance from the carrier boundary excluded from the compact core.
pub const BOUNDARY_MARGIN: f64 = 0.01;

/// Re-evaluated words must land this close to the element they witness.
const WITNESS_TOL: f64 = 1e-9;

/// Samples per nested-ball inclusion check.
const INCLUSION_SAMPLES: usize = 2000;

/// Enumeration prefix scanned per requested separated element.
const STALL_FACTOR: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionConfig {
    /// Strictly decreasing radii `r_0 > r_1 > …` of the balls `U_k`.
    pub radius_schedule: Vec<f64>,
    pub word_cap: usize,
    pub cloud_size: usize,
    pub dedup_tol: f64,
    pub seed: u64,
    pub density_delta: f64,
    /// Minimum covered fraction on continuous carriers. Exact carriers need 1.
    pub density_threshold: f64,
    pub closure_max_elements: usize,
    pub closure_max_evaluations: u64,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            radius_schedule: (0..7).map(|k| 0.4 * 0.5f64.powi(k)).collect(),
            word_cap: 8,
            cloud_size: 1000,
            dedup_tol: 1e-9,
            seed: 0,
            density_delta: 0.05,
            density_threshold: 0.95,
            closure_max_elements: 100_000,
            closure_max_evaluations: 20_000_000,
        }
    }
}

impl ConstructionConfig {
    /// `r_0, r_0/2, r_0/4, …` down to the first radius below `below`.
    pub fn halving_schedule(r0: f64, below: f64) -> Vec<f64> {
        let mut out = vec![r0];
        while out[out.len() - 1] >= below && out.len() < 64 {
            out.push(out[out.len() - 1] / 2.0);
        }
        out
    }

    pub fn budget(&self) -> ClosureBudget {
        ClosureBudget {
            max_elements: self.closure_max_elements,
            max_evaluations: self.closure_max_evaluations,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GyroError::Precondition(m));
        if self.word_cap == 0 {
            return bad("word cap must be at least 1".into());
        }
        if self.cloud_size == 0 {
            return bad("cloud size must be at least 1".into());
        }
        if !(self.dedup_tol >= 0.0) {
            return bad(format!("dedup tolerance {} is negative", self.dedup_tol));
        }
        if !(self.density_delta > 0.0) {
            return bad(format!(
                "density radius {} must be positive",
                self.density_delta
            ));
        }
        if !(self.density_threshold > 0.0 && self.density_threshold <= 1.0) {
            return bad(format!(
                "density threshold {} is outside (0, 1]",
                self.density_threshold
            ));
        }
        if let Some(r) = self
            .radius_schedule
            .iter()
            .find(|r| !(**r > 0.0 && r.is_finite()))
        {
            return bad(format!("schedule radius {r} must be positive"));
        }
        if self.radius_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return bad("radius schedule must be strictly decreasing".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepCheck {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl StepCheck {
    fn new(name: &str, passed: bool, detail: Value) -> Self {
        StepCheck {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// `target` as a word over the set named by `over`. `None` stands for the
/// empty word, whose value is the identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordWitness<E> {
    pub target: E,
    pub over: String,
    pub word: Option<WordSpec>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep<E> {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<E>,
    pub added: Vec<E>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<E>,
    pub witnesses: Vec<WordWitness<E>>,
    pub checks: Vec<StepCheck>,
}

impl<E> TraceStep<E> {
    fn new(k: usize) -> Self {
        TraceStep {
            k,
            radius: None,
            target: None,
            added: Vec::new(),
            removed: Vec::new(),
            witnesses: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuitableSetResult<E> {
    pub method: String,
    pub carrier: String,
    pub points: Vec<E>,
    /// How each point was obtained from the generators, when tracked.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub point_origins: Vec<Origin>,
    pub trace: Vec<TraceStep<E>>,
    pub separation_report: ClosedDiscreteReport<E>,
    pub density_report: DensityReport<E>,
    /// Set when the identity turned up and was dropped from `points`.
    pub excluded_identity: bool,
    pub verified: bool,
    pub config: ConstructionConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuitableVerdict<E> {
    pub discrete: ClosedDiscreteReport<E>,
    pub density: DensityReport<E>,
    pub excludes_identity: bool,
    pub closure_size: usize,
    pub closure_truncated: bool,
    pub passed: bool,
}

/// How an element of the generated subgyrogroup `P` was reached.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Identity,
    /// A word over the generators of `P`.
    Word(WordSpec),
    /// A member of the exact closure of the generators.
    Closure,
    /// `(⊖a) ⊕ b`.
    Diff(Box<Origin>, Box<Origin>),
    /// A word over earlier points of the same set.
    Earlier(WordSpec),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Identity => write!(f, "0"),
            Origin::Word(w) => write!(f, "{w}"),
            Origin::Closure => write!(f, "closure"),
            Origin::Diff(a, b) => write!(f, "⊖[{a}] ⊕ [{b}]"),
            Origin::Earlier(w) => write!(f, "L{w}"),
        }
    }
}

impl Serialize for Origin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn exact_closure<G: Gyrogroup>(g: &G, s: &[G::Element]) -> Result<ClosureSet<G::Element>> {
    closure_generate_with_budget(g, s, 1, 0.0, ClosureBudget::default())
}

fn is_identity<G: Gyrogroup>(g: &G, e: &G::Element, tol: f64) -> bool {
    g.approx_eq(e, &g.identity(), tol)
}

fn domain_ok<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(GyroError::Domain(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Words over `S ∪ ⊖S` grown one leaf at a time, each time taking the leaf
/// that most shrinks the residual `(⊖c) ⊕ target`.
fn descend<G: Gyrogroup>(
    g: &G,
    leaves: &[(Sign, usize, G::Element)],
    target: &G::Element,
    cap: usize,
    stop: f64,
) -> Result<Option<(WordSpec, G::Element)>> {
    let mut current: Option<(WordSpec, G::Element)> = None;
    let mut residual_size = g.size(target);
    let mut residual = target.clone();
    for _ in 0..cap {
        let mut best: Option<(usize, f64)> = None;
        for (j, (_, _, l)) in leaves.iter().enumerate() {
            let Some(d) = domain_ok(g.add(&g.neg(l)?, &residual))? else {
                continue;
            };
            let d = g.size(&d);
            if d < residual_size && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let Some((j, _)) = best else { break };
        let (sign, index, l) = &leaves[j];
        let leaf = WordSpec::leaf(*sign, *index);
        let next = match &current {
            None => (leaf, l.clone()),
            Some((w, c)) => match domain_ok(g.add(c, l))? {
                Some(v) => (w.join(&leaf)?, v),
                None => break,
            },
        };
        let Some(r) = domain_ok(g.add(&g.neg(&next.1)?, target))? else {
            break;
        };
        residual_size = g.size(&r);
        residual = r;
        let close = g.distance(&next.1, target) <= stop;
        current = Some(next);
        if close {
            break;
        }
    }
    Ok(current)
}

/// A finite part of `⟨S⟩` with an origin per element.
struct Generated<E> {
    elements: Vec<E>,
    origins: Vec<Origin>,
    closure_size: usize,
    truncated: bool,
}

/// The budgeted closure of `S`, plus descended words for cloud points the
/// closure leaves farther than `delta` away (continuous carriers only).
fn generated<G: Gyrogroup>(
    g: &G,
    s: &[G::Element],
    cloud: &SampleCloud<G::Element>,
    cfg: &ConstructionConfig,
) -> Result<Generated<G::Element>> {
    let closure = closure_generate_with_budget(g, s, cfg.word_cap, cfg.dedup_tol, cfg.budget())?;
    let mut origins: Vec<Origin> = (0..closure.len())
        .map(|i| match closure.word_for(i) {
            _ if i == 0 => Origin::Identity,
            Some(w) => Origin::Word(w),
            None => Origin::Closure,
        })
        .collect();
    let closure_size = closure.len();
    let truncated = closure.truncated;
    let mut elements = closure.elements;
    if !g.is_exact() && !s.is_empty() {
        let delta = cfg.density_delta;
        let mut grid = GridIndex::new(delta, g.coords(&g.identity()).len());
        for e in &elements {
            grid.insert(g.coords(e));
        }
        let mut leaves = Vec::with_capacity(2 * s.len());
        for (i, x) in s.iter().enumerate() {
            leaves.push((Sign::Plus, i, x.clone()));
            leaves.push((Sign::Minus, i, g.neg(x)?));
        }
        for p in &cloud.points {
            if !grid.within(&g.coords(p), delta).is_empty() {
                continue;
            }
            if let Some((w, v)) = descend(g, &leaves, p, cfg.word_cap, delta / 2.0)? {
                grid.insert(g.coords(&v));
                elements.push(v);
                origins.push(Origin::Word(w));
            }
        }
    }
    Ok(Generated {
        elements,
        origins,
        closure_size,
        truncated,
    })
}

fn density_ok<G: Gyrogroup>(
    g: &G,
    report: &DensityReport<G::Element>,
    cfg: &ConstructionConfig,
) -> bool {
    if g.is_exact() {
        report.passed
    } else {
        report.fraction >= cfg.density_threshold
    }
}

/// Checks (i) `S ∪ {0}` closed discrete, (ii) `⟨S⟩` dense on a fresh cloud,
/// (iii) `0 ∉ S`.
pub fn verify_suitable<G: Gyrogroup>(
    g: &G,
    s: &[G::Element],
    cfg: &ConstructionConfig,
) -> Result<SuitableVerdict<G::Element>> {
    cfg.validate()?;
    let excludes_identity = !s.iter().any(|x| is_identity(g, x, cfg.dedup_tol));
    let mut with_zero = s.to_vec();
    if excludes_identity {
        with_zero.push(g.identity());
    }
    let discrete = closed_discrete_check(g, &with_zero, BOUNDARY_MARGIN, cfg.dedup_tol)?;
    let cloud = SampleCloud::for_carrier_stream(g, cfg.cloud_size, cfg.seed, STREAM_VERIFY)?;
    let gen = generated(g, s, &cloud, cfg)?;
    let density = density_check(g, &gen.elements, &cloud, cfg.density_delta)?;
    let passed = discrete.passed && density_ok(g, &density, cfg) && excludes_identity;
    Ok(SuitableVerdict {
        discrete,
        density,
        excludes_identity,
        closure_size: gen.closure_size,
        closure_truncated: gen.truncated,
        passed,
    })
}

#[allow(clippy::too_many_arguments)]
fn assemble<G: Gyrogroup>(
    g: &G,
    method: &str,
    points: Vec<G::Element>,
    point_origins: Vec<Origin>,
    trace: Vec<TraceStep<G::Element>>,
    excluded_identity: bool,
    cfg: ConstructionConfig,
) -> Result<SuitableSetResult<G::Element>> {
    let verdict = verify_suitable(g, &points, &cfg)?;
    let verified = verdict.passed && trace.iter().all(|s| s.passed());
    Ok(SuitableSetResult {
        method: method.to_string(),
        carrier: g.name(),
        points,
        point_origins,
        trace,
        separation_report: verdict.discrete,
        density_report: verdict.density,
        excluded_identity,
        verified,
        config: cfg,
    })
}

fn require_valid(t: &TableGyro) -> Result<()> {
    let v = validate_table(t);
    if let Some(f) = v.failures().next() {
        return Err(GyroError::Precondition(format!(
            "table fails {} (residual {})",
            f.axiom, f.residual
        )));
    }
    Ok(())
}

/// Scans the elements in order and keeps each one not yet generated.
#[allow(clippy::type_complexity)]
pub fn greedy_generating_set<G: Gyrogroup>(
    g: &G,
) -> Result<(Vec<G::Element>, Vec<TraceStep<G::Element>>)> {
    let all = g.elements().filter(|_| g.is_exact()).ok_or_else(|| {
        GyroError::Precondition(format!("{} is not a finite exact carrier", g.name()))
    })?;
    let mut s: Vec<G::Element> = Vec::new();
    let mut closure = exact_closure(g, &s)?;
    let mut trace = Vec::new();
    for x in all {
        if closure.contains(g, &x, 0.0) {
            continue;
        }
        s.push(x.clone());
        closure = exact_closure(g, &s)?;
        let mut step = TraceStep::new(trace.len());
        step.target = Some(x.clone());
        step.added.push(x);
        step.checks.push(StepCheck::new(
            "closure grows",
            true,
            json!({ "closure_size": closure.len() }),
        ));
        trace.push(step);
    }
    Ok((s, trace))
}

/// Greedy generating set of a validated finite gyrogroup.
pub fn suitable_finite(t: &TableGyro) -> Result<SuitableSetResult<usize>> {
    require_valid(t)?;
    let (s, trace) = greedy_generating_set(t)?;
    assemble(
        t,
        "finite",
        s,
        Vec::new(),
        trace,
        false,
        ConstructionConfig::default(),
    )
}

fn check_enumeration(t: &TableGyro, enumeration: &[usize], first_zero: bool) -> Result<()> {
    let n = t.order();
    let mut seen = vec![false; n];
    for &e in enumeration {
        if e >= n || seen[e] {
            return Err(GyroError::Precondition(format!(
                "enumeration is not a permutation of 0..{n} (at {e})"
            )));
        }
        seen[e] = true;
    }
    if enumeration.len() != n {
        return Err(GyroError::Precondition(format!(
            "enumeration lists {} of {n} elements",
            enumeration.len()
        )));
    }
    if first_zero && enumeration[0] != 0 {
        return Err(GyroError::Precondition(
            "enumeration must start at the identity".into(),
        ));
    }
    Ok(())
}

fn generates(t: &TableGyro, s: &[usize]) -> Result<bool> {
    Ok(exact_closure(t, s)?.len() == t.order())
}

/// Inductive construction over an enumeration `g_0, g_1, …`.
///
/// Step `k` adds `S_k` (nothing when `g_k` is already generated, else the
/// leaves of a word for `g_k` over `G ∖ ⋃V`) and removes `V_k = {g_k}`
/// unless `g_k` was removed earlier. The trace ends at the first step after
/// which `⋃S` generates `G`: in a finite carrier removing further points
/// would empty `G ∖ ⋃V`.
pub fn suitable_countable_trace(
    t: &TableGyro,
    enumeration: &[usize],
) -> Result<SuitableSetResult<usize>> {
    require_valid(t)?;
    check_enumeration(t, enumeration, false)?;
    let cfg = ConstructionConfig::default();
    if t.order() == 1 {
        return assemble(
            t,
            "countable",
            Vec::new(),
            Vec::new(),
            Vec::new(),
            false,
            cfg,
        );
    }
    let mut s_union: Vec<usize> = Vec::new();
    let mut v_union: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    for (k, &gk) in enumeration.iter().enumerate() {
        let mut step = TraceStep::new(k);
        step.target = Some(gk);
        let s_k: Vec<usize> = if k == 0 {
            vec![gk]
        } else if exact_closure(t, &s_union)?.contains(t, &gk, 0.0) {
            Vec::new()
        } else {
            let free: Vec<usize> = (0..t.order()).filter(|e| !v_union.contains(e)).collect();
            let w = word_membership_witness(t, &gk, &free, t.order().max(2), 0.0)?.ok_or_else(
                || GyroError::construction(k, format!("no word for {gk} over G ∖ ⋃V")),
            )?;
            step.witnesses.push(WordWitness {
                target: gk,
                over: "G∖⋃V".into(),
                word: Some(w.clone()),
                residual: 0.0,
            });
            let mut leaves: Vec<usize> = w.leaves.iter().map(|&i| free[i]).collect();
            leaves.sort_unstable();
            leaves.dedup();
            leaves
        };
        let disjoint = s_k.iter().all(|x| !v_union.contains(x));
        step.checks
            .push(StepCheck::new("S_k misses ⋃V", disjoint, json!(null)));
        for &x in &s_k {
            if !s_union.contains(&x) {
                s_union.push(x);
            }
        }
        step.added = s_k;
        let generated_now = exact_closure(t, &s_union)?;
        let in_span = generated_now.contains(t, &gk, 0.0);
        let word = word_membership_witness(t, &gk, &s_union, t.order().max(2), 0.0)?;
        step.witnesses.push(WordWitness {
            target: gk,
            over: "⋃S".into(),
            word,
            residual: 0.0,
        });
        step.checks
            .push(StepCheck::new("g_k ∈ ⟨⋃S⟩", in_span, json!(null)));
        let terminal = generated_now.len() == t.order();
        if terminal {
            step.checks.push(StepCheck::new(
                "⟨⋃S⟩ = G",
                true,
                json!({ "terminal": true }),
            ));
            trace.push(step);
            break;
        }
        step.checks.push(StepCheck::new(
            "V_k misses earlier V",
            true,
            json!({ "removed_before": v_union.len() }),
        ));
        if !v_union.contains(&gk) {
            v_union.push(gk);
            step.removed.push(gk);
            let rest: Vec<usize> = (0..t.order()).filter(|e| !v_union.contains(e)).collect();
            if !generates(t, &rest)? {
                return Err(GyroError::construction(
                    k,
                    format!("removing {gk} leaves a set that does not generate G"),
                ));
            }
        }
        step.checks.push(StepCheck::new(
            "g_k ∈ ⋃V",
            v_union.contains(&gk),
            json!(null),
        ));
        step.checks
            .push(StepCheck::new("⟨G ∖ ⋃V⟩ = G", true, json!(null)));
        trace.push(step);
    }
    let excluded = s_union.contains(&0);
    let points: Vec<usize> = s_union.into_iter().filter(|&e| e != 0).collect();
    assemble(t, "countable", points, Vec::new(), trace, excluded, cfg)
}

fn subgroup_generators(t: &TableGyro, h: &[usize], s_h: &[usize]) -> Result<(Vec<usize>, bool)> {
    let n = t.order();
    if let Some(&bad) = h.iter().chain(s_h).find(|&&e| e >= n) {
        return Err(GyroError::Precondition(format!(
            "element {bad} is outside 0..{n}"
        )));
    }
    let mask = check_subgyrogroup(t, h)?;
    let closure = exact_closure(t, s_h)?;
    let matches = closure.len() == mask.iter().filter(|&&m| m).count()
        && closure.elements.iter().all(|&e| mask[e]);
    if !matches {
        return Err(GyroError::Precondition(
            "the given generators do not generate exactly H".into(),
        ));
    }
    let excluded = s_h.contains(&0);
    let mut out: Vec<usize> = Vec::new();
    for &e in s_h {
        if e != 0 && !out.contains(&e) {
            out.push(e);
        }
    }
    Ok((out, excluded))
}

/// `S = S_H ∪ A` with `A` the nonzero coset representatives of an
/// L-subgyrogroup `H`.
pub fn extend_via_open_subgyro(
    t: &TableGyro,
    h: &[usize],
    s_h: &[usize],
) -> Result<SuitableSetResult<usize>> {
    require_valid(t)?;
    if !lsub_check(t, h)? {
        return Err(GyroError::Precondition("H is not an L-subgyrogroup".into()));
    }
    let (mut s, excluded) = subgroup_generators(t, h, s_h)?;
    let partition = coset_decompose(t, h)?;
    let mut step = TraceStep::new(0);
    for &a in &partition.representatives {
        if a != 0 && !s.contains(&a) {
            s.push(a);
            step.added.push(a);
        }
    }
    step.checks.push(StepCheck::new(
        "cosets partition G",
        true,
        json!({ "cosets": partition.len() }),
    ));
    let all = generates(t, &s)?;
    step.checks
        .push(StepCheck::new("⟨S_H ∪ A⟩ = G", all, json!(null)));
    assemble(
        t,
        "open-subgyro",
        s,
        Vec::new(),
        vec![step],
        excluded,
        ConstructionConfig::default(),
    )
}

/// `S = S_H ∪ B` where `B` picks, in enumeration order, each element not
/// yet inside some `b ⊕ H`. `B` starts at the identity; the identity is
/// dropped from the returned points.
pub fn extend_via_enumeration(
    t: &TableGyro,
    h: &[usize],
    s_h: &[usize],
    enumeration: &[usize],
) -> Result<SuitableSetResult<usize>> {
    require_valid(t)?;
    check_enumeration(t, enumeration, true)?;
    let (mut s, excluded) = subgroup_generators(t, h, s_h)?;
    let coset = |b: usize| h.iter().map(|&x| t.op(b, x)).collect::<Vec<usize>>();
    let n = t.order();
    let mut covered = vec![false; n];
    let mut b_set: Vec<usize> = Vec::new();
    for &e in enumeration {
        if covered[e] {
            continue;
        }
        b_set.push(e);
        for x in coset(e) {
            covered[x] = true;
        }
    }
    let mut step = TraceStep::new(0);
    step.added = b_set.clone();
    for &b in &b_set {
        let meets: Vec<usize> = coset(b).into_iter().filter(|x| b_set.contains(x)).collect();
        if meets != vec![b] {
            return Err(GyroError::construction(
                0,
                format!("B ∩ ({b} ⊕ H) = {meets:?}, expected only {b}"),
            ));
        }
    }
    step.checks.push(StepCheck::new(
        "B closed discrete",
        true,
        json!({ "finite": b_set.len() }),
    ));
    step.checks
        .push(StepCheck::new("B ∩ (b ⊕ H) = {b}", true, json!(null)));
    for &b in &b_set {
        if b != 0 && !s.contains(&b) {
            s.push(b);
        }
    }
    let all = generates(t, &s)?;
    step.checks
        .push(StepCheck::new("⟨S_H ∪ B⟩ = G", all, json!(null)));
    assemble(
        t,
        "enumeration",
        s,
        Vec::new(),
        vec![step],
        excluded,
        ConstructionConfig::default(),
    )
}

/// Elements of `L` together with how each was reached from `P`.
struct Tracked<E> {
    set: PointSet<E>,
    origins: Vec<Origin>,
    tol: f64,
    skipped_identity: bool,
}

impl<E: Clone + PartialEq> Tracked<E> {
    fn new<G: Gyrogroup<Element = E>>(g: &G, tol: f64) -> Self {
        Tracked {
            set: PointSet::new(g, tol),
            origins: Vec::new(),
            tol,
            skipped_identity: false,
        }
    }

    /// Index of `e` in `L` after insertion; `None` for the identity.
    fn add<G: Gyrogroup<Element = E>>(&mut self, g: &G, e: E, origin: Origin) -> Option<usize> {
        if is_identity(g, &e, self.tol) {
            self.skipped_identity = true;
            return None;
        }
        let (id, new) = self.set.insert(g, e);
        if new {
            self.origins.push(origin);
        }
        Some(id)
    }

    fn values(&self) -> &[E] {
        self.set.elements()
    }
}

/// A tracked element of `⟨L⟩`; `word: None` is the identity.
#[derive(Clone)]
struct Center<E> {
    value: E,
    word: Option<WordSpec>,
}

fn extend_word(word: &Option<WordSpec>, leaf: Option<usize>) -> Result<Option<WordSpec>> {
    let Some(id) = leaf else {
        return Ok(word.clone());
    };
    let leaf = WordSpec::leaf(Sign::Plus, id);
    Ok(Some(match word {
        None => leaf,
        Some(w) => w.join(&leaf)?,
    }))
}

fn eval_opt<G: Gyrogroup>(g: &G, w: &Option<WordSpec>, over: &[G::Element]) -> Result<G::Element> {
    match w {
        None => Ok(g.identity()),
        Some(w) => eval_word(g, w, over),
    }
}

fn eval_origin<G: Gyrogroup>(
    g: &G,
    o: &Origin,
    gens: &[G::Element],
    earlier: &[G::Element],
) -> Result<Option<G::Element>> {
    Ok(match o {
        Origin::Identity => Some(g.identity()),
        Origin::Word(w) => Some(eval_word(g, w, gens)?),
        Origin::Closure => None,
        Origin::Earlier(w) => Some(eval_word(g, w, earlier)?),
        Origin::Diff(a, b) => {
            match (
                eval_origin(g, a, gens, earlier)?,
                eval_origin(g, b, gens, earlier)?,
            ) {
                (Some(a), Some(b)) => Some(g.add(&g.neg(&a)?, &b)?),
                _ => None,
            }
        }
    })
}

fn center_origin(c: &Center<impl Clone>) -> Origin {
    match &c.word {
        None => Origin::Identity,
        Some(w) => Origin::Earlier(w.clone()),
    }
}

/// Adds `u = (⊖c) ⊕ x` to `L` so that `x = c ⊕ u ∈ ⟨L⟩`, and witnesses it.
fn absorb_target<G: Gyrogroup>(
    g: &G,
    l: &mut Tracked<G::Element>,
    x: &G::Element,
    x_origin: &Origin,
    center: &Center<G::Element>,
    ball: &Ball<G::Element>,
    step: &mut TraceStep<G::Element>,
) -> Result<()> {
    let u = g.add(&g.neg(&center.value)?, x)?;
    let inside = ball.contains(g, &u);
    let before = l.values().len();
    let id = l.add(
        g,
        u.clone(),
        Origin::Diff(Box::new(center_origin(center)), Box::new(x_origin.clone())),
    );
    if l.values().len() > before {
        step.added.push(u);
    }
    let word = extend_word(&center.word, id)?;
    let residual = g.distance(&eval_opt(g, &word, l.values())?, x);
    step.checks
        .push(StepCheck::new("target u ∈ U_k", inside, json!(null)));
    step.checks.push(StepCheck::new(
        "target x_k ∈ ⟨L_k⟩",
        residual <= WITNESS_TOL,
        json!({ "residual": residual }),
    ));
    step.witnesses.push(WordWitness {
        target: x.clone(),
        over: "L".into(),
        word,
        residual,
    });
    Ok(())
}

/// Re-evaluates every center word over `L` and counts points in `c ⊕ U`.
fn cover_check<G: Gyrogroup>(
    g: &G,
    centers: &[Center<G::Element>],
    points: &[G::Element],
    l: &[G::Element],
    ball: &Ball<G::Element>,
    word_cap: usize,
) -> Result<StepCheck> {
    let mut covered = 0;
    let mut longest = 0;
    for (c, p) in centers.iter().zip(points) {
        let value = eval_opt(g, &c.word, l)?;
        longest = longest.max(c.word.as_ref().map_or(0, |w| w.len()));
        if ball.contains(g, &g.add(&g.neg(&value)?, p)?) {
            covered += 1;
        }
    }
    let fraction = covered as f64 / points.len() as f64;
    Ok(StepCheck::new(
        "cover ⟨L_k⟩ ⊕ U_k",
        covered == points.len() && longest <= word_cap,
        json!({ "fraction": fraction, "longest_word": longest }),
    ))
}

/// `k ∈ P ∩ U_n` with `(⊖k) ⊕ ρ ∈ U_{n+1}`: a small element of `P`
/// directly, else `k = (⊖a) ⊕ b` with `b ∈ P` near `a ⊕ ρ`.
#[allow(clippy::too_many_arguments)]
fn match_residual<G: Gyrogroup>(
    g: &G,
    rho: &G::Element,
    p: &Generated<G::Element>,
    small: &[usize],
    small_index: &CenterIndex<'_, G::Element>,
    p_index: &CenterIndex<'_, G::Element>,
    anchors: &[usize],
    u_cur: &Ball<G::Element>,
    u_next: &Ball<G::Element>,
    tol: f64,
) -> Result<Option<(G::Element, Origin)>> {
    if let Some((j, _)) = small_index.best(g, rho, u_next)? {
        let i = small[j];
        return Ok(Some((p.elements[i].clone(), p.origins[i].clone())));
    }
    let mut best: Option<(f64, G::Element, usize, usize)> = None;
    for &a in anchors {
        let Some(t) = domain_ok(g.add(&p.elements[a], rho))? else {
            continue;
        };
        let Some((b, _)) = p_index.best(g, &t, u_next)? else {
            continue;
        };
        let Some(k) = domain_ok(g.add(&g.neg(&p.elements[a])?, &p.elements[b]))? else {
            continue;
        };
        if !u_cur.contains(g, &k) || g.size(&k) <= tol {
            continue;
        }
        let err = g.size(&g.add(&g.neg(&k)?, rho)?);
        if err < u_next.radius && best.as_ref().is_none_or(|(e, ..)| err < *e) {
            let done = err < u_next.radius / 2.0;
            best = Some((err, k, a, b));
            if done {
                break;
            }
        }
    }
    Ok(best.map(|(_, k, a, b)| {
        let origin = Origin::Diff(
            Box::new(p.origins[a].clone()),
            Box::new(p.origins[b].clone()),
        );
        (k, origin)
    }))
}

/// Builds `L_0 ⊂ L_1 ⊂ … ⊂ P` along the radius schedule.
///
/// `L_0` is a cover of the cloud by translates of `U_0` centered in `P`.
/// Each cloud point then tracks a center `c ∈ ⟨L_k⟩` with a word over `L`.
/// Step `k+1` covers the residuals `(⊖c) ⊕ q ∈ U_k` by `K_{k+1} ⊂ P ∩ U_k`
/// at radius `r_{k+1}` and moves each center to `c ⊕ κ`. The `k`-th element
/// `x_k` of `P` enters `⟨L_k⟩` through `u_k = (⊖c) ⊕ x_k ∈ U_k`.
fn refine<G: Gyrogroup>(
    g: &G,
    gens: &[G::Element],
    cfg: &ConstructionConfig,
    method: &str,
    nested: bool,
) -> Result<SuitableSetResult<G::Element>> {
    cfg.validate()?;
    let schedule = &cfg.radius_schedule;
    if schedule.is_empty() {
        return Err(GyroError::Precondition("radius schedule is empty".into()));
    }
    if schedule.len() + 1 > cfg.word_cap {
        return Err(GyroError::Precondition(format!(
            "word cap {} cannot hold {} refinement steps",
            cfg.word_cap,
            schedule.len()
        )));
    }
    let cloud = SampleCloud::for_carrier(g, cfg.cloud_size, cfg.seed)?;
    let p = generated(g, gens, &cloud, cfg)?;
    let p_density = density_check(g, &p.elements, &cloud, cfg.density_delta)?;
    if !density_ok(g, &p_density, cfg) {
        return Err(GyroError::Precondition(format!(
            "the generated subgyrogroup is not dense: {:.4} of the cloud lies within {}",
            p_density.fraction, cfg.density_delta
        )));
    }
    let balls = schedule
        .iter()
        .map(|&r| Ball::at_identity(g, r))
        .collect::<Result<Vec<_>>>()?;
    let mut setup = TraceStep::new(0);
    setup.checks.push(StepCheck::new(
        "P dense",
        true,
        json!({ "fraction": p_density.fraction, "size": p.elements.len() }),
    ));
    for ball in &balls {
        let w = precompact_witness(g, ball, &cloud, &Candidates::FromCloud)?;
        if !w.complete() {
            return Err(GyroError::Precondition(format!(
                "no finite cover by translates of U at radius {}",
                ball.radius
            )));
        }
        setup.checks.push(StepCheck::new(
            "precompact at r",
            true,
            json!({ "radius": ball.radius, "translates": w.f.len() }),
        ));
    }
    if nested {
        for (n, pair) in balls.windows(2).enumerate() {
            let r = sum_inclusion_check(g, &pair[1], &pair[0], INCLUSION_SAMPLES, 0.0, cfg.seed)?;
            if !r.passed {
                return Err(GyroError::Precondition(format!(
                    "U_{} ⊕ U_{} ⊄ U_{n} (excess {})",
                    n + 1,
                    n + 1,
                    r.worst_excess
                )));
            }
        }
        setup
            .checks
            .push(StepCheck::new("U_{k+1} ⊕ U_{k+1} ⊂ U_k", true, json!(null)));
    }

    let steps = schedule.len();
    let targets: Vec<usize> = (0..steps.min(p.elements.len())).collect();
    let mut points = cloud.points.clone();
    points.extend(targets.iter().map(|&i| p.elements[i].clone()));
    let target_slot = |k: usize| cloud.len() + k;
    let cover_set = SampleCloud::loaded(points.clone(), "cloud and targets");

    let mut l = Tracked::new(g, cfg.dedup_tol);
    let mut trace = Vec::new();

    // L_0
    let mut step = setup;
    step.radius = Some(schedule[0]);
    let k0 = precompact_witness(
        g,
        &balls[0],
        &cover_set,
        &Candidates::Given(p.elements.clone()),
    )?;
    if !k0.complete() {
        return Err(GyroError::construction(
            0,
            format!(
                "translates of U_0 centered in P miss {} points",
                k0.uncovered_examples.len()
            ),
        ));
    }
    let p_lookup = {
        let mut set = PointSet::new(g, 0.0);
        for e in &p.elements {
            set.insert(g, e.clone());
        }
        set
    };
    let mut k0_ids = Vec::with_capacity(k0.f.len());
    for c in &k0.f {
        let origin = p_lookup
            .find(g, c)
            .map_or(Origin::Closure, |i| p.origins[i].clone());
        let before = l.values().len();
        k0_ids.push(l.add(g, c.clone(), origin));
        if l.values().len() > before {
            step.added.push(c.clone());
        }
    }
    let index = CenterIndex::new(g, &k0.f, schedule[0]);
    let mut centers = Vec::with_capacity(points.len());
    for q in &points {
        let (j, _) = index
            .best(g, q, &balls[0])?
            .ok_or_else(|| GyroError::construction(0, "a point lost its cover center"))?;
        centers.push(Center {
            value: k0.f[j].clone(),
            word: extend_word(&None, k0_ids[j])?,
        });
    }
    if let Some(&t0) = targets.first() {
        step.target = Some(p.elements[t0].clone());
        absorb_target(
            g,
            &mut l,
            &p.elements[t0],
            &p.origins[t0],
            &centers[target_slot(0)],
            &balls[0],
            &mut step,
        )?;
    }
    step.checks.push(cover_check(
        g,
        &centers,
        &points,
        l.values(),
        &balls[0],
        cfg.word_cap,
    )?);
    trace.push(step);

    for n in 0..steps - 1 {
        let (u_cur, u_next) = (&balls[n], &balls[n + 1]);
        let mut step = TraceStep::new(n + 1);
        step.radius = Some(u_next.radius);
        let before = l.values().len();
        let residuals = centers
            .iter()
            .zip(&points)
            .map(|(c, q)| g.add(&g.neg(&c.value)?, q))
            .collect::<Result<Vec<_>>>()?;
        let need: Vec<usize> = (0..points.len())
            .filter(|&i| !u_next.contains(g, &residuals[i]))
            .collect();
        let small: Vec<usize> = (0..p.elements.len())
            .filter(|&i| {
                u_cur.contains(g, &p.elements[i]) && g.size(&p.elements[i]) > cfg.dedup_tol
            })
            .collect();
        let small_vals: Vec<G::Element> = small.iter().map(|&i| p.elements[i].clone()).collect();
        let small_index = CenterIndex::new(g, &small_vals, u_next.radius);
        let p_index = CenterIndex::new(g, &p.elements, u_next.radius);
        let anchors: Vec<usize> = (1..p.elements.len()).collect();
        let mut chosen: Vec<G::Element> = Vec::new();
        let mut chosen_ids: Vec<usize> = Vec::new();
        for &i in &need {
            let rho = &residuals[i];
            let mut hit = false;
            for k in &chosen {
                if u_next.contains(g, &g.add(&g.neg(k)?, rho)?) {
                    hit = true;
                    break;
                }
            }
            if hit {
                continue;
            }
            let (k, origin) = match_residual(
                g,
                rho,
                &p,
                &small,
                &small_index,
                &p_index,
                &anchors,
                u_cur,
                u_next,
                cfg.dedup_tol,
            )?
            .ok_or_else(|| {
                GyroError::construction(
                    n + 1,
                    format!(
                        "no element of P ∩ U_{n} lies within {} of a residual of size {}",
                        u_next.radius,
                        g.size(rho)
                    ),
                )
            })?;
            if let Some(id) = l.add(g, k, origin) {
                // centers move by the stored value so words re-evaluate exactly
                chosen.push(l.values()[id].clone());
                chosen_ids.push(id);
            }
        }
        let k_index = CenterIndex::new(g, &chosen, u_next.radius);
        for &i in &need {
            let (j, _) = k_index.best(g, &residuals[i], u_next)?.ok_or_else(|| {
                GyroError::construction(n + 1, "a residual is left without a center")
            })?;
            let c = &centers[i];
            centers[i] = Center {
                value: g.add(&c.value, &chosen[j])?,
                word: extend_word(&c.word, Some(chosen_ids[j]))?,
            };
        }
        step.added.extend(l.values()[before..].iter().cloned());
        if let Some(&t) = targets.get(n + 1) {
            step.target = Some(p.elements[t].clone());
            absorb_target(
                g,
                &mut l,
                &p.elements[t],
                &p.origins[t],
                &centers[target_slot(n + 1)],
                u_next,
                &mut step,
            )?;
        }
        let fresh = &l.values()[before..];
        let inside = fresh.iter().all(|e| u_cur.contains(g, e));
        step.checks.push(StepCheck::new(
            "L_{k+1} ∖ L_k ⊂ U_k",
            inside,
            json!({ "added": fresh.len() }),
        ));
        let outside = l.values().iter().filter(|e| !u_next.contains(g, e)).count();
        step.checks.push(StepCheck::new(
            "L ∖ U_k finite",
            true,
            json!({ "outside": outside }),
        ));
        step.checks.push(cover_check(
            g,
            &centers,
            &points,
            l.values(),
            u_next,
            cfg.word_cap,
        )?);
        trace.push(step);
    }

    let mut worst = 0.0f64;
    let mut unchecked = 0;
    for (i, o) in l.origins.iter().enumerate() {
        match eval_origin(g, o, gens, &l.values()[..i])? {
            Some(v) => worst = worst.max(g.distance(&v, &l.values()[i])),
            None => unchecked += 1,
        }
    }
    let p_exact = if unchecked > 0 {
        let closure = exact_closure(g, gens)?;
        l.values().iter().all(|e| closure.contains(g, e, 0.0))
    } else {
        true
    };
    if let Some(last) = trace.last_mut() {
        last.checks.push(StepCheck::new(
            "L ⊂ P",
            worst <= WITNESS_TOL && p_exact,
            json!({ "residual": worst, "by_closure": unchecked }),
        ));
    }
    let excluded = l.skipped_identity;
    let origins = l.origins.clone();
    let values = l.set.into_elements();
    assemble(g, method, values, origins, trace, excluded, cfg.clone())
}

/// Suitable set for a precompact carrier with a dense finitely generated
/// subgyrogroup `P = ⟨generators⟩`.
pub fn suitable_precompact_disk<G: Gyrogroup>(
    g: &G,
    generators: &[G::Element],
    cfg: &ConstructionConfig,
) -> Result<SuitableSetResult<G::Element>> {
    refine(g, generators, cfg, "precompact", false)
}

/// As [`suitable_precompact_disk`], additionally requiring
/// `U_{k+1} ⊕ U_{k+1} ⊂ U_k` and a last radius below the resolution.
/// Without generators the carrier must be finite, and a greedy generating
/// set is used.
pub fn suitable_compact_metrizable<G: Gyrogroup>(
    g: &G,
    generators: Option<&[G::Element]>,
    cfg: &ConstructionConfig,
) -> Result<SuitableSetResult<G::Element>> {
    cfg.validate()?;
    let Some(&last) = cfg.radius_schedule.last() else {
        return Err(GyroError::Precondition("radius schedule is empty".into()));
    };
    let resolution = if g.is_exact() { 1.0 } else { cfg.density_delta };
    if last >= resolution {
        return Err(GyroError::Precondition(format!(
            "last radius {last} is not below the resolution {resolution}"
        )));
    }
    let gens = match generators {
        Some(s) => s.to_vec(),
        None => greedy_generating_set(g)?.0,
    };
    refine(g, &gens, cfg, "compact", true)
}

/// `S = A ∪ {a_n ⊕ b_n}` for a greedy `U`-separated family `A` of size
/// `budget` and `b_n` cycling through the enumerated elements inside `U`.
///
/// Needs a lazily enumerated exact carrier. A stalled family means the
/// carrier is precompact at this radius.
pub fn suitable_nonprecompact<G: Gyrogroup>(
    g: &G,
    u_size_hint: f64,
    budget: usize,
    cfg: &ConstructionConfig,
) -> Result<SuitableSetResult<G::Element>> {
    if budget == 0 {
        return Err(GyroError::Precondition("budget must be at least 1".into()));
    }
    let u = Ball::at_identity(g, u_size_hint)?;
    let enumeration = match g.enumerate(STALL_FACTOR * budget).filter(|_| g.is_exact()) {
        Some(e) => e,
        None => {
            let cloud = SampleCloud::random(g, cfg.cloud_size, cfg.seed)?;
            let cover = precompact_witness(g, &u, &cloud, &Candidates::FromCloud)?;
            return Err(GyroError::construction(
                0,
                format!(
                    "{} has no lazy enumeration and {} translates of U cover {} samples; \
                     the carrier is precompact, use the precompact construction",
                    g.name(),
                    cover.f.len(),
                    cloud.len()
                ),
            ));
        }
    };
    let cloud = SampleCloud::loaded(enumeration, "enumeration");
    let a = greedy_separated_family(g, &u, budget, &cloud)?;
    if a.len() < budget {
        return Err(GyroError::construction(
            a.len(),
            format!(
                "the U-separated family stalled at {} of {budget} elements; the carrier is \
                 precompact at this radius, use the precompact construction",
                a.len()
            ),
        ));
    }
    let b_v: Vec<G::Element> = cloud
        .points
        .iter()
        .filter(|e| u.contains(g, e))
        .cloned()
        .collect();
    let mut s = Tracked::new(g, cfg.dedup_tol);
    let mut trace = Vec::new();
    for (n, a_n) in a.iter().enumerate() {
        let mut step = TraceStep::new(n);
        step.target = Some(a_n.clone());
        let b_n = b_v
            .get(n % b_v.len().max(1))
            .cloned()
            .unwrap_or_else(|| g.identity());
        let ab = g.add(a_n, &b_n)?;
        for e in [a_n.clone(), ab] {
            let before = s.values().len();
            s.add(g, e.clone(), Origin::Closure);
            if s.values().len() > before {
                step.added.push(e);
            }
        }
        trace.push(step);
    }
    let disjoint = u_disjoint_check(g, &a, &u)?;
    let truncation = g.enumerate(budget).unwrap_or_default();
    let closure =
        closure_generate_with_budget(g, s.values(), cfg.word_cap, cfg.dedup_tol, cfg.budget())?;
    let missing = truncation
        .iter()
        .filter(|e| !closure.contains(g, e, cfg.dedup_tol))
        .count();
    let mut last = TraceStep::new(a.len());
    last.checks.push(StepCheck::new(
        "A is U-separated",
        disjoint.disjoint,
        json!(null),
    ));
    last.checks.push(StepCheck::new(
        "S generates the truncation",
        missing == 0,
        json!({ "truncation": truncation.len(), "missing": missing }),
    ));
    trace.push(last);
    let excluded = s.skipped_identity;
    let vcfg = ConstructionConfig {
        cloud_size: budget,
        ..cfg.clone()
    };
    assemble(
        g,
        "nonprecompact",
        s.set.into_elements(),
        Vec::new(),
        trace,
        excluded,
        vcfg,
    )
}
