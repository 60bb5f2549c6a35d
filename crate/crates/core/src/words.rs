//! Bracketed signed words and generated closures.
//!
//! A word of length `n` is a sequence of signed leaves `ε₁x₁, …, εₙxₙ`
//! together with a full binary bracketing. Bracketings with `n` leaves are
//! numbered `0..catalan(n−1)` in left-subtree-size-major order: all trees
//! whose left subtree has one leaf come first, then two leaves, and so on;
//! within one split the left subtree's index varies slowest.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::carrier::Gyrogroup;
use crate::error::{GyroError, Result};
use crate::spatial::GridIndex;

/// Largest supported leaf count; the tree count for 30 leaves fits in `u64`.
pub const MAX_LEAVES: usize = 30;

/// Number of full binary trees with `n` leaves, i.e. `Catalan(n − 1)`.
pub fn tree_count(n: usize) -> u64 {
    assert!(
        (1..=MAX_LEAVES).contains(&n),
        "leaf count {n} outside 1..={MAX_LEAVES}"
    );
    let mut t = vec![0u64; n + 1];
    t[1] = 1;
    for m in 2..=n {
        t[m] = (1..m).map(|k| t[k] * t[m - k]).sum();
    }
    t[n]
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Leaf,
    Join(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Join(l, r) => l.leaves() + r.leaves(),
        }
    }

    fn join(l: Shape, r: Shape) -> Shape {
        Shape::Join(Box::new(l), Box::new(r))
    }
}

/// A bracketing with its canonical index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BracketTree {
    shape: Shape,
    leaves: usize,
    index: u64,
}

impl BracketTree {
    /// The `m`-th tree with `n` leaves.
    pub fn unrank(n: usize, m: u64) -> Result<Self> {
        if n == 0 || n > MAX_LEAVES {
            return Err(GyroError::Precondition(format!(
                "leaf count {n} outside 1..={MAX_LEAVES}"
            )));
        }
        if m >= tree_count(n) {
            return Err(GyroError::Precondition(format!(
                "tree index {m} ≥ {} for {n} leaves",
                tree_count(n)
            )));
        }
        Ok(BracketTree {
            shape: unrank_shape(n, m),
            leaves: n,
            index: m,
        })
    }

    pub fn from_shape(shape: Shape) -> Result<Self> {
        let leaves = shape.leaves();
        if leaves > MAX_LEAVES {
            return Err(GyroError::Precondition(format!(
                "{leaves} leaves exceed {MAX_LEAVES}"
            )));
        }
        let index = rank_shape(&shape);
        Ok(BracketTree {
            shape,
            leaves,
            index,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    /// Canonical index `m`.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Renders the bracketing over placeholder leaves `x1 … xn`.
    pub fn render(&self) -> String {
        let mut next = 0;
        let mut out = String::new();
        render_shape(
            &self.shape,
            &mut |out: &mut String| {
                next += 1;
                out.push_str(&format!("x{next}"));
            },
            &mut out,
        );
        out
    }
}

fn unrank_shape(n: usize, mut m: u64) -> Shape {
    if n == 1 {
        return Shape::Leaf;
    }
    for k in 1..n {
        let right = tree_count(n - k);
        let block = tree_count(k) * right;
        if m < block {
            return Shape::join(unrank_shape(k, m / right), unrank_shape(n - k, m % right));
        }
        m -= block;
    }
    unreachable!("index checked against tree_count")
}

fn rank_shape(s: &Shape) -> u64 {
    match s {
        Shape::Leaf => 0,
        Shape::Join(l, r) => {
            let k = l.leaves();
            let n = k + r.leaves();
            let offset: u64 = (1..k).map(|j| tree_count(j) * tree_count(n - j)).sum();
            offset + rank_shape(l) * tree_count(n - k) + rank_shape(r)
        }
    }
}

fn render_shape(s: &Shape, leaf: &mut dyn FnMut(&mut String), out: &mut String) {
    match s {
        Shape::Leaf => leaf(out),
        Shape::Join(l, r) => {
            out.push('(');
            render_shape(l, leaf, out);
            out.push_str(" ⊕ ");
            render_shape(r, leaf, out);
            out.push(')');
        }
    }
}

/// All trees with `n` leaves in canonical order.
pub fn enumerate_trees(n: usize) -> Result<Vec<BracketTree>> {
    if n == 0 {
        return Err(GyroError::Precondition(
            "a word needs at least one leaf".into(),
        ));
    }
    if n > MAX_LEAVES {
        return Err(GyroError::Precondition(format!(
            "leaf count {n} exceeds {MAX_LEAVES}"
        )));
    }
    (0..tree_count(n))
        .map(|m| BracketTree::unrank(n, m))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '−',
        }
    }
}

/// Sign pattern number `k` of length `n`: `+` sorts before `−` and the
/// first leaf is the most significant position.
pub fn sign_pattern(n: usize, k: u64) -> Vec<Sign> {
    (0..n)
        .map(|i| {
            if (k >> (n - 1 - i)) & 1 == 0 {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect()
}

/// `f_m(ε₁x_{leaves[0]}, …, εₙx_{leaves[n−1]})`: leaf `i` refers to entry
/// `leaves[i]` of a generator list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordSpec {
    pub signs: Vec<Sign>,
    pub leaves: Vec<usize>,
    pub tree: BracketTree,
}

impl WordSpec {
    pub fn new(signs: Vec<Sign>, leaves: Vec<usize>, tree: BracketTree) -> Result<Self> {
        if signs.len() != tree.leaf_count() || leaves.len() != tree.leaf_count() {
            return Err(GyroError::Precondition(format!(
                "{} signs and {} leaves for a tree with {} leaves",
                signs.len(),
                leaves.len(),
                tree.leaf_count()
            )));
        }
        Ok(WordSpec {
            signs,
            leaves,
            tree,
        })
    }

    /// A single signed leaf.
    pub fn leaf(sign: Sign, index: usize) -> Self {
        WordSpec {
            signs: vec![sign],
            leaves: vec![index],
            tree: BracketTree::unrank(1, 0).expect("one leaf"),
        }
    }

    /// `self ⊕ other`, concatenating leaves.
    pub fn join(&self, other: &WordSpec) -> Result<Self> {
        let shape = Shape::join(self.tree.shape.clone(), other.tree.shape.clone());
        let mut signs = self.signs.clone();
        signs.extend_from_slice(&other.signs);
        let mut leaves = self.leaves.clone();
        leaves.extend_from_slice(&other.leaves);
        WordSpec::new(signs, leaves, BracketTree::from_shape(shape)?)
    }

    /// Word length `n` (number of leaves).
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// The `(n, m)` pair.
    pub fn nm(&self) -> (usize, u64) {
        (self.len(), self.tree.index())
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut next = 0;
        let mut out = String::new();
        render_shape(
            &self.tree.shape,
            &mut |out: &mut String| {
                out.push(self.signs[next].symbol());
                out.push_str(&self.leaves[next].to_string());
                next += 1;
            },
            &mut out,
        );
        f.write_str(&out)
    }
}

impl Serialize for WordSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            word: String,
            n: usize,
            m: u64,
        }
        Repr {
            word: self.to_string(),
            n: self.len(),
            m: self.tree.index(),
        }
        .serialize(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    signs: Vec<Sign>,
    leaves: Vec<usize>,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> GyroError {
        GyroError::Format(format!(
            "word `{}`: {what} at position {}",
            self.src, self.pos
        ))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let want: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&want) {
            self.pos += want.len();
            true
        } else {
            false
        }
    }

    fn op(&mut self) -> Result<()> {
        if self.eat("⊕") || self.eat("(+)") || self.eat("+") {
            Ok(())
        } else {
            Err(self.err("expected ⊕"))
        }
    }

    fn term(&mut self) -> Result<Shape> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let l = self.term()?;
                self.op()?;
                let r = self.term()?;
                if !self.eat(")") {
                    return Err(self.err("expected `)`"));
                }
                Ok(Shape::join(l, r))
            }
            Some(_) => self.leaf(),
            None => Err(self.err("unexpected end")),
        }
    }

    fn leaf(&mut self) -> Result<Shape> {
        let sign = match self.peek() {
            Some('+') => {
                self.pos += 1;
                Sign::Plus
            }
            Some('-' | '−' | '⊖') => {
                self.pos += 1;
                Sign::Minus
            }
            _ => Sign::Plus,
        };
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a leaf index"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let index = digits
            .parse()
            .map_err(|_| self.err("leaf index too large"))?;
        self.signs.push(sign);
        self.leaves.push(index);
        Ok(Shape::Leaf)
    }
}

impl FromStr for WordSpec {
    type Err = GyroError;

    /// Accepts the display form, e.g. `((+0 ⊕ +1) ⊕ −0)`. The operator may
    /// be written `⊕`, `(+)` or `+`; a minus sign may be `-`, `−` or `⊖`; a
    /// missing sign means `+`; the outermost parentheses may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s,
            chars: s.chars().collect(),
            pos: 0,
            signs: Vec::new(),
            leaves: Vec::new(),
        };
        let mut shape = p.term()?;
        if p.peek().is_some() {
            p.op()?;
            let right = p.term()?;
            shape = Shape::join(shape, right);
        }
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        let tree = BracketTree::from_shape(shape)?;
        WordSpec::new(p.signs, p.leaves, tree)
    }
}

fn signed<G: Gyrogroup>(g: &G, sign: Sign, x: &G::Element) -> Result<G::Element> {
    match sign {
        Sign::Plus => Ok(x.clone()),
        Sign::Minus => g.neg(x),
    }
}

fn path_name(path: &str) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.to_string()
    }
}

fn fold<G: Gyrogroup>(
    g: &G,
    shape: &Shape,
    leaf: &mut dyn FnMut() -> Result<G::Element>,
    path: &mut String,
) -> Result<G::Element> {
    match shape {
        Shape::Leaf => leaf().map_err(|e| match e {
            GyroError::Domain(message) => GyroError::WordDomain {
                path: path_name(path),
                message,
            },
            other => other,
        }),
        Shape::Join(l, r) => {
            path.push('L');
            let a = fold(g, l, leaf, path)?;
            path.pop();
            path.push('R');
            let b = fold(g, r, leaf, path)?;
            path.pop();
            g.add(&a, &b).map_err(|e| match e {
                GyroError::Domain(message) => GyroError::WordDomain {
                    path: path_name(path),
                    message,
                },
                other => other,
            })
        }
    }
}

/// Evaluates `w` with leaf `i` bound to `±generators[w.leaves[i]]`.
/// Domain failures report the `L`/`R` path of the failing subtree.
pub fn eval_word<G: Gyrogroup>(
    g: &G,
    w: &WordSpec,
    generators: &[G::Element],
) -> Result<G::Element> {
    if let Some(&bad) = w.leaves.iter().find(|&&i| i >= generators.len()) {
        return Err(GyroError::Precondition(format!(
            "leaf index {bad} but only {} generators",
            generators.len()
        )));
    }
    let mut next = 0;
    let mut leaf = || {
        let i = next;
        next += 1;
        signed(g, w.signs[i], &generators[w.leaves[i]])
    };
    fold(g, &w.tree.shape, &mut leaf, &mut String::new())
}

/// Distinct values of all bracketings of `ε₁x₁ ⊕ … ⊕ εₙxₙ`, in tree order,
/// deduplicated at `tol`.
pub fn r_set<G: Gyrogroup>(
    g: &G,
    signs: &[Sign],
    assignment: &[G::Element],
    tol: f64,
) -> Result<Vec<G::Element>> {
    let n = signs.len();
    if n != assignment.len() {
        return Err(GyroError::Precondition(format!(
            "{n} signs for {} leaves",
            assignment.len()
        )));
    }
    let leaves: Vec<usize> = (0..n).collect();
    let mut out = PointSet::new(g, tol);
    for tree in enumerate_trees(n)? {
        let w = WordSpec::new(signs.to_vec(), leaves.clone(), tree)?;
        out.insert(g, eval_word(g, &w, assignment)?);
    }
    Ok(out.into_elements())
}

/// Elements deduplicated at a tolerance (or exactly, for exact carriers).
#[derive(Debug, Clone)]
pub struct PointSet<E> {
    elements: Vec<E>,
    grid: GridIndex,
    tol: f64,
    exact: bool,
}

impl<E: Clone + PartialEq> PointSet<E> {
    pub fn new<G: Gyrogroup<Element = E>>(g: &G, tol: f64) -> Self {
        let exact = g.is_exact();
        let dim = g.coords(&g.identity()).len();
        let cell = if exact { 1.0 } else { tol.max(1e-12) };
        PointSet {
            elements: Vec::new(),
            grid: GridIndex::new(cell, dim),
            tol: if exact { 0.0 } else { tol },
            exact,
        }
    }

    /// Index of a stored element equal to `e` at the set's tolerance.
    pub fn find<G: Gyrogroup<Element = E>>(&self, g: &G, e: &E) -> Option<usize> {
        let c = g.coords(e);
        self.grid
            .within(&c, self.tol)
            .into_iter()
            .find(|&i| !self.exact || self.elements[i] == *e)
    }

    /// Inserts unless a duplicate exists; returns the index and whether the
    /// element was new.
    pub fn insert<G: Gyrogroup<Element = E>>(&mut self, g: &G, e: E) -> (usize, bool) {
        if let Some(i) = self.find(g, &e) {
            return (i, false);
        }
        let id = self.grid.insert(g.coords(&e));
        self.elements.push(e);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<E> {
        self.elements
    }
}

/// How a closure element was first obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Derivation {
    Identity,
    /// `±generators[index]`
    Leaf {
        index: usize,
        sign: Sign,
    },
    /// `elements[0] ⊕ elements[1]`
    Add(usize, usize),
    /// `⊖elements[0]`
    Neg(usize),
    /// `gyr[elements[0], elements[1]](elements[2])`
    Gyr(usize, usize, usize),
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureBudget {
    pub max_elements: usize,
    pub max_evaluations: u64,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget {
            max_elements: 200_000,
            max_evaluations: 20_000_000,
        }
    }
}

/// A finite approximation of the generated subgyrogroup `⟨S⟩`.
#[derive(Debug, Clone)]
pub struct ClosureSet<E> {
    /// Element 0 is the identity.
    pub elements: Vec<E>,
    /// Shortest word length found for each element (0 for the identity).
    /// For fixed-point closures: the round in which it appeared.
    pub word_length: Vec<usize>,
    pub derivations: Vec<Derivation>,
    /// Largest word length (or round) fully processed.
    pub frontier_word_length: usize,
    pub generators: Vec<E>,
    /// Set when a budget stopped the enumeration early.
    pub truncated: bool,
    /// Word values discarded because they left the carrier numerically.
    pub rejected: usize,
    pub evaluations: u64,
}

impl<E: Clone + PartialEq> ClosureSet<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains<G: Gyrogroup<Element = E>>(&self, g: &G, e: &E, tol: f64) -> bool {
        self.elements.iter().any(|x| g.approx_eq(x, e, tol))
    }

    /// A word over the generators evaluating to element `i`, when its
    /// derivation uses only leaves and sums.
    pub fn word_for(&self, i: usize) -> Option<WordSpec> {
        match self.derivations.get(i)? {
            Derivation::Identity => {
                // 0 = s ⊕ ⊖s
                if self.generators.is_empty() {
                    None
                } else {
                    WordSpec::leaf(Sign::Plus, 0)
                        .join(&WordSpec::leaf(Sign::Minus, 0))
                        .ok()
                }
            }
            Derivation::Leaf { index, sign } => Some(WordSpec::leaf(*sign, *index)),
            Derivation::Add(a, b) => self.word_for(*a)?.join(&self.word_for(*b)?).ok(),
            Derivation::Neg(_) | Derivation::Gyr(..) => None,
        }
    }
}

/// Values of all words of length `≤ max_word_len` over `S`, with every sign
/// pattern and bracketing, deduplicated at `dedup_tol`. Finite exact
/// carriers instead iterate to the fixed point under `⊕`, `⊖` and gyrations.
pub fn closure_generate<G: Gyrogroup>(
    g: &G,
    s: &[G::Element],
    max_word_len: usize,
    dedup_tol: f64,
) -> Result<ClosureSet<G::Element>> {
    closure_generate_with_budget(g, s, max_word_len, dedup_tol, ClosureBudget::default())
}

pub fn closure_generate_with_budget<G: Gyrogroup>(
    g: &G,
    s: &[G::Element],
    max_word_len: usize,
    dedup_tol: f64,
    budget: ClosureBudget,
) -> Result<ClosureSet<G::Element>> {
    if max_word_len == 0 {
        return Err(GyroError::Precondition(
            "word length cap must be at least 1".into(),
        ));
    }
    if !(dedup_tol >= 0.0) {
        return Err(GyroError::Precondition(format!(
            "dedup tolerance {dedup_tol} is negative"
        )));
    }
    if g.is_exact() && g.elements().is_some() {
        fixed_point_closure(g, s, budget)
    } else {
        word_closure(g, s, max_word_len, dedup_tol, budget)
    }
}

struct Builder<'g, G: Gyrogroup> {
    g: &'g G,
    set: PointSet<G::Element>,
    word_length: Vec<usize>,
    derivations: Vec<Derivation>,
    budget: ClosureBudget,
    evaluations: u64,
    rejected: usize,
    truncated: bool,
}

impl<'g, G: Gyrogroup> Builder<'g, G> {
    fn new(g: &'g G, tol: f64, budget: ClosureBudget) -> Self {
        let mut b = Builder {
            g,
            set: PointSet::new(g, tol),
            word_length: Vec::new(),
            derivations: Vec::new(),
            budget,
            evaluations: 0,
            rejected: 0,
            truncated: false,
        };
        b.offer(Ok(g.identity()), 0, Derivation::Identity);
        b
    }

    fn exhausted(&mut self) -> bool {
        if self.set.len() >= self.budget.max_elements
            || self.evaluations >= self.budget.max_evaluations
        {
            self.truncated = true;
        }
        self.truncated
    }

    /// Returns true when a new element was stored.
    fn offer(&mut self, value: Result<G::Element>, len: usize, d: Derivation) -> bool {
        self.evaluations += 1;
        let value = match value {
            Ok(v) => v,
            Err(_) => {
                self.rejected += 1;
                return false;
            }
        };
        let (_, new) = self.set.insert(self.g, value);
        if new {
            self.word_length.push(len);
            self.derivations.push(d);
        }
        new
    }

    fn finish(self, generators: &[G::Element], frontier: usize) -> ClosureSet<G::Element> {
        ClosureSet {
            elements: self.set.into_elements(),
            word_length: self.word_length,
            derivations: self.derivations,
            frontier_word_length: frontier,
            generators: generators.to_vec(),
            truncated: self.truncated,
            rejected: self.rejected,
            evaluations: self.evaluations,
        }
    }
}

fn seed_generators<G: Gyrogroup>(b: &mut Builder<'_, G>, s: &[G::Element]) -> Result<()> {
    for (i, x) in s.iter().enumerate() {
        b.offer(
            Ok(x.clone()),
            1,
            Derivation::Leaf {
                index: i,
                sign: Sign::Plus,
            },
        );
    }
    for (i, x) in s.iter().enumerate() {
        let nx = b.g.neg(x);
        b.offer(
            nx,
            1,
            Derivation::Leaf {
                index: i,
                sign: Sign::Minus,
            },
        );
    }
    Ok(())
}

fn word_closure<G: Gyrogroup>(
    g: &G,
    s: &[G::Element],
    max_len: usize,
    tol: f64,
    budget: ClosureBudget,
) -> Result<ClosureSet<G::Element>> {
    let mut b = Builder::new(g, tol, budget);
    seed_generators(&mut b, s)?;
    // upto[k]: number of elements with word length ≤ k; the identity (id 0)
    // is not used as an operand
    let mut upto = vec![1usize, b.set.len()];
    let mut frontier = 1;
    'len: for n in 2..=max_len {
        for k in 1..n {
            // new at k ⊕ anything up to n − k, then older-than-k ⊕ new at n − k
            let passes = [
                (upto[k - 1]..upto[k], 1..upto[n - k]),
                (1..upto[k - 1], upto[n - k - 1]..upto[n - k]),
            ];
            for (left, right) in passes {
                for i in left {
                    for j in right.clone() {
                        if b.exhausted() {
                            break 'len;
                        }
                        let x = &b.set.elements()[i];
                        let y = &b.set.elements()[j];
                        let v = g.add(x, y);
                        b.offer(v, n, Derivation::Add(i, j));
                    }
                }
            }
        }
        upto.push(b.set.len());
        frontier = n;
    }
    Ok(b.finish(s, frontier))
}

fn fixed_point_closure<G: Gyrogroup>(
    g: &G,
    s: &[G::Element],
    budget: ClosureBudget,
) -> Result<ClosureSet<G::Element>> {
    let mut b = Builder::new(g, 0.0, budget);
    seed_generators(&mut b, s)?;
    let mut round = 1;
    'rounds: loop {
        let before = b.set.len();
        round += 1;
        for i in 0..before {
            let v = g.neg(&b.set.elements()[i]);
            b.offer(v, round, Derivation::Neg(i));
            for j in 0..before {
                if b.exhausted() {
                    break 'rounds;
                }
                let (x, y) = (b.set.elements()[i].clone(), b.set.elements()[j].clone());
                b.offer(g.add(&x, &y), round, Derivation::Add(i, j));
                for k in 0..before {
                    let z = b.set.elements()[k].clone();
                    b.offer(g.gyr(&x, &y, &z), round, Derivation::Gyr(i, j, k));
                }
            }
        }
        if b.set.len() == before {
            round -= 1;
            break;
        }
    }
    Ok(b.finish(s, round))
}

/// Default evaluation budget for [`word_membership_witness`].
pub const WITNESS_BUDGET: u64 = 5_000_000;

/// First word over `S` evaluating within `tol` of `target`, in order of
/// length, tree index, sign pattern, then leaf assignment (last leaf
/// fastest). `None` when nothing is found within the budget.
pub fn word_membership_witness<G: Gyrogroup>(
    g: &G,
    target: &G::Element,
    s: &[G::Element],
    max_word_len: usize,
    tol: f64,
) -> Result<Option<WordSpec>> {
    word_membership_witness_with_budget(g, target, s, max_word_len, tol, WITNESS_BUDGET)
}

pub fn word_membership_witness_with_budget<G: Gyrogroup>(
    g: &G,
    target: &G::Element,
    s: &[G::Element],
    max_word_len: usize,
    tol: f64,
    max_evaluations: u64,
) -> Result<Option<WordSpec>> {
    if s.is_empty() {
        return Ok(None);
    }
    if max_word_len == 0 || max_word_len > MAX_LEAVES {
        return Err(GyroError::Precondition(format!(
            "word length cap {max_word_len} outside 1..={MAX_LEAVES}"
        )));
    }
    let mut evaluations = 0u64;
    for n in 1..=max_word_len {
        for tree in enumerate_trees(n)? {
            for k in 0..(1u64 << n) {
                let signs = sign_pattern(n, k);
                let mut leaves = vec![0usize; n];
                'assign: loop {
                    if evaluations >= max_evaluations {
                        return Ok(None);
                    }
                    evaluations += 1;
                    let w = WordSpec::new(signs.clone(), leaves.clone(), tree.clone())?;
                    if let Ok(v) = eval_word(g, &w, s) {
                        if g.approx_eq(&v, target, tol) {
                            return Ok(Some(w));
                        }
                    }
                    // odometer over leaf assignments, last leaf fastest
                    for pos in (0..n).rev() {
                        leaves[pos] += 1;
                        if leaves[pos] < s.len() {
                            continue 'assign;
                        }
                        leaves[pos] = 0;
                    }
                    break;
                }
            }
        }
    }
    Ok(None)
}
