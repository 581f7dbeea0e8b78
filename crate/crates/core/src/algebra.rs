//! The quantum sphere as an exact algebra over `Q(q)`.
//!
//! Generators `x_{-1}, x_0, x_1` subject to
//!
//! ```text
//! x_1 x_0 = q^-2 x_0 x_1        x_-1 x_0 = q^2 x_0 x_-1
//! x_1 x_-1 = q^-2 x_0^2 + q^-1 x_0
//! x_-1 x_1 = q^2 x_0^2 + q x_0
//! ```
//!
//! Elements are stored in the PBW basis `e_ij = x_0^i x_1^j` (`j >= 0`) or
//! `x_0^i x_-1^-j` (`j < 0`).

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::error::Error;
use crate::qfield::RatFunc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub i: u32,
    pub j: i32,
}

impl BasisIndex {
    pub const ONE: BasisIndex = BasisIndex { i: 0, j: 0 };

    pub const fn new(i: u32, j: i32) -> BasisIndex {
        BasisIndex { i, j }
    }

    /// The word `x_0^i x_{±1}^|j|`.
    pub fn word(self) -> Vec<Generator> {
        let mut w = vec![Generator::X0; self.i as usize];
        let g = if self.j > 0 {
            Generator::X1
        } else {
            Generator::Xm1
        };
        w.extend(std::iter::repeat_n(g, self.j.unsigned_abs() as usize));
        w
    }

    pub fn degree(self) -> u32 {
        self.i + self.j.unsigned_abs()
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{}]", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Xm1,
    X0,
    X1,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::Xm1, Generator::X0, Generator::X1];

    pub fn weight(self) -> i32 {
        match self {
            Generator::Xm1 => -1,
            Generator::X0 => 0,
            Generator::X1 => 1,
        }
    }

    pub fn index(self) -> BasisIndex {
        match self {
            Generator::Xm1 => BasisIndex::new(0, -1),
            Generator::X0 => BasisIndex::new(1, 0),
            Generator::X1 => BasisIndex::new(0, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Xm1 => "xm1",
            Generator::X0 => "x0",
            Generator::X1 => "x1",
        }
    }

    pub fn element(self) -> AlgElem {
        AlgElem::basis(self.index())
    }
}

/// A finite `Q(q)`-linear combination of PBW basis elements.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgElem {
    terms: BTreeMap<BasisIndex, RatFunc>,
}

impl AlgElem {
    pub fn zero() -> AlgElem {
        AlgElem::default()
    }

    pub fn one() -> AlgElem {
        AlgElem::basis(BasisIndex::ONE)
    }

    pub fn basis(idx: BasisIndex) -> AlgElem {
        AlgElem::term(idx, RatFunc::one())
    }

    pub fn term(idx: BasisIndex, c: RatFunc) -> AlgElem {
        let mut a = AlgElem::zero();
        a.add_term(idx, c);
        a
    }

    pub fn scalar(c: RatFunc) -> AlgElem {
        AlgElem::term(BasisIndex::ONE, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (BasisIndex, RatFunc)>>(it: I) -> AlgElem {
        let mut a = AlgElem::zero();
        for (idx, c) in it {
            a.add_term(idx, c);
        }
        a
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BasisIndex, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: BasisIndex) -> RatFunc {
        self.terms.get(&idx).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient when `self` is a multiple of `1`.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&BasisIndex::ONE).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, idx: BasisIndex, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &AlgElem, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for (idx, v) in &other.terms {
            self.add_term(*idx, if c.is_one() { v.clone() } else { v * c });
        }
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::one());
        out
    }

    pub fn sub(&self, other: &AlgElem) -> AlgElem {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::from_int(-1));
        out
    }

    pub fn neg(&self) -> AlgElem {
        self.scale(&RatFunc::from_int(-1))
    }

    pub fn scale(&self, c: &RatFunc) -> AlgElem {
        if c.is_zero() {
            return AlgElem::zero();
        }
        AlgElem {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let cab = ca * cb;
                with_basis_product(*a, *b, |terms| {
                    for (idx, c) in terms {
                        out.add_term(*idx, &cab * c);
                    }
                });
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> AlgElem {
        let mut acc = AlgElem::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest `i` and `|j|` occurring in the support.
    pub fn extent(&self) -> (u32, u32) {
        self.terms.keys().fold((0, 0), |(mi, mj), k| {
            (mi.max(k.i), mj.max(k.j.unsigned_abs()))
        })
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgElem({})", crate::expr::render(self))
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::render(self))
    }
}

impl From<Generator> for AlgElem {
    fn from(g: Generator) -> Self {
        g.element()
    }
}

type Terms = Rc<[(BasisIndex, RatFunc)]>;

const CACHE_LIMIT: usize = 1 << 16;

thread_local! {
    static PRODUCTS: RefCell<HashMap<(BasisIndex, BasisIndex), Terms>> = RefCell::new(HashMap::new());
    static MIXED: RefCell<HashMap<(i32, u32, u32), Terms>> = RefCell::new(HashMap::new());
}

fn with_basis_product<R>(
    a: BasisIndex,
    b: BasisIndex,
    f: impl FnOnce(&[(BasisIndex, RatFunc)]) -> R,
) -> R {
    if a == BasisIndex::ONE || b == BasisIndex::ONE {
        let idx = if a == BasisIndex::ONE { b } else { a };
        return f(&[(idx, RatFunc::one())]);
    }
    let cached = PRODUCTS.with(|c| c.borrow().get(&(a, b)).cloned());
    let terms = match cached {
        Some(t) => t,
        None => {
            let t: Terms = compute_basis_product(a, b).into();
            PRODUCTS.with(|c| {
                let mut c = c.borrow_mut();
                if c.len() >= CACHE_LIMIT {
                    c.clear();
                }
                c.insert((a, b), t.clone());
            });
            t
        }
    };
    f(&terms)
}

/// `e_a * e_b` in PBW normal form.
pub fn basis_mul(a: BasisIndex, b: BasisIndex) -> AlgElem {
    with_basis_product(a, b, |t| AlgElem::from_terms(t.iter().cloned()))
}

fn compute_basis_product(a: BasisIndex, b: BasisIndex) -> Vec<(BasisIndex, RatFunc)> {
    // X^j x_0^k = q^{-2jk} x_0^k X^j for either sign of j
    let pre = RatFunc::q_power(-2 * a.j as i64 * b.i as i64);
    let base = a.i + b.i;
    if a.j == 0 || b.j == 0 || (a.j > 0) == (b.j > 0) {
        return vec![(BasisIndex::new(base, a.j + b.j), pre)];
    }
    let s = a.j.signum();
    let mixed = mixed_block(s, a.j.unsigned_abs(), b.j.unsigned_abs());
    let mut out: BTreeMap<BasisIndex, RatFunc> = BTreeMap::new();
    for (idx, c) in mixed.iter() {
        let key = BasisIndex::new(base + idx.i, idx.j);
        let v = &pre * c;
        let e = out.entry(key).or_default();
        *e = &*e + &v;
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Normal form of `x_s^a x_{-s}^b`.
fn mixed_block(s: i32, a: u32, b: u32) -> Terms {
    if a == 0 || b == 0 {
        let j = s * a as i32 - s * b as i32;
        return vec![(BasisIndex::new(0, j), RatFunc::one())].into();
    }
    if let Some(t) = MIXED.with(|m| m.borrow().get(&(s, a, b)).cloned()) {
        return t;
    }
    // x_s x_-s = q^{-2s} x_0^2 + q^{-s} x_0, then move x_0^p left past x_s^{a-1}
    let inner = mixed_block(s, a - 1, b - 1);
    let s64 = s as i64;
    let mut out: BTreeMap<BasisIndex, RatFunc> = BTreeMap::new();
    for (p, c) in [
        (2u32, RatFunc::q_power(-2 * s64)),
        (1, RatFunc::q_power(-s64)),
    ] {
        let c = &c * &RatFunc::q_power(-2 * s64 * (a as i64 - 1) * p as i64);
        for (idx, v) in inner.iter() {
            let e = out.entry(BasisIndex::new(idx.i + p, idx.j)).or_default();
            *e = &*e + &(&c * v);
        }
    }
    let t: Terms = out
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .collect::<Vec<_>>()
        .into();
    MIXED.with(|m| m.borrow_mut().insert((s, a, b), t.clone()));
    t
}

pub fn mul(a: &AlgElem, b: &AlgElem) -> AlgElem {
    a.mul(b)
}

/// Product of two words computed by rewriting the concatenated free word with
/// the four defining rules until every term is normally ordered.
pub fn mul_oracle(left: &[Generator], right: &[Generator]) -> AlgElem {
    use Generator::*;
    let mut word = left.to_vec();
    word.extend_from_slice(right);
    let mut pending: Vec<(Vec<Generator>, RatFunc)> = vec![(word, RatFunc::one())];
    let mut out = AlgElem::zero();
    while let Some((w, c)) = pending.pop() {
        let hit = w
            .windows(2)
            .position(|p| matches!((p[0], p[1]), (X1, X0) | (Xm1, X0) | (X1, Xm1) | (Xm1, X1)));
        let Some(pos) = hit else {
            out.add_term(normal_word_index(&w), c);
            continue;
        };
        let splice = |mid: &[Generator]| {
            let mut v = w[..pos].to_vec();
            v.extend_from_slice(mid);
            v.extend_from_slice(&w[pos + 2..]);
            v
        };
        match (w[pos], w[pos + 1]) {
            (X1, X0) => pending.push((splice(&[X0, X1]), &c * &RatFunc::q_power(-2))),
            (Xm1, X0) => pending.push((splice(&[X0, Xm1]), &c * &RatFunc::q_power(2))),
            (X1, Xm1) => {
                pending.push((splice(&[X0, X0]), &c * &RatFunc::q_power(-2)));
                pending.push((splice(&[X0]), &c * &RatFunc::q_power(-1)));
            }
            (Xm1, X1) => {
                pending.push((splice(&[X0, X0]), &c * &RatFunc::q_power(2)));
                pending.push((splice(&[X0]), &c * &RatFunc::q()));
            }
            _ => unreachable!(),
        }
    }
    out
}

fn normal_word_index(w: &[Generator]) -> BasisIndex {
    let i = w.iter().take_while(|g| **g == Generator::X0).count();
    let j: i32 = w[i..].iter().map(|g| g.weight()).sum();
    debug_assert!(w[i..].iter().all(|g| *g != Generator::X0));
    BasisIndex::new(i as u32, j)
}

/// Evaluate a word in the generators as an algebra element.
pub fn word_element(w: &[Generator]) -> AlgElem {
    w.iter()
        .fold(AlgElem::one(), |acc, g| acc.mul(&g.element()))
}

/// The automorphism `x_n -> lambda^n x_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    lambda: RatFunc,
}

impl Automorphism {
    pub fn new(lambda: RatFunc) -> Result<Automorphism, Error> {
        if lambda.is_zero() {
            return Err(Error::Precondition(
                "automorphism parameter must be nonzero".into(),
            ));
        }
        Ok(Automorphism { lambda })
    }

    pub fn identity() -> Automorphism {
        Automorphism {
            lambda: RatFunc::one(),
        }
    }

    /// `lambda = q^i`.
    pub fn q_power(i: i64) -> Automorphism {
        Automorphism {
            lambda: RatFunc::q_power(i),
        }
    }

    /// The modular automorphism, `lambda = q^2`.
    pub fn modular() -> Automorphism {
        Automorphism::q_power(2)
    }

    pub fn lambda(&self) -> &RatFunc {
        &self.lambda
    }

    pub fn is_identity(&self) -> bool {
        self.lambda.is_one()
    }

    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            lambda: &self.lambda * &other.lambda,
        }
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            lambda: self.lambda.inv().expect("nonzero by construction"),
        }
    }

    /// The factor `lambda^j` by which `e_ij` is scaled.
    pub fn weight_factor(&self, j: i32) -> RatFunc {
        if j == 0 {
            return RatFunc::one();
        }
        if let Some(e) = self.lambda.detect_q_power() {
            return RatFunc::q_power(e * j as i64);
        }
        self.lambda.pow(j as i64).expect("nonzero by construction")
    }

    pub fn apply(&self, a: &AlgElem) -> AlgElem {
        if self.is_identity() {
            return a.clone();
        }
        AlgElem {
            terms: a
                .terms
                .iter()
                .map(|(k, v)| (*k, v * &self.weight_factor(k.j)))
                .collect(),
        }
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma[{}]", self.lambda)
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lambda)
    }
}

pub fn apply_aut(s: &Automorphism, a: &AlgElem) -> AlgElem {
    s.apply(a)
}

/// The character with `x_n -> 0`.
pub fn counit(a: &AlgElem) -> RatFunc {
    a.coeff(BasisIndex::ONE)
}

/// `a g = sigma(g) a` for all three generators.
pub fn is_sigma_central(a: &AlgElem, s: &Automorphism) -> bool {
    Generator::ALL.iter().all(|g| {
        let g = g.element();
        a.mul(&g) == s.apply(&g).mul(a)
    })
}

/// Box `0 <= i <= max_i`, `|j| <= max_j` of PBW indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub max_i: u32,
    pub max_j: u32,
}

impl Truncation {
    pub const fn new(max_i: u32, max_j: u32) -> Truncation {
        Truncation { max_i, max_j }
    }

    pub fn contains(&self, idx: BasisIndex) -> bool {
        idx.i <= self.max_i && idx.j.unsigned_abs() <= self.max_j
    }

    pub fn indices(&self) -> Vec<BasisIndex> {
        let mj = self.max_j as i32;
        (0..=self.max_i)
            .flat_map(|i| (-mj..=mj).map(move |j| BasisIndex::new(i, j)))
            .collect()
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::new(3, 3)
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.max_i, self.max_j)
    }
}

impl FromStr for Truncation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Precondition(format!("truncation must look like I,J: {s:?}"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let max_i = a.trim().parse().map_err(|_| bad())?;
        let max_j = b.trim().parse().map_err(|_| bad())?;
        Ok(Truncation { max_i, max_j })
    }
}
