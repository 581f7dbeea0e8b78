//! Twisted cochains as evaluator trees, with cup and cap products.
//!
//! Only four shapes are needed: twisted-central elements (degree 0), twisted
//! derivations and inner derivations (degree 1), and cup products of these.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{word_element, AlgElem, Automorphism, BasisIndex, Generator, Truncation};
use crate::complex::{Chain, Tensor};
use crate::error::{Error, Result};
use crate::expr::{parse, parse_scalar};
use crate::linalg::{self, Row};
use crate::qfield::RatFunc;

#[derive(Clone)]
pub struct Cochain {
    degree: usize,
    twist: Automorphism,
    kind: CochainKind,
}

#[derive(Clone)]
pub enum CochainKind {
    Central(AlgElem),
    Derivation(Arc<Derivation>),
    Inner(AlgElem),
    Cup(Arc<Cochain>, Arc<Cochain>),
}

/// A twisted derivation fixed by its values on `x_-1, x_0, x_1`.
pub struct Derivation {
    values: [AlgElem; 3],
    twist: Automorphism,
    memo: Mutex<HashMap<BasisIndex, AlgElem>>,
}

fn slot(g: Generator) -> usize {
    match g {
        Generator::Xm1 => 0,
        Generator::X0 => 1,
        Generator::X1 => 2,
    }
}

impl Derivation {
    pub fn value(&self, g: Generator) -> &AlgElem {
        &self.values[slot(g)]
    }

    fn sigma_gen(&self, g: Generator) -> AlgElem {
        g.element().scale(&self.twist.weight_factor(g.weight()))
    }

    /// Value on `e_ij`, peeling generators off the left.
    pub fn on_basis(&self, idx: BasisIndex) -> AlgElem {
        if idx == BasisIndex::ONE {
            return AlgElem::zero();
        }
        if let Some(v) = self.memo.lock().expect("memo lock").get(&idx) {
            return v.clone();
        }
        let (g, rest) = if idx.i > 0 {
            (Generator::X0, BasisIndex::new(idx.i - 1, idx.j))
        } else if idx.j > 0 {
            (Generator::X1, BasisIndex::new(0, idx.j - 1))
        } else {
            (Generator::Xm1, BasisIndex::new(0, idx.j + 1))
        };
        let v = self
            .sigma_gen(g)
            .mul(&self.on_basis(rest))
            .add(&self.value(g).mul(&AlgElem::basis(rest)));
        self.memo.lock().expect("memo lock").insert(idx, v.clone());
        v
    }

    /// Value on `e_ij`, peeling generators off the right. Independent of the
    /// memo table; used to cross-check [`on_basis`](Self::on_basis).
    pub fn on_basis_right(&self, idx: BasisIndex) -> AlgElem {
        if idx == BasisIndex::ONE {
            return AlgElem::zero();
        }
        let (rest, g) = if idx.j > 0 {
            (BasisIndex::new(idx.i, idx.j - 1), Generator::X1)
        } else if idx.j < 0 {
            (BasisIndex::new(idx.i, idx.j + 1), Generator::Xm1)
        } else {
            (BasisIndex::new(idx.i - 1, 0), Generator::X0)
        };
        let rest_e = AlgElem::basis(rest);
        self.twist
            .apply(&rest_e)
            .mul(self.value(g))
            .add(&self.on_basis_right(rest).mul(&g.element()))
    }

    /// Leibniz extension to a word in the generators.
    pub fn on_word(&self, w: &[Generator]) -> AlgElem {
        let mut out = AlgElem::zero();
        for k in 0..w.len() {
            let pre = self.twist.apply(&word_element(&w[..k]));
            out = out.add(&pre.mul(self.value(w[k])).mul(&word_element(&w[k + 1..])));
        }
        out
    }
}

/// The four defining relations as `(name, lhs word, rhs terms)`.
fn relations() -> Vec<(&'static str, Vec<Generator>, Vec<(RatFunc, Vec<Generator>)>)> {
    use Generator::*;
    let q = RatFunc::q_power;
    vec![
        (
            "x1*x0 = q^-2*x0*x1",
            vec![X1, X0],
            vec![(q(-2), vec![X0, X1])],
        ),
        (
            "xm1*x0 = q^2*x0*xm1",
            vec![Xm1, X0],
            vec![(q(2), vec![X0, Xm1])],
        ),
        (
            "x1*xm1 = q^-2*x0^2 + q^-1*x0",
            vec![X1, Xm1],
            vec![(q(-2), vec![X0, X0]), (q(-1), vec![X0])],
        ),
        (
            "xm1*x1 = q^2*x0^2 + q*x0",
            vec![Xm1, X1],
            vec![(q(2), vec![X0, X0]), (q(1), vec![X0])],
        ),
    ]
}

/// The twisted derivation with the given values on `(x_-1, x_0, x_1)`,
/// after checking that it respects every defining relation.
pub fn make_derivation(vals: [AlgElem; 3], twist: Automorphism) -> Result<Cochain> {
    let d = Derivation {
        values: vals,
        twist: twist.clone(),
        memo: Mutex::new(HashMap::new()),
    };
    for (name, lhs, rhs) in relations() {
        let mut diff = d.on_word(&lhs);
        for (c, w) in &rhs {
            diff = diff.sub(&d.on_word(w).scale(c));
        }
        if !diff.is_zero() {
            return Err(Error::Relation(name.to_string()));
        }
    }
    Ok(Cochain {
        degree: 1,
        twist,
        kind: CochainKind::Derivation(Arc::new(d)),
    })
}

/// The derivations `∂_1, ∂_0, ∂_-1` with twist `q^{-2|i|}`.
pub fn partial(i: i32) -> Cochain {
    static BUILT: OnceLock<[Cochain; 3]> = OnceLock::new();
    let built = BUILT.get_or_init(|| [build_partial(-1), build_partial(0), build_partial(1)]);
    match i {
        -1..=1 => built[(i + 1) as usize].clone(),
        _ => panic!("partial({i}): index must be -1, 0 or 1"),
    }
}

fn build_partial(i: i32) -> Cochain {
    let x = |s: &str| parse(s).expect("built-in expression");
    let (vals, twist) = match i {
        1 => ([x("0"), x("q*xm1"), x("1 + (q + 1/q)*x0")], -2),
        0 => ([x("-xm1"), x("0"), x("x1")], 0),
        _ => ([x("1 + (q + 1/q)*x0"), x("(1/q)*x1"), x("0")], -2),
    };
    make_derivation(vals, Automorphism::q_power(twist))
        .expect("built-in derivations are well defined")
}

/// A degree 0 cochain. Meaningful as a cocycle when `c` is twisted central.
pub fn central(c: AlgElem, twist: Automorphism) -> Cochain {
    Cochain {
        degree: 0,
        twist,
        kind: CochainKind::Central(c),
    }
}

/// `x_0^i`, which is central for the twist `q^{2i}`.
pub fn x0_power(i: u32) -> Cochain {
    central(
        AlgElem::basis(BasisIndex::new(i, 0)),
        Automorphism::q_power(2 * i as i64),
    )
}

/// `a -> b a - σ(a) b`.
pub fn inner(b: AlgElem, twist: Automorphism) -> Cochain {
    Cochain {
        degree: 1,
        twist,
        kind: CochainKind::Inner(b),
    }
}

/// `(φ ⌣ ψ)(a_1, …) = τ(φ(a_1, …, a_m)) ψ(a_{m+1}, …)` with `τ` the twist of `ψ`.
pub fn cup(phi: &Cochain, psi: &Cochain) -> Cochain {
    Cochain {
        degree: phi.degree + psi.degree,
        twist: psi.twist.compose(&phi.twist),
        kind: CochainKind::Cup(Arc::new(phi.clone()), Arc::new(psi.clone())),
    }
}

impl Cochain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn twist(&self) -> &Automorphism {
        &self.twist
    }

    pub fn kind(&self) -> &CochainKind {
        &self.kind
    }

    pub fn eval_basis(&self, args: &[BasisIndex]) -> AlgElem {
        debug_assert_eq!(args.len(), self.degree);
        match &self.kind {
            CochainKind::Central(c) => c.clone(),
            CochainKind::Derivation(d) => d.on_basis(args[0]),
            CochainKind::Inner(b) => {
                let a = AlgElem::basis(args[0]);
                b.mul(&a).sub(&self.twist.apply(&a).mul(b))
            }
            CochainKind::Cup(phi, psi) => {
                let m = phi.degree;
                let left = phi.eval_basis(&args[..m]);
                if left.is_zero() {
                    return left;
                }
                psi.twist.apply(&left).mul(&psi.eval_basis(&args[m..]))
            }
        }
    }

    /// Multilinear evaluation.
    pub fn eval(&self, args: &[AlgElem]) -> Result<AlgElem> {
        if args.len() != self.degree {
            return Err(Error::Arity {
                expected: self.degree,
                got: args.len(),
            });
        }
        let mut combos: Vec<(Vec<BasisIndex>, RatFunc)> = vec![(Vec::new(), RatFunc::one())];
        for a in args {
            let mut next = Vec::new();
            for (t, c) in &combos {
                for (idx, v) in a.terms() {
                    let mut t2 = t.clone();
                    t2.push(*idx);
                    next.push((t2, c * v));
                }
            }
            combos = next;
        }
        let mut out = AlgElem::zero();
        for (t, c) in combos {
            out.add_scaled(&self.eval_basis(&t), &c);
        }
        Ok(out)
    }

    /// Parse a cochain name: `d1`, `d0`, `dm1`, `x0^i`, `inner:<expr>@<twist>`, `cup(<name>,<name>)`.
    pub fn parse_name(name: &str) -> Result<Cochain> {
        parse_name_depth(name.trim(), 0)
    }
}

const MAX_CUP_DEPTH: usize = 32;

fn parse_name_depth(name: &str, depth: usize) -> Result<Cochain> {
    let unknown = || Error::UnknownCochain(name.to_string());
    if depth > MAX_CUP_DEPTH {
        return Err(unknown());
    }
    match name {
        "d1" => return Ok(partial(1)),
        "d0" => return Ok(partial(0)),
        "dm1" => return Ok(partial(-1)),
        "1" => return Ok(x0_power(0)),
        "x0" => return Ok(x0_power(1)),
        _ => {}
    }
    if let Some(exp) = name.strip_prefix("x0^") {
        let i: u32 = exp.trim().parse().map_err(|_| unknown())?;
        if i > 64 {
            return Err(unknown());
        }
        return Ok(x0_power(i));
    }
    if let Some(rest) = name.strip_prefix("inner:") {
        let (e, tw) = rest.split_once('@').ok_or_else(unknown)?;
        let b = parse(e)?;
        let twist = Automorphism::new(parse_scalar(tw)?)?;
        return Ok(inner(b, twist));
    }
    if let Some(body) = name.strip_prefix("cup(").and_then(|r| r.strip_suffix(')')) {
        let mut level = 0i32;
        let mut split = None;
        for (k, ch) in body.char_indices() {
            match ch {
                '(' => level += 1,
                ')' => level -= 1,
                ',' if level == 0 => {
                    split = Some(k);
                    break;
                }
                _ => {}
            }
            if level < 0 {
                return Err(unknown());
            }
        }
        let k = split.ok_or_else(unknown)?;
        let a = parse_name_depth(body[..k].trim(), depth + 1)?;
        let b = parse_name_depth(body[k + 1..].trim(), depth + 1)?;
        return Ok(cup(&a, &b));
    }
    Err(unknown())
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            CochainKind::Central(c) => format!("central {c}"),
            CochainKind::Derivation(d) => format!(
                "derivation xm1,x0,x1 -> {}, {}, {}",
                d.values[0], d.values[1], d.values[2]
            ),
            CochainKind::Inner(b) => format!("inner {b}"),
            CochainKind::Cup(a, b) => format!("cup({a:?}, {b:?})"),
        };
        write!(
            f,
            "Cochain(deg {}, twist {}, {kind})",
            self.degree, self.twist
        )
    }
}

/// `(a_0 ⊗ … ⊗ a_n) ⌢ φ = τ(a_0) φ(a_1, …, a_m) ⊗ a_{m+1} ⊗ … ⊗ a_n` with `τ` the twist of `φ`.
pub fn cap(c: &Chain, phi: &Cochain) -> Result<Chain> {
    let m = phi.degree;
    if m > c.degree() {
        return Err(Error::Precondition(format!(
            "cap of a degree {} chain with a degree {m} cochain",
            c.degree()
        )));
    }
    let twist = phi.twist.compose(c.twist());
    Ok(c.linear_map(c.degree() - m, twist, |t, out, coeff| {
        let value = phi.eval_basis(&t[1..=m]);
        if value.is_zero() {
            return;
        }
        let k = coeff * &phi.twist.weight_factor(t[0].j);
        let prod = AlgElem::basis(t[0]).mul(&value);
        for (idx, v) in prod.terms() {
            let mut t2 = Tensor::with_capacity(t.len() - m);
            t2.push(*idx);
            t2.extend(t[m + 1..].iter().copied());
            out.add_term(t2, &k * v);
        }
    }))
}

/// Search for `b` inside the truncation box with `inner(b, twist) = target`.
/// Both sides are twisted derivations, so agreement on generators suffices.
pub fn solve_inner(target: &Cochain, bound: Truncation) -> Result<Option<AlgElem>> {
    if target.degree != 1 {
        return Err(Error::Precondition(
            "solve_inner needs a degree 1 cochain".into(),
        ));
    }
    let unknowns = bound.indices();
    let mut row_of: HashMap<(Generator, BasisIndex), usize> = HashMap::new();
    let mut rows: Vec<Row> = Vec::new();
    let mut rhs: Vec<RatFunc> = Vec::new();
    let mut row_for =
        |key: (Generator, BasisIndex), rows: &mut Vec<Row>, rhs: &mut Vec<RatFunc>| {
            *row_of.entry(key).or_insert_with(|| {
                rows.push(Row::new());
                rhs.push(RatFunc::zero());
                rows.len() - 1
            })
        };
    for g in Generator::ALL {
        let sg = target.twist.apply(&g.element());
        for (col, idx) in unknowns.iter().enumerate() {
            let e = AlgElem::basis(*idx);
            let image = e.mul(&g.element()).sub(&sg.mul(&e));
            for (out, v) in image.terms() {
                let r = row_for((g, *out), &mut rows, &mut rhs);
                rows[r].insert(col, v.clone());
            }
        }
        for (out, v) in target.eval_basis(&[g.index()]).terms() {
            let r = row_for((g, *out), &mut rows, &mut rhs);
            rhs[r] = v.clone();
        }
    }
    let Some(x) = linalg::solve(rows, rhs, unknowns.len()) else {
        return Ok(None);
    };
    Ok(Some(AlgElem::from_terms(unknowns.into_iter().zip(x))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator::*;

    fn e(i: u32, j: i32) -> BasisIndex {
        BasisIndex::new(i, j)
    }

    #[test]
    fn derivation_values() {
        let d1 = partial(1);
        assert_eq!(
            d1.eval(&[X1.element()]).unwrap(),
            parse("1 + (q+1/q)*x0").unwrap()
        );
        assert!(d1.eval(&[Xm1.element()]).unwrap().is_zero());
        assert!(d1.eval(&[AlgElem::one()]).unwrap().is_zero());
        // x0 + (q^3+q+1/q)*x0^2 + q^2*x0 after normal ordering
        let want = parse("(1+q^2)*x0 + (q^3+q+1/q)*x0^2").unwrap();
        assert_eq!(d1.eval(&[AlgElem::basis(e(1, 1))]).unwrap(), want);
        assert_eq!(partial(-1).twist(), &Automorphism::q_power(-2));
        assert_eq!(partial(0).twist(), &Automorphism::identity());
    }

    #[test]
    fn derivation_checks_relations() {
        let x = |s: &str| parse(s).unwrap();
        let vals = [x("0"), x("q*xm1"), x("1 + (q + 1/q)*x0")];
        assert!(make_derivation(vals.clone(), Automorphism::q_power(-2)).is_ok());
        assert!(matches!(
            make_derivation(vals, Automorphism::identity()),
            Err(Error::Relation(_))
        ));
        let zero = [AlgElem::zero(), AlgElem::zero(), AlgElem::zero()];
        assert!(make_derivation(zero, Automorphism::new(RatFunc::from_int(5)).unwrap()).is_ok());
    }

    #[test]
    fn left_and_right_peeling_agree() {
        for i in -1..=1 {
            let d = partial(i);
            let CochainKind::Derivation(der) = d.kind() else {
                unreachable!()
            };
            for idx in Truncation::new(3, 3).indices() {
                assert_eq!(
                    der.on_basis(idx),
                    der.on_basis_right(idx),
                    "partial({i}) on {idx}"
                );
            }
        }
    }

    #[test]
    fn cup_of_centrals_is_opposite_product() {
        let a = x0_power(1);
        let b = x0_power(2);
        let c = cup(&a, &b);
        assert_eq!(c.eval(&[]).unwrap(), parse("x0^2*x0").unwrap());
        assert_eq!(c.twist(), &Automorphism::q_power(6));
    }

    #[test]
    fn cup_of_derivations() {
        let c = cup(&partial(1), &partial(-1));
        let v = c.eval(&[X1.element(), Xm1.element()]).unwrap();
        assert_eq!(v, parse("(1 + (q+1/q)*x0)^2").unwrap());
        assert!(c
            .eval(&[Xm1.element(), parse("x0 + x1").unwrap()])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn inner_examples() {
        let z = inner(AlgElem::one(), Automorphism::identity());
        assert!(z.eval(&[parse("x1 + x0^2").unwrap()]).unwrap().is_zero());
        let i = inner(X0.element(), Automorphism::modular());
        assert!(i.eval(&[X1.element()]).unwrap().is_zero());
    }

    #[test]
    fn names() {
        assert_eq!(Cochain::parse_name("cup(d1, x0^2)").unwrap().degree(), 1);
        assert_eq!(
            Cochain::parse_name("cup(cup(d1,d0),dm1)").unwrap().degree(),
            3
        );
        let i = Cochain::parse_name("inner:xm1/(q-1/q)@1").unwrap();
        assert_eq!(i.degree(), 1);
        assert!(Cochain::parse_name("d2").is_err());
        assert!(Cochain::parse_name("cup(d1)").is_err());
        assert!(Cochain::parse_name("inner:x0@0").is_err());
    }

    #[test]
    fn arity_is_checked() {
        assert_eq!(
            partial(0).eval(&[]).unwrap_err(),
            Error::Arity {
                expected: 1,
                got: 0
            }
        );
    }
}
