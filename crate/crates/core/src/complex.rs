//! Twisted Hochschild chains `C_n = A^{⊗ n+1}` with coefficients in `_σ A`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::algebra::{basis_mul, AlgElem, Automorphism, BasisIndex};
use crate::cochains::Cochain;
use crate::error::{Error, Result};
use crate::expr::{self, parse_scalar};
use crate::qfield::RatFunc;

/// A pure tensor of basis elements `e_{a_0} ⊗ … ⊗ e_{a_n}`.
pub type Tensor = SmallVec<[BasisIndex; 4]>;

#[derive(Clone, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    twist: Automorphism,
    terms: BTreeMap<Tensor, RatFunc>,
}

impl Chain {
    pub fn zero(degree: usize, twist: Automorphism) -> Chain {
        Chain {
            degree,
            twist,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(twist: Automorphism, tensor: &[BasisIndex]) -> Chain {
        assert!(
            !tensor.is_empty(),
            "a chain needs at least one tensor factor"
        );
        let mut c = Chain::zero(tensor.len() - 1, twist);
        c.add_term(tensor.iter().copied().collect(), RatFunc::one());
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn twist(&self) -> &Automorphism {
        &self.twist
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tensor, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, tensor: &[BasisIndex]) -> RatFunc {
        self.terms.get(tensor).cloned().unwrap_or_default()
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

    pub fn add_term(&mut self, tensor: Tensor, c: RatFunc) {
        debug_assert_eq!(tensor.len(), self.degree + 1);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(tensor) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Chain) {
        assert_eq!(
            self.degree, other.degree,
            "adding chains of different degree"
        );
        assert_eq!(self.twist, other.twist, "adding chains of different twist");
    }

    pub fn add_scaled(&mut self, other: &Chain, c: &RatFunc) {
        self.check_compatible(other);
        for (t, v) in &other.terms {
            self.add_term(t.clone(), v * c);
        }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::one());
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::from_int(-1));
        out
    }

    pub fn scale(&self, c: &RatFunc) -> Chain {
        let mut out = Chain::zero(self.degree, self.twist.clone());
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(t, v)| (t.clone(), v * c)).collect();
        }
        out
    }

    /// Apply `f` to every basis tensor and sum the results with the chain's coefficients.
    pub fn linear_map(
        &self,
        degree: usize,
        twist: Automorphism,
        f: impl Fn(&Tensor, &mut Chain, &RatFunc),
    ) -> Chain {
        let mut out = Chain::zero(degree, twist);
        for (t, c) in &self.terms {
            f(t, &mut out, c);
        }
        out
    }

    /// Evaluate a functional that is given on basis tensors.
    pub fn pair(&self, f: impl Fn(&Tensor) -> RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (t, c) in &self.terms {
            let v = f(t);
            if !v.is_zero() {
                acc += &(c * &v);
            }
        }
        acc
    }

    /// Text form such as `2*[x1 ⊗ xm1 ⊗ x0] + (1/q)*[1 ⊗ x0 ⊗ x0]`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                let body: Vec<String> = t.iter().map(|b| expr::render_monomial(*b)).collect();
                let body = format!("[{}]", body.join(" ⊗ "));
                if c.is_one() {
                    body
                } else {
                    format!("({c})*{body}")
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_json(&self) -> String {
        let file = ChainFile {
            degree: self.degree,
            twist: self.twist.lambda().render(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| TermFile {
                    coeff: c.render(),
                    tensor: t.iter().map(|b| (b.i, b.j)).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Chain> {
        let file: ChainFile =
            serde_json::from_str(text).map_err(|e| Error::Chain(e.to_string()))?;
        let lambda = parse_scalar(&file.twist).map_err(|e| Error::Chain(format!("twist: {e}")))?;
        let twist =
            Automorphism::new(lambda).map_err(|_| Error::Chain("twist: must be nonzero".into()))?;
        let mut chain = Chain::zero(file.degree, twist);
        for (k, term) in file.terms.iter().enumerate() {
            if term.tensor.len() != file.degree + 1 {
                return Err(Error::Chain(format!(
                    "terms[{k}].tensor: {} factors, degree {} needs {}",
                    term.tensor.len(),
                    file.degree,
                    file.degree + 1
                )));
            }
            let c = parse_scalar(&term.coeff)
                .map_err(|e| Error::Chain(format!("terms[{k}].coeff: {e}")))?;
            chain.add_term(
                term.tensor
                    .iter()
                    .map(|&(i, j)| BasisIndex::new(i, j))
                    .collect(),
                c,
            );
        }
        Ok(chain)
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Chain(deg {}, twist {}, {})",
            self.degree,
            self.twist,
            self.render()
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainFile {
    degree: usize,
    twist: String,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    coeff: String,
    tensor: Vec<(u32, i32)>,
}

/// Multilinear expansion of `f_0 ⊗ … ⊗ f_n`.
pub fn expand_tensor(factors: &[AlgElem], twist: Automorphism) -> Chain {
    assert!(
        !factors.is_empty(),
        "expand_tensor needs at least one factor"
    );
    let mut partial: Vec<(Tensor, RatFunc)> = vec![(Tensor::new(), RatFunc::one())];
    for f in factors {
        let mut next = Vec::with_capacity(partial.len() * f.len());
        for (t, c) in &partial {
            for (idx, v) in f.terms() {
                let mut t2 = t.clone();
                t2.push(*idx);
                next.push((t2, c * v));
            }
        }
        partial = next;
    }
    let mut out = Chain::zero(factors.len() - 1, twist);
    for (t, c) in partial {
        out.add_term(t, c);
    }
    out
}

fn push_product(
    out: &mut Chain,
    t: &Tensor,
    slot: usize,
    skip: usize,
    prod: &AlgElem,
    c: &RatFunc,
) {
    for (idx, v) in prod.terms() {
        let mut t2 = Tensor::with_capacity(t.len() - 1);
        for (k, b) in t.iter().enumerate() {
            if k == slot {
                t2.push(*idx);
            } else if k != skip {
                t2.push(*b);
            }
        }
        out.add_term(t2, c * v);
    }
}

/// The Hochschild boundary, last face `(-1)^n σ(a_n) a_0 ⊗ a_1 ⊗ … ⊗ a_{n-1}`.
pub fn boundary(c: &Chain) -> Result<Chain> {
    if c.degree == 0 {
        return Err(Error::Precondition("boundary of a degree 0 chain".into()));
    }
    let n = c.degree;
    let mut out = Chain::zero(n - 1, c.twist.clone());
    for (t, coeff) in &c.terms {
        for i in 0..n {
            let sign = if i % 2 == 0 { coeff.clone() } else { -coeff };
            push_product(&mut out, t, i, i + 1, &basis_mul(t[i], t[i + 1]), &sign);
        }
        let sign = if n.is_multiple_of(2) {
            coeff.clone()
        } else {
            -coeff
        };
        let last = &sign * &c.twist.weight_factor(t[n].j);
        let prod = basis_mul(t[n], t[0]);
        for (idx, v) in prod.terms() {
            let mut t2 = Tensor::with_capacity(n);
            t2.push(*idx);
            t2.extend(t[1..n].iter().copied());
            out.add_term(t2, &last * v);
        }
    }
    Ok(out)
}

/// `t(a_0 ⊗ … ⊗ a_n) = (-1)^n σ(a_n) ⊗ a_0 ⊗ … ⊗ a_{n-1}`.
pub fn cyclic_t(c: &Chain) -> Chain {
    let n = c.degree;
    let mut out = Chain::zero(n, c.twist.clone());
    for (t, coeff) in &c.terms {
        let mut v = coeff * &c.twist.weight_factor(t[n].j);
        if n % 2 == 1 {
            v = -v;
        }
        let mut t2 = Tensor::with_capacity(n + 1);
        t2.push(t[n]);
        t2.extend(t[..n].iter().copied());
        out.add_term(t2, v);
    }
    out
}

/// `(bψ)(a_0, …, a_n) = σ(a_0)ψ(a_1, …) + Σ (-1)^{i+1} ψ(…, a_i a_{i+1}, …) + (-1)^{n+1} ψ(a_0, …, a_{n-1}) a_n`
/// with `n` the degree of `ψ`.
pub fn coboundary_eval(psi: &Cochain, args: &[AlgElem]) -> Result<AlgElem> {
    let n = psi.degree();
    if args.len() != n + 1 {
        return Err(Error::Arity {
            expected: n + 1,
            got: args.len(),
        });
    }
    let sigma = psi.twist();
    let mut out = sigma.apply(&args[0]).mul(&psi.eval(&args[1..])?);
    for i in 0..n {
        let mut merged: Vec<AlgElem> = args[..i].to_vec();
        merged.push(args[i].mul(&args[i + 1]));
        merged.extend_from_slice(&args[i + 2..]);
        let v = psi.eval(&merged)?;
        out = if i % 2 == 0 { out.sub(&v) } else { out.add(&v) };
    }
    let last = psi.eval(&args[..n])?.mul(&args[n]);
    out = if n.is_multiple_of(2) {
        out.sub(&last)
    } else {
        out.add(&last)
    };
    Ok(out)
}
