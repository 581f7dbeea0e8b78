//! Degree 0 and degree 2 homology: the fundamental cycle, twisted traces and
//! reduction of 0-chains to the standard basis of `H_0(A, _σ A)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{AlgElem, Automorphism, BasisIndex, Generator};
use crate::complex::{boundary, expand_tensor, Chain};
use crate::error::{Error, Result};
use crate::expr::{parse, parse_scalar};
use crate::qfield::RatFunc;
use crate::volume::{phi, PhiVariant};

/// The fundamental 2-cycle at the modular twist `q^2`:
///
/// ```text
///   2 x1 ⊗ (xm1 ⊗ x0 - q^2 x0 ⊗ xm1)
/// + 2 xm1 ⊗ (q^-2 x0 ⊗ x1 - x1 ⊗ x0)
/// + 1 ⊗ (q x1 ⊗ xm1 - q^-1 xm1 ⊗ x1 + (q - q^-1) x0 ⊗ x0)
/// + 2 x0 ⊗ (x1 ⊗ xm1 - xm1 ⊗ x1 + (q^2 - q^-2) x0 ⊗ x0)
/// ```
pub fn fundamental_class() -> Chain {
    let terms = [
        ("2", "x1", "xm1", "x0"),
        ("-2*q^2", "x1", "x0", "xm1"),
        ("2*q^-2", "xm1", "x0", "x1"),
        ("-2", "xm1", "x1", "x0"),
        ("q", "1", "x1", "xm1"),
        ("-1/q", "1", "xm1", "x1"),
        ("q - 1/q", "1", "x0", "x0"),
        ("2", "x0", "x1", "xm1"),
        ("-2", "x0", "xm1", "x1"),
        ("2*(q^2 - q^-2)", "x0", "x0", "x0"),
    ];
    let mut out = Chain::zero(2, Automorphism::modular());
    for (c, a0, a1, a2) in terms {
        let factors = [a0, a1, a2].map(|s| parse(s).expect("built-in expression"));
        let c = parse_scalar(c).expect("built-in scalar");
        out.add_scaled(&expand_tensor(&factors, Automorphism::modular()), &c);
    }
    out
}

/// Labels of the standard basis of `H_0`, and of the dual traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum H0Label {
    One,
    /// `[x_{sign}^j]`, only for the trivial twist.
    XPower {
        sign: i8,
        j: u32,
    },
    X0,
    /// `[x_0^i]` with `i > 1`, only for the twist `q^{2i}`.
    X0Power(u32),
}

impl fmt::Display for H0Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            H0Label::One => f.write_str("[1]"),
            H0Label::XPower { sign, j } => {
                let g = if *sign > 0 { "x1" } else { "xm1" };
                if *j == 1 {
                    write!(f, "[{g}]")
                } else {
                    write!(f, "[{g}^{j}]")
                }
            }
            H0Label::X0 => f.write_str("[x0]"),
            H0Label::X0Power(i) => write!(f, "[x0^{i}]"),
        }
    }
}

/// Accepts `1`, `x0`, `x0^i`, `x1^j`, `xm1^j`, optionally in brackets.
impl FromStr for H0Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unknown H_0 label {s:?}"));
        let t = s.trim();
        let t = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(t)
            .trim();
        if t == "1" {
            return Ok(H0Label::One);
        }
        let (g, e) = match t.split_once('^') {
            Some((g, e)) => (g.trim(), e.trim().parse::<u32>().map_err(|_| bad())?),
            None => (t, 1),
        };
        if e == 0 {
            return Err(bad());
        }
        match g {
            "x0" if e == 1 => Ok(H0Label::X0),
            "x0" => Ok(H0Label::X0Power(e)),
            "x1" => Ok(H0Label::XPower { sign: 1, j: e }),
            "xm1" => Ok(H0Label::XPower { sign: -1, j: e }),
            _ => Err(bad()),
        }
    }
}

/// `Some(i)` when the twist is `q^{2i}` with `i > 1`.
fn x0_power_twist(twist: &Automorphism) -> Option<u32> {
    match twist.lambda().detect_q_power() {
        Some(e) if e % 2 == 0 && e >= 4 => u32::try_from(e / 2).ok(),
        _ => None,
    }
}

/// The `x_0`-family label that applies at `twist`.
pub fn x0_label(twist: &Automorphism) -> H0Label {
    match x0_power_twist(twist) {
        Some(i) => H0Label::X0Power(i),
        None => H0Label::X0,
    }
}

/// Which basis labels exist at a given twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H0Basis {
    pub x0: H0Label,
    /// The infinite family `[x_{±1}^j]`, `j >= 1`.
    pub x_powers: bool,
}

impl fmt::Display for H0Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x_powers {
            write!(f, "{{[1], [x1^j], [xm1^j] (j >= 1), {}}}", self.x0)
        } else {
            write!(f, "{{[1], {}}}", self.x0)
        }
    }
}

pub fn h0_basis(twist: &Automorphism) -> H0Basis {
    H0Basis {
        x0: x0_label(twist),
        x_powers: twist.is_identity(),
    }
}

/// A twisted trace dual to one basis class of `H_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceFunctional {
    label: H0Label,
    twist: Automorphism,
}

impl TraceFunctional {
    pub fn new(label: H0Label, twist: Automorphism) -> Result<TraceFunctional> {
        let ok = match label {
            H0Label::One => true,
            H0Label::XPower { sign, j } => {
                twist.is_identity() && j >= 1 && (sign == 1 || sign == -1)
            }
            H0Label::X0 => x0_power_twist(&twist).is_none(),
            H0Label::X0Power(i) => i > 1 && x0_power_twist(&twist) == Some(i),
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "trace {label} is not defined at twist {twist}"
            )));
        }
        Ok(TraceFunctional { label, twist })
    }

    pub fn label(&self) -> H0Label {
        self.label
    }

    pub fn twist(&self) -> &Automorphism {
        &self.twist
    }

    pub fn on_basis(&self, idx: BasisIndex) -> RatFunc {
        let BasisIndex { i: k, j: l } = idx;
        let hit = match self.label {
            H0Label::One => idx == BasisIndex::ONE,
            H0Label::XPower { sign, j } => k == 0 && l == sign as i32 * j as i32,
            H0Label::X0Power(i) => k == i && l == 0,
            H0Label::X0 => {
                if l != 0 || k == 0 {
                    return RatFunc::zero();
                }
                if k == 1 {
                    return RatFunc::one();
                }
                // (-1)^{k+1} q^{1-k} (1 - λ q^-2) / (1 - λ q^{-2k})
                let lam = self.twist.lambda();
                let k = k as i64;
                let num = RatFunc::one() - lam * &RatFunc::q_power(-2);
                let den = RatFunc::one() - lam * &RatFunc::q_power(-2 * k);
                let sign = RatFunc::from_int(if k % 2 == 1 { 1 } else { -1 });
                return &(&sign * &RatFunc::q_power(1 - k)) * &(&num / &den);
            }
        };
        if hit {
            RatFunc::one()
        } else {
            RatFunc::zero()
        }
    }

    pub fn eval(&self, a: &AlgElem) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (idx, c) in a.terms() {
            let v = self.on_basis(*idx);
            if !v.is_zero() {
                acc += &(c * &v);
            }
        }
        acc
    }

    /// Trace of a 0-chain, read as an element of `A`.
    pub fn eval_chain(&self, c: &Chain) -> Result<RatFunc> {
        Ok(self.eval(&chain_to_element(c)?))
    }
}

pub fn trace_eval(t: &TraceFunctional, a: &AlgElem) -> RatFunc {
    t.eval(a)
}

/// A degree 0 chain as an element of `A`.
pub fn chain_to_element(c: &Chain) -> Result<AlgElem> {
    if c.degree() != 0 {
        return Err(Error::Precondition(format!(
            "expected a 0-chain, got degree {}",
            c.degree()
        )));
    }
    Ok(AlgElem::from_terms(
        c.terms().map(|(t, v)| (t[0], v.clone())),
    ))
}

/// Coordinates of a class in `H_0` with respect to the standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct H0Coordinates(BTreeMap<H0Label, RatFunc>);

impl H0Coordinates {
    pub fn get(&self, label: H0Label) -> RatFunc {
        self.0.get(&label).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&H0Label, &RatFunc)> {
        self.0.iter()
    }

    fn add(&mut self, label: H0Label, c: RatFunc) {
        let v = self.get(label) + c;
        if v.is_zero() {
            self.0.remove(&label);
        } else {
            self.0.insert(label, v);
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (H0Label, RatFunc)>>(it: I) -> H0Coordinates {
        let mut out = H0Coordinates::default();
        for (l, c) in it {
            out.add(l, c);
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> H0Coordinates {
        H0Coordinates::from_pairs(self.0.iter().map(|(l, v)| (*l, v * c)))
    }

    pub fn plus(&self, other: &H0Coordinates) -> H0Coordinates {
        H0Coordinates::from_pairs(
            self.0
                .iter()
                .chain(other.0.iter())
                .map(|(l, v)| (*l, v.clone())),
        )
    }
}

impl fmt::Display for H0Coordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(l, c)| {
                if c.is_one() {
                    l.to_string()
                } else {
                    format!("({c})*{l}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Reduce `a` in `H_0(A, _σ A)` by evaluating every applicable trace.
pub fn h0_reduce(a: &AlgElem, twist: &Automorphism) -> H0Coordinates {
    let mut labels = vec![H0Label::One, x0_label(twist)];
    if twist.is_identity() {
        for (idx, _) in a.terms() {
            if idx.i == 0 && idx.j != 0 {
                labels.push(H0Label::XPower {
                    sign: idx.j.signum() as i8,
                    j: idx.j.unsigned_abs(),
                });
            }
        }
    }
    H0Coordinates::from_pairs(labels.into_iter().map(|l| {
        let t = TraceFunctional::new(l, twist.clone()).expect("labels chosen for this twist");
        (l, t.eval(a))
    }))
}

/// Reduce `a` modulo the spanning set of `im b`: `e_{i+1,j}` and
/// `(λ-1) e_{0,j}` for `j != 0`, and
/// `(λ - q^{2i+4}) q^{-2i-2} e_{i+2,0} + (λ - q^{2i+2}) q^{-2i-1} e_{i+1,0}`.
pub fn h0_reduce_oracle(a: &AlgElem, twist: &Automorphism) -> H0Coordinates {
    let lam = twist.lambda();
    let target = x0_power_twist(twist).unwrap_or(1);
    let mut out = H0Coordinates::default();
    for (idx, c) in a.terms() {
        let (k, l) = (idx.i, idx.j);
        if l != 0 {
            if k == 0 && twist.is_identity() {
                out.add(
                    H0Label::XPower {
                        sign: l.signum() as i8,
                        j: l.unsigned_abs(),
                    },
                    c.clone(),
                );
            }
            continue;
        }
        if k == 0 {
            out.add(H0Label::One, c.clone());
            continue;
        }
        // e_{i+2} = -q (λ - q^{2i+2}) / (λ - q^{2i+4}) e_{i+1}, read in either direction
        let mut coeff = c.clone();
        let mut k = k;
        while k > target {
            let i = k as i64 - 2;
            let num = lam - &RatFunc::q_power(2 * i + 2);
            let den = lam - &RatFunc::q_power(2 * i + 4);
            coeff = -&(&(&coeff * &RatFunc::q()) * &(&num / &den));
            k -= 1;
        }
        while k < target && !coeff.is_zero() {
            // e_k = -(λ - q^{2k+2}) q^{-1} / (λ - q^{2k}) e_{k+1}
            let num = lam - &RatFunc::q_power(2 * k as i64 + 2);
            let den = lam - &RatFunc::q_power(2 * k as i64);
            coeff = -&(&(&coeff * &RatFunc::q_power(-1)) * &(&num / &den));
            k += 1;
        }
        let label = if target == 1 {
            H0Label::X0
        } else {
            H0Label::X0Power(target)
        };
        out.add(label, coeff);
    }
    out
}

/// The coordinate of a 2-cycle at the modular twist against the fundamental class.
pub fn h2_class(c: &Chain) -> Result<RatFunc> {
    if c.degree() != 2 {
        return Err(Error::Precondition(format!(
            "h2_class needs a 2-chain, got degree {}",
            c.degree()
        )));
    }
    if c.twist() != &Automorphism::modular() {
        return Err(Error::Precondition(format!(
            "h2_class needs twist q^2, got {}",
            c.twist()
        )));
    }
    if !boundary(c)?.is_zero() {
        return Err(Error::Precondition("h2_class: chain is not a cycle".into()));
    }
    phi(c, PhiVariant::Delta)
}

/// Reduce a 0-chain in `H_0` at its own twist.
pub fn h0_reduce_chain(c: &Chain) -> Result<H0Coordinates> {
    Ok(h0_reduce(&chain_to_element(c)?, c.twist()))
}

/// Generators in the order `x_-1, x_0, x_1`.
pub fn generators() -> [AlgElem; 3] {
    Generator::ALL.map(|g| g.element())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u32, j: i32) -> BasisIndex {
        BasisIndex::new(i, j)
    }

    #[test]
    fn label_names_round_trip() {
        for l in [
            H0Label::One,
            H0Label::X0,
            H0Label::X0Power(3),
            H0Label::XPower { sign: 1, j: 1 },
            H0Label::XPower { sign: -1, j: 2 },
        ] {
            assert_eq!(l.to_string().parse::<H0Label>().unwrap(), l);
        }
        assert_eq!("x0^1".parse::<H0Label>().unwrap(), H0Label::X0);
        assert!("x2".parse::<H0Label>().is_err());
        assert!("x1^0".parse::<H0Label>().is_err());
    }

    #[test]
    fn fundamental_class_coefficients() {
        let c = fundamental_class();
        assert_eq!(c.coeff(&[e(0, 1), e(0, -1), e(1, 0)]), RatFunc::from_int(2));
        assert_eq!(c.coeff(&[e(0, 0), e(0, 1), e(0, -1)]), RatFunc::q());
        assert!(boundary(&c).unwrap().is_zero());
    }

    #[test]
    fn basis_case_split() {
        assert_eq!(
            h0_basis(&Automorphism::identity()),
            H0Basis {
                x0: H0Label::X0,
                x_powers: true
            }
        );
        assert_eq!(
            h0_basis(&Automorphism::q_power(4)),
            H0Basis {
                x0: H0Label::X0Power(2),
                x_powers: false
            }
        );
        let three = Automorphism::new(RatFunc::from_int(3)).unwrap();
        assert_eq!(h0_basis(&three).to_string(), "{[1], [x0]}");
        assert_eq!(h0_basis(&Automorphism::modular()).x0, H0Label::X0);
    }

    #[test]
    fn trace_values() {
        let unit = TraceFunctional::new(H0Label::One, Automorphism::modular()).unwrap();
        assert!(unit.on_basis(e(0, 0)).is_one());
        assert!(unit.on_basis(e(1, 0)).is_zero());
        let xp = TraceFunctional::new(H0Label::XPower { sign: 1, j: 2 }, Automorphism::identity())
            .unwrap();
        assert!(xp.on_basis(e(0, 2)).is_one());
        assert!(xp.on_basis(e(1, 2)).is_zero());
        // λ = q^-2, k = 2: -q^-1 (1 - q^-4) / (1 - q^-6)
        let x0 = TraceFunctional::new(H0Label::X0, Automorphism::q_power(-2)).unwrap();
        assert_eq!(
            x0.on_basis(e(2, 0)),
            parse("-q*(q^2+1)/(q^4+q^2+1)")
                .unwrap()
                .coeff(BasisIndex::ONE)
        );
        let x0 = TraceFunctional::new(H0Label::X0, Automorphism::identity()).unwrap();
        assert_eq!(
            x0.on_basis(e(2, 0)),
            parse("-1/(q+1/q)").unwrap().coeff(BasisIndex::ONE)
        );
        assert!(TraceFunctional::new(H0Label::X0, Automorphism::q_power(4)).is_err());
        assert!(
            TraceFunctional::new(H0Label::XPower { sign: 1, j: 1 }, Automorphism::modular())
                .is_err()
        );
        assert!(TraceFunctional::new(H0Label::X0Power(2), Automorphism::q_power(6)).is_err());
    }

    #[test]
    fn reductions() {
        assert!(h0_reduce(&AlgElem::basis(e(1, 3)), &Automorphism::identity()).is_zero());
        assert!(h0_reduce(&AlgElem::basis(e(2, 0)), &Automorphism::modular()).is_zero());
        assert!(h0_reduce_oracle(&AlgElem::basis(e(1, 0)), &Automorphism::q_power(4)).is_zero());
        assert_eq!(
            h0_reduce_oracle(&AlgElem::one(), &Automorphism::modular()),
            H0Coordinates::from_pairs([(H0Label::One, RatFunc::one())])
        );
        let three = Automorphism::new(RatFunc::from_int(3)).unwrap();
        let want = parse("-q*(3-q^2)/(3-q^4)").unwrap().coeff(BasisIndex::ONE);
        let got = h0_reduce_oracle(&AlgElem::basis(e(2, 0)), &three);
        assert_eq!(got.get(H0Label::X0), want);
        assert_eq!(h0_reduce(&AlgElem::basis(e(2, 0)), &three), got);
    }

    #[test]
    fn h2_of_fundamental_class() {
        let c = fundamental_class();
        assert!(h2_class(&c).unwrap().is_one());
        assert!(h2_class(&Chain::basis(
            Automorphism::modular(),
            &[e(0, 0), e(0, 1), e(0, -1)]
        ))
        .is_err());
    }
}
