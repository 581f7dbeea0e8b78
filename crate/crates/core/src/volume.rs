//! The volume functional on 2-chains at the modular twist and its cyclic
//! corrections.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{counit, AlgElem, Automorphism, BasisIndex, Truncation};
use crate::cochains::{cap, cup, partial};
use crate::complex::{boundary, cyclic_t, Chain, Tensor};
use crate::error::{Error, Result};
use crate::qfield::RatFunc;

const ONE: BasisIndex = BasisIndex::ONE;
const X0: BasisIndex = BasisIndex::new(1, 0);
const X0_SQ: BasisIndex = BasisIndex::new(2, 0);
const X1: BasisIndex = BasisIndex::new(0, 1);
const XM1: BasisIndex = BasisIndex::new(0, -1);

fn check_domain(c: &Chain) -> Result<()> {
    if c.degree() != 2 {
        return Err(Error::Precondition(format!(
            "expected a 2-chain, got degree {}",
            c.degree()
        )));
    }
    if c.twist() != &Automorphism::modular() {
        return Err(Error::Precondition(format!(
            "expected twist q^2, got {}",
            c.twist()
        )));
    }
    Ok(())
}

/// `E(a) = ε(∂_-1(a))`.
pub fn deriv_e(a: &AlgElem) -> RatFunc {
    counit(&partial(-1).eval(std::slice::from_ref(a)).expect("degree 1"))
}

/// `F(a) = ε(∂_1(a))`.
pub fn deriv_f(a: &AlgElem) -> RatFunc {
    counit(&partial(1).eval(std::slice::from_ref(a)).expect("degree 1"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiVariant {
    /// `q^-1` on `1 ⊗ x1 ⊗ xm1`, zero on every other basis tensor.
    Delta,
    /// `q^-1 ε(a_0) F(a_1) E(a_2)`.
    Efd,
    /// `q^-1 ε(c ⌢ (∂_1 ⌣ ∂_-1))`.
    Cap,
}

impl FromStr for PhiVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(PhiVariant::Delta),
            "efd" => Ok(PhiVariant::Efd),
            "cap" => Ok(PhiVariant::Cap),
            _ => Err(Error::UnknownFunctional(s.to_string())),
        }
    }
}

/// Counit of a 0-chain.
fn chain_counit(c: &Chain) -> RatFunc {
    c.coeff(&[ONE])
}

pub fn phi(c: &Chain, variant: PhiVariant) -> Result<RatFunc> {
    check_domain(c)?;
    let qi = RatFunc::q_power(-1);
    Ok(match variant {
        PhiVariant::Delta => c.coeff(&[ONE, X1, XM1]) * qi,
        PhiVariant::Efd => {
            let v = c.pair(|t| {
                if t[0] != ONE {
                    return RatFunc::zero();
                }
                let f = deriv_f(&AlgElem::basis(t[1]));
                if f.is_zero() {
                    return f;
                }
                f * deriv_e(&AlgElem::basis(t[2]))
            });
            v * qi
        }
        PhiVariant::Cap => chain_counit(&cap(c, &cup(&partial(1), &partial(-1)))?) * qi,
    })
}

/// `φ_± = ± q^{∓1} ∫_{[x_{∓1}]} c ⌢ (∂_0 ⌣ ∂_{±1})`.
pub fn phi_pm(sign: i32, c: &Chain) -> Result<RatFunc> {
    check_domain(c)?;
    let s = if sign > 0 { 1 } else { -1 };
    let capped = cap(c, &cup(&partial(0), &partial(s)))?;
    debug_assert!(capped.twist().is_identity());
    let trace = capped.coeff(&[BasisIndex::new(0, -s)]);
    Ok(trace * RatFunc::q_power(-s as i64) * RatFunc::from_int(s as i64))
}

/// The bilinear functional on 1-chains whose composite with `b` is the
/// stated counter-term: nonzero only on `(1, x0)`, `(1, x0^2)`, `(x0, x0)`.
fn eta_pair(a: BasisIndex, b: BasisIndex) -> RatFunc {
    let q = RatFunc::q();
    let qi = RatFunc::q_power(-1);
    let one = RatFunc::one();
    match (a, b) {
        (ONE, X0) => &one / &(&qi * &qi - &one),
        (ONE, X0_SQ) => &one / &(&q - &qi),
        (X0, X0) => &one / &(RatFunc::from_int(2) * (&q - &qi)),
        _ => RatFunc::zero(),
    }
}

/// `η = φ_1 ∘ b` with the three displayed values of `φ_1`.
pub fn eta(c: &Chain) -> Result<RatFunc> {
    check_domain(c)?;
    Ok(boundary(c)?.pair(|t| eta_pair(t[0], t[1])))
}

pub fn cyclic_cocycle(c: &Chain) -> Result<RatFunc> {
    Ok(phi(c, PhiVariant::Delta)? + eta(c)?)
}

/// `g_p = (-1)^p q^{p-1} / (1 - q^{2p-2})` for `p >= 2`, zero below.
fn g(p: u32) -> RatFunc {
    if p < 2 {
        return RatFunc::zero();
    }
    let p = p as i64;
    let sign = RatFunc::from_int(if p % 2 == 0 { 1 } else { -1 });
    &(&sign * &RatFunc::q_power(p - 1)) / &(RatFunc::one() - RatFunc::q_power(2 * p - 2))
}

fn g_linear(a: &AlgElem) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (idx, c) in a.terms() {
        if idx.j == 0 {
            acc += &(c * &g(idx.i));
        }
    }
    acc
}

/// A bilinear functional `χ` on 1-chains for which `φ + χ ∘ b` is cyclic.
fn corrected_pair(a: BasisIndex, b: BasisIndex) -> RatFunc {
    if b == ONE || a.j + b.j != 0 {
        return RatFunc::zero();
    }
    if a == ONE {
        return if b.j == 0 { g(b.i) } else { RatFunc::zero() };
    }
    if a.j == 0 {
        return &g(a.i + b.i) / &RatFunc::from_int(2);
    }
    if a.j < 0 {
        return RatFunc::zero();
    }
    let mut v = g_linear(&crate::algebra::basis_mul(a, b));
    if a == X1 && b == XM1 {
        v -= &RatFunc::q_power(-1);
    }
    v
}

/// `χ ∘ b`, a coboundary that repairs the cyclicity of `φ`.
pub fn eta_corrected(c: &Chain) -> Result<RatFunc> {
    check_domain(c)?;
    Ok(boundary(c)?.pair(|t| corrected_pair(t[0], t[1])))
}

/// Named functionals on 2-chains at the modular twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional2 {
    PhiDelta,
    PhiEfd,
    PhiCap,
    PhiPlus,
    PhiMinus,
    Eta,
    PhiPlusEta,
    EtaCorrected,
    PhiPlusEtaCorrected,
}

impl Functional2 {
    pub const ALL: [Functional2; 9] = [
        Functional2::PhiDelta,
        Functional2::PhiEfd,
        Functional2::PhiCap,
        Functional2::PhiPlus,
        Functional2::PhiMinus,
        Functional2::Eta,
        Functional2::PhiPlusEta,
        Functional2::EtaCorrected,
        Functional2::PhiPlusEtaCorrected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functional2::PhiDelta => "phi-delta",
            Functional2::PhiEfd => "phi-efd",
            Functional2::PhiCap => "phi-cap",
            Functional2::PhiPlus => "phi-plus",
            Functional2::PhiMinus => "phi-minus",
            Functional2::Eta => "eta",
            Functional2::PhiPlusEta => "phi-plus-eta",
            Functional2::EtaCorrected => "eta-corrected",
            Functional2::PhiPlusEtaCorrected => "phi-plus-eta-corrected",
        }
    }

    pub fn eval(self, c: &Chain) -> Result<RatFunc> {
        match self {
            Functional2::PhiDelta => phi(c, PhiVariant::Delta),
            Functional2::PhiEfd => phi(c, PhiVariant::Efd),
            Functional2::PhiCap => phi(c, PhiVariant::Cap),
            Functional2::PhiPlus => phi_pm(1, c),
            Functional2::PhiMinus => phi_pm(-1, c),
            Functional2::Eta => eta(c),
            Functional2::PhiPlusEta => cyclic_cocycle(c),
            Functional2::EtaCorrected => eta_corrected(c),
            Functional2::PhiPlusEtaCorrected => Ok(phi(c, PhiVariant::Delta)? + eta_corrected(c)?),
        }
    }
}

impl fmt::Display for Functional2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Functional2::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFunctional(s.to_string()))
    }
}

/// Outcome of a bounded cyclicity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicityReport {
    pub functional: Functional2,
    pub truncation: Truncation,
    pub chains_checked: usize,
    /// Basis tensors `c` with `f(t(c)) - f(c) != 0`, and that defect.
    pub t_defects: Vec<(Tensor, RatFunc)>,
    /// Basis tensors `1 ⊗ a ⊗ b` with `f != 0`, and that value.
    pub unital: Vec<(Tensor, RatFunc)>,
}

impl CyclicityReport {
    pub fn is_cyclic(&self) -> bool {
        self.t_defects.is_empty() && self.unital.is_empty()
    }

    pub fn t_defect(&self, t: &[BasisIndex]) -> Option<&RatFunc> {
        self.t_defects
            .iter()
            .find(|(x, _)| x.as_slice() == t)
            .map(|(_, v)| v)
    }
}

/// Check `f ∘ t = f` and `f(1, a, b) = 0` on all basis 2-chains in the box.
pub fn is_cyclic(f: Functional2, trunc: Truncation) -> Result<CyclicityReport> {
    let idx = trunc.indices();
    let mut report = CyclicityReport {
        functional: f,
        truncation: trunc,
        chains_checked: 0,
        t_defects: Vec::new(),
        unital: Vec::new(),
    };
    for &a in &idx {
        for &b in &idx {
            for &c in &idx {
                let tensor = [a, b, c];
                let chain = Chain::basis(Automorphism::modular(), &tensor);
                let v = f.eval(&chain)?;
                let defect = f.eval(&cyclic_t(&chain))? - &v;
                report.chains_checked += 1;
                if !defect.is_zero() {
                    report
                        .t_defects
                        .push((tensor.into_iter().collect(), defect));
                }
                if a == ONE && !v.is_zero() {
                    report.unital.push((tensor.into_iter().collect(), v));
                }
            }
        }
    }
    Ok(report)
}
