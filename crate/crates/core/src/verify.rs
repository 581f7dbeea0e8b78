//! A suite of named, machine-checkable identities with a report.
//!
//! Every check recomputes its claim from the library primitives and compares
//! exactly in `Q(q)`. Claims quantified over an infinite basis are checked on
//! a truncation box and reported as `bounded-pass`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::algebra::{
    counit, is_sigma_central, AlgElem, Automorphism, BasisIndex, Generator, Truncation,
};
use crate::cochains::{
    cap, cup, inner, make_derivation, partial, solve_inner, x0_power, CochainKind,
};
use crate::complex::{boundary, expand_tensor, Chain};
use crate::error::{Error, Result};
use crate::expr::{parse, parse_scalar};
use crate::homology::{
    chain_to_element, fundamental_class, h0_basis, h0_reduce, h0_reduce_chain, H0Coordinates,
    H0Label, TraceFunctional,
};
use crate::qfield::RatFunc;
use crate::volume::{deriv_e, deriv_f, eta, is_cyclic, phi, phi_pm, Functional2, PhiVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
    C14,
    C15,
}

impl CheckId {
    pub const ALL: [CheckId; 15] = [
        CheckId::C1,
        CheckId::C2,
        CheckId::C3,
        CheckId::C4,
        CheckId::C5,
        CheckId::C6,
        CheckId::C7,
        CheckId::C8,
        CheckId::C9,
        CheckId::C10,
        CheckId::C11,
        CheckId::C12,
        CheckId::C13,
        CheckId::C14,
        CheckId::C15,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::C1 => "C1",
            CheckId::C2 => "C2",
            CheckId::C3 => "C3",
            CheckId::C4 => "C4",
            CheckId::C5 => "C5",
            CheckId::C6 => "C6",
            CheckId::C7 => "C7",
            CheckId::C8 => "C8",
            CheckId::C9 => "C9",
            CheckId::C10 => "C10",
            CheckId::C11 => "C11",
            CheckId::C12 => "C12",
            CheckId::C13 => "C13",
            CheckId::C14 => "C14",
            CheckId::C15 => "C15",
        }
    }

    /// The identity the check asserts.
    pub fn statement(self) -> &'static str {
        match self {
            CheckId::C1 => "b∘b = 0 on basis chains of degree 2 and 3",
            CheckId::C2 => "the fundamental class is a cycle",
            CheckId::C3 => "x0^i is σ_{q^2i}-central",
            CheckId::C4 => "closed forms of b(e_ij ⊗ x_k)",
            CheckId::C5 => "twisted trace law, traces kill im b, duality with the H_0 basis",
            CheckId::C6 => "cap action of x0 on H_0",
            CheckId::C7 => "∂_-1, ∂_0, ∂_1 are well defined twisted derivations",
            CheckId::C8 => "∂_±1 ⌣ x0 is inner, ∂_0 ⌣ x0^i is not",
            CheckId::C9 => "chain level caps of the fundamental class with ∂_i",
            CheckId::C10 => "iterated caps of [∂A] in H_0",
            CheckId::C11 => "q-exterior relations [∂_i] ⌣ [∂_j] = -q^{2ij} [∂_j] ⌣ [∂_i]",
            CheckId::C12 => "volume functional: variants agree, φ(∂A) = φ_±(∂A) = 1",
            CheckId::C13 => "φ on basis 2-chains is q^-1 on 1 ⊗ x1 ⊗ xm1 and 0 elsewhere",
            CheckId::C14 => "φ is not cyclic, φ + η is cyclic",
            CheckId::C15 => "η vanishes on cycles and on im b",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        CheckId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

/// Parse `all` or a comma separated list of check names.
pub fn parse_selection(s: &str) -> Result<Vec<CheckId>> {
    if s.trim() == "all" {
        return Ok(CheckId::ALL.to_vec());
    }
    let mut out: Vec<CheckId> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    BoundedPass,
    PassWithNotes,
    Fail,
}

impl Status {
    pub fn is_fail(self) -> bool {
        self == Status::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::BoundedPass => "bounded-pass",
            Status::PassWithNotes => "pass-with-notes",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub statement: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub runtime_ms: u128,
}

/// Collects failures of one check.
struct Probe {
    id: CheckId,
    bounded: bool,
    failures: Vec<String>,
    notes: Vec<String>,
    with_notes: bool,
}

const MAX_WITNESSES: usize = 5;

impl Probe {
    fn new(id: CheckId, bounded: bool) -> Probe {
        Probe {
            id,
            bounded,
            failures: Vec::new(),
            notes: Vec::new(),
            with_notes: false,
        }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }

    fn eq<T: PartialEq + fmt::Display>(&mut self, what: impl fmt::Display, got: &T, want: &T) {
        if got != want {
            self.fail(format!("{what}: got {got}, expected {want}"));
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    fn finish(self, runtime_ms: u128) -> CheckResult {
        let status = if !self.failures.is_empty() {
            Status::Fail
        } else if self.with_notes {
            Status::PassWithNotes
        } else if self.bounded {
            Status::BoundedPass
        } else {
            Status::Pass
        };
        let witness = if self.failures.is_empty() {
            None
        } else {
            let mut w: Vec<String> = self.failures.iter().take(MAX_WITNESSES).cloned().collect();
            if self.failures.len() > MAX_WITNESSES {
                w.push(format!("… {} violations in total", self.failures.len()));
            }
            Some(w.join("\n"))
        };
        CheckResult {
            name: self.id.name().to_string(),
            statement: self.id.statement().to_string(),
            status,
            witness,
            notes: self.notes,
            runtime_ms,
        }
    }
}

/// Twists used by the checks that quantify over `λ`.
pub fn sample_twists() -> Vec<Automorphism> {
    vec![
        Automorphism::identity(),
        Automorphism::modular(),
        Automorphism::q_power(-2),
        Automorphism::q_power(4),
        Automorphism::new(RatFunc::from_int(3)).expect("nonzero"),
    ]
}

fn el(s: &str) -> AlgElem {
    parse(s).expect("built-in expression")
}

fn sc(s: &str) -> RatFunc {
    parse_scalar(s).expect("built-in scalar")
}

fn x(k: i32) -> BasisIndex {
    match k {
        -1 => BasisIndex::new(0, -1),
        0 => BasisIndex::new(1, 0),
        _ => BasisIndex::new(0, 1),
    }
}

/// Split `items` across worker threads and concatenate the results in order.
fn par_flat_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Vec<R> + Sync) -> Vec<R> {
    let n = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(items.len().max(1));
    let chunk = items.len().div_ceil(n).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                s.spawn(move || part.iter().flat_map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn check_c1(trunc: Truncation) -> Probe {
    let mut p = Probe::new(CheckId::C1, true);
    let idx = trunc.indices();
    let twists = sample_twists();
    let mut jobs = Vec::new();
    for t in &twists {
        for &a in &idx {
            jobs.push((t.clone(), a));
        }
    }
    let bad = par_flat_map(&jobs, |(tw, a)| {
        let mut bad = Vec::new();
        for &b in &idx {
            for &c in &idx {
                let ch = Chain::basis(tw.clone(), &[*a, b, c]);
                let bb = boundary(&boundary(&ch).expect("degree 2")).expect("degree 1");
                if !bb.is_zero() {
                    bad.push(format!("λ = {tw}: b(b({})) = {}", ch.render(), bb.render()));
                }
                for &d in &idx {
                    let ch = Chain::basis(tw.clone(), &[*a, b, c, d]);
                    let bb = boundary(&boundary(&ch).expect("degree 3")).expect("degree 2");
                    if !bb.is_zero() {
                        bad.push(format!("λ = {tw}: b(b({})) = {}", ch.render(), bb.render()));
                    }
                }
            }
        }
        bad
    });
    p.failures = bad;
    p.note(format!("truncation {trunc}, twists 1, q^2, q^-2, q^4, 3"));
    p
}

fn check_c2() -> Probe {
    let mut p = Probe::new(CheckId::C2, false);
    let b = boundary(&fundamental_class()).expect("degree 2");
    p.expect(b.is_zero(), || format!("b(∂A) = {}", b.render()));
    p
}

fn check_c3() -> Probe {
    let mut p = Probe::new(CheckId::C3, false);
    for i in 0..=6u32 {
        let a = AlgElem::basis(BasisIndex::new(i, 0));
        let tw = Automorphism::q_power(2 * i as i64);
        p.expect(is_sigma_central(&a, &tw), || {
            format!("x0^{i} is not central for λ = {tw}")
        });
        if i > 0 {
            let off = Automorphism::q_power(2 * i as i64 + 2);
            p.expect(!is_sigma_central(&a, &off), || {
                format!("x0^{i} is central for λ = {off}")
            });
        }
    }
    for tw in [Automorphism::identity(), Automorphism::modular()] {
        p.expect(!is_sigma_central(&el("x1"), &tw), || {
            format!("x1 is central for λ = {tw}")
        });
    }
    p
}

/// `b(e_ij ⊗ x_k)` as displayed in closed form.
pub fn boundary_closed_form(i: u32, j: i32, k: i32, lam: &RatFunc) -> AlgElem {
    let qp = RatFunc::q_power;
    let li = lam.inv().expect("nonzero twist");
    let e = |a: u32, b: i32, c: RatFunc| AlgElem::term(BasisIndex::new(a, b), c);
    let (ii, jj) = (i as i64, j as i64);
    match k {
        -1 if j <= 0 => e(i, j - 1, RatFunc::one() - &li * &qp(2 * ii)),
        -1 => e(i + 2, j - 1, qp(-4 * jj + 2) - &li * &qp(2 * ii + 2)).add(&e(
            i + 1,
            j - 1,
            qp(-2 * jj + 1) - &li * &qp(2 * ii + 1),
        )),
        0 => e(i + 1, j, qp(-2 * jj) - RatFunc::one()),
        _ if j >= 0 => e(i, j + 1, RatFunc::one() - lam * &qp(-2 * ii)),
        _ => e(i + 2, j + 1, qp(-4 * jj - 2) - lam * &qp(-2 * ii - 2)).add(&e(
            i + 1,
            j + 1,
            qp(-2 * jj - 1) - lam * &qp(-2 * ii - 1),
        )),
    }
}

fn check_c4(trunc: Truncation) -> Probe {
    let mut p = Probe::new(CheckId::C4, true);
    for tw in sample_twists() {
        for idx in trunc.indices() {
            for k in -1..=1 {
                let got = boundary(&Chain::basis(tw.clone(), &[idx, x(k)])).expect("degree 1");
                let got = chain_to_element(&got).expect("degree 0");
                let want = boundary_closed_form(idx.i, idx.j, k, tw.lambda());
                p.expect(got == want, || {
                    format!("λ = {tw}, b({idx} ⊗ x_{k}): got {got}, expected {want}")
                });
            }
        }
    }
    p.note(format!("truncation {trunc}, twists 1, q^2, q^-2, q^4, 3"));
    p
}

/// Every trace defined at `tw` whose support meets the truncation box.
fn traces_at(tw: &Automorphism, trunc: Truncation) -> Vec<TraceFunctional> {
    let basis = h0_basis(tw);
    let mut labels = vec![H0Label::One, basis.x0];
    if basis.x_powers {
        for j in 1..=trunc.max_j.max(1) {
            labels.push(H0Label::XPower { sign: 1, j });
            labels.push(H0Label::XPower { sign: -1, j });
        }
    }
    labels
        .into_iter()
        .map(|l| TraceFunctional::new(l, tw.clone()).expect("label chosen for twist"))
        .collect()
}

fn representative(label: H0Label) -> AlgElem {
    match label {
        H0Label::One => AlgElem::one(),
        H0Label::XPower { sign, j } => AlgElem::basis(BasisIndex::new(0, sign as i32 * j as i32)),
        H0Label::X0 => AlgElem::basis(BasisIndex::new(1, 0)),
        H0Label::X0Power(i) => AlgElem::basis(BasisIndex::new(i, 0)),
    }
}

fn check_c5(trunc: Truncation) -> Probe {
    let mut p = Probe::new(CheckId::C5, true);
    let idx = trunc.indices();
    for tw in sample_twists() {
        let traces = traces_at(&tw, trunc);
        for &a in &idx {
            let ea = AlgElem::basis(a);
            for &b in &idx {
                let eb = AlgElem::basis(b);
                let ab = ea.mul(&eb);
                let ba = tw.apply(&eb).mul(&ea);
                for t in &traces {
                    let (l, r) = (t.eval(&ab), t.eval(&ba));
                    p.expect(l == r, || {
                        format!(
                            "λ = {tw}, ∫_{} {a}·{b} = {l} but ∫ σ({b})·{a} = {r}",
                            t.label()
                        )
                    });
                }
            }
            for k in -1..=1 {
                let bd = boundary(&Chain::basis(tw.clone(), &[a, x(k)])).expect("degree 1");
                for t in &traces {
                    let v = t.eval_chain(&bd).expect("degree 0");
                    p.expect(v.is_zero(), || {
                        format!("λ = {tw}, ∫_{} b({a} ⊗ x_{k}) = {v}", t.label())
                    });
                }
            }
        }
        for s in &traces {
            for t in &traces {
                let v = s.eval(&representative(t.label()));
                let want = if s.label() == t.label() {
                    RatFunc::one()
                } else {
                    RatFunc::zero()
                };
                p.expect(v == want, || {
                    format!("λ = {tw}, ∫_{} {} = {v}", s.label(), t.label())
                });
            }
        }
    }
    p.note(format!("truncation {trunc}, twists 1, q^2, q^-2, q^4, 3"));
    p
}

fn check_c6() -> Probe {
    let mut p = Probe::new(CheckId::C6, true);
    let modular = Automorphism::modular();
    let x0 = el("x0");
    // [x_{±1}^j] ⌢ x0 = 0 with source twist 1
    for j in 1..=3 {
        for g in ["x1", "xm1"] {
            let a = x0.mul(&el(&format!("{g}^{j}")));
            let r = h0_reduce(&a, &modular);
            p.expect(r.is_zero(), || format!("[{g}^{j}] ⌢ x0 = {r}"));
        }
    }
    // [1] ⌢ x0 = 0 when the source twist is q^{2k}, k > 0
    for k in 1..=4i64 {
        let tw = Automorphism::q_power(2 * k + 2);
        let r = h0_reduce(&x0, &tw);
        p.expect(r.is_zero(), || {
            format!("[1] ⌢ x0 at source twist q^{} = {r}", 2 * k)
        });
    }
    // [x0] ⌢ x0 = -q (1 - λ) / (q^2 - λ) [x0] for λ != q^2
    for lam in [sc("1"), sc("q^-2"), sc("q^-4"), sc("3")] {
        let tw = Automorphism::new(&lam * &RatFunc::q_power(2)).expect("nonzero");
        let got = h0_reduce(&el("x0^2"), &tw);
        let c = &(&(-RatFunc::q()) * &(RatFunc::one() - &lam)) / &(RatFunc::q_power(2) - &lam);
        let want = H0Coordinates::from_pairs([(H0Label::X0, c)]);
        p.expect(got == want, || {
            format!("[x0] ⌢ x0 at source twist {lam}: got {got}, expected {want}")
        });
    }
    // [x0^i] ⌢ x0 = [x0^{i+1}] with source twist q^{2i}
    for i in 1..=4u32 {
        let tw = Automorphism::q_power(2 * i as i64 + 2);
        let got = h0_reduce(&AlgElem::basis(BasisIndex::new(i + 1, 0)), &tw);
        let want = H0Coordinates::from_pairs([(H0Label::X0Power(i + 1), RatFunc::one())]);
        p.expect(got == want, || {
            format!("[x0^{i}] ⌢ x0: got {got}, expected {want}")
        });
    }
    p.note("source twists q^2k for k ≤ 4 and 1, q^-2, q^-4, 3 for the [x0] branch");
    p
}

fn check_c7(trunc: Truncation) -> Probe {
    let mut p = Probe::new(CheckId::C7, true);
    let idx = trunc.indices();
    for i in -1..=1 {
        let d = partial(i);
        let CochainKind::Derivation(der) = d.kind() else {
            unreachable!("partial is a derivation")
        };
        let vals = Generator::ALL.map(|g| der.value(g).clone());
        if let Err(e) = make_derivation(vals, d.twist().clone()) {
            p.fail(format!("∂_{i}: {e}"));
        }
        for &a in &idx {
            let l = der.on_basis(a);
            let r = der.on_basis_right(a);
            p.expect(l == r, || {
                format!("∂_{i}({a}): left peel {l}, right peel {r}")
            });
        }
        // twisted Leibniz rule on products of basis elements
        for &a in &idx {
            let ea = AlgElem::basis(a);
            for &b in &idx {
                let eb = AlgElem::basis(b);
                let lhs = d.eval(&[ea.mul(&eb)]).expect("degree 1");
                let rhs = d
                    .twist()
                    .apply(&ea)
                    .mul(&d.eval(std::slice::from_ref(&eb)).expect("degree 1"))
                    .add(
                        &d.eval(std::slice::from_ref(&ea))
                            .expect("degree 1")
                            .mul(&eb),
                    );
                p.expect(lhs == rhs, || format!("∂_{i}({a}·{b}): {lhs} vs {rhs}"));
            }
        }
    }
    p.note(format!(
        "Leibniz rule on basis pairs within truncation {trunc}"
    ));
    p
}

/// Innerness bound for the negative half of C8.
pub const NON_INNER_BOUND: Truncation = Truncation::new(6, 6);

fn check_c8() -> Probe {
    let mut p = Probe::new(CheckId::C8, true);
    let x0 = x0_power(1);
    for (s, w) in [(1, "xm1"), (-1, "x1")] {
        let target = cup(&partial(s), &x0);
        let sign = RatFunc::from_int(s as i64);
        let want = el(w).scale(&(&sign / &(RatFunc::q() - RatFunc::q_power(-1))));
        match solve_inner(&target, Truncation::new(3, 3)) {
            Ok(Some(b)) => p.eq(format_args!("∂_{s} ⌣ x0 = inner(b), b"), &b, &want),
            Ok(None) => p.fail(format!("∂_{s} ⌣ x0 is not inner within 3,3")),
            Err(e) => p.fail(e.to_string()),
        }
        let via_inner = inner(want.clone(), target.twist().clone());
        for g in Generator::ALL {
            let l = target.eval(&[g.element()]).expect("degree 1");
            let r = via_inner.eval(&[g.element()]).expect("degree 1");
            p.expect(l == r, || {
                format!("(∂_{s} ⌣ x0)({}) = {l}, inner({want}) gives {r}", g.name())
            });
        }
    }
    for i in 1..=2u32 {
        let target = cup(&partial(0), &x0_power(i));
        match solve_inner(&target, NON_INNER_BOUND) {
            Ok(None) => {}
            Ok(Some(b)) => p.fail(format!("∂_0 ⌣ x0^{i} = inner({b})")),
            Err(e) => p.fail(e.to_string()),
        }
    }
    p.note(format!(
        "non-innerness of ∂_0 ⌣ x0 and ∂_0 ⌣ x0^2 certified for b within {NON_INNER_BOUND}"
    ));
    p
}

/// A chain or element as displayed in closed form for one cap.
pub struct CapDisplay {
    /// Sequence of derivation indices applied to the fundamental class.
    pub path: &'static [i32],
    pub terms: &'static [(&'static str, &'static str, &'static str)],
    pub element: &'static str,
}

/// The displayed chain level caps of the fundamental class.
pub const CAP_DISPLAYS: &[CapDisplay] = &[
    CapDisplay {
        path: &[0],
        terms: &[
            ("2*q^-2", "xm1*x0", "x1"),
            ("2*q^2", "x1*x0", "xm1"),
            ("-2*(q^2+q^-2)", "x0^2", "x0"),
            ("q^-1", "xm1", "x1"),
            ("q", "x1", "xm1"),
            ("-2*(q+q^-1)", "x0", "x0"),
        ],
        element: "",
    },
    CapDisplay {
        path: &[0, 0],
        terms: &[],
        element: "2*(q^2-q^-2)*x0^3 + 3*(q-q^-1)*x0^2",
    },
    CapDisplay {
        path: &[0, -1],
        terms: &[],
        element: "2*(-q^5+q^-1)*x1*x0^2 + (-2*q^2+1+q^-2)*x1*x0 + q^-1*x1",
    },
    CapDisplay {
        path: &[0, 1],
        terms: &[],
        element: "2*(q-q^-5)*xm1*x0^2 + (q^2+1-2*q^-2)*xm1*x0 + q*xm1",
    },
    CapDisplay {
        path: &[-1],
        terms: &[
            ("-2*q^-1", "x1^2", "xm1"),
            ("-2*q^-1", "x0^2", "x1"),
            ("2*(q^3+q^-3)", "x1*x0", "x0"),
            ("-(1+q^-2)", "x0", "x1"),
            ("1+q^-2", "x1", "x0"),
            ("-q^-1", "1", "x1"),
        ],
        element: "",
    },
    CapDisplay {
        path: &[-1, 0],
        terms: &[],
        element: "2*(q^-3-q^3)*x1*x0^2 + (-q^2-1+2*q^-2)*x1*x0 - q^-1*x1",
    },
    CapDisplay {
        path: &[-1, -1],
        terms: &[],
        element: "2*(q^2-q^-6)*x1^2*x0 + (q^-3-q^-5)*x1^2",
    },
    CapDisplay {
        path: &[-1, 1],
        terms: &[],
        element: "2*(q^-8-1)*x0^3 + (-q-2*q^-1+q^-5+2*q^-7)*x0^2 + (-2-q^-2+q^-4)*x0 - q^-1",
    },
    CapDisplay {
        path: &[1],
        terms: &[
            ("2*q", "xm1^2", "x1"),
            ("2*q", "x0^2", "xm1"),
            ("-2*(q^3+q^-3)", "xm1*x0", "x0"),
            ("q^2+1", "x0", "xm1"),
            ("-q^2-1", "xm1", "x0"),
            ("q", "1", "xm1"),
        ],
        element: "",
    },
    CapDisplay {
        path: &[1, 0],
        terms: &[],
        element: "2*(q^3-q^-3)*xm1*x0^2 + (2*q^2-1-q^-2)*xm1*x0 - q*xm1",
    },
    CapDisplay {
        path: &[1, -1],
        terms: &[],
        element: "2*(1-q^8)*x0^3 + (-2*q^7-q^5+2*q+q^-1)*x0^2 + (-q^4+q^2+2)*x0 + q",
    },
    CapDisplay {
        path: &[1, 1],
        terms: &[],
        element: "2*(q^6-q^-2)*xm1^2*x0 + (q^5-q^3)*xm1^2",
    },
];

/// Displays whose printed form is known to be garbled, with the reading used.
pub const TYPO_LEDGER: &[(&[i32], &str)] = &[(
    &[0, -1],
    "the printed coefficient of x1*x0 reads (-2q^2+1+q^-2 1); the stray trailing 1 is dropped",
)];

pub fn path_label(path: &[i32]) -> String {
    let mut s = "∂A".to_string();
    for (n, i) in path.iter().enumerate() {
        s = if n == 0 {
            format!("{s} ⌢ ∂_{i}")
        } else {
            format!("({s}) ⌢ ∂_{i}")
        };
    }
    s
}

/// Iterated cap of the fundamental class along `path`.
pub fn iterated_cap(path: &[i32]) -> Result<Chain> {
    let mut c = fundamental_class();
    for &i in path {
        c = cap(&c, &partial(i))?;
    }
    Ok(c)
}

impl CapDisplay {
    pub fn expected(&self, twist: Automorphism) -> Chain {
        if self.terms.is_empty() {
            let a = el(self.element);
            return expand_tensor(&[a], twist);
        }
        let mut out = Chain::zero(1, twist.clone());
        for (c, a0, a1) in self.terms {
            out.add_scaled(&expand_tensor(&[el(a0), el(a1)], twist.clone()), &sc(c));
        }
        out
    }
}

fn check_c9() -> Probe {
    let mut p = Probe::new(CheckId::C9, false);
    let fc = fundamental_class();
    let cycle = boundary(&fc).map(|b| b.is_zero()).unwrap_or(false);
    let c10 = check_c10();
    for d in CAP_DISPLAYS {
        let got = iterated_cap(d.path).expect("degrees fit");
        let want = d.expected(got.twist().clone());
        if got == want {
            continue;
        }
        let label = path_label(d.path);
        let diff = got.sub(&want);
        let msg = format!(
            "{label}: computed {} differs from display by {}",
            got.render(),
            diff.render()
        );
        let listed = TYPO_LEDGER.iter().any(|(path, _)| *path == d.path);
        if listed && cycle && c10.failures.is_empty() {
            p.with_notes = true;
            p.note(msg);
        } else {
            p.fail(msg);
        }
    }
    // cap against a cup is the iterated cap
    for i in -1..=1 {
        for j in -1..=1 {
            let l = cap(&fc, &cup(&partial(i), &partial(j))).expect("degree 2");
            let r = iterated_cap(&[i, j]).expect("degree 2");
            p.expect(l == r, || {
                format!("∂A ⌢ (∂_{i} ⌣ ∂_{j}) differs from the iterated cap")
            });
        }
    }
    for (path, reading) in TYPO_LEDGER {
        p.note(format!("{}: {reading}", path_label(path)));
    }
    p
}

/// `([∂A] ⌢ [∂_i]) ⌢ [∂_j]` in `H_0`.
pub fn double_cap_class(i: i32, j: i32) -> Result<H0Coordinates> {
    h0_reduce_chain(&iterated_cap(&[i, j])?)
}

fn check_c10() -> Probe {
    let mut p = Probe::new(CheckId::C10, false);
    let cls = |i, j| double_cap_class(i, j).expect("degrees fit");
    let q = RatFunc::q();
    let qi = RatFunc::q_power(-1);
    let xp = |sign: i8| H0Label::XPower { sign, j: 1 };
    for i in -1..=1 {
        let r = cls(i, i);
        p.expect(r.is_zero(), || format!("([∂A] ⌢ [∂_{i}]) ⌢ [∂_{i}] = {r}"));
    }
    let want = H0Coordinates::from_pairs([(xp(1), qi.clone())]);
    p.eq("([∂A] ⌢ [∂_0]) ⌢ [∂_-1]", &cls(0, -1), &want);
    p.eq(
        "-([∂A] ⌢ [∂_-1]) ⌢ [∂_0]",
        &cls(-1, 0).scale(&-RatFunc::one()),
        &want,
    );
    let want = H0Coordinates::from_pairs([(xp(-1), q.clone())]);
    p.eq("([∂A] ⌢ [∂_0]) ⌢ [∂_1]", &cls(0, 1), &want);
    p.eq(
        "-([∂A] ⌢ [∂_1]) ⌢ [∂_0]",
        &cls(1, 0).scale(&-RatFunc::one()),
        &want,
    );
    let want = H0Coordinates::from_pairs([(H0Label::X0, sc("q^2+1")), (H0Label::One, q.clone())]);
    p.eq("([∂A] ⌢ [∂_1]) ⌢ [∂_-1]", &cls(1, -1), &want);
    p.eq(
        "-q^2 ([∂A] ⌢ [∂_-1]) ⌢ [∂_1]",
        &cls(-1, 1).scale(&-RatFunc::q_power(2)),
        &want,
    );
    p
}

fn check_c11() -> Probe {
    let mut p = Probe::new(CheckId::C11, false);
    let fc = fundamental_class();
    for i in -1..=1 {
        for j in i..=1 {
            let l = cap(&fc, &cup(&partial(i), &partial(j))).expect("degree 2");
            let r = cap(&fc, &cup(&partial(j), &partial(i))).expect("degree 2");
            let sum = l.add(&r.scale(&RatFunc::q_power(2 * (i * j) as i64)));
            let cls = h0_reduce_chain(&sum).expect("degree 0");
            p.expect(cls.is_zero(), || {
                format!(
                    "[∂_{i}] ⌣ [∂_{j}] + q^{} [∂_{j}] ⌣ [∂_{i}] ↦ {cls}",
                    2 * i * j
                )
            });
        }
    }
    p
}

/// Box for checks that range over boundaries of basis 3-chains.
fn boundary_box(trunc: Truncation) -> Truncation {
    Truncation::new(trunc.max_i.min(2), trunc.max_j.min(2))
}

fn basis_2chains(trunc: Truncation) -> Vec<Chain> {
    let idx = trunc.indices();
    let mut out = Vec::with_capacity(idx.len().pow(3));
    for &a in &idx {
        for &b in &idx {
            for &c in &idx {
                out.push(Chain::basis(Automorphism::modular(), &[a, b, c]));
            }
        }
    }
    out
}

fn boundaries_of_3chains(trunc: Truncation) -> Vec<(String, Chain)> {
    let idx = trunc.indices();
    let mut jobs = Vec::new();
    for &a in &idx {
        for &b in &idx {
            jobs.push((a, b));
        }
    }
    par_flat_map(&jobs, |&(a, b)| {
        let mut out = Vec::new();
        for &c in &idx {
            for &d in &idx {
                let ch = Chain::basis(Automorphism::modular(), &[a, b, c, d]);
                out.push((ch.render(), boundary(&ch).expect("degree 3")));
            }
        }
        out
    })
}

fn check_c12(trunc: Truncation) -> Probe {
    let mut p = Probe::new(CheckId::C12, true);
    let fc = fundamental_class();
    let one = RatFunc::one();
    for v in [PhiVariant::Delta, PhiVariant::Efd, PhiVariant::Cap] {
        p.eq(
            format_args!("φ(∂A) via {v:?}"),
            &phi(&fc, v).expect("domain"),
            &one,
        );
    }
    p.eq("φ_+(∂A)", &phi_pm(1, &fc).expect("domain"), &one);
    p.eq("φ_-(∂A)", &phi_pm(-1, &fc).expect("domain"), &one);
    let chains = basis_2chains(trunc);
    let bad = par_flat_map(&chains, |c| {
        let d = phi(c, PhiVariant::Delta).expect("domain");
        let e = phi(c, PhiVariant::Efd).expect("domain");
        let k = phi(c, PhiVariant::Cap).expect("domain");
        if d == e && e == k {
            vec![]
        } else {
            vec![format!("φ variants on {}: {d}, {e}, {k}", c.render())]
        }
    });
    p.failures.extend(bad);
    let bb = boundary_box(trunc);
    let bad = par_flat_map(&boundaries_of_3chains(bb), |(name, c)| {
        let mut out = Vec::new();
        for (label, v) in [
            ("φ", phi(c, PhiVariant::Delta)),
            ("φ_+", phi_pm(1, c)),
            ("φ_-", phi_pm(-1, c)),
        ] {
            let v = v.expect("domain");
            if !v.is_zero() {
                out.push(format!("{label}(b({name})) = {v}"));
            }
        }
        out
    });
    p.failures.extend(bad);
    let split = chains.iter().find(|c| {
        let a = phi(c, PhiVariant::Delta).expect("domain");
        a != phi_pm(1, c).expect("domain") || a != phi_pm(-1, c).expect("domain")
    });
    match split {
        Some(c) => p.note(format!(
            "chain level disagreement on {}: φ = {}, φ_+ = {}, φ_- = {}",
            c.render(),
            phi(c, PhiVariant::Delta).expect("domain"),
            phi_pm(1, c).expect("domain"),
            phi_pm(-1, c).expect("domain")
        )),
        None => p.fail("φ and φ_± agree on every basis 2-chain in the box"),
    }
    p.note(format!(
        "variant agreement within {trunc}, vanishing on b of basis 3-chains within {bb}"
    ));
    p
}

fn check_c13(trunc: Truncation) -> Probe {
    let mut p = Probe::new(CheckId::C13, true);
    let special = [BasisIndex::ONE, x(1), x(-1)];
    let chains = basis_2chains(trunc);
    let bad = par_flat_map(&chains, |c| {
        let t: Vec<BasisIndex> = c.terms().next().expect("basis chain").0.to_vec();
        let want = if t == special {
            RatFunc::q_power(-1)
        } else {
            RatFunc::zero()
        };
        let got = phi(c, PhiVariant::Efd).expect("domain");
        if got == want {
            vec![]
        } else {
            vec![format!("φ({}) = {got}, expected {want}", c.render())]
        }
    });
    p.failures = bad;
    // E and F are untwisted derivations into the counit
    let idx = trunc.indices();
    for &a in &idx {
        let ea = AlgElem::basis(a);
        for &b in &idx {
            let eb = AlgElem::basis(b);
            let ab = ea.mul(&eb);
            for (name, f) in [("E", deriv_e as fn(&AlgElem) -> RatFunc), ("F", deriv_f)] {
                let l = f(&ab);
                let r = &counit(&ea) * &f(&eb) + &f(&ea) * &counit(&eb);
                p.expect(l == r, || {
                    format!("{name}({a}·{b}) = {l}, Leibniz gives {r}")
                });
            }
        }
    }
    p.note(format!("truncation {trunc}"));
    p
}

fn check_c14(trunc: Truncation) -> Probe {
    let mut p = Probe::new(CheckId::C14, true);
    let w = [BasisIndex::ONE, x(1), x(-1)];
    match is_cyclic(Functional2::PhiDelta, trunc) {
        Ok(r) => {
            p.expect(!r.is_cyclic(), || "φ passes the cyclicity check".into());
            let d = r.t_defect(&w).cloned().unwrap_or_default();
            p.eq(
                "φ(t(1 ⊗ x1 ⊗ xm1)) - φ(1 ⊗ x1 ⊗ xm1)",
                &d,
                &-RatFunc::q_power(-1),
            );
        }
        Err(e) => p.fail(e.to_string()),
    }
    match is_cyclic(Functional2::PhiPlusEta, trunc) {
        Ok(r) => {
            for (t, v) in &r.t_defects {
                p.fail(format!("(φ+η)∘t - (φ+η) on {} = {v}", render_tensor(t)));
            }
            for (t, v) in &r.unital {
                p.fail(format!("(φ+η)({}) = {v}", render_tensor(t)));
            }
        }
        Err(e) => p.fail(e.to_string()),
    }
    let c = Chain::basis(Automorphism::modular(), &w);
    p.note(format!("η(1 ⊗ x1 ⊗ xm1) = {}", eta(&c).expect("domain")));
    if let Ok(r) = is_cyclic(Functional2::PhiPlusEtaCorrected, trunc) {
        p.note(format!(
            "{} : {} t-defects, {} unital violations within {trunc}",
            Functional2::PhiPlusEtaCorrected,
            r.t_defects.len(),
            r.unital.len()
        ));
    }
    p.note(format!("truncation {trunc}"));
    p
}

fn render_tensor(t: &[BasisIndex]) -> String {
    let parts: Vec<String> = t.iter().map(|b| crate::expr::render_monomial(*b)).collect();
    parts.join(" ⊗ ")
}

fn check_c15(trunc: Truncation) -> Probe {
    let mut p = Probe::new(CheckId::C15, true);
    let fc = fundamental_class();
    let v = eta(&fc).expect("domain");
    p.expect(v.is_zero(), || format!("η(∂A) = {v}"));
    let bb = boundary_box(trunc);
    let bad = par_flat_map(&boundaries_of_3chains(bb), |(name, c)| {
        let v = eta(c).expect("domain");
        if v.is_zero() {
            vec![]
        } else {
            vec![format!("η(b({name})) = {v}")]
        }
    });
    p.failures.extend(bad);
    p.note(format!("b of basis 3-chains within {bb}"));
    p
}

fn run_one(id: CheckId, trunc: Truncation) -> CheckResult {
    let start = Instant::now();
    let probe = match id {
        CheckId::C1 => check_c1(trunc),
        CheckId::C2 => check_c2(),
        CheckId::C3 => check_c3(),
        CheckId::C4 => check_c4(trunc),
        CheckId::C5 => check_c5(trunc),
        CheckId::C6 => check_c6(),
        CheckId::C7 => check_c7(trunc),
        CheckId::C8 => check_c8(),
        CheckId::C9 => check_c9(),
        CheckId::C10 => check_c10(),
        CheckId::C11 => check_c11(),
        CheckId::C12 => check_c12(trunc),
        CheckId::C13 => check_c13(trunc),
        CheckId::C14 => check_c14(trunc),
        CheckId::C15 => check_c15(trunc),
    };
    probe.finish(start.elapsed().as_millis())
}

/// Run the selected checks concurrently. Results come back in check order.
pub fn run_suite(selection: &[CheckId], trunc: Truncation) -> Vec<CheckResult> {
    let mut ids = selection.to_vec();
    ids.sort();
    ids.dedup();
    std::thread::scope(|s| {
        let handles: Vec<_> = ids
            .iter()
            .map(|&id| s.spawn(move || run_one(id, trunc)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    })
}

pub fn run_check(id: CheckId, trunc: Truncation) -> CheckResult {
    run_one(id, trunc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Precondition(format!("unknown report format {s:?}"))),
        }
    }
}

pub fn summary_line(results: &[CheckResult]) -> String {
    let ok = results.iter().filter(|r| !r.status.is_fail()).count();
    format!("{ok}/{}", results.len())
}

/// Render a report. Runtimes are included only when `timings` is set, so
/// that repeated runs produce identical text.
pub fn emit_report(results: &[CheckResult], format: ReportFormat, timings: bool) -> String {
    match format {
        ReportFormat::Json => {
            #[derive(Serialize)]
            struct Entry<'a> {
                #[serde(flatten)]
                result: &'a CheckResult,
                #[serde(skip_serializing_if = "Option::is_none")]
                runtime_ms: Option<u128>,
            }
            #[derive(Serialize)]
            struct Report<'a> {
                summary: String,
                checks: Vec<Entry<'a>>,
            }
            let checks = results
                .iter()
                .map(|r| Entry {
                    result: r,
                    runtime_ms: timings.then_some(r.runtime_ms),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&Report {
                summary: summary_line(results),
                checks,
            })
            .expect("serializable");
            s.push('\n');
            s
        }
        ReportFormat::Markdown => {
            let mut s = String::from("# Verification report\n\n");
            if results.is_empty() {
                return s;
            }
            s.push_str(if timings {
                "| check | status | statement | ms |\n|---|---|---|---|\n"
            } else {
                "| check | status | statement |\n|---|---|---|\n"
            });
            for r in results {
                s.push_str(&format!("| {} | {} | {} |", r.name, r.status, r.statement));
                if timings {
                    s.push_str(&format!(" {} |", r.runtime_ms));
                }
                s.push('\n');
            }
            for r in results {
                if r.witness.is_none() && r.notes.is_empty() {
                    continue;
                }
                s.push_str(&format!("\n## {}\n", r.name));
                if let Some(w) = &r.witness {
                    s.push_str("\nWitness:\n\n```text\n");
                    s.push_str(w);
                    s.push_str("\n```\n");
                }
                for n in &r.notes {
                    s.push_str(&format!("\n- {n}"));
                }
                if !r.notes.is_empty() {
                    s.push('\n');
                }
            }
            s.push_str(&format!("\n{} checks passed\n", summary_line(results)));
            s
        }
    }
}
