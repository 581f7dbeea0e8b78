use proptest::prelude::*;

use qsphere::algebra::{counit, AlgElem, Automorphism, BasisIndex, Generator};
use qsphere::cochains::{cap, cup, partial, x0_power};
use qsphere::complex::{boundary, cyclic_t, expand_tensor, Chain};
use qsphere::expr::{parse, parse_scalar, render};
use qsphere::homology::{h0_reduce, h0_reduce_oracle, H0Label, TraceFunctional};
use qsphere::volume::{deriv_e, deriv_f};
use qsphere::RatFunc;

fn small_poly() -> impl Strategy<Value = RatFunc> {
    prop::collection::vec(-4i64..=4, 1..4).prop_map(|cs| {
        let mut acc = RatFunc::zero();
        for (k, c) in cs.into_iter().enumerate() {
            acc += &(&RatFunc::from_int(c) * &RatFunc::q_power(k as i64 - 1));
        }
        acc
    })
}

fn scalar() -> impl Strategy<Value = RatFunc> {
    (small_poly(), small_poly()).prop_map(|(n, d)| if d.is_zero() { n } else { &n / &d })
}

fn index() -> impl Strategy<Value = BasisIndex> {
    (0u32..=3, -3i32..=3).prop_map(|(i, j)| BasisIndex::new(i, j))
}

fn elem() -> impl Strategy<Value = AlgElem> {
    prop::collection::vec((index(), -3i64..=3, -2i64..=2), 1..=4).prop_map(|ts| {
        let mut a = AlgElem::zero();
        for (idx, c, k) in ts {
            a.add_term(idx, &RatFunc::from_int(c) * &RatFunc::q_power(k));
        }
        a
    })
}

fn twist() -> impl Strategy<Value = Automorphism> {
    prop_oneof![
        Just(Automorphism::identity()),
        Just(Automorphism::modular()),
        Just(Automorphism::q_power(-2)),
        Just(Automorphism::q_power(4)),
        Just(Automorphism::new(RatFunc::from_int(3)).unwrap()),
    ]
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn element_text_round_trip(a in elem()) {
        prop_assert_eq!(parse(&render(&a)).unwrap(), a);
    }

    #[test]
    fn associativity(a in elem(), b in elem(), c in elem()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn automorphism_is_multiplicative(s in twist(), a in elem(), b in elem()) {
        prop_assert_eq!(s.apply(&a.mul(&b)), s.apply(&a).mul(&s.apply(&b)));
        prop_assert_eq!(s.inverse().apply(&s.apply(&a)), a.clone());
        prop_assert_eq!(counit(&s.apply(&a)), counit(&a));
    }

    #[test]
    fn counit_is_a_character(a in elem(), b in elem()) {
        prop_assert_eq!(counit(&a.mul(&b)), &counit(&a) * &counit(&b));
    }

    #[test]
    fn twisted_leibniz(i in -1i32..=1, a in elem(), b in elem()) {
        let d = partial(i);
        let lhs = d.eval(&[a.mul(&b)]).unwrap();
        let rhs = d.twist().apply(&a).mul(&d.eval(std::slice::from_ref(&b)).unwrap())
            .add(&d.eval(std::slice::from_ref(&a)).unwrap().mul(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn e_and_f_are_derivations_into_the_counit(a in elem(), b in elem()) {
        let ab = a.mul(&b);
        prop_assert_eq!(deriv_e(&ab), &counit(&a) * &deriv_e(&b) + &deriv_e(&a) * &counit(&b));
        prop_assert_eq!(deriv_f(&ab), &counit(&a) * &deriv_f(&b) + &deriv_f(&a) * &counit(&b));
    }

    #[test]
    fn boundary_squares_to_zero(s in twist(), a in elem(), b in elem(), c in elem(), d in elem()) {
        let ch = expand_tensor(&[a, b, c, d], s);
        prop_assert!(boundary(&boundary(&ch).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn rotation_cubed_applies_the_twist(s in twist(), a in index(), b in index(), c in index()) {
        let ch = Chain::basis(s.clone(), &[a, b, c]);
        let t3 = cyclic_t(&cyclic_t(&cyclic_t(&ch)));
        let want = s.weight_factor(a.j + b.j + c.j);
        prop_assert_eq!(t3, ch.scale(&want));
    }

    #[test]
    fn cap_of_cup_is_iterated_cap(i in -1i32..=1, j in -1i32..=1,
                                  a in index(), b in index(), c in index()) {
        let ch = Chain::basis(Automorphism::modular(), &[a, b, c]);
        let (p, q) = (partial(i), partial(j));
        prop_assert_eq!(cap(&cap(&ch, &p).unwrap(), &q).unwrap(), cap(&ch, &cup(&p, &q)).unwrap());
    }

    #[test]
    fn cup_is_associative(a in elem(), b in elem()) {
        let (p, q, r) = (partial(1), x0_power(1), partial(0));
        let l = cup(&cup(&p, &q), &r);
        let rr = cup(&p, &cup(&q, &r));
        prop_assert_eq!(l.eval(&[a.clone(), b.clone()]).unwrap(), rr.eval(&[a, b]).unwrap());
    }

    #[test]
    fn derivation_commutes_past_central_elements(i in -1i32..=1, a in elem()) {
        // ψ ⌣ c = τ(c) ⌣ ψ with c = x0 and τ the twist of ψ; x0 is fixed by every σ
        let d = partial(i);
        let c = x0_power(1);
        prop_assert_eq!(cup(&d, &c).eval(std::slice::from_ref(&a)).unwrap(), cup(&c, &d).eval(&[a]).unwrap());
    }

    #[test]
    fn trace_law_on_random_elements(s in twist(), a in elem(), b in elem()) {
        let basis = qsphere::homology::h0_basis(&s);
        let mut labels = vec![H0Label::One, basis.x0];
        if basis.x_powers {
            labels.push(H0Label::XPower { sign: 1, j: 2 });
            labels.push(H0Label::XPower { sign: -1, j: 1 });
        }
        for l in labels {
            let t = TraceFunctional::new(l, s.clone()).unwrap();
            prop_assert_eq!(t.eval(&a.mul(&b)), t.eval(&s.apply(&b).mul(&a)));
        }
    }

    #[test]
    fn h0_reduction_agrees_with_spanning_set(s in twist(), a in elem()) {
        prop_assert_eq!(h0_reduce(&a, &s), h0_reduce_oracle(&a, &s));
    }

    #[test]
    fn chain_json_round_trip(s in twist(), a in elem(), b in elem(), c in elem()) {
        let ch = expand_tensor(&[a, b, c], s);
        prop_assert_eq!(Chain::from_json(&ch.to_json()).unwrap(), ch);
    }
}

#[test]
fn q_power_detection() {
    for i in -8..=8 {
        assert_eq!(RatFunc::q_power(i).detect_q_power(), Some(i));
    }
    assert_eq!(parse_scalar("q^2+1").unwrap().detect_q_power(), None);
}

#[test]
fn generators_are_normal_words() {
    for g in Generator::ALL {
        assert_eq!(AlgElem::basis(g.index()), g.element());
    }
}
