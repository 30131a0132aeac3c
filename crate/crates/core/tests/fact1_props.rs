use proptest::prelude::*;
use wzcert::fact1::{koebe_wdot_check, verify_fact1, LoewnerSymbols, Mode, SignChoice};
use wzcert::poly::{int, Poly};

#[test]
fn total_mode_vanishes_through_order_eight() {
    for n in 1..=8 {
        let r = verify_fact1(n, Mode::Total, SignChoice::Minus);
        assert!(r.vanishes(), "order {n}: first nonzero {:?}", r.first_nonzero_order);
        assert_eq!(verify_fact1(n, Mode::Total, SignChoice::Plus).first_nonzero_order, Some(1));
    }
}

#[test]
fn partial_mode_never_vanishes() {
    for n in 1..=4 {
        for s in [SignChoice::Plus, SignChoice::Minus] {
            assert_eq!(verify_fact1(n, Mode::Partial, s).first_nonzero_order, Some(1));
        }
    }
}

#[test]
fn koebe_relation_through_ten() {
    let sym = LoewnerSymbols::new(1);
    for n in 2..=10 {
        assert!(koebe_wdot_check(&sym, n).unwrap(), "N = {n}");
    }
}

/// Oracle for ẇ: differentiate K(w) = u K(z) implicitly, so
/// `K'(w) ẇ = −K(w)`, i.e. `(1+w) ẇ = −w(1−w)`; checked by plugging in the
/// reverted series at u = 1/2 against direct coefficient recursion.
#[test]
fn koebe_w_satisfies_functional_equation() {
    let sym = LoewnerSymbols::new(1);
    let n = 7;
    let w = wzcert::fact1::koebe_w(&sym, n).unwrap();
    // K(w) computed directly: w/(1-w)^2 = Σ j w^j
    let mut kw = wzcert::series::Series1::zero(sym.vars(), Some(n as i64));
    let mut wp = wzcert::series::Series1::one(sym.vars(), Some(n as i64));
    for j in 1..=n {
        wp = wp.mul(&w);
        kw = kw.add(&wp.scale(&Poly::from_int(sym.vars(), j as i64)));
    }
    for m in 1..=n as i64 {
        let expected = sym.u().scale(&int(m));
        assert_eq!(kw.coefficient(m).unwrap(), expected);
    }
}

fn ring_element(order: usize) -> impl Strategy<Value = Poly> {
    let sym = LoewnerSymbols::new(order);
    let nv = sym.vars().len();
    prop::collection::vec((prop::collection::vec(0u32..2, nv), -3i64..4), 0..4)
        .prop_map(move |ts| Poly::from_terms(sym.vars(), ts.into_iter().map(|(e, c)| (e, int(c)))))
}

fn underived(order: usize) -> impl Strategy<Value = Poly> {
    let sym = LoewnerSymbols::new(order);
    let n = order;
    ring_element(order).prop_map(move |p| {
        let mut q = p;
        for i in 2 * n..4 * n {
            q = q.eval(i, &int(0));
        }
        q.embed(sym.vars()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conj_is_involutive_ring_map(a in ring_element(2), b in ring_element(2)) {
        let s = LoewnerSymbols::new(2);
        prop_assert_eq!(s.conj(&s.conj(&a)), a.clone());
        prop_assert_eq!(s.conj(&(&a * &b)), &s.conj(&a) * &s.conj(&b));
        let re = s.re(&a);
        prop_assert_eq!(s.conj(&re), re.clone());
        prop_assert_eq!(s.re(&re), re);
    }

    #[test]
    fn ddt_is_a_derivation(a in underived(2), b in underived(2)) {
        let s = LoewnerSymbols::new(2);
        let lhs = s.ddt(&(&a * &b)).unwrap();
        let rhs = &(&s.ddt(&a).unwrap() * &b) + &(&a * &s.ddt(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
