use proptest::prelude::*;

use wzcert::poly::rat;
use wzcert::series::{InvSqrtMethod, LaurentSeries2, Series1};
use wzcert::tables::{kernel_series, Exponent, KernelQ};
use wzcert::{Error, Poly, Vars};

fn cv() -> Vars {
    Vars::new(["c"])
}

fn k(x: i64) -> Poly {
    Poly::from_int(&cv(), x)
}

fn l2(terms: &[(usize, i64, i64)], nz: usize, nw: usize) -> LaurentSeries2 {
    LaurentSeries2::from_terms(&cv(), nz, nw, terms.iter().map(|&(n, w, c)| (n, w, k(c))))
}

#[test]
fn product_and_derivative_examples() {
    let a = l2(&[(0, 0, 1), (1, 1, 1)], 2, 2);
    let b = l2(&[(0, 0, 1), (1, 1, -1)], 2, 2);
    assert_eq!(a.mul(&b), l2(&[(0, 0, 1), (2, 2, -1)], 2, 2));
    let f = l2(&[(0, 1, 1), (0, -1, 1)], 0, 3);
    assert_eq!(f.deriv_w(), l2(&[(0, 0, 1), (0, -2, -1)], 0, 3));
}

#[test]
fn inversion_examples() {
    let e = Vars::new(Vec::<String>::new());
    let c = |x: i64| Poly::from_int(&e, x);
    let one_minus_z = LaurentSeries2::from_terms(&e, 6, 0, [(0, 0, c(1)), (1, 0, c(-1))]);
    let inv = one_minus_z.invert().unwrap();
    for n in 0..=6 {
        assert_eq!(inv.coefficient(n, 0).unwrap(), c(1));
    }
    let sq = one_minus_z.mul(&one_minus_z);
    let inv2 = sq.invert().unwrap();
    for n in 0..=6 {
        assert_eq!(inv2.coefficient(n, 0).unwrap(), c(n + 1));
    }
    let root = sq.inv_sqrt().unwrap();
    assert_eq!(root, inv);
    let two = LaurentSeries2::from_terms(&e, 3, 0, [(0, 0, c(2))]);
    assert!(matches!(two.inv_sqrt(), Err(Error::BadUnit)));
    let zero = LaurentSeries2::zero(&e, 3, 0);
    assert!(matches!(zero.invert(), Err(Error::NotInvertible)));
}

#[test]
fn legendre_type_first_coefficient() {
    let v = Vars::new(["z", "c"]);
    let p = Poly::parse("1 - 2*c*z + z^2", &v).unwrap();
    let w = Vars::new(["z", "w", "c"]);
    let s = LaurentSeries2::from_poly(&p.embed(&w).unwrap(), 0, 1, 0, &cv(), 4, 0).unwrap();
    let r = s.inv_sqrt().unwrap();
    assert_eq!(r.coefficient(1, 0).unwrap(), Poly::parse("c", &cv()).unwrap());
}

#[test]
fn kernel_coefficient_and_bounds() {
    let b = kernel_series(Exponent::MinusHalf, 4);
    assert_eq!(b.coefficient(1, 1).unwrap(), Poly::parse("(1-c)/2", &cv()).unwrap());
    assert!(matches!(b.coefficient(5, 0), Err(Error::OutOfTruncation { .. })));
    assert!(b.coefficient(1, 3).unwrap().is_zero());
    let q = KernelQ::new().series(4, 4);
    assert_eq!(b.mul(&b), q.invert().unwrap());
    assert_eq!(l2(&[(0, 0, 3), (1, 1, 1)], 2, 2).ct_zw(), k(3));
}

#[test]
fn kernel_inv_sqrt_methods_agree() {
    let q = KernelQ::new().series(8, 8);
    let a = q.inv_sqrt_with(InvSqrtMethod::Binomial).unwrap();
    let b = q.inv_sqrt_with(InvSqrtMethod::Newton).unwrap();
    let c = q.inv_sqrt_with(InvSqrtMethod::Miller).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.mul(&a).mul(&q), LaurentSeries2::one(&cv(), 8, 8));
}

#[test]
fn reversion_examples() {
    let e = Vars::new(Vec::<String>::new());
    let c = |x: i64| Poly::from_int(&e, x);
    let s = Series1::from_terms(&e, (1..=6).map(|n| (n, c(n))), Some(6));
    let r = s.revert(6).unwrap();
    assert_eq!(r.coefficient(1).unwrap(), c(1));
    assert_eq!(r.coefficient(2).unwrap(), c(-2));
    assert_eq!(r.coefficient(3).unwrap(), c(5));
    let z = Series1::monomial(&e, 1, c(1), Some(6));
    assert_eq!(z.revert(6).unwrap(), z);
    let bad = Series1::from_terms(&e, [(0, c(1)), (1, c(1))], Some(4));
    assert!(matches!(bad.revert(4), Err(Error::NotRevertible)));
}

/// `|w| ≤ 1`, so products of three stay inside the band and truncation
/// only acts in `z`.
fn laurent() -> impl Strategy<Value = LaurentSeries2> {
    prop::collection::vec((0usize..4, -1i64..=1, -3i64..=3), 0..6).prop_map(|ts| {
        LaurentSeries2::from_terms(&cv(), 4, 4, ts.into_iter().map(|(n, w, c)| (n, w, k(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn telescoping_lemma(ts in prop::collection::vec((-4i64..=4, -5i64..=5), 0..6)) {
        // z·d/dz of a Laurent polynomial in z has no z^0 term
        let e = Vars::new(Vec::<String>::new());
        let f = Series1::from_terms(&e, ts.into_iter().map(|(x, c)| (x, Poly::from_int(&e, c))), None);
        prop_assert!(f.theta().ct().unwrap().is_zero());
    }

    #[test]
    fn multiplication_is_associative(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn multiplication_distributes(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn inv_sqrt_methods_agree(a in laurent()) {
        let one = LaurentSeries2::one(&cv(), 4, 4);
        let z = LaurentSeries2::from_terms(&cv(), 4, 4, [(1, 0, k(1))]);
        // unit constant term, everything else shifted by z
        let u = one.add(&z.mul(&a));
        let x = u.inv_sqrt_with(InvSqrtMethod::Binomial).unwrap();
        prop_assert_eq!(&x, &u.inv_sqrt_with(InvSqrtMethod::Newton).unwrap());
        prop_assert_eq!(x.mul(&x).mul(&u), one);
    }

    #[test]
    fn reversion_composes_to_identity(b in -4i64..=4, c in -4i64..=4, d in 1i64..=3) {
        let e = Vars::new(Vec::<String>::new());
        let q = |x: i64| Poly::constant(&e, rat(x, d));
        let s = Series1::from_terms(&e, [(1, Poly::from_int(&e, 1)), (2, q(b)), (3, q(c))], Some(8));
        let r = s.revert(8).unwrap();
        let id = r.compose(&s).unwrap().with_precision(8);
        prop_assert_eq!(id, Series1::monomial(&e, 1, Poly::from_int(&e, 1), Some(8)));
    }

    #[test]
    fn symmetric_kernels_stay_symmetric(a in 0i64..=3, b in -2i64..=2) {
        let q = KernelQ::new().series(5, 5);
        let shift = LaurentSeries2::from_terms(&cv(), 5, 5, [(1, 1, k(a)), (1, -1, k(a)), (2, 0, k(b))]);
        prop_assert!(q.add(&shift).is_w_symmetric());
        prop_assert!(q.add(&shift).invert().unwrap().is_w_symmetric());
    }
}

