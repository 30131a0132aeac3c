use proptest::prelude::*;

use wzcert::linalg::{nullspace_rational, solve_linear};
use wzcert::poly::{gcd, int, rat};
use wzcert::{Error, Poly, RatFn, Rational, Vars};

fn vc() -> Vars {
    Vars::new(["c"])
}

fn p(s: &str, v: &Vars) -> Poly {
    Poly::parse(s, v).unwrap()
}

#[test]
fn ring_examples() {
    let v = vc();
    assert_eq!(&p("c+1", &v) * &p("c-1", &v), p("c^2-1", &v));
    assert_eq!(p("c^2-1", &v).exact_div(&p("c-1", &v)).unwrap(), p("c+1", &v));
    assert!(matches!(p("c^2+1", &v).exact_div(&p("c-1", &v)), Err(Error::InexactDivision)));
    let z = Vars::new(["z"]);
    assert!(p("1+z", &z).pow(0).is_one());
}

#[test]
fn gcd_examples() {
    let v = vc();
    assert_eq!(gcd(&p("c^2-1", &v), &p("c^2-2*c+1", &v)), p("c-1", &v));
    assert_eq!(gcd(&p("6*c", &v), &p("4*c^2", &v)), p("2*c", &v));
    assert_eq!(gcd(&p("-3*c+6", &v), &Poly::zero(&v)), p("3*c-6", &v));
}

#[test]
fn rational_canonical_form() {
    let r = rat(6, -4);
    assert_eq!(r.numer(), &(-3).into());
    assert_eq!(r.denom(), &2.into());
    assert_eq!(rat(0, 7), int(0));
    assert_eq!(int(0).denom(), &1.into());
}

#[test]
fn solve_linear_examples() {
    let e = Vars::new(["n"]);
    let one = RatFn::from(Poly::one(&e));
    let basis = solve_linear(&[vec![one.clone(), one.clone()]], 2, &e);
    assert_eq!(basis, vec![vec![p("1", &e), p("-1", &e)]]);
    let row = vec![RatFn::from(p("n", &e)), RatFn::from(p("-(n+1)", &e))];
    let basis = solve_linear(&[row], 2, &e);
    assert_eq!(basis, vec![vec![p("n+1", &e), p("n", &e)]]);
}

#[test]
fn parse_error_carries_position() {
    match Poly::parse("c + * 2", &vc()) {
        Err(Error::Parse { pos, .. }) => assert!(pos <= 4),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(Poly::parse("c + q", &vc()), Err(Error::Parse { .. } | Error::UnknownVariable(_))));
}

#[test]
fn ratfn_is_reduced() {
    let v = vc();
    let r = RatFn::new(p("c^2-1", &v), p("2*c-2", &v)).unwrap();
    assert_eq!(r.num() * &p("2", &v), p("c+1", &v) * r.den().clone());
    assert!(r.den().has_integer_coeffs());
    assert!(RatFn::new(p("c", &v), Poly::zero(&v)).is_err());
}

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-5i64..=5, 1..5).prop_map(|cs| {
        let v = vc();
        Poly::from_terms(&v, cs.into_iter().enumerate().map(|(i, c)| (vec![i as u32], int(c))))
    })
}

fn two_var_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..3, 0u32..3, -4i64..=4), 1..5).prop_map(|ts| {
        let v = Vars::new(["n", "c"]);
        Poly::from_terms(&v, ts.into_iter().map(|(a, b, c)| (vec![a, b], int(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_keeps_common_factor(a in small_poly(), b in small_poly(), g in small_poly()) {
        prop_assume!(!g.is_zero() && !(a.is_zero() && b.is_zero()));
        let h = gcd(&(&a * &g), &(&b * &g));
        prop_assert!(h.exact_div(&g).is_ok());
        prop_assert!((&a * &g).exact_div(&h).is_ok());
    }

    #[test]
    fn multivariate_gcd_divides_both(a in two_var_poly(), b in two_var_poly(), g in two_var_poly()) {
        prop_assume!(!g.is_zero() && !a.is_zero() && !b.is_zero());
        let (x, y) = (&a * &g, &b * &g);
        let h = gcd(&x, &y);
        prop_assert!(x.exact_div(&h).is_ok() && y.exact_div(&h).is_ok());
        prop_assert!(h.exact_div(&g).is_ok());
    }

    #[test]
    fn self_difference_vanishes(a in two_var_poly()) {
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_div_inverts_mul(a in two_var_poly(), b in two_var_poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn text_roundtrip(a in two_var_poly()) {
        prop_assert_eq!(Poly::parse(&a.to_string(), a.vars()).unwrap(), a);
    }

    #[test]
    fn solutions_annihilate_rows(
        rows in prop::collection::vec(prop::collection::vec(small_poly(), 4), 1..4)
    ) {
        let v = vc();
        let rf: Vec<Vec<RatFn>> = rows.iter().map(|r| r.iter().cloned().map(RatFn::from).collect()).collect();
        for sol in solve_linear(&rf, 4, &v) {
            prop_assert!(sol.iter().any(|x| !x.is_zero()));
            for r in &rows {
                let s = r.iter().zip(&sol).fold(Poly::zero(&v), |acc, (a, x)| &acc + &(a * x));
                prop_assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn rational_nullspace_annihilates(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..5)) {
        let m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let basis = nullspace_rational(&m, 5);
        prop_assert!(basis.len() + m.len() >= 5);
        for b in basis {
            for r in &m {
                let s: Rational = r.iter().zip(&b).map(|(a, x)| a * x).sum();
                prop_assert_eq!(s, int(0));
            }
        }
    }
}
