use proptest::prelude::*;

use wzcert::holonomic::{
    guess_with_schedule, match_initials, operator_equal_up_to_scalar, symmetric_square, unroll, Provenance, Recurrence,
    SequenceTable, Status,
};
use wzcert::{Error, Poly, Vars};

fn vn() -> Vars {
    Vars::new(["n"])
}

fn e() -> Vars {
    Vars::new(Vec::<String>::new())
}

fn rec(cs: &[&str]) -> Recurrence {
    Recurrence::new(&vn(), cs.iter().map(|s| Poly::parse(s, &vn()).unwrap()).collect(), Status::Proved).unwrap()
}

fn column(vals: impl IntoIterator<Item = i64>) -> SequenceTable {
    let v: Vec<Poly> = vals.into_iter().map(|x| Poly::from_int(&e(), x)).collect();
    SequenceTable::from_column(&e(), 0, 0, v, Provenance::Expanded).unwrap()
}

#[test]
fn unstructured_data_has_no_recurrence() {
    // deterministic pseudo-random integers
    let mut x: i64 = 12345;
    let vals: Vec<i64> = (0..60)
        .map(|_| {
            x = (x * 1103515245 + 12345) % 2147483648;
            x % 1000 - 500
        })
        .collect();
    assert!(matches!(guess_with_schedule(&column(vals), 1, None), Err(Error::NoRecurrenceFound)));
    assert!(matches!(guess_with_schedule(&column(0..4), 2, None), Err(Error::InsufficientData(_))));
}

#[test]
fn initial_matching() {
    let a = column([1, 2, 3, 4]);
    let shifted = column([2, 3, 4, 5]);
    assert!(match_initials(&a, &a, 0, 0, 3).unwrap());
    assert!(!match_initials(&shifted, &a, 0, 0, 3).unwrap());
    let empty = SequenceTable::new(&e(), Provenance::Unrolled);
    assert!(matches!(match_initials(&empty, &a, 0, 0, 3), Err(Error::InsufficientData(_))));
}

#[test]
fn square_of_two_geometric_solutions() {
    let geo = symmetric_square(&rec(&["-6", "5", "-1"])).unwrap();
    // (2^n + 3^n)^2
    let sq: Vec<Poly> = [4i64, 25, 169].iter().map(|&x| Poly::from_int(&e(), x)).collect();
    let vals = unroll(&geo, &sq, 0, 6, &[]).unwrap();
    assert_eq!(vals[6], Poly::from_int(&e(), 793 * 793));
}

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![-4i64..=-1, 1i64..=4]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn squares_of_solutions_satisfy_the_symmetric_square(
        a in 1i64..=4, b in coeff(), g in coeff(), x0 in -3i64..=3, x1 in -3i64..=3,
    ) {
        let r = rec(&[&g.to_string(), &format!("{b}*n+1"), &format!("n+{a}")]);
        let s = symmetric_square(&r).unwrap();
        prop_assert_eq!(s.order(), 3);
        let xs = unroll(&r, &[Poly::from_int(&e(), x0), Poly::from_int(&e(), x1)], 0, 12, &[]).unwrap();
        let sq: Vec<Poly> = xs.iter().map(|x| x * x).collect();
        for n in 0..=9 {
            prop_assert!(s.apply_window(n, &[], &sq[n as usize..n as usize + 4]).unwrap().is_zero());
        }
    }

    #[test]
    fn equality_up_to_scalar_is_an_equivalence(
        c0 in coeff(), c1 in coeff(), d in coeff(), s in coeff(), t in coeff(),
    ) {
        let base = [Poly::parse(&format!("{c0}*n+{d}"), &vn()).unwrap(), Poly::from_int(&vn(), c1), Poly::parse("n+1", &vn()).unwrap()];
        let scaled = |f: i64| {
            let f = Poly::parse(&format!("{f}*(n+7)"), &vn()).unwrap();
            Recurrence::new(&vn(), base.iter().map(|p| p * &f).collect(), Status::Conjectured).unwrap()
        };
        let (a, b, c) = (scaled(1), scaled(s), scaled(t));
        prop_assert!(operator_equal_up_to_scalar(&a, &a));
        prop_assert_eq!(operator_equal_up_to_scalar(&a, &b), operator_equal_up_to_scalar(&b, &a));
        prop_assert!(operator_equal_up_to_scalar(&a, &b) && operator_equal_up_to_scalar(&b, &c));
        prop_assert!(operator_equal_up_to_scalar(&a, &c));
        // normalization removes the common factor entirely
        prop_assert_eq!(a.coeffs(), b.coeffs());
        let other = rec(&[&format!("{c0}*n+{}", d + 9), &c1.to_string(), "n+1"]);
        prop_assert!(!operator_equal_up_to_scalar(&a, &other));
    }
}
