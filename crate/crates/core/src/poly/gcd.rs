//! Multivariate gcd by recursive content / primitive part, with a primitive
//! pseudo-remainder sequence in the main variable.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Poly, Rational};

/// Positive gcd of two rationals: `gcd(numerators) / lcm(denominators)`.
pub fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    Rational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Greatest common divisor. The integer content is retained:
/// `gcd(6c, 4c^2) = 2c`; the result has a positive leading coefficient and
/// `gcd(p, 0)` is `p` with its sign normalized.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.vars(), b.vars(), "gcd over different variable lists");
    if a.is_zero() {
        return b.with_positive_lead();
    }
    if b.is_zero() {
        return a.with_positive_lead();
    }
    let cont = rational_gcd(&a.content(), &b.content());
    gcd_prim(&a.primitive_part(), &b.primitive_part()).scale(&cont)
}

/// Least common multiple, primitive with positive leading coefficient.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.vars());
    }
    let g = gcd_prim(&a.primitive_part(), &b.primitive_part());
    (&a.primitive_part() * &b.primitive_part())
        .exact_div(&g)
        .expect("gcd divides product")
        .primitive_part()
}

/// gcd of two nonzero polynomials, returned primitive with positive lead.
pub(crate) fn gcd_prim(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.vars());
    }
    let a = a.primitive_part();
    let b = b.primitive_part();
    if a == b {
        return a;
    }
    let nv = a.vars().len();
    let v = (0..nv)
        .find(|&i| a.degree_in(i).unwrap_or(0) > 0 || b.degree_in(i).unwrap_or(0) > 0)
        .expect("non-constant polynomial has a variable");
    let da = a.degree_in(v).unwrap();
    let db = b.degree_in(v).unwrap();
    if da == 0 {
        return gcd_prim(&a, &content_in(&b, v));
    }
    if db == 0 {
        return gcd_prim(&content_in(&a, v), &b);
    }
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    let c = gcd_prim(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g = prs_gcd(pa, pb, v);
    (&c * &g).primitive_part()
}

/// gcd of the coefficients of `p` with respect to variable `v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    let mut coeffs: Vec<Poly> = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    // cheapest first
    coeffs.sort_by_key(|c| c.nterms());
    let mut g: Option<Poly> = None;
    for c in coeffs {
        if c.is_constant() {
            return Poly::one(p.vars());
        }
        g = Some(match g {
            None => c.primitive_part(),
            Some(g) => gcd_prim(&g, &c),
        });
        if g.as_ref().unwrap().is_constant() {
            return Poly::one(p.vars());
        }
    }
    g.unwrap_or_else(|| Poly::one(p.vars()))
}

fn primitive_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides").primitive_part()
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v).unwrap();
    let lcb = b.coeffs_in(v).pop().unwrap();
    let x = Poly::var_at(a.vars(), v);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v).unwrap();
        if dr < db {
            break;
        }
        let lcr = r.coeffs_in(v).pop().unwrap();
        r = &(&lcb * &r) - &(&(&lcr * &x.pow(dr - db)) * b);
    }
    r
}

/// Primitive PRS on polynomials primitive in `v`.
fn prs_gcd(a: Poly, b: Poly, v: usize) -> Poly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return primitive_in(&b, v);
        }
        if r.degree_in(v).unwrap() == 0 {
            return Poly::one(a.vars());
        }
        a = b;
        b = primitive_in(&r, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat, Vars};

    fn p(s: &str, v: &Vars) -> Poly {
        Poly::parse(s, v).unwrap()
    }

    #[test]
    fn univariate_examples() {
        let v = Vars::new(["c"]);
        assert_eq!(gcd(&p("c^2-1", &v), &p("c^2-2*c+1", &v)), p("c-1", &v));
        assert_eq!(gcd(&p("6*c", &v), &p("4*c^2", &v)), p("2*c", &v));
        assert_eq!(gcd(&p("-3*c+1", &v), &Poly::zero(&v)), p("3*c-1", &v));
    }

    #[test]
    fn content_convention_matches_integer_oracle() {
        // integer gcd of contents times monomial gcd
        let v = Vars::new(["c"]);
        for (a, ea, b, eb) in [(6i64, 1u32, 4i64, 2u32), (10, 3, 15, 2), (7, 0, 21, 5), (9, 4, 12, 4)] {
            let pa = Poly::monomial(&v, vec![ea], int(a));
            let pb = Poly::monomial(&v, vec![eb], int(b));
            let expect = Poly::monomial(&v, vec![ea.min(eb)], int(a.gcd(&b)));
            assert_eq!(gcd(&pa, &pb), expect);
        }
        assert_eq!(rational_gcd(&rat(1, 2), &rat(3, 4)), rat(1, 4));
    }

    #[test]
    fn multivariate() {
        let v = Vars::new(["n", "k", "c"]);
        let g = p("n*c + k - 1", &v);
        let a = &g * &p("n^2 + c", &v);
        let b = &g * &p("k*c - n + 2", &v);
        assert_eq!(gcd(&a, &b), g);
        assert_eq!(lcm(&p("n*k", &v), &p("k*c", &v)), p("n*k*c", &v));
    }

    #[test]
    fn multivariate_nested_content() {
        let v = Vars::new(["z", "w", "c"]);
        let g = p("(c-1)*(w+z*c)", &v);
        let a = &g * &p("z^2 - w", &v);
        let b = &g * &p("(c+2)*z + w^3", &v);
        assert_eq!(gcd(&a, &b), g.primitive_part());
    }
}
