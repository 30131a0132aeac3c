//! Rational functions `num / den` over [`Poly`], kept reduced with a
//! primitive, positively-led denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::gcd::gcd_prim;
use crate::poly::{Poly, Rational, Vars};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.same_vars(&den)?;
        if den.is_zero() {
            return Err(Error::DegenerateInput("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn { den: Poly::one(num.vars()), num };
        }
        let g = gcd_prim(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let (unit, den) = den.primitive();
        RatFn { num: num.scale(&unit.recip()), den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { den: Poly::one(p.vars()), num: p }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::from_poly(Poly::constant(vars, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DegenerateInput("reciprocal of zero".into()));
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    /// `x_i := x_i + s` in numerator and denominator.
    pub fn shift(&self, i: usize, s: &Rational) -> Self {
        Self::reduce(self.num.shift(i, s), self.den.shift(i, s))
    }

    /// Evaluate variable `i` at a rational; fails if the denominator vanishes.
    pub fn eval(&self, i: usize, v: &Rational) -> Result<Self> {
        let d = self.den.eval(i, v);
        if d.is_zero() {
            return Err(Error::DegenerateInput("pole at evaluation point".into()));
        }
        Ok(Self::reduce(self.num.eval(i, v), d))
    }

    pub fn eval_all(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval_all(point);
        if d.is_zero() {
            return Err(Error::DegenerateInput("pole at evaluation point".into()));
        }
        Ok(self.num.eval_all(point) / d)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd_prim(&self.den, &rhs.den);
        let a = self.den.exact_div(&g).unwrap();
        let b = rhs.den.exact_div(&g).unwrap();
        RatFn::reduce(&(&self.num * &b) + &(&rhs.num * &a), &a * &rhs.den)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero(self.vars());
        }
        // cross-cancel before multiplying
        let g1 = gcd_prim(&self.num, &rhs.den);
        let g2 = gcd_prim(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let num = &n1 * &n2;
        let (unit, den) = (&d1 * &d2).primitive();
        RatFn { num: num.scale(&unit.recip()), den }
    }
}

impl Div for &RatFn {
    type Output = RatFn;
    fn div(self, rhs: &RatFn) -> RatFn {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let v = Vars::new(["n", "c"]);
        let p = |s: &str| Poly::parse(s, &v).unwrap();
        let r = RatFn::new(p("2*n^2 - 2"), p("-4*n - 4")).unwrap();
        assert_eq!(r.num(), &p("-1/2*n + 1/2"));
        assert_eq!(r.den(), &Poly::one(&v));
        let a = RatFn::new(p("1"), p("n")).unwrap();
        let b = RatFn::new(p("1"), p("n+1")).unwrap();
        let s = &a - &b;
        assert_eq!(s, RatFn::new(p("1"), p("n^2+n")).unwrap());
        assert_eq!(&(&s * &RatFn::from(p("n"))) * &RatFn::from(p("n+1")), RatFn::one(&v));
        assert!((&a - &a).is_zero());
    }
}
