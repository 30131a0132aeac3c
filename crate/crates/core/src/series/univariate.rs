use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{int, Poly, Rational, Vars};

/// Univariate Laurent series with [`Poly`] coefficients.
///
/// `precision` is the highest exponent whose coefficient is known; `None`
/// marks an exact (finitely supported) series. Absent coefficients at or
/// below the precision are true zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Series1 {
    vars: Vars,
    precision: Option<i64>,
    coeffs: BTreeMap<i64, Poly>,
}

impl Series1 {
    pub fn zero(vars: &Vars, precision: Option<i64>) -> Self {
        Series1 { vars: vars.clone(), precision, coeffs: BTreeMap::new() }
    }

    pub fn one(vars: &Vars, precision: Option<i64>) -> Self {
        Self::monomial(vars, 0, Poly::one(vars), precision)
    }

    pub fn monomial(vars: &Vars, e: i64, c: Poly, precision: Option<i64>) -> Self {
        let mut s = Self::zero(vars, precision);
        s.set(e, c);
        s
    }

    /// Exact series from `(exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, Poly)>>(vars: &Vars, terms: I, precision: Option<i64>) -> Self {
        let mut s = Self::zero(vars, precision);
        for (e, c) in terms {
            let cur = s.coeffs.remove(&e).unwrap_or_else(|| Poly::zero(vars));
            s.set(e, &cur + &c);
        }
        s
    }

    fn set(&mut self, e: i64, c: Poly) {
        if let Some(p) = self.precision {
            if e > p {
                return;
            }
        }
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn with_precision(&self, p: i64) -> Self {
        let prec = Some(self.precision.map_or(p, |q| q.min(p)));
        Series1 {
            vars: self.vars.clone(),
            precision: prec,
            coeffs: self.coeffs.range(..=prec.unwrap()).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Coefficient of `z^e`; [`Error::OutOfTruncation`] above the precision.
    pub fn coefficient(&self, e: i64) -> Result<Poly> {
        if let Some(p) = self.precision {
            if e > p {
                return Err(Error::OutOfTruncation { n: e, k: 0 });
            }
        }
        Ok(self.coeffs.get(&e).cloned().unwrap_or_else(|| Poly::zero(&self.vars)))
    }

    /// Constant term.
    pub fn ct(&self) -> Result<Poly> {
        self.coefficient(0)
    }

    fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.vars, Self::min_prec(self.precision, other.precision));
        for (e, c) in self.terms().chain(other.terms()) {
            let cur = out.coeffs.remove(&e).unwrap_or_else(|| Poly::zero(&self.vars));
            out.set(e, &cur + c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Poly) -> Self {
        self.map_coeffs(|x| x * c)
    }

    pub fn map_coeffs<F: Fn(&Poly) -> Poly>(&self, f: F) -> Self {
        let mut out = Self::zero(&self.vars, self.precision);
        for (e, c) in self.terms() {
            out.set(e, f(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        // known exponents of a product: up to min(Na + vb, Nb + va)
        let va = self.valuation();
        let vb = other.valuation();
        let prec = match (va, vb) {
            (Some(va), Some(vb)) => Self::min_prec(self.precision.map(|n| n + vb), other.precision.map(|n| n + va)),
            _ => Self::min_prec(self.precision, other.precision),
        };
        let mut acc: BTreeMap<i64, Poly> = BTreeMap::new();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e = e1 + e2;
                if prec.is_some_and(|p| e > p) {
                    continue;
                }
                let t = c1 * c2;
                match acc.get_mut(&e) {
                    Some(x) => *x = &*x + &t,
                    None => {
                        acc.insert(e, t);
                    }
                }
            }
        }
        let mut out = Self::zero(&self.vars, prec);
        for (e, c) in acc {
            out.set(e, c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one(&self.vars, self.precision);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// `d/dz`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(&self.vars, self.precision.map(|p| p - 1));
        for (e, c) in self.terms() {
            if e != 0 {
                out.set(e - 1, c.scale(&int(e)));
            }
        }
        out
    }

    /// `z·d/dz`.
    pub fn theta(&self) -> Self {
        let mut out = Self::zero(&self.vars, self.precision);
        for (e, c) in self.terms() {
            out.set(e, c.scale(&int(e)));
        }
        out
    }

    /// `z ↦ 1/z`; only defined for exact series.
    pub fn reflect(&self) -> Result<Self> {
        if self.precision.is_some() {
            return Err(Error::DegenerateInput("reflection of a truncated series".into()));
        }
        Ok(Series1::from_terms(&self.vars, self.terms().map(|(e, c)| (-e, c.clone())), None))
    }

    fn unit_constant(&self) -> Option<Rational> {
        if self.valuation() != Some(0) {
            return None;
        }
        self.coeffs[&0].constant_value().filter(|c| !c.is_zero())
    }

    /// Multiplicative inverse of a power series whose constant term is a
    /// nonzero rational, to precision `order` (or the input's precision).
    pub fn invert(&self, order: i64) -> Result<Self> {
        let a0 = self.unit_constant().ok_or(Error::NotInvertible)?;
        let order = self.precision.map_or(order, |p| p.min(order));
        let inv0 = a0.recip();
        let mut b: Vec<Poly> = vec![Poly::constant(&self.vars, inv0.clone())];
        for n in 1..=order {
            let mut acc = Poly::zero(&self.vars);
            for (j, bj) in b.iter().enumerate() {
                if let Some(a) = self.coeffs.get(&(n - j as i64)) {
                    acc = &acc + &(a * bj);
                }
            }
            b.push(acc.scale(&-inv0.clone()));
        }
        Ok(Series1::from_terms(&self.vars, b.into_iter().enumerate().map(|(i, c)| (i as i64, c)), Some(order)))
    }

    /// `self ∘ inner` for power series, `inner` having zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.valuation().is_some_and(|v| v < 1) || self.valuation().is_some_and(|v| v < 0) {
            return Err(Error::DegenerateInput("composition needs power series with inner(0) = 0".into()));
        }
        let order = Self::min_prec(self.precision, inner.precision).unwrap_or_else(|| {
            self.coeffs.keys().last().copied().unwrap_or(0) * inner.coeffs.keys().last().copied().unwrap_or(0)
        });
        let inner = inner.with_precision(order);
        let top = self.coeffs.keys().last().copied().unwrap_or(0).min(order);
        let mut acc = Self::zero(&self.vars, Some(order));
        for e in (0..=top).rev() {
            acc = acc.mul(&inner);
            acc = acc.with_precision(order);
            let c = self.coeffs.get(&e).cloned().unwrap_or_else(|| Poly::zero(&self.vars));
            acc = acc.add(&Self::monomial(&self.vars, 0, c, Some(order)));
        }
        // precision of the truncated Horner scheme
        Ok(Series1 { precision: Some(order), ..acc })
    }

    /// Compositional inverse: `r` with `self(r(z)) = z` to the precision.
    pub fn revert(&self, order: i64) -> Result<Self> {
        if self.valuation().is_some_and(|v| v < 1) || !self.coeffs.contains_key(&1) {
            return Err(Error::NotRevertible);
        }
        let s1 = self.coeffs[&1].constant_value().filter(|c| !c.is_zero()).ok_or(Error::NotRevertible)?;
        let order = self.precision.map_or(order, |p| p.min(order));
        let inv = s1.recip();
        let mut r = Self::monomial(&self.vars, 1, Poly::constant(&self.vars, inv.clone()), Some(order));
        for m in 2..=order {
            let err = self.compose(&r.with_precision(m))?.coefficient(m)?;
            if !err.is_zero() {
                let cur = r.coefficient(m)?;
                r.set(m, &cur - &err.scale(&inv));
            }
        }
        Ok(r)
    }

    /// Generalized power `self^alpha` for a power series with constant term 1,
    /// by the Miller recurrence `m·y_m = Σ_{i=1}^{m} ((α+1)i − m)·a_i·y_{m−i}`.
    pub fn pow_rational(&self, alpha: &Rational, order: i64) -> Result<Self> {
        if self.valuation() != Some(0) || !self.coeffs[&0].is_one() {
            return Err(Error::BadUnit);
        }
        let order = self.precision.map_or(order, |p| p.min(order));
        let mut y: Vec<Poly> = vec![Poly::one(&self.vars)];
        let a1 = alpha + Rational::one();
        for m in 1..=order {
            let mut acc = Poly::zero(&self.vars);
            for i in 1..=m {
                if let Some(ai) = self.coeffs.get(&i) {
                    let w = &a1 * int(i) - int(m);
                    if !w.is_zero() {
                        acc = &acc + &(ai * &y[(m - i) as usize]).scale(&w);
                    }
                }
            }
            y.push(acc.scale(&int(m).recip()));
        }
        Ok(Series1::from_terms(&self.vars, y.into_iter().enumerate().map(|(i, c)| (i as i64, c)), Some(order)))
    }
}

impl fmt::Debug for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().map(|(e, c)| format!("({c})*z^{e}")).collect();
        write!(f, "{} + O(z^{:?})", if parts.is_empty() { "0".into() } else { parts.join(" + ") }, self.precision.map(|p| p + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v0() -> Vars {
        Vars::new(Vec::<String>::new())
    }

    fn num_series(vals: &[(i64, i64)], prec: Option<i64>) -> Series1 {
        let v = v0();
        Series1::from_terms(&v, vals.iter().map(|&(e, c)| (e, Poly::from_int(&v, c))), prec)
    }

    fn coeffs(s: &Series1, upto: i64) -> Vec<Rational> {
        (0..=upto).map(|e| s.coefficient(e).unwrap().constant_value().unwrap()).collect()
    }

    #[test]
    fn telescoping_lemma_example() {
        let f = num_series(&[(-1, 1), (0, 3), (2, 1)], None);
        assert!(f.theta().ct().unwrap().is_zero());
    }

    #[test]
    fn revert_koebe_derivative() {
        // sum n z^n  ->  z - 2 z^2 + 5 z^3 - ...
        let s = num_series(&(1..=6).map(|n| (n, n)).collect::<Vec<_>>(), Some(6));
        let r = s.revert(6).unwrap();
        assert_eq!(coeffs(&r, 3), vec![int(0), int(1), int(-2), int(5)]);
        assert_eq!(s.compose(&r).unwrap(), num_series(&[(1, 1)], Some(6)));
        let id = num_series(&[(1, 1)], Some(5));
        assert_eq!(id.revert(5).unwrap(), id);
    }

    #[test]
    fn revert_errors() {
        assert!(matches!(num_series(&[(0, 1), (1, 1)], Some(4)).revert(4), Err(Error::NotRevertible)));
        assert!(matches!(num_series(&[(2, 1)], Some(4)).revert(4), Err(Error::NotRevertible)));
    }

    #[test]
    fn out_of_truncation() {
        let s = num_series(&[(0, 1)], Some(3));
        assert!(s.coefficient(3).unwrap().is_zero());
        assert!(matches!(s.coefficient(4), Err(Error::OutOfTruncation { .. })));
    }

    #[test]
    fn geometric_inverse() {
        let s = num_series(&[(0, 1), (1, -1)], None);
        assert_eq!(coeffs(&s.invert(5).unwrap(), 5), vec![int(1); 6]);
        let half = s.pow_rational(&crate::poly::rat(-1, 2), 4).unwrap();
        assert_eq!(
            coeffs(&half, 4),
            vec![int(1), crate::poly::rat(1, 2), crate::poly::rat(3, 8), crate::poly::rat(5, 16), crate::poly::rat(35, 128)]
        );
    }
}
