use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{int, rat, Poly, Rational, Vars};

/// How [`LaurentSeries2::inv_sqrt_with`] computes `a^{-1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvSqrtMethod {
    /// `Σ C(2m,m)/4^m · X^m` with `X = 1 − a`.
    Binomial,
    /// `y ← y(3 − a·y²)/2` with doubling precision.
    Newton,
    /// First-order z-recurrence from `a·y' = −a'·y/2`.
    Miller,
}

/// Truncated series: power series in `z` (terms `z^0..=z^{N_z}`), banded
/// Laurent in `w` (terms `w^{-N_w}..=w^{N_w}`), with [`Poly`] coefficients.
///
/// Every coefficient at `0 ≤ n ≤ N_z`, `|k| ≤ N_w` is known; an absent one
/// is a true zero. Requests outside the bounds are errors. Products drop
/// terms that fall outside the band.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries2 {
    vars: Vars,
    z_order: usize,
    w_band: usize,
    // slices[n][k + w_band]
    slices: Vec<Vec<Poly>>,
}

type Slice = Vec<Poly>;

impl LaurentSeries2 {
    pub fn zero(vars: &Vars, z_order: usize, w_band: usize) -> Self {
        LaurentSeries2 {
            vars: vars.clone(),
            z_order,
            w_band,
            slices: vec![vec![Poly::zero(vars); 2 * w_band + 1]; z_order + 1],
        }
    }

    pub fn one(vars: &Vars, z_order: usize, w_band: usize) -> Self {
        let mut s = Self::zero(vars, z_order, w_band);
        s.slices[0][w_band] = Poly::one(vars);
        s
    }

    /// Build from `(n, k, coeff)` triples; terms outside the bounds are dropped.
    pub fn from_terms<I>(vars: &Vars, z_order: usize, w_band: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, i64, Poly)>,
    {
        let mut s = Self::zero(vars, z_order, w_band);
        for (n, k, c) in terms {
            if s.in_bounds(n as i64, k) {
                let slot = &mut s.slices[n][(k + w_band as i64) as usize];
                *slot = &*slot + &c;
            }
        }
        s
    }

    /// Bivariate Laurent polynomial over `vars ∪ {z, w}` with z, w named by
    /// `z_name`, `w_name` and a w-offset: `p / w^{w_shift}`.
    pub fn from_poly(p: &Poly, z_idx: usize, w_idx: usize, w_shift: i64, coeff_vars: &Vars, z_order: usize, w_band: usize) -> Result<Self> {
        let mut terms = Vec::new();
        for (zi, pz) in p.coeffs_in(z_idx).into_iter().enumerate() {
            for (wi, pw) in pz.coeffs_in(w_idx).into_iter().enumerate() {
                if pw.is_zero() {
                    continue;
                }
                terms.push((zi, wi as i64 - w_shift, pw.embed(coeff_vars)?));
            }
        }
        Ok(Self::from_terms(coeff_vars, z_order, w_band, terms))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn z_order(&self) -> usize {
        self.z_order
    }

    pub fn w_band(&self) -> usize {
        self.w_band
    }

    fn in_bounds(&self, n: i64, k: i64) -> bool {
        n >= 0 && n as usize <= self.z_order && k.unsigned_abs() as usize <= self.w_band
    }

    /// `[z^n w^k]`; [`Error::OutOfTruncation`] outside the bounds.
    pub fn coefficient(&self, n: i64, k: i64) -> Result<Poly> {
        if !self.in_bounds(n, k) {
            return Err(Error::OutOfTruncation { n, k });
        }
        Ok(self.slices[n as usize][(k + self.w_band as i64) as usize].clone())
    }

    /// Nonzero terms as `(n, k, coeff)`, ordered by `n` then `k`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i64, &Poly)> {
        let wb = self.w_band as i64;
        self.slices.iter().enumerate().flat_map(move |(n, s)| {
            s.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(j, c)| (n, j as i64 - wb, c))
        })
    }

    /// Constant term in `z`: map `k → [z^0 w^k]`.
    pub fn ct_z(&self) -> BTreeMap<i64, Poly> {
        self.terms().filter(|t| t.0 == 0).map(|(_, k, c)| (k, c.clone())).collect()
    }

    /// Constant term in both variables.
    pub fn ct_zw(&self) -> Poly {
        self.slices[0][self.w_band].clone()
    }

    fn compat(&self, other: &Self) -> (usize, usize) {
        assert_eq!(self.vars, other.vars, "series over different coefficient rings");
        (self.z_order.min(other.z_order), self.w_band.min(other.w_band))
    }

    fn truncated(&self, z_order: usize, w_band: usize) -> Self {
        Self::from_terms(&self.vars, z_order, w_band, self.terms().map(|(n, k, c)| (n, k, c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (nz, nw) = self.compat(other);
        let mut out = self.truncated(nz, nw);
        for (n, k, c) in other.terms() {
            if out.in_bounds(n as i64, k) {
                let slot = &mut out.slices[n][(k + nw as i64) as usize];
                *slot = &*slot + c;
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn map_coeffs<F: Fn(&Poly) -> Poly>(&self, f: F) -> Self {
        LaurentSeries2 {
            vars: self.vars.clone(),
            z_order: self.z_order,
            w_band: self.w_band,
            slices: self.slices.iter().map(|s| s.iter().map(|c| if c.is_zero() { c.clone() } else { f(c) }).collect()).collect(),
        }
    }

    pub fn scale(&self, c: &Poly) -> Self {
        self.map_coeffs(|x| x * c)
    }

    fn slice_mul(a: &Slice, b: &Slice, band: usize) -> Slice {
        let vars = a[0].vars().clone();
        let wa = (a.len() / 2) as i64;
        let wb = (b.len() / 2) as i64;
        let mut out = vec![Poly::zero(&vars); 2 * band + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = (i as i64 - wa) + (j as i64 - wb);
                if k.unsigned_abs() as usize > band {
                    continue;
                }
                let slot = &mut out[(k + band as i64) as usize];
                *slot = &*slot + &(x * y);
            }
        }
        out
    }

    fn slice_add_scaled(acc: &mut Slice, s: &Slice, f: &Rational) {
        for (a, b) in acc.iter_mut().zip(s) {
            if !b.is_zero() {
                *a = &*a + &b.scale(f);
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (nz, nw) = self.compat(other);
        let mut out = Self::zero(&self.vars, nz, nw);
        for n1 in 0..=nz {
            for n2 in 0..=(nz - n1) {
                let prod = Self::slice_mul(&self.slices[n1], &other.slices[n2], nw);
                Self::slice_add_scaled(&mut out.slices[n1 + n2], &prod, &Rational::one());
            }
        }
        out
    }

    /// `d/dz`; the z-order drops by one.
    pub fn deriv_z(&self) -> Self {
        let nz = self.z_order.saturating_sub(1);
        let mut out = Self::zero(&self.vars, nz, self.w_band);
        for n in 1..=self.z_order {
            if n - 1 <= nz {
                out.slices[n - 1] = self.slices[n].iter().map(|c| c.scale(&int(n as i64))).collect();
            }
        }
        out
    }

    /// `d/dw` within the band.
    pub fn deriv_w(&self) -> Self {
        Self::from_terms(
            &self.vars,
            self.z_order,
            self.w_band,
            self.terms().filter(|t| t.1 != 0).map(|(n, k, c)| (n, k - 1, c.scale(&int(k)))).collect::<Vec<_>>(),
        )
    }

    /// `z·d/dz`.
    pub fn theta_z(&self) -> Self {
        let mut out = self.clone();
        for (n, s) in out.slices.iter_mut().enumerate() {
            for c in s.iter_mut() {
                *c = c.scale(&int(n as i64));
            }
        }
        out
    }

    /// `w·d/dw`.
    pub fn theta_w(&self) -> Self {
        let wb = self.w_band as i64;
        let mut out = self.clone();
        for s in out.slices.iter_mut() {
            for (j, c) in s.iter_mut().enumerate() {
                *c = c.scale(&int(j as i64 - wb));
            }
        }
        out
    }

    /// The z^0 slice as a single nonzero rational, if it is one.
    fn unit_constant(&self) -> Option<Rational> {
        let s = &self.slices[0];
        let wb = self.w_band;
        if s.iter().enumerate().any(|(j, c)| j != wb && !c.is_zero()) {
            return None;
        }
        s[wb].constant_value().filter(|c| !c.is_zero())
    }

    /// `a^alpha` for `a` with z^0 slice exactly 1 (Miller recurrence).
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self> {
        if !self.unit_constant().is_some_and(|c| c.is_one()) {
            return Err(Error::BadUnit);
        }
        let nz = self.z_order;
        let nw = self.w_band;
        let a1 = alpha + Rational::one();
        let mut y: Vec<Slice> = Vec::with_capacity(nz + 1);
        y.push(self.slices[0].clone());
        for m in 1..=nz {
            let mut acc = vec![Poly::zero(&self.vars); 2 * nw + 1];
            for i in 1..=m {
                let ai = &self.slices[i];
                if ai.iter().all(Poly::is_zero) {
                    continue;
                }
                let wgt = &a1 * int(i as i64) - int(m as i64);
                if wgt.is_zero() {
                    continue;
                }
                let prod = Self::slice_mul(ai, &y[m - i], nw);
                Self::slice_add_scaled(&mut acc, &prod, &(wgt / int(m as i64)));
            }
            y.push(acc);
        }
        Ok(LaurentSeries2 { vars: self.vars.clone(), z_order: nz, w_band: nw, slices: y })
    }

    /// Multiplicative inverse; the z^0 slice must be a nonzero rational.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.unit_constant().ok_or(Error::NotInvertible)?;
        let inv = Poly::constant(&self.vars, a0.recip());
        Ok(self.scale(&inv).pow_rational(&int(-1))?.scale(&inv))
    }

    /// `a^{-1/2}`; the z^0 slice must be exactly 1.
    pub fn inv_sqrt(&self) -> Result<Self> {
        self.inv_sqrt_with(InvSqrtMethod::Miller)
    }

    pub fn inv_sqrt_with(&self, method: InvSqrtMethod) -> Result<Self> {
        if !self.unit_constant().is_some_and(|c| c.is_one()) {
            return Err(Error::BadUnit);
        }
        match method {
            InvSqrtMethod::Miller => self.pow_rational(&rat(-1, 2)),
            InvSqrtMethod::Binomial => {
                let one = Self::one(&self.vars, self.z_order, self.w_band);
                let x = one.sub(self);
                let mut acc = one.clone();
                let mut xm = one;
                let mut coef = Rational::one();
                for m in 1..=self.z_order {
                    xm = xm.mul(&x);
                    // C(2m, m) / 4^m
                    coef = coef * int(2 * m as i64 - 1) / int(2 * m as i64);
                    acc = acc.add(&xm.scale(&Poly::constant(&self.vars, coef.clone())));
                }
                Ok(acc)
            }
            InvSqrtMethod::Newton => {
                let nw = self.w_band;
                let mut y = Self::one(&self.vars, 0, nw);
                let mut prec = 0usize;
                let three = Poly::from_int(&self.vars, 3);
                let half = Poly::constant(&self.vars, rat(1, 2));
                while prec < self.z_order {
                    prec = (2 * prec + 1).min(self.z_order);
                    let yp = y.truncated(prec, nw).extend_to(prec);
                    let a = self.truncated(prec, nw);
                    let ay2 = a.mul(&yp).mul(&yp);
                    let t = Self::one(&self.vars, prec, nw).scale(&three).sub(&ay2);
                    y = yp.mul(&t).scale(&half);
                }
                Ok(y.extend_to(self.z_order))
            }
        }
    }

    fn extend_to(&self, z_order: usize) -> Self {
        let mut out = self.clone();
        out.z_order = z_order;
        out.slices.resize(z_order + 1, vec![Poly::zero(&self.vars); 2 * self.w_band + 1]);
        out
    }

    /// True iff `[z^n w^k] = [z^n w^{-k}]` for all stored terms.
    pub fn is_w_symmetric(&self) -> bool {
        self.slices.iter().all(|s| {
            let l = s.len();
            (0..l / 2).all(|j| s[j] == s[l - 1 - j])
        })
    }

    /// Substitute `w = 1`: the series in z whose coefficients are row sums.
    pub fn at_w_one(&self) -> Vec<Poly> {
        self.slices
            .iter()
            .map(|s| s.iter().fold(Poly::zero(&self.vars), |a, c| &a + c))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vc() -> Vars {
        Vars::new(["c"])
    }

    fn s(terms: &[(usize, i64, i64)], nz: usize, nw: usize) -> LaurentSeries2 {
        let v = vc();
        LaurentSeries2::from_terms(&v, nz, nw, terms.iter().map(|&(n, k, c)| (n, k, Poly::from_int(&v, c))))
    }

    #[test]
    fn product_truncates() {
        let a = s(&[(0, 0, 1), (1, 1, 1)], 2, 2);
        let b = s(&[(0, 0, 1), (1, 1, -1)], 2, 2);
        assert_eq!(a.mul(&b), s(&[(0, 0, 1), (2, 2, -1)], 2, 2));
    }

    #[test]
    fn w_derivative() {
        let a = s(&[(0, 1, 1), (0, -1, 1)], 1, 3);
        assert_eq!(a.deriv_w(), s(&[(0, 0, 1), (0, -2, -1)], 1, 3));
    }

    #[test]
    fn geometric_series() {
        let a = s(&[(0, 0, 1), (1, 0, -1)], 6, 2);
        let inv = a.invert().unwrap();
        for n in 0..=6 {
            assert!(inv.coefficient(n, 0).unwrap().is_one());
        }
        let b = s(&[(0, 0, 1), (1, 0, -2), (2, 0, 1)], 6, 2);
        let inv = b.invert().unwrap();
        for n in 0..=6 {
            assert_eq!(inv.coefficient(n, 0).unwrap(), Poly::from_int(&vc(), n + 1));
        }
        for m in [InvSqrtMethod::Miller, InvSqrtMethod::Binomial, InvSqrtMethod::Newton] {
            let r = b.inv_sqrt_with(m).unwrap();
            for n in 0..=6 {
                assert!(r.coefficient(n, 0).unwrap().is_one(), "{m:?}");
            }
        }
    }

    #[test]
    fn errors() {
        let a = s(&[(0, 0, 2), (1, 0, -1)], 3, 1);
        assert!(a.invert().is_ok());
        assert!(matches!(a.inv_sqrt(), Err(Error::BadUnit)));
        let b = s(&[(0, 1, 1), (1, 0, -1)], 3, 1);
        assert!(matches!(b.invert(), Err(Error::NotInvertible)));
        assert!(matches!(a.coefficient(4, 0), Err(Error::OutOfTruncation { .. })));
        assert!(matches!(a.coefficient(0, 2), Err(Error::OutOfTruncation { .. })));
        assert!(a.coefficient(3, 1).unwrap().is_zero());
        assert_eq!(s(&[(0, 0, 3), (1, 1, 1)], 2, 2).ct_zw(), Poly::from_int(&vc(), 3));
    }
}
