//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! A [`Poly`] carries its ordered variable list. Terms are kept in a map
//! keyed by exponent vector under graded-lexicographic order, so two values
//! over the same variables are equal iff their term maps are equal.

pub(crate) mod gcd;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use gcd::{gcd, lcm, rational_gcd};
pub use text::parse_rational;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Ordered list of indeterminate names, shared between polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographic with the first declared variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity].into())
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps.into())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, int(c))
    }

    /// The indeterminate at position `i`.
    pub fn var_at(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self> {
        Ok(Self::var_at(vars, vars.require(name)?))
    }

    pub fn monomial(vars: &Vars, exps: Vec<u32>, coeff: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector arity");
        let mut p = Self::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(Monomial::from_exps(exps), coeff);
        }
        p
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector arity");
            p.add_term(Monomial::from_exps(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Coefficient of the all-zero monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().rev().map(|(m, c)| (m.exps(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::from_exps(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&[u32], &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (m.exps(), c))
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    /// Lowest exponent of variable `i` over all terms.
    pub fn valuation_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).min()
    }

    fn check_vars(&self, other: &Poly) {
        assert!(
            self.vars == other.vars,
            "variable lists differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn same_vars(&self, other: &Poly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarMismatch(
                self.vars.names().to_vec(),
                other.vars.names().to_vec(),
            ))
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &[u32]) -> Poly {
        let m = Monomial::from_exps(exps.to_vec());
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(&m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / d`; fails with [`Error::InexactDivision`] if a
    /// remainder is left.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        self.same_vars(d)?;
        if d.is_zero() {
            return Err(Error::InexactDivision);
        }
        if let Some(c) = d.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let (dlm, dlc) = d.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !dlm.divides(&rm) {
                return Err(Error::InexactDivision);
            }
            let qm = rm.div(&dlm);
            let qc = &rc / &dlc;
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut ex = m.0.to_vec();
                ex[i] -= 1;
                out.add_term(Monomial::from_exps(ex), c * int(e as i64));
            }
        }
        out
    }

    /// Coefficients with respect to variable `i`: entry `j` is the
    /// coefficient of `x_i^j`, itself a polynomial free of `x_i`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        let deg = match self.degree_in(i) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Poly::zero(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let mut ex = m.0.to_vec();
            let e = ex[i] as usize;
            ex[i] = 0;
            out[e].terms.insert(Monomial::from_exps(ex), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: &Vars, i: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(vars);
        for (j, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut ex = m.0.to_vec();
                ex[i] += j as u32;
                out.add_term(Monomial::from_exps(ex), c.clone());
            }
        }
        out
    }

    /// Substitute `x_i := value` (value over the same variables).
    pub fn substitute(&self, i: usize, value: &Poly) -> Poly {
        self.check_vars(value);
        let coeffs = self.coeffs_in(i);
        // Horner in x_i
        let mut acc = Poly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn eval(&self, i: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut ex = m.0.to_vec();
            let e = ex[i];
            ex[i] = 0;
            out.add_term(Monomial::from_exps(ex), c * pow_rat(value, e));
        }
        out
    }

    /// Evaluate at a full point (one value per variable).
    pub fn eval_all(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in point.iter().zip(m.0.iter()) {
                if *e > 0 {
                    t *= pow_rat(v, *e);
                }
            }
            acc += t;
        }
        acc
    }

    /// `x_i := x_i + s`.
    pub fn shift(&self, i: usize, s: &Rational) -> Poly {
        if s.is_zero() {
            return self.clone();
        }
        let shifted = &Poly::var_at(&self.vars, i) + &Poly::constant(&self.vars, s.clone());
        self.substitute(i, &shifted)
    }

    /// Re-express over another variable list, matching names. Fails if a
    /// variable that actually occurs is missing from `target`.
    pub fn embed(&self, target: &Vars) -> Result<Poly> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index(n)).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut ex = vec![0u32; target.len()];
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[j] {
                    Some(t) => ex[t] += e,
                    None => return Err(Error::UnknownVariable(self.vars.names()[j].clone())),
                }
            }
            out.add_term(Monomial::from_exps(ex), c.clone());
        }
        Ok(out)
    }

    /// Apply a permutation of variable positions: exponent at `i` moves to
    /// `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly {
        assert_eq!(perm.len(), self.vars.len());
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut ex = vec![0u32; perm.len()];
            for (j, &e) in m.0.iter().enumerate() {
                ex[perm[j]] = e;
            }
            out.terms.insert(Monomial::from_exps(ex), c.clone());
        }
        out
    }

    /// Replace `x_i^2` by `x_j` everywhere; `None` if some exponent of `x_i`
    /// is odd.
    pub fn halve_exponent(&self, i: usize, j: usize) -> Option<Poly> {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[i] % 2 != 0 {
                return None;
            }
            let mut ex = m.0.to_vec();
            ex[j] += ex[i] / 2;
            ex[i] = 0;
            out.add_term(Monomial::from_exps(ex), c.clone());
        }
        Some(out)
    }

    /// Positive rational `r` such that `self / r` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rational::zero()
        } else {
            Rational::new(num, den)
        }
    }

    /// Split into `(unit, primitive)` with `self = unit * primitive`, the
    /// primitive part having coprime integer coefficients and a positive
    /// leading coefficient.
    pub fn primitive(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let mut cont = self.content();
        if self.leading_coeff().is_negative() {
            cont = -cont;
        }
        (cont.clone(), self.scale(&cont.recip()))
    }

    pub fn primitive_part(&self) -> Poly {
        self.primitive().1
    }

    /// Same polynomial with a positive leading coefficient.
    pub fn with_positive_lead(&self) -> Poly {
        if self.leading_coeff().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Univariate polynomial as a dense coefficient vector (low to high).
    /// Fails if any variable other than `i` occurs.
    pub fn to_dense(&self, i: usize) -> Option<Vec<Rational>> {
        let coeffs = self.coeffs_in(i);
        coeffs.into_iter().map(|p| p.constant_value()).collect()
    }
}

/// One term of the JSON polynomial form: `{"coeff": "a/b", "exps": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u32>,
}

impl Poly {
    /// Terms in descending graded-lex order (the canonical JSON order).
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms()
            .map(|(e, c)| TermJson { coeff: c.to_string(), exps: e.to_vec() })
            .collect()
    }

    pub fn from_json_terms(vars: &Vars, terms: &[TermJson]) -> Result<Poly> {
        let mut p = Poly::zero(vars);
        for t in terms {
            if t.exps.len() != vars.len() {
                return Err(Error::Schema(format!(
                    "exponent vector {:?} has arity {}, expected {}",
                    t.exps,
                    t.exps.len(),
                    vars.len()
                )));
            }
            let c = parse_rational(&t.coeff)?;
            if c.is_zero() {
                return Err(Error::Schema("zero coefficient stored".into()));
            }
            let m = Monomial::from_exps(t.exps.clone());
            if p.terms.contains_key(&m) {
                return Err(Error::Schema(format!("duplicate monomial {:?}", t.exps)));
            }
            p.terms.insert(m, c);
        }
        Ok(p)
    }
}

pub(crate) fn pow_rat(v: &Rational, e: u32) -> Rational {
    num_traits::pow(v.clone(), e as usize)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = Poly::zero(&self.vars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
