//! Formal check of the Löwner-series identity over a ring of symbols
//! standing for the coefficients `c_j(t)`, their conjugates and their
//! first `t`-derivatives.
//!
//! With `f_t(z) = e^t z exp(Σ_{j≥1} c_j z^j)` both `∂f/∂t` and `z ∂f/∂z`
//! carry the factor `f` itself:
//! `∂f/∂t = f·(1 + Σ ċ_j z^j)` and `z ∂f/∂z = f·(1 + Σ j c_j z^j)`,
//! so the ratio entering the identity is
//! `(1 + Σ ċ_j z^j) / (1 + Σ j c_j z^j)` and neither `e^t` nor the
//! exponential survives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{int, rat, Poly, Vars};
use crate::series::Series1;

/// Symbol ring for truncation order `N`.
///
/// Generators, in order: `c_1..c_N`, `cb_1..cb_N`, `cd_1..cd_N`,
/// `cbd_1..cbd_N`, `u` (standing for `e^{-t}`).
#[derive(Clone, Debug)]
pub struct LoewnerSymbols {
    order: usize,
    vars: Vars,
    conj_perm: Vec<usize>,
}

impl LoewnerSymbols {
    pub fn new(order: usize) -> Self {
        let mut names = Vec::with_capacity(4 * order + 1);
        for prefix in ["c", "cb", "cd", "cbd"] {
            for j in 1..=order {
                names.push(format!("{prefix}_{j}"));
            }
        }
        names.push("u".to_string());
        let n = order;
        let conj_perm = (0..4 * n + 1)
            .map(|i| match i / n.max(1) {
                _ if i == 4 * n => i,
                0 | 2 => i + n,
                _ => i - n,
            })
            .collect();
        LoewnerSymbols { order, vars: Vars::new(names), conj_perm }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    fn idx(&self, block: usize, j: usize) -> usize {
        assert!((1..=self.order).contains(&j), "symbol index {j} outside 1..={}", self.order);
        block * self.order + j - 1
    }

    pub fn c(&self, j: usize) -> Poly {
        Poly::var_at(&self.vars, self.idx(0, j))
    }

    pub fn cb(&self, j: usize) -> Poly {
        Poly::var_at(&self.vars, self.idx(1, j))
    }

    pub fn cd(&self, j: usize) -> Poly {
        Poly::var_at(&self.vars, self.idx(2, j))
    }

    pub fn cbd(&self, j: usize) -> Poly {
        Poly::var_at(&self.vars, self.idx(3, j))
    }

    pub fn u(&self) -> Poly {
        Poly::var_at(&self.vars, 4 * self.order)
    }

    pub fn constant(&self, v: crate::poly::Rational) -> Poly {
        Poly::constant(&self.vars, v)
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        Poly::parse(s, &self.vars)
    }

    /// Complex conjugation: swaps `c_j ↔ cb_j`, `cd_j ↔ cbd_j`, fixes `u`.
    pub fn conj(&self, p: &Poly) -> Poly {
        p.permute_vars(&self.conj_perm)
    }

    /// `Re X = (X + conj X)/2`.
    pub fn re(&self, p: &Poly) -> Poly {
        (p + &self.conj(p)).scale(&rat(1, 2))
    }

    /// `d/dt`. Elements that already contain a derivative symbol have no
    /// derivative in this ring.
    pub fn ddt(&self, p: &Poly) -> Result<Poly> {
        let n = self.order;
        for i in 2 * n..4 * n {
            if p.degree_in(i).is_some_and(|d| d > 0) {
                return Err(Error::SecondDerivative(self.vars.names()[i].clone()));
            }
        }
        let mut out = Poly::zero(&self.vars);
        for j in 1..=n {
            for (src, dst) in [(self.idx(0, j), self.cd(j)), (self.idx(1, j), self.cbd(j))] {
                let d = p.derivative(src);
                if !d.is_zero() {
                    out = &out + &(&d * &dst);
                }
            }
        }
        let du = p.derivative(4 * n);
        if !du.is_zero() {
            out = &out - &(&du * &self.u());
        }
        Ok(out)
    }

    fn ddt_series(&self, s: &Series1) -> Result<Series1> {
        let terms = s.terms().map(|(e, c)| Ok((e, self.ddt(c)?))).collect::<Result<Vec<_>>>()?;
        Ok(Series1::from_terms(&self.vars, terms, s.precision()))
    }

    /// `Λ_k = 4/k − k c_k cb_k`.
    pub fn lambda(&self, k: usize) -> Poly {
        let ki = int(k as i64);
        &self.constant(rat(4, k as i64)) - &(&self.c(k) * &self.cb(k)).scale(&ki)
    }
}

/// `(1 + Σ cd_j z^j) · (1 + Σ j c_j z^j)^{-1}` through `z^N`.
pub fn build_ratio(sym: &LoewnerSymbols) -> Series1 {
    let n = sym.order();
    let v = sym.vars();
    let one = (0i64, Poly::one(v));
    let num = Series1::from_terms(v, std::iter::once(one.clone()).chain((1..=n).map(|j| (j as i64, sym.cd(j)))), Some(n as i64));
    let den = Series1::from_terms(
        v,
        std::iter::once(one).chain((1..=n).map(|j| (j as i64, sym.c(j).scale(&int(j as i64))))),
        Some(n as i64),
    );
    num.mul(&den.invert(n as i64).expect("unit constant"))
}

/// `P_k = 2(1 + Σ_{j≤k} j c_j z^j) − k c_k z^k` and its conjugate in `1/z`.
pub fn brackets(sym: &LoewnerSymbols, k: usize) -> (Series1, Series1) {
    let v = sym.vars();
    let mut terms = vec![(0i64, Poly::from_int(v, 2))];
    for j in 1..=k {
        let coeff = if j == k { j as i64 } else { 2 * j as i64 };
        terms.push((j as i64, sym.c(j).scale(&int(coeff))));
    }
    let p = Series1::from_terms(v, terms, None);
    let q = p.map_coeffs(|c| sym.conj(c)).reflect().expect("exact series");
    (p, q)
}

/// `R_k = Re ct_z(ratio · P_k · Q_k)`.
pub fn r_k(sym: &LoewnerSymbols, ratio: &Series1, k: usize) -> Poly {
    let (p, q) = brackets(sym, k);
    let prod = ratio.mul(&p).mul(&q);
    sym.re(&prod.ct().expect("constant term within precision"))
}

/// `(1 − w) Σ_{k=1}^{N} R_k w^k` through `w^N`.
pub fn rhs_series(sym: &LoewnerSymbols) -> Series1 {
    let n = sym.order();
    let ratio = build_ratio(sym);
    let sum = Series1::from_terms(sym.vars(), (1..=n).map(|k| (k as i64, r_k(sym, &ratio, k))), Some(n as i64));
    one_minus_w(sym, n).mul(&sum)
}

fn one_minus_w(sym: &LoewnerSymbols, n: usize) -> Series1 {
    Series1::from_terms(sym.vars(), [(0, Poly::one(sym.vars())), (1, Poly::from_int(sym.vars(), -1))], Some(n as i64))
}

fn one_plus_w(sym: &LoewnerSymbols, n: usize) -> Series1 {
    Series1::from_terms(sym.vars(), [(0, Poly::one(sym.vars())), (1, Poly::one(sym.vars()))], Some(n as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `w` held fixed while differentiating in `t`.
    Partial,
    /// `w = w(z, t)` moves along the Koebe relation.
    Total,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial" => Ok(Mode::Partial),
            "total" => Ok(Mode::Total),
            _ => Err(Error::Usage(format!("mode must be partial or total, got `{s}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Partial => "partial",
            Mode::Total => "total",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignChoice {
    Plus,
    Minus,
    Auto,
}

impl FromStr for SignChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+1" | "1" | "+" => Ok(SignChoice::Plus),
            "-1" | "-" => Ok(SignChoice::Minus),
            "auto" => Ok(SignChoice::Auto),
            _ => Err(Error::Usage(format!("sign must be +1, -1 or auto, got `{s}`"))),
        }
    }
}

/// `d/dt Σ Λ_k w^k` with `w` fixed (partial) or moving with
/// `ẇ = −w(1−w)/(1+w)` (total); the total form is multiplied through by
/// `1 + w`, as is the partial one, so both share the `(1+w)ΣΛ̇_k w^k` part.
pub fn lhs_series(sym: &LoewnerSymbols, mode: Mode) -> Series1 {
    let n = sym.order();
    let v = sym.vars();
    let lam_dot = Series1::from_terms(
        v,
        (1..=n).map(|k| (k as i64, sym.ddt(&sym.lambda(k)).expect("Λ has no derivative symbols"))),
        Some(n as i64),
    );
    let mut out = one_plus_w(sym, n).mul(&lam_dot);
    if mode == Mode::Total {
        let k_lam = Series1::from_terms(v, (1..=n).map(|k| (k as i64, sym.lambda(k).scale(&int(k as i64)))), Some(n as i64));
        out = out.sub(&one_minus_w(sym, n).mul(&k_lam));
    }
    out
}

/// `K(z) = z/(1−z)²` through `z^N`.
fn koebe(sym: &LoewnerSymbols, n: usize) -> Series1 {
    Series1::from_terms(sym.vars(), (1..=n).map(|j| (j as i64, Poly::from_int(sym.vars(), j as i64))), Some(n as i64))
}

/// `w(z, t) = K^{-1}(u·K(z))` through `z^N`.
pub fn koebe_w(sym: &LoewnerSymbols, n: usize) -> Result<Series1> {
    let k = koebe(sym, n);
    let inv = k.revert(n as i64)?;
    inv.compose(&k.scale(&sym.u()))
}

/// `(1+w)·ẇ + w(1−w) = 0 mod z^{N+1}`, `ẇ` acting through `u` only.
pub fn koebe_wdot_check(sym: &LoewnerSymbols, n: usize) -> Result<bool> {
    let w = koebe_w(sym, n)?;
    let wdot = sym.ddt_series(&w)?;
    let one = Series1::one(sym.vars(), Some(n as i64));
    let lhs = one.add(&w).mul(&wdot).add(&w.mul(&one.sub(&w)));
    Ok(lhs.with_precision(n as i64).is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact1Report {
    pub order: usize,
    pub mode: Mode,
    pub sign: i8,
    pub residual: Series1,
    pub first_nonzero_order: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualTerm {
    pub order: i64,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact1ReportJson {
    pub mode: Mode,
    pub sign: i8,
    pub first_nonzero_order: Option<i64>,
    pub residual_terms: Vec<ResidualTerm>,
    pub order: usize,
    pub variables: Vec<String>,
}

impl Fact1Report {
    pub fn vanishes(&self) -> bool {
        self.first_nonzero_order.is_none()
    }

    pub fn to_json(&self) -> Fact1ReportJson {
        Fact1ReportJson {
            mode: self.mode,
            sign: self.sign,
            first_nonzero_order: self.first_nonzero_order,
            residual_terms: self
                .residual
                .terms()
                .map(|(e, c)| ResidualTerm { order: e, coeff: c.to_string() })
                .collect(),
            order: self.order,
            variables: self.residual.vars().names().to_vec(),
        }
    }
}

/// Residual `lhs − sign·rhs`; with [`SignChoice::Auto`] the sign giving
/// the later first nonzero order wins (`+1` on ties).
pub fn verify_fact1(order: usize, mode: Mode, sign: SignChoice) -> Fact1Report {
    let sym = LoewnerSymbols::new(order);
    let lhs = lhs_series(&sym, mode);
    let rhs = rhs_series(&sym);
    let build = |s: i8| {
        let residual = lhs.sub(&rhs.scale(&Poly::from_int(sym.vars(), s as i64)));
        let first_nonzero_order = residual.valuation();
        Fact1Report { order, mode, sign: s, residual, first_nonzero_order }
    };
    match sign {
        SignChoice::Plus => build(1),
        SignChoice::Minus => build(-1),
        SignChoice::Auto => {
            let (p, m) = (build(1), build(-1));
            let depth = |r: &Fact1Report| r.first_nonzero_order.unwrap_or(i64::MAX);
            if depth(&m) > depth(&p) {
                m
            } else {
                p
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_layout() {
        let s = LoewnerSymbols::new(2);
        assert_eq!(s.vars().names(), ["c_1", "c_2", "cb_1", "cb_2", "cd_1", "cd_2", "cbd_1", "cbd_2", "u"]);
        assert_eq!(s.conj(&s.c(2)), s.cb(2));
        assert_eq!(s.conj(&s.cbd(1)), s.cd(1));
        assert_eq!(s.conj(&s.u()), s.u());
    }

    #[test]
    fn ratio_first_terms() {
        let s = LoewnerSymbols::new(3);
        let r = build_ratio(&s);
        assert!(r.coefficient(0).unwrap().is_one());
        assert_eq!(r.coefficient(1).unwrap(), s.parse("cd_1 - c_1").unwrap());
    }

    #[test]
    fn brackets_first() {
        let s = LoewnerSymbols::new(2);
        let (p, q) = brackets(&s, 1);
        assert_eq!(p.coefficient(1).unwrap(), s.c(1));
        assert_eq!(q.coefficient(-1).unwrap(), s.cb(1));
        assert_eq!(q.coefficient(0).unwrap(), Poly::from_int(s.vars(), 2));
    }

    #[test]
    fn r1_and_lambda_dot() {
        let s = LoewnerSymbols::new(1);
        let r = build_ratio(&s);
        assert_eq!(r_k(&s, &r, 1), s.parse("4 - c_1*cb_1 + cd_1*cb_1 + c_1*cbd_1").unwrap());
        assert_eq!(s.ddt(&s.lambda(1)).unwrap(), s.parse("-(cd_1*cb_1 + c_1*cbd_1)").unwrap());
    }

    #[test]
    fn second_derivative_is_an_error() {
        let s = LoewnerSymbols::new(1);
        assert!(matches!(s.ddt(&s.cd(1)), Err(Error::SecondDerivative(_))));
        assert_eq!(s.ddt(&s.u()).unwrap(), -&s.u());
    }

    #[test]
    fn koebe_leading_terms() {
        let s = LoewnerSymbols::new(1);
        let w = koebe_w(&s, 4).unwrap();
        assert_eq!(w.coefficient(1).unwrap(), s.u());
        let at_one = w.map_coeffs(|c| c.eval(s.vars().len() - 1, &int(1)));
        assert_eq!(at_one.with_precision(4), Series1::monomial(s.vars(), 1, Poly::one(s.vars()), Some(4)));
        assert!(koebe_wdot_check(&s, 6).unwrap());
    }

    #[test]
    fn total_mode_vanishes_for_one_sign() {
        for n in 1..=3 {
            let minus = verify_fact1(n, Mode::Total, SignChoice::Minus);
            let plus = verify_fact1(n, Mode::Total, SignChoice::Plus);
            assert!(minus.vanishes());
            assert_eq!(plus.first_nonzero_order, Some(1));
            assert_eq!(verify_fact1(n, Mode::Total, SignChoice::Auto).sign, -1);
            assert_eq!(verify_fact1(n, Mode::Partial, SignChoice::Auto).first_nonzero_order, Some(1));
        }
    }
}
