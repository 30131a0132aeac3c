//! Square certificates `p = ρ · c^a · (1−c)^b · L²` for polynomials in `c`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomic::{Provenance, SequenceTable};
use crate::poly::{int, Poly, Rational, TermJson, Vars};
use crate::tables::{coeff_vars, CoeffTable};

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let exact = |b: &BigInt| {
        let r = b.sqrt();
        (&r * &r == *b).then_some(r)
    };
    Some(Rational::new(exact(q.numer())?, exact(q.denom())?))
}

/// Exact square root of a univariate polynomial, with positive leading
/// coefficient; `None` when `p` is not the square of a polynomial over Q.
pub fn poly_sqrt(p: &Poly) -> Option<Poly> {
    let v = p.vars().clone();
    if p.is_zero() {
        return Some(p.clone());
    }
    if v.len() != 1 {
        return None;
    }
    let a = p.to_dense(0)?;
    let d = a.len() - 1;
    if d % 2 == 1 {
        return None;
    }
    let m = d / 2;
    // top-down: l_m = sqrt(a_d), then a_{m+j} fixes l_j for j < m
    let mut l = vec![Rational::zero(); m + 1];
    l[m] = rational_sqrt(&a[d])?;
    let two_lead = &l[m] * int(2);
    for j in (0..m).rev() {
        let mut s = a[m + j].clone();
        for i in j + 1..m {
            let partner = m + j - i;
            if partner > j && partner <= m {
                s -= &l[i] * &l[partner];
            }
        }
        l[j] = s / &two_lead;
    }
    let root = Poly::from_terms(&v, l.into_iter().enumerate().map(|(i, c)| (vec![i as u32], c)));
    (&root * &root == *p).then_some(root)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCertificate {
    pub rho: Rational,
    pub e_c: u32,
    pub e_1mc: u32,
    pub l: Poly,
}

impl SquareCertificate {
    pub fn reconstruct(&self) -> Poly {
        let v = self.l.vars();
        let c = Poly::var_at(v, 0);
        let one_minus_c = &Poly::one(v) - &c;
        (&(&c.pow(self.e_c) * &one_minus_c.pow(self.e_1mc)) * &(&self.l * &self.l)).scale(&self.rho)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extracted {
    Zero,
    Cert(SquareCertificate),
}

/// Strip maximal powers of `c` and `1−c`, split off a positive rational and
/// take an exact square root of the rest.
pub fn extract(p: &Poly) -> Result<Extracted> {
    if p.is_zero() {
        return Ok(Extracted::Zero);
    }
    let v = p.vars().clone();
    if v.len() != 1 {
        return Err(Error::DegenerateInput("square certificates are univariate".into()));
    }
    let e_c = p.valuation_in(0).unwrap_or(0);
    let mut rest = p.exact_div(&Poly::var_at(&v, 0).pow(e_c))?;
    let one_minus_c = &Poly::one(&v) - &Poly::var_at(&v, 0);
    let mut e_1mc = 0;
    while rest.eval_all(&[Rational::one()]).is_zero() {
        rest = rest.exact_div(&one_minus_c)?;
        e_1mc += 1;
    }
    let (rho, prim) = rest.primitive();
    if !rho.is_positive() {
        return Err(Error::NotCertifiable { remainder: rest.to_string() });
    }
    let l = poly_sqrt(&prim).ok_or_else(|| Error::NotCertifiable { remainder: prim.to_string() })?;
    let cert = SquareCertificate { rho, e_c, e_1mc, l };
    if cert.reconstruct() != *p {
        return Err(Error::NotCertifiable { remainder: rest.to_string() });
    }
    Ok(Extracted::Cert(cert))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareCertJson {
    pub k: usize,
    pub n: usize,
    pub rho: String,
    pub e_c: u32,
    pub e_1mc: u32,
    #[serde(rename = "L")]
    pub l: Vec<TermJson>,
}

/// Patterns observed on a certified table; recorded, never assumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Patterns {
    pub e_1mc_equals_k: bool,
    pub e_c_equals_parity: bool,
    pub zero_entries: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareTable {
    pub certs: BTreeMap<(usize, usize), Extracted>,
    pub patterns: Patterns,
}

impl SquareTable {
    pub fn cert(&self, k: usize, n: usize) -> Option<&SquareCertificate> {
        match self.certs.get(&(k, n))? {
            Extracted::Cert(c) => Some(c),
            Extracted::Zero => None,
        }
    }

    /// `L_{k,n}(c)` as a table, zero entries skipped.
    pub fn l_table(&self) -> Result<SequenceTable> {
        let mut t = SequenceTable::new(&coeff_vars(), Provenance::Extracted);
        for (&(k, n), e) in &self.certs {
            if let Extracted::Cert(c) = e {
                t.insert(k as i64, n as i64, c.l.clone())?;
            }
        }
        Ok(t)
    }

    pub fn to_json(&self) -> Vec<SquareCertJson> {
        self.certs
            .iter()
            .filter_map(|(&(k, n), e)| match e {
                Extracted::Cert(c) => Some(SquareCertJson {
                    k,
                    n,
                    rho: c.rho.to_string(),
                    e_c: c.e_c,
                    e_1mc: c.e_1mc,
                    l: c.l.to_json_terms(),
                }),
                Extracted::Zero => None,
            })
            .collect()
    }
}

pub fn extract_table(b: &CoeffTable) -> Result<SquareTable> {
    let mut certs = BTreeMap::new();
    let mut pat = Patterns { e_1mc_equals_k: true, e_c_equals_parity: true, zero_entries: 0 };
    for ((k, n), p) in b.entries() {
        let e = extract(p).map_err(|e| match e {
            Error::NotCertifiable { remainder } => Error::NotCertifiableAt { k, n, remainder },
            other => other,
        })?;
        match &e {
            Extracted::Zero => pat.zero_entries += 1,
            Extracted::Cert(c) => {
                pat.e_1mc_equals_k &= c.e_1mc as usize == k;
                pat.e_c_equals_parity &= c.e_c as usize == (n - k) % 2;
            }
        }
        certs.insert((k, n), e);
    }
    Ok(SquareTable { certs, patterns: pat })
}

/// Sequences used for recurrence guessing.
///
/// With `L = λ·L̂` (`L̂` monic), `ℓ_{k,n}(x) = x^{e_c} L̂(x²)` and
/// `τ_{k,n} = ρ λ²`, every nonzero entry factors as
/// `B_{k,n}(x²) = τ_{k,n} · (1−x²)^{e_1mc} · ℓ_{k,n}(x)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugedColumns {
    /// Over `["x"]`, `x² = c`.
    pub ell: SequenceTable,
    /// Constants.
    pub tau: SequenceTable,
}

pub fn ell_vars() -> Vars {
    Vars::new(["x"])
}

pub fn gauged_columns(sq: &SquareTable, ks: &[usize]) -> Result<GaugedColumns> {
    let xv = ell_vars();
    let ev = Vars::new(Vec::<String>::new());
    let mut ell = SequenceTable::new(&xv, Provenance::Extracted);
    let mut tau = SequenceTable::new(&ev, Provenance::Extracted);
    for (&(k, n), e) in &sq.certs {
        if !ks.contains(&k) {
            continue;
        }
        let Extracted::Cert(c) = e else { continue };
        let lead = c.l.leading_coeff();
        let monic = c.l.scale(&lead.recip());
        let x2 = Poly::var_at(&xv, 0).pow(2);
        let sub = substitute_c(&monic, &x2);
        let ell_val = &Poly::var_at(&xv, 0).pow(c.e_c) * &sub;
        ell.insert(k as i64, n as i64, ell_val)?;
        tau.insert(k as i64, n as i64, Poly::constant(&ev, &c.rho * &lead * &lead))?;
    }
    Ok(GaugedColumns { ell, tau })
}

/// `p(c) ↦ p(value)` for a univariate `p`.
fn substitute_c(p: &Poly, value: &Poly) -> Poly {
    let mut acc = Poly::zero(value.vars());
    for coeff in p.coeffs_in(0).into_iter().rev() {
        acc = &(&acc * value) + &Poly::constant(value.vars(), coeff.constant_term());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn c(s: &str) -> Poly {
        Poly::parse(s, &coeff_vars()).unwrap()
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(poly_sqrt(&c("9*c^2 - 6*c + 1")), Some(c("3*c - 1")));
        assert_eq!(poly_sqrt(&c("c + 1")), None);
        assert_eq!(poly_sqrt(&c("c^2 + 1")), None);
        assert_eq!(poly_sqrt(&c("1/4")), Some(c("1/2")));
    }

    #[test]
    fn extract_examples() {
        let cert = |s: &str| match extract(&c(s)).unwrap() {
            Extracted::Cert(x) => x,
            Extracted::Zero => panic!("zero"),
        };
        let a = cert("(1-c)/2");
        assert_eq!((a.rho.clone(), a.e_c, a.e_1mc, a.l.clone()), (rat(1, 2), 0, 1, c("1")));
        let b = cert("3*c*(1-c)/2");
        assert_eq!((b.rho.clone(), b.e_c, b.e_1mc), (rat(3, 2), 1, 1));
        let d = cert("(1-3*c)^2/4");
        assert_eq!((d.rho.clone(), d.e_c, d.e_1mc, d.l.clone()), (rat(1, 4), 0, 0, c("3*c - 1")));
        assert_eq!(extract(&c("0")).unwrap(), Extracted::Zero);
        assert!(matches!(extract(&c("c^2 + 1")), Err(Error::NotCertifiable { .. })));
        assert!(matches!(extract(&c("-(3*c-1)^2")), Err(Error::NotCertifiable { .. })));
    }
}
