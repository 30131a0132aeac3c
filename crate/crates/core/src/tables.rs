//! Coefficient tables of the two kernels
//! `Q^{-1}` and `Q^{-1/2}` with `Q = 1 − z(2c + (1−c)(w + 1/w)) + z²`.
//!
//! Entry `(k, n)` of a table is `[z^n w^k]` of the expansion, for
//! `0 ≤ k ≤ n`. The `k = 0` entry is the full `w^0` coefficient counted
//! once; the symmetric pairs `w^k + w^{-k}` are represented by `k ≥ 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{int, rat, Poly, Rational, TermJson, Vars};
use crate::series::LaurentSeries2;

pub const K0_CONVENTION: &str = "single_count";

/// The kernel `Q`, stored with the `w` denominator cleared: `Q̃ = w·Q`.
#[derive(Clone, Debug)]
pub struct KernelQ {
    cleared: Poly,
}

impl KernelQ {
    /// Variables of the cleared kernel, in this order.
    pub fn vars() -> Vars {
        Vars::new(["z", "w", "c"])
    }

    pub fn new() -> Self {
        let v = Self::vars();
        let cleared = Poly::parse("w - z*(2*c*w + (1 - c)*(w^2 + 1)) + z^2*w", &v).unwrap();
        KernelQ { cleared }
    }

    /// `Q̃ = w·Q`, a polynomial of degree 2 in both `z` and `w`.
    pub fn cleared(&self) -> &Poly {
        &self.cleared
    }

    /// `Q` as a truncated series with coefficients in `c`.
    pub fn series(&self, z_order: usize, w_band: usize) -> LaurentSeries2 {
        LaurentSeries2::from_poly(&self.cleared, 0, 1, 1, &coeff_vars(), z_order, w_band)
            .expect("kernel coefficients live in c")
    }
}

impl Default for KernelQ {
    fn default() -> Self {
        Self::new()
    }
}

/// Coefficient ring of the tables: polynomials in `c`.
pub fn coeff_vars() -> Vars {
    Vars::new(["c"])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exponent {
    #[serde(rename = "-1")]
    MinusOne,
    #[serde(rename = "-1/2")]
    MinusHalf,
}

impl Exponent {
    pub fn as_rational(self) -> Rational {
        match self {
            Exponent::MinusOne => int(-1),
            Exponent::MinusHalf => rat(-1, 2),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "-1" => Ok(Exponent::MinusOne),
            "-1/2" => Ok(Exponent::MinusHalf),
            other => Err(Error::Usage(format!("exponent must be -1 or -1/2, got `{other}`"))),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exponent::MinusOne => "-1",
            Exponent::MinusHalf => "-1/2",
        })
    }
}

/// Expansion of `Q^exponent` through `z^{n_max}`.
pub fn kernel_series(exponent: Exponent, n_max: usize) -> LaurentSeries2 {
    let q = KernelQ::new().series(n_max, n_max);
    match exponent {
        Exponent::MinusOne => q.invert(),
        Exponent::MinusHalf => q.inv_sqrt(),
    }
    .expect("kernel has unit constant term")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    pub exponent: Exponent,
    pub n_max: usize,
    entries: BTreeMap<(usize, usize), Poly>,
}

impl CoeffTable {
    pub fn from_series(exponent: Exponent, s: &LaurentSeries2) -> Self {
        let n_max = s.z_order().min(s.w_band());
        let mut entries = BTreeMap::new();
        for n in 0..=n_max {
            for k in 0..=n {
                entries.insert((k, n), s.coefficient(n as i64, k as i64).unwrap());
            }
        }
        CoeffTable { exponent, n_max, entries }
    }

    /// Entry `(k, n)` for `k ≤ n ≤ n_max`; `None` outside that triangle.
    pub fn get(&self, k: usize, n: usize) -> Option<&Poly> {
        self.entries.get(&(k, n))
    }

    /// `[z^n w^k]` for any `k, n ≤ n_max`: entries with `n < k` are true
    /// zeros of the expansion (each power of `z` carries at most `w^{±1}`).
    pub fn value(&self, k: usize, n: usize) -> Option<Poly> {
        if n > self.n_max || k > self.n_max {
            return None;
        }
        Some(self.get(k, n).cloned().unwrap_or_else(|| Poly::zero(&coeff_vars())))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Poly)> {
        self.entries.iter().map(|(key, p)| (*key, p))
    }

    /// Sub-table with `n ≤ n_max`.
    pub fn restrict(&self, n_max: usize) -> CoeffTable {
        CoeffTable {
            exponent: self.exponent,
            n_max: n_max.min(self.n_max),
            entries: self.entries.iter().filter(|((_, n), _)| *n <= n_max).map(|(k, p)| (*k, p.clone())).collect(),
        }
    }

    /// Column `k` as values for `n = k..=n_max`.
    pub fn column(&self, k: usize) -> Vec<Poly> {
        (k..=self.n_max).map(|n| self.entries[&(k, n)].clone()).collect()
    }

    pub fn to_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# vars=c exponent={} k0_convention={}", self.exponent, K0_CONVENTION)?;
        let header: Vec<String> = std::iter::once("n".to_string())
            .chain((0..=self.n_max).map(|k| format!("k{k}")))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for n in 0..=self.n_max {
            let mut row = vec![n.to_string()];
            for k in 0..=self.n_max {
                row.push(self.get(k, n).map(|p| p.to_string()).unwrap_or_default());
            }
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn from_csv<R: BufRead>(input: R) -> Result<Self> {
        let vars = coeff_vars();
        let mut lines = input.lines();
        let meta = lines.next().ok_or_else(|| Error::Schema("empty CSV".into()))??;
        let exponent = meta
            .split_whitespace()
            .find_map(|t| t.strip_prefix("exponent="))
            .ok_or_else(|| Error::Schema("missing exponent in CSV header".into()))
            .and_then(Exponent::parse)?;
        if !meta.contains("vars=c") {
            return Err(Error::Schema("CSV tables must declare vars=c".into()));
        }
        lines.next().ok_or_else(|| Error::Schema("missing column header".into()))??;
        let mut entries = BTreeMap::new();
        let mut n_max = 0;
        for (row_idx, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            let n: usize = cells[0]
                .parse()
                .map_err(|_| Error::Schema(format!("row {row_idx}: bad n `{}`", cells[0])))?;
            n_max = n_max.max(n);
            for (k, cell) in cells.iter().enumerate().skip(1).map(|(i, c)| (i - 1, c)) {
                if k <= n {
                    let p = Poly::parse(cell, &vars).map_err(|e| Error::Schema(format!("cell (n={n}, k={k}): {e}")))?;
                    entries.insert((k, n), p);
                }
            }
        }
        Ok(CoeffTable { exponent, n_max, entries })
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            vars: vec!["c".into()],
            exponent: self.exponent,
            n_max: self.n_max,
            k0_convention: K0_CONVENTION.into(),
            entries: self
                .entries
                .iter()
                .map(|(&(k, n), p)| EntryJson { k, n, poly: p.to_json_terms() })
                .collect(),
        }
    }

    pub fn from_json(j: &TableJson) -> Result<Self> {
        if j.vars != ["c"] {
            return Err(Error::Schema(format!("table vars must be [\"c\"], got {:?}", j.vars)));
        }
        if j.k0_convention != K0_CONVENTION {
            return Err(Error::Schema(format!("unsupported k=0 convention `{}`", j.k0_convention)));
        }
        let vars = coeff_vars();
        let mut entries = BTreeMap::new();
        for e in &j.entries {
            entries.insert((e.k, e.n), Poly::from_json_terms(&vars, &e.poly)?);
        }
        Ok(CoeffTable { exponent: j.exponent, n_max: j.n_max, entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub k: usize,
    pub n: usize,
    pub poly: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub vars: Vec<String>,
    pub exponent: Exponent,
    pub n_max: usize,
    pub k0_convention: String,
    pub entries: Vec<EntryJson>,
}

pub fn expand_b(n_max: usize) -> CoeffTable {
    CoeffTable::from_series(Exponent::MinusHalf, &kernel_series(Exponent::MinusHalf, n_max))
}

pub fn expand_a(n_max: usize) -> CoeffTable {
    CoeffTable::from_series(Exponent::MinusOne, &kernel_series(Exponent::MinusOne, n_max))
}

/// `[z^n w^k] Q^{-1} = [z^n w^k] (Q^{-1/2})²` for all `0 ≤ k ≤ n ≤ n_max`.
pub fn check_a_from_b(n_max: usize) -> bool {
    let a = kernel_series(Exponent::MinusOne, n_max);
    let b = kernel_series(Exponent::MinusHalf, n_max);
    let b2 = b.mul(&b);
    (0..=n_max as i64).all(|n| (0..=n).all(|k| a.coefficient(n, k).unwrap() == b2.coefficient(n, k).unwrap()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Negative {
    pub k: usize,
    pub n: usize,
    pub c: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonnegReport {
    pub evaluations: usize,
    pub negatives: Vec<Negative>,
}

impl NonnegReport {
    pub fn ok(&self) -> bool {
        self.negatives.is_empty()
    }
}

/// Evaluate every entry exactly at every grid point and collect negatives.
pub fn sample_nonneg(table: &CoeffTable, grid: &[Rational]) -> NonnegReport {
    let mut rep = NonnegReport::default();
    for ((k, n), p) in table.entries() {
        for c in grid {
            let v = p.eval_all(std::slice::from_ref(c));
            rep.evaluations += 1;
            if v.is_negative() {
                rep.negatives.push(Negative { k, n, c: c.to_string(), value: v.to_string() });
            }
        }
    }
    rep
}

/// `{0, 1/m, …, 1}`.
pub fn uniform_grid(m: i64) -> Vec<Rational> {
    (0..=m).map(|i| rat(i, m)).collect()
}

/// Weighted row sum `Σ_k (2 − δ_{k0}) · entry(k, n)`: the expansion at `w = 1`.
pub fn row_sum_at_w_one(table: &CoeffTable, n: usize) -> Poly {
    let mut acc = Poly::zero(&coeff_vars());
    for k in 0..=n {
        let p = table.get(k, n).unwrap();
        acc = &acc + &if k == 0 { p.clone() } else { p.scale(&int(2)) };
    }
    acc
}

/// `B_{k,n}(0) = C(2a,a)·C(2b,b)/4^n` with `a = (n+k)/2`, `b = (n−k)/2`
/// when `n − k` is even, else 0 (the kernel factors at `c = 0`).
pub fn b_at_c0_closed_form(k: usize, n: usize) -> Rational {
    if (n - k) % 2 == 1 {
        return Rational::zero();
    }
    let a = (n + k) / 2;
    let b = (n - k) / 2;
    let num = binomial(num_bigint::BigInt::from(2 * a), num_bigint::BigInt::from(a))
        * binomial(num_bigint::BigInt::from(2 * b), num_bigint::BigInt::from(b));
    Rational::new(num, num_bigint::BigInt::from(4).pow(n as u32))
}

/// Structural checks exact in `c`; returns the first failure as text.
pub fn structural_checks(a: &CoeffTable, b: &CoeffTable) -> std::result::Result<(), String> {
    let v = coeff_vars();
    for n in 0..=b.n_max.min(a.n_max) {
        if !row_sum_at_w_one(b, n).is_one() {
            return Err(format!("B row sum at w=1 differs from 1 at n={n}"));
        }
        if row_sum_at_w_one(a, n) != Poly::from_int(&v, n as i64 + 1) {
            return Err(format!("A row sum at w=1 differs from n+1 at n={n}"));
        }
        for k in 0..=n {
            let bk = b.get(k, n).unwrap();
            let ak = a.get(k, n).unwrap();
            let at1 = bk.eval_all(&[Rational::one()]);
            if at1 != if k == 0 { Rational::one() } else { Rational::zero() } {
                return Err(format!("B({k},{n}) at c=1 is {at1}"));
            }
            let a1 = ak.eval_all(&[Rational::one()]);
            if a1 != if k == 0 { int(n as i64 + 1) } else { Rational::zero() } {
                return Err(format!("A({k},{n}) at c=1 is {a1}"));
            }
            let b0 = bk.eval_all(&[Rational::zero()]);
            if b0 != b_at_c0_closed_form(k, n) {
                return Err(format!("B({k},{n}) at c=0 is {b0}, closed form {}", b_at_c0_closed_form(k, n)));
            }
        }
    }
    Ok(())
}
