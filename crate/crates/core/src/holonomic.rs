//! Linear recurrences in `n` with polynomial coefficients: unrolling,
//! exact guessing from data, symmetric squares and operator comparison.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{nullspace_rational, solve_linear};
use crate::poly::{gcd, int, Poly, Rational, TermJson, Vars};
use crate::ratfn::RatFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Conjectured,
}

/// `Σ_i coeffs[i] · a_{n+i} = 0`, coefficients over `vars` (which contain
/// `n`, and possibly parameters such as `k` and `c`).
///
/// The leading coefficient is never zero. A zero trailing coefficient is
/// allowed and encodes a lower-order recurrence embedded at higher order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    vars: Vars,
    coeffs: Vec<Poly>,
    pub status: Status,
}

impl Recurrence {
    /// Normalizes: common polynomial gcd removed, integer coefficients, the
    /// lowest nonzero coefficient with positive leading term.
    pub fn new(vars: &Vars, coeffs: Vec<Poly>, status: Status) -> Result<Self> {
        vars.require("n")?;
        if coeffs.len() < 2 {
            return Err(Error::DegenerateInput("recurrence needs order ≥ 1".into()));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::DegenerateInput("leading coefficient is zero".into()));
        }
        for c in &coeffs {
            if c.vars() != vars {
                return Err(Error::VarMismatch(vars.names().to_vec(), c.vars().names().to_vec()));
            }
        }
        Ok(Recurrence { vars: vars.clone(), coeffs: normalize_coeffs(coeffs), status })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Poly {
        self.coeffs.last().unwrap()
    }

    /// Substitute a parameter by a rational value and drop it from the
    /// variable list.
    pub fn specialize(&self, name: &str, value: &Rational) -> Result<Recurrence> {
        let i = self.vars.require(name)?;
        if name == "n" {
            return Err(Error::Usage("cannot specialize the index variable".into()));
        }
        let rest = Vars::new(self.vars.names().iter().filter(|v| *v != name).cloned());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.eval(i, value).embed(&rest))
            .collect::<Result<Vec<_>>>()?;
        Recurrence::new(&rest, coeffs, self.status)
    }

    /// Coefficients at a concrete `n` with parameters substituted,
    /// re-expressed over the value ring `target`.
    pub fn instantiate(&self, n: i64, params: &[(&str, Rational)], target: &Vars) -> Result<Vec<Poly>> {
        let ni = self.vars.require("n")?;
        let mut idx = vec![(ni, int(n))];
        for (name, v) in params {
            idx.push((self.vars.require(name)?, v.clone()));
        }
        self.coeffs
            .iter()
            .map(|c| {
                let mut p = c.clone();
                for (i, v) in &idx {
                    p = p.eval(*i, v);
                }
                p.embed(target)
            })
            .collect()
    }

    /// `Σ coeffs[i](n) · values[i]`.
    pub fn apply_window(&self, n: i64, params: &[(&str, Rational)], values: &[Poly]) -> Result<Poly> {
        assert_eq!(values.len(), self.coeffs.len());
        let target = values[0].vars().clone();
        let cs = self.instantiate(n, params, &target)?;
        Ok(cs.iter().zip(values).fold(Poly::zero(&target), |acc, (c, v)| &acc + &(c * v)))
    }

    pub fn to_json(&self) -> RecurrenceJson {
        RecurrenceJson {
            order: self.order(),
            vars: self.vars.names().to_vec(),
            coeffs: self.coeffs.iter().map(|c| c.to_json_terms()).collect(),
            status: self.status,
        }
    }

    pub fn from_json(j: &RecurrenceJson) -> Result<Self> {
        let vars = Vars::new(j.vars.iter().cloned());
        if j.coeffs.len() != j.order + 1 {
            return Err(Error::Schema(format!("order {} needs {} coefficients, got {}", j.order, j.order + 1, j.coeffs.len())));
        }
        let coeffs = j.coeffs.iter().map(|t| Poly::from_json_terms(&vars, t)).collect::<Result<Vec<_>>>()?;
        let r = Recurrence::new(&vars, coeffs.clone(), j.status)?;
        if r.coeffs != coeffs {
            return Err(Error::Schema("recurrence coefficients are not in normal form".into()));
        }
        Ok(r)
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("({c})·a(n+{i})"))
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceJson {
    pub order: usize,
    pub vars: Vec<String>,
    pub coeffs: Vec<Vec<TermJson>>,
    pub status: Status,
}

fn normalize_coeffs(coeffs: Vec<Poly>) -> Vec<Poly> {
    let mut g = Poly::zero(coeffs[0].vars());
    for c in &coeffs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    let mut out: Vec<Poly> = coeffs.into_iter().map(|c| c.exact_div(&g).unwrap()).collect();
    let cont = out.iter().fold(Rational::zero(), |a, c| crate::poly::rational_gcd(&a, &c.content()));
    let first = out.iter().find(|c| !c.is_zero()).unwrap();
    let s = if first.leading_coeff().is_negative() { -cont } else { cont };
    for c in out.iter_mut() {
        *c = c.scale(&s.recip());
    }
    out
}

/// True iff `a_i · b_j = a_j · b_i` for all `i, j`.
pub fn operator_equal_up_to_scalar(a: &Recurrence, b: &Recurrence) -> bool {
    if a.order() != b.order() || a.vars() != b.vars() {
        return false;
    }
    let n = a.coeffs.len();
    (0..n).all(|i| (i + 1..n).all(|j| &a.coeffs[i] * &b.coeffs[j] == &a.coeffs[j] * &b.coeffs[i]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Expanded,
    Unrolled,
    Extracted,
}

/// Values `(k, n) → Poly` over a value ring (typically `c` or `x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTable {
    vars: Vars,
    values: BTreeMap<(i64, i64), Poly>,
    pub provenance: Provenance,
}

impl SequenceTable {
    pub fn new(vars: &Vars, provenance: Provenance) -> Self {
        SequenceTable { vars: vars.clone(), values: BTreeMap::new(), provenance }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Insert a value; the `n`-range of each `k` stays contiguous.
    pub fn insert(&mut self, k: i64, n: i64, v: Poly) -> Result<()> {
        v.same_vars(&Poly::zero(&self.vars))?;
        if let Some((lo, hi)) = self.n_range(k) {
            if n < lo - 1 || n > hi + 1 {
                return Err(Error::DegenerateInput(format!("gap in column k={k} at n={n}")));
            }
        }
        self.values.insert((k, n), v);
        Ok(())
    }

    pub fn from_column(vars: &Vars, k: i64, n0: i64, values: Vec<Poly>, provenance: Provenance) -> Result<Self> {
        let mut t = Self::new(vars, provenance);
        for (i, v) in values.into_iter().enumerate() {
            t.insert(k, n0 + i as i64, v)?;
        }
        Ok(t)
    }

    pub fn get(&self, k: i64, n: i64) -> Option<&Poly> {
        self.values.get(&(k, n))
    }

    pub fn ks(&self) -> Vec<i64> {
        let mut ks: Vec<i64> = self.values.keys().map(|(k, _)| *k).collect();
        ks.dedup();
        ks
    }

    pub fn n_range(&self, k: i64) -> Option<(i64, i64)> {
        let mut it = self.values.range((k, i64::MIN)..=(k, i64::MAX)).map(|((_, n), _)| *n);
        let lo = it.next()?;
        Some((lo, it.last().unwrap_or(lo)))
    }

    pub fn column(&self, k: i64) -> Vec<(i64, Poly)> {
        self.values.range((k, i64::MIN)..=(k, i64::MAX)).map(|((_, n), v)| (*n, v.clone())).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &Poly)> {
        self.values.iter().map(|(key, v)| (*key, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Forward generation from `initials = [a_{n0}, …, a_{n0+r−1}]` through
/// `a_{n_end}`. The leading coefficient is checked at every step first.
pub fn unroll(rec: &Recurrence, initials: &[Poly], n0: i64, n_end: i64, params: &[(&str, Rational)]) -> Result<Vec<Poly>> {
    let r = rec.order();
    if initials.len() != r {
        return Err(Error::Usage(format!("order {r} needs {r} initial values, got {}", initials.len())));
    }
    let target = initials[0].vars().clone();
    let mut coeff_rows = Vec::new();
    for n in n0..=n_end - r as i64 {
        let cs = rec.instantiate(n, params, &target)?;
        if cs[r].is_zero() {
            return Err(Error::LeadingCoeffVanishes(n));
        }
        coeff_rows.push(cs);
    }
    let mut vals = initials.to_vec();
    for (step, cs) in coeff_rows.iter().enumerate() {
        let mut acc = Poly::zero(&target);
        for i in 0..r {
            acc = &acc + &(&cs[i] * &vals[step + i]);
        }
        vals.push((-&acc).exact_div(&cs[r])?);
    }
    Ok(vals)
}

/// Sorted integer roots `n ≥ from` of a univariate polynomial in `n`.
/// `None` if other variables occur.
pub fn integer_roots_from(p: &Poly, from: i64) -> Option<Vec<i64>> {
    let ni = p.vars().index("n")?;
    let dense = p.to_dense(ni)?;
    if dense.iter().all(|c| c.is_zero()) {
        return None;
    }
    let d = dense.iter().rposition(|c| !c.is_zero()).unwrap();
    // Cauchy bound on the root modulus
    let lead = dense[d].abs();
    let bound = dense[..d].iter().map(|c| c.abs() / &lead).fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let bound = (bound + Rational::one()).ceil().to_integer().to_i64().unwrap_or(i64::MAX);
    let hi = bound.max(from);
    Some((from..=hi).filter(|&n| p.eval(ni, &int(n)).is_zero()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degrees {
    pub n: u32,
    pub c: u32,
    pub k: u32,
}

pub const DEGREE_SCHEDULE: [Degrees; 3] = [
    Degrees { n: 2, c: 2, k: 2 },
    Degrees { n: 4, c: 4, k: 4 },
    Degrees { n: 6, c: 6, k: 6 },
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessOutcome {
    pub recurrence: Recurrence,
    pub degrees: Degrees,
    pub training_windows: usize,
    pub held_out_windows: usize,
    pub equations: usize,
    pub unknowns: usize,
}

/// Fit `Σ_i q_i(n, k, x) a_{k,n+i} = 0` to a table by exact elimination.
///
/// The value ring of the table has at most one variable `x`; the output
/// recurrence lives over `n`, `k` (only when several columns are present)
/// and `x`. The last quarter of each column's windows is held out and
/// checked afterwards.
pub fn guess(table: &SequenceTable, order: usize, deg: Degrees) -> Result<GuessOutcome> {
    guess_split(table, order, deg, None)
}

/// As [`guess`], but windows reaching beyond `train_max_n` are held out
/// as well (at least a quarter of each column is held out regardless).
pub fn guess_split(table: &SequenceTable, order: usize, deg: Degrees, train_max_n: Option<i64>) -> Result<GuessOutcome> {
    if table.vars().len() > 1 {
        return Err(Error::Usage("guessing supports at most one value variable".into()));
    }
    let ks = table.ks();
    let uniform = ks.len() > 1;
    let deg_k = if uniform { deg.k } else { 0 };
    let deg_x = if table.vars().is_empty() { 0 } else { deg.c };
    let xname = table.vars().names().first().cloned();

    let mut train = Vec::new();
    let mut held = Vec::new();
    for &k in &ks {
        let (lo, hi) = table.n_range(k).unwrap();
        let windows: Vec<i64> = (lo..=hi - order as i64).collect();
        let mut cut = windows.len() - windows.len() / 4;
        if let Some(m) = train_max_n {
            cut = cut.min(windows.iter().filter(|&&n| n + order as i64 <= m).count());
        }
        train.extend(windows[..cut].iter().map(|&n| (k, n)));
        held.extend(windows[cut..].iter().map(|&n| (k, n)));
    }

    let mut slots = Vec::new();
    for i in 0..=order {
        for a in 0..=deg.n {
            for b in 0..=deg_x {
                for g in 0..=deg_k {
                    slots.push((i, a, b, g));
                }
            }
        }
    }

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for &(k, n) in &train {
        let vals: Vec<&Poly> = (0..=order).map(|i| table.get(k, n + i as i64).unwrap()).collect();
        let mut eqs: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
        for (col, &(i, a, b, g)) in slots.iter().enumerate() {
            let scale = pow_i(n, a) * pow_i(k, g);
            if scale.is_zero() {
                continue;
            }
            for (e, c) in vals[i].terms() {
                let ex = e.first().copied().unwrap_or(0) + b;
                let row = eqs.entry(ex).or_insert_with(|| vec![Rational::zero(); slots.len()]);
                row[col] += c * &scale;
            }
        }
        rows.extend(eqs.into_values().filter(|r| r.iter().any(|e| !e.is_zero())));
    }
    if rows.len() < 2 * slots.len() {
        return Err(Error::InsufficientData(format!(
            "{} equations for {} unknowns (need at least twice as many)",
            rows.len(),
            slots.len()
        )));
    }

    let mut names = vec!["n".to_string()];
    if uniform {
        names.push("k".into());
    }
    if let Some(x) = &xname {
        names.push(x.clone());
    }
    let rvars = Vars::new(names);
    let basis = nullspace_rational(&rows, slots.len());
    let mut candidates = Vec::new();
    for v in basis {
        let mut coeffs = vec![Poly::zero(&rvars); order + 1];
        for (&(i, a, b, g), x) in slots.iter().zip(&v) {
            if x.is_zero() {
                continue;
            }
            let mut exps = vec![a];
            if uniform {
                exps.push(g);
            }
            if xname.is_some() {
                exps.push(b);
            }
            coeffs[i] = &coeffs[i] + &Poly::monomial(&rvars, exps, x.clone());
        }
        if coeffs[order].is_zero() {
            continue;
        }
        candidates.push(Recurrence::new(&rvars, coeffs, Status::Conjectured)?);
    }
    candidates.sort_by_key(|r| (r.coeffs.iter().map(|c| c.total_degree().unwrap_or(0)).sum::<u32>(), r.to_string()));
    let Some(rec) = candidates.into_iter().next() else {
        return Err(Error::NoRecurrenceFound);
    };
    // post hoc check on every window, training and held out
    for &(k, n) in train.iter().chain(&held) {
        let vals: Vec<Poly> = (0..=order)
            .map(|i| table.get(k, n + i as i64).unwrap().embed(&rvars).unwrap())
            .collect();
        if !window_residual(&rec, k, n, &vals, uniform).is_zero() {
            return Err(Error::NoRecurrenceFound);
        }
    }
    Ok(GuessOutcome {
        recurrence: rec,
        degrees: Degrees { n: deg.n, c: deg_x, k: deg_k },
        training_windows: train.len(),
        held_out_windows: held.len(),
        equations: rows.len(),
        unknowns: slots.len(),
    })
}

fn window_residual(rec: &Recurrence, k: i64, n: i64, vals: &[Poly], uniform: bool) -> Poly {
    let v = rec.vars();
    let mut acc = Poly::zero(v);
    for (c, x) in rec.coeffs.iter().zip(vals) {
        let mut c = c.eval(0, &int(n));
        if uniform {
            c = c.eval(1, &int(k));
        }
        acc = &acc + &(&c * x);
    }
    acc
}

fn pow_i(base: i64, e: u32) -> Rational {
    int(base).pow(e as i32)
}

/// Try each degree bound of [`DEGREE_SCHEDULE`] in turn.
pub fn guess_with_schedule(table: &SequenceTable, order: usize, train_max_n: Option<i64>) -> Result<GuessOutcome> {
    let mut last = Error::NoRecurrenceFound;
    for d in DEGREE_SCHEDULE {
        match guess_split(table, order, d, train_max_n) {
            Ok(g) => return Ok(g),
            Err(e @ Error::InsufficientData(_)) => return Err(e),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Order-3 recurrence annihilating `x_n²` for every solution of an
/// order-2 recurrence.
pub fn symmetric_square(rec: &Recurrence) -> Result<Recurrence> {
    if rec.order() != 2 {
        return Err(Error::Usage("symmetric square needs an order-2 recurrence".into()));
    }
    let v = rec.vars();
    let ni = v.require("n")?;
    let [a0, a1, a2] = [0, 1, 2].map(|i| RatFn::from(rec.coeffs[i].clone()));
    if a1.is_zero() && a0.is_zero() {
        return Err(Error::DegenerateInput("both lower coefficients vanish".into()));
    }
    let alpha = &(-&a1) / &a2;
    let beta = &(-&a0) / &a2;
    let one = RatFn::one(v);
    let zero = RatFn::zero(v);
    let (alpha1, beta1) = (alpha.shift(ni, &Rational::one()), beta.shift(ni, &Rational::one()));
    let uv = [
        (one.clone(), zero.clone()),
        (zero, one),
        (beta.clone(), alpha.clone()),
        (&alpha1 * &beta, &(&alpha1 * &alpha) + &beta1),
    ];
    let two = RatFn::constant(v, int(2));
    // one equation per basis element L_n², L_n L_{n+1}, L_{n+1}²
    let rows: Vec<Vec<RatFn>> = vec![
        uv.iter().map(|(u, _)| u * u).collect(),
        uv.iter().map(|(u, w)| &(&two * u) * w).collect(),
        uv.iter().map(|(_, w)| w * w).collect(),
    ];
    let basis = solve_linear(&rows, 4, v);
    let best = basis
        .into_iter()
        .min_by_key(|b| {
            let first = b.iter().position(|e| !e.is_zero()).unwrap_or(0);
            let last = b.iter().rposition(|e| !e.is_zero()).unwrap_or(0);
            (last - first, std::cmp::Reverse(first))
        })
        .ok_or(Error::DegenerateInput("no symmetric square found".into()))?;
    let last = best.iter().rposition(|e| !e.is_zero()).unwrap();
    let first = best.iter().position(|e| !e.is_zero()).unwrap();
    // re-index so that the shift starts at the first nonzero slot
    let coeffs: Vec<Poly> = best[first..=last]
        .iter()
        .map(|c| c.shift(ni, &int(-(first as i64))))
        .collect();
    if coeffs.len() < 2 {
        return Err(Error::DegenerateInput("symmetric square collapsed to order 0".into()));
    }
    Recurrence::new(v, coeffs, rec.status)
}

/// Operator on `b_n = t_n · a_n` from an operator on `a_n`, given the
/// order-1 recurrence `s_0(n) t_n + s_1(n) t_{n+1} = 0` of the gauge `t`.
pub fn gauge_twist(rec: &Recurrence, gauge: &Recurrence) -> Result<Recurrence> {
    if gauge.order() != 1 {
        return Err(Error::Usage("gauge recurrence must have order 1".into()));
    }
    let v = rec.vars();
    let ni = v.require("n")?;
    let s0 = RatFn::from(gauge.coeffs[0].embed(v)?);
    let s1 = RatFn::from(gauge.coeffs[1].embed(v)?);
    // t_{n+1}/t_n
    let step = &(-&s0) / &s1;
    let r = rec.order();
    // Σ a_i t_{n+r}/t_{n+i} · b_{n+i} = 0
    let mut out = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let mut factor = RatFn::one(v);
        for j in i..r {
            factor = &factor * &step.shift(ni, &int(j as i64));
        }
        out.push(&RatFn::from(rec.coeffs[i].clone()) * &factor);
    }
    let cleared = crate::linalg::clear_rows(&[out], v).pop().unwrap();
    Recurrence::new(v, cleared, rec.status)
}

/// Rewrite a recurrence whose coefficients are even in `from` in terms of
/// `to = from²`.
pub fn halve_variable(rec: &Recurrence, from: &str, to: &str) -> Result<Recurrence> {
    let names: Vec<String> = rec.vars().names().to_vec();
    let mut wide = names.clone();
    wide.push(to.to_string());
    let wide = Vars::new(wide);
    let fi = wide.require(from)?;
    let ti = wide.require(to)?;
    let narrow = Vars::new(names.iter().map(|v| if v == from { to.to_string() } else { v.clone() }));
    let coeffs = rec
        .coeffs
        .iter()
        .map(|c| {
            c.embed(&wide)?
                .halve_exponent(fi, ti)
                .ok_or_else(|| Error::DegenerateInput(format!("coefficient {c} is not even in {from}")))?
                .embed(&narrow)
        })
        .collect::<Result<Vec<_>>>()?;
    Recurrence::new(&narrow, coeffs, rec.status)
}

/// Same recurrence over a variable list that contains all of its variables.
pub fn reembed(rec: &Recurrence, target: &Vars) -> Result<Recurrence> {
    let coeffs = rec.coeffs.iter().map(|c| c.embed(target)).collect::<Result<Vec<_>>>()?;
    Recurrence::new(target, coeffs, rec.status)
}

/// Exact equality of `candidate` and `table` at the `count` entries
/// `n = n0, …` of column `k`.
pub fn match_initials(candidate: &SequenceTable, table: &SequenceTable, k: i64, n0: i64, count: usize) -> Result<bool> {
    let mut seen = 0;
    for n in n0..n0 + count as i64 {
        match (candidate.get(k, n), table.get(k, n)) {
            (Some(a), Some(b)) => {
                if a != b {
                    return Ok(false);
                }
                seen += 1;
            }
            _ => break,
        }
    }
    if seen < count {
        return Err(Error::InsufficientData(format!("column k={k} lacks entries n={n0}..{}", n0 + count as i64 - 1)));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vn() -> Vars {
        Vars::new(["n"])
    }

    fn p(s: &str, v: &Vars) -> Poly {
        Poly::parse(s, v).unwrap()
    }

    fn fib() -> Recurrence {
        let v = vn();
        Recurrence::new(&v, vec![p("1", &v), p("1", &v), p("-1", &v)], Status::Proved).unwrap()
    }

    fn consts(xs: &[i64]) -> Vec<Poly> {
        let e = Vars::new(Vec::<String>::new());
        xs.iter().map(|&x| Poly::from_int(&e, x)).collect()
    }

    #[test]
    fn fibonacci_unroll() {
        let vals = unroll(&fib(), &consts(&[0, 1]), 0, 10, &[]).unwrap();
        assert_eq!(vals, consts(&[0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]));
    }

    #[test]
    fn vanishing_leading_coefficient() {
        let v = vn();
        let r = Recurrence::new(&v, vec![p("1", &v), p("n-5", &v)], Status::Proved).unwrap();
        assert!(matches!(unroll(&r, &consts(&[1]), 0, 10, &[]), Err(Error::LeadingCoeffVanishes(5))));
    }

    #[test]
    fn guess_squares_and_fibonacci() {
        let e = Vars::new(Vec::<String>::new());
        let t = SequenceTable::from_column(&e, 0, 0, consts(&(0..24).map(|n| n * n).collect::<Vec<_>>()), Provenance::Expanded).unwrap();
        let g = guess(&t, 1, Degrees { n: 2, c: 0, k: 0 }).unwrap();
        let v = vn();
        assert_eq!(g.recurrence.coeffs(), &[p("(n+1)^2", &v), p("-n^2", &v)]);

        let f = unroll(&fib(), &consts(&[0, 1]), 0, 20, &[]).unwrap();
        let t = SequenceTable::from_column(&e, 0, 0, f, Provenance::Unrolled).unwrap();
        let g = guess(&t, 2, Degrees { n: 0, c: 0, k: 0 }).unwrap();
        assert_eq!(g.recurrence.coeffs(), fib().coeffs());
    }

    #[test]
    fn symmetric_square_of_fibonacci() {
        let sq = symmetric_square(&fib()).unwrap();
        let v = vn();
        let expected = Recurrence::new(&v, vec![p("-1", &v), p("2", &v), p("2", &v), p("-1", &v)], Status::Proved).unwrap();
        assert!(operator_equal_up_to_scalar(&sq, &expected));
    }

    #[test]
    fn symmetric_square_of_geometric() {
        let v = vn();
        let r = Recurrence::new(&v, vec![p("0", &v), p("2", &v), p("-1", &v)], Status::Proved).unwrap();
        let sq = symmetric_square(&r).unwrap();
        assert_eq!(sq.order(), 1);
        assert!(operator_equal_up_to_scalar(&sq, &Recurrence::new(&v, vec![p("4", &v), p("-1", &v)], Status::Proved).unwrap()));
    }

    #[test]
    fn proportionality() {
        let v = vn();
        let a = Recurrence::new(&v, vec![p("n+1", &v), p("n", &v), p("2", &v)], Status::Proved).unwrap();
        let mut b = a.clone();
        b.coeffs = b.coeffs.iter().map(|c| c.scale(&int(3))).collect();
        assert!(operator_equal_up_to_scalar(&a, &b));
        b.coeffs[1] = -&b.coeffs[1];
        assert!(!operator_equal_up_to_scalar(&a, &b));
    }

    #[test]
    fn integer_roots() {
        let v = vn();
        assert_eq!(integer_roots_from(&p("(2*n+3)*(n-4)*(n+1)", &v), 0), Some(vec![4]));
        assert_eq!(integer_roots_from(&p("n^2+1", &v), 0), Some(vec![]));
    }

    #[test]
    fn initials_match_and_shift() {
        let e = Vars::new(Vec::<String>::new());
        let a = SequenceTable::from_column(&e, 0, 0, consts(&[1, 2, 3, 4]), Provenance::Expanded).unwrap();
        let b = SequenceTable::from_column(&e, 0, 1, consts(&[1, 2, 3, 4]), Provenance::Expanded).unwrap();
        assert!(match_initials(&a, &a, 0, 0, 3).unwrap());
        assert!(!match_initials(&a, &b, 0, 1, 3).unwrap());
        let far = SequenceTable::from_column(&e, 0, 10, consts(&[1]), Provenance::Expanded).unwrap();
        assert!(matches!(match_initials(&a, &far, 0, 0, 3), Err(Error::InsufficientData(_))));
    }
}
