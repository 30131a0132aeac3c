//! Telescoping certificates for `F = Q^{-1/2} / (z^n w^k)`.
//!
//! A certificate `(p_0..p_3, G1, G2)` satisfies
//!
//! ```text
//! Σ_i p_i F(n+i) = z d/dz (G1 F / (z^a w^b)) + w d/dw (G2 F / (z^c w^d))
//! ```
//!
//! with `G1`, `G2` polynomials in `z, w` of bounded degree. Dividing by `F`
//! turns both sides into rational functions; the divisor exponents
//! `(a, b)` and `(c, d)` are part of the [`Ansatz`].
//!
//! Discovery ([`find_certificate`]) assembles and solves a linear system;
//! checking ([`verify_certificate`]) rebuilds the identity from scratch by
//! a different route and also evaluates it at random rational points.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomic::{Recurrence, Status};
use crate::linalg::nullspace_poly;
use crate::poly::{gcd, int, lcm, rat, Poly, Rational, TermJson, Vars};
use crate::ratfn::RatFn;

pub const N: usize = 0;
pub const K: usize = 1;
pub const C: usize = 2;
pub const Z: usize = 3;
pub const W: usize = 4;

/// `["n", "k", "c", "z", "w"]`.
pub fn vars() -> Vars {
    Vars::new(["n", "k", "c", "z", "w"])
}

/// `["n", "k", "c"]`.
pub fn param_vars() -> Vars {
    Vars::new(["n", "k", "c"])
}

/// `w·Q` over [`vars`].
pub fn kernel_cleared() -> Poly {
    Poly::parse("w - z*(2*c*w + (1 - c)*(w^2 + 1)) + z^2*w", &vars()).unwrap()
}

/// Shape of the certificate ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ansatz {
    pub deg_z: u32,
    pub deg_w: u32,
    /// `(a, b)` in `G1 F / (z^a w^b)`.
    pub div1: (u32, u32),
    /// `(c, d)` in `G2 F / (z^c w^d)`.
    pub div2: (u32, u32),
}

impl Ansatz {
    /// Degree 2 in both variables with divisors `z³w` and `z²w`: the
    /// smallest divisor pair for which the degree-(2,2) system has a
    /// solution with `p_3 ≠ 0`.
    pub fn standard() -> Self {
        Ansatz { deg_z: 2, deg_w: 2, div1: (3, 1), div2: (2, 1) }
    }

    /// Divisors `z³w` and `zw³`. The degree-(2,2) system for this shape
    /// has only the zero solution.
    pub fn printed() -> Self {
        Ansatz { deg_z: 2, deg_w: 2, div1: (3, 1), div2: (1, 3) }
    }

    /// Shape used at `k = 0`, where no degree-(2,2) certificate has
    /// `p_3 ≠ 0`: degree 3 in `z`, divisors `z³` and `z³w`.
    pub fn k0() -> Self {
        Ansatz { deg_z: 3, deg_w: 2, div1: (3, 0), div2: (3, 1) }
    }

    pub fn g_len(&self) -> usize {
        ((self.deg_z + 1) * (self.deg_w + 1)) as usize
    }

    pub fn unknowns(&self) -> usize {
        4 + 2 * self.g_len()
    }

    /// `(i, j)` exponents of the G-slots, `z` major.
    pub fn g_monomials(&self) -> Vec<(u32, u32)> {
        (0..=self.deg_z).flat_map(|i| (0..=self.deg_w).map(move |j| (i, j))).collect()
    }

    /// Names of the unknowns in column order.
    pub fn unknown_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (0..4).map(|i| format!("p{i}")).collect();
        for g in ["g1", "g2"] {
            names.extend(self.g_monomials().iter().map(|(i, j)| format!("{g}_{i}{j}")));
        }
        names
    }
}

impl Default for Ansatz {
    fn default() -> Self {
        Self::standard()
    }
}

/// The identity divided by `F`, cleared of denominators, as one polynomial
/// coefficient per unknown: `Σ_u x_u · (lhs[u] − rhs[u]) = 0`.
#[derive(Clone, Debug)]
pub struct TelescopedIdentity {
    pub ansatz: Ansatz,
    /// Common denominator that was multiplied through.
    pub clearing_factor: Poly,
    /// `p`-side coefficients (zero outside the first four slots).
    pub lhs: Vec<Poly>,
    /// `G`-side coefficients (zero in the first four slots).
    pub rhs: Vec<Poly>,
}

impl TelescopedIdentity {
    /// `(lhs, rhs)` with the given values substituted for the unknowns.
    pub fn evaluate(&self, values: &[Poly]) -> (Poly, Poly) {
        let v = vars();
        let mut l = Poly::zero(&v);
        let mut r = Poly::zero(&v);
        for ((a, b), x) in self.lhs.iter().zip(&self.rhs).zip(values) {
            if !x.is_zero() {
                l = &l + &(a * x);
                r = &r + &(b * x);
            }
        }
        (l, r)
    }

    /// Homogeneous system: one row per `(z, w)` monomial, entries over
    /// `(n, k, c)`.
    pub fn system(&self) -> Vec<Vec<Poly>> {
        let pv = param_vars();
        let mut rows: BTreeMap<(usize, usize), Vec<Poly>> = BTreeMap::new();
        let ncols = self.lhs.len();
        for (col, (a, b)) in self.lhs.iter().zip(&self.rhs).enumerate() {
            let d = a - b;
            for (i, pz) in d.coeffs_in(Z).into_iter().enumerate() {
                for (j, pw) in pz.coeffs_in(W).into_iter().enumerate() {
                    if pw.is_zero() {
                        continue;
                    }
                    let row = rows.entry((i, j)).or_insert_with(|| vec![Poly::zero(&pv); ncols]);
                    row[col] = pw.embed(&pv).expect("z and w eliminated");
                }
            }
        }
        rows.into_values().collect()
    }
}

fn monomial_zw(i: i64, j: i64) -> RatFn {
    let v = vars();
    let mut num = vec![0u32; 5];
    let mut den = vec![0u32; 5];
    if i >= 0 { num[Z] = i as u32 } else { den[Z] = (-i) as u32 }
    if j >= 0 { num[W] = j as u32 } else { den[W] = (-j) as u32 }
    RatFn::new(Poly::monomial(&v, num, Rational::one()), Poly::monomial(&v, den, Rational::one())).unwrap()
}

/// Build the cleared identity using the logarithmic derivatives
/// `z ∂_z F / F = −z ∂_z Q̃ / (2Q̃) − n` and
/// `w ∂_w F / F = −(w ∂_w Q̃ − Q̃) / (2Q̃) − k`.
pub fn assemble_identity(ansatz: &Ansatz) -> TelescopedIdentity {
    let v = vars();
    let qt = kernel_cleared();
    let two_q = RatFn::from(qt.scale(&int(2)));
    let log_z = &RatFn::from(Poly::var_at(&v, Z) * qt.derivative(Z)) / &two_q;
    let log_w = &RatFn::from(&(Poly::var_at(&v, W) * qt.derivative(W)) - &qt) / &two_q;
    let n = RatFn::from(Poly::var_at(&v, N));
    let k = RatFn::from(Poly::var_at(&v, K));

    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let zero = RatFn::zero(&v);
    for i in 0..4 {
        lhs.push(monomial_zw(-i, 0));
        rhs.push(zero.clone());
    }
    let (a, b) = ansatz.div1;
    for (i, j) in ansatz.g_monomials() {
        let m = monomial_zw(i as i64 - a as i64, j as i64 - b as i64);
        let bracket = &(&RatFn::constant(&v, int(i as i64 - a as i64)) - &n) - &log_z;
        lhs.push(zero.clone());
        rhs.push(&m * &bracket);
    }
    let (c, d) = ansatz.div2;
    for (i, j) in ansatz.g_monomials() {
        let m = monomial_zw(i as i64 - c as i64, j as i64 - d as i64);
        let bracket = &(&RatFn::constant(&v, int(j as i64 - d as i64)) - &k) - &log_w;
        lhs.push(zero.clone());
        rhs.push(&m * &bracket);
    }

    let mut clearing = Poly::one(&v);
    for e in lhs.iter().chain(&rhs) {
        if !e.is_zero() {
            clearing = lcm(&clearing, e.den());
        }
    }
    let clear = |e: &RatFn| (e.num() * &clearing).exact_div(e.den()).unwrap();
    TelescopedIdentity {
        ansatz: *ansatz,
        lhs: lhs.iter().map(clear).collect(),
        rhs: rhs.iter().map(clear).collect(),
        clearing_factor: clearing.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub scheme: String,
    /// `gcd(p_0, …, p_3)`; divided out when forming the recurrence.
    pub p_common_factor: String,
    pub solution_dimension: usize,
    /// Value substituted for `k` before solving, if any.
    pub k_value: Option<i64>,
    pub ansatz: Ansatz,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// `p_0..p_3` over [`vars`], free of `z` and `w`.
    pub p: [Poly; 4],
    pub g1: Poly,
    pub g2: Poly,
    pub normalization: Normalization,
}

impl Certificate {
    pub fn ansatz(&self) -> Ansatz {
        self.normalization.ansatz
    }

    /// Unknown values in the column order of [`TelescopedIdentity`].
    pub fn unknown_values(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = self.p.to_vec();
        for g in [&self.g1, &self.g2] {
            for (i, j) in self.ansatz().g_monomials() {
                let mut c = g.coeffs_in(Z).get(i as usize).cloned().unwrap_or_else(|| Poly::zero(&vars()));
                c = c.coeffs_in(W).get(j as usize).cloned().unwrap_or_else(|| Poly::zero(&vars()));
                out.push(c);
            }
        }
        out
    }

    fn from_unknowns(ansatz: &Ansatz, x: &[Poly], normalization: Normalization) -> Self {
        let v = vars();
        let lift = |p: &Poly| p.embed(&v).unwrap();
        let glen = ansatz.g_len();
        let build = |off: usize| {
            ansatz
                .g_monomials()
                .iter()
                .zip(&x[off..off + glen])
                .fold(Poly::zero(&v), |acc, (&(i, j), c)| {
                    let mut e = vec![0u32; 5];
                    e[Z] = i;
                    e[W] = j;
                    &acc + &lift(c).mul_monomial(&e)
                })
        };
        Certificate {
            p: [lift(&x[0]), lift(&x[1]), lift(&x[2]), lift(&x[3])],
            g1: build(4),
            g2: build(4 + glen),
            normalization,
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            variables: vars().names().to_vec(),
            p: self.p.iter().map(|p| p.to_json_terms()).collect(),
            g1: self.g1.to_json_terms(),
            g2: self.g2.to_json_terms(),
            kernel: kernel_cleared().to_json_terms(),
            kernel_form: "w*Q".into(),
            exponent: "-1/2".into(),
            normalization: self.normalization.clone(),
        }
    }

    pub fn from_json(j: &CertificateJson) -> Result<Self> {
        let v = vars();
        if j.variables != v.names() {
            return Err(Error::Schema(format!("certificate variables must be {:?}", v.names())));
        }
        if j.exponent != "-1/2" {
            return Err(Error::Schema(format!("unsupported exponent `{}`", j.exponent)));
        }
        if Poly::from_json_terms(&v, &j.kernel)? != kernel_cleared() || j.kernel_form != "w*Q" {
            return Err(Error::Schema("certificate is for a different kernel".into()));
        }
        if j.p.len() != 4 {
            return Err(Error::Schema(format!("expected 4 p-coefficients, got {}", j.p.len())));
        }
        let p = j.p.iter().map(|t| Poly::from_json_terms(&v, t)).collect::<Result<Vec<_>>>()?;
        Ok(Certificate {
            p: [p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()],
            g1: Poly::from_json_terms(&v, &j.g1)?,
            g2: Poly::from_json_terms(&v, &j.g2)?,
            normalization: j.normalization.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub variables: Vec<String>,
    pub p: Vec<Vec<TermJson>>,
    #[serde(rename = "G1")]
    pub g1: Vec<TermJson>,
    #[serde(rename = "G2")]
    pub g2: Vec<TermJson>,
    pub kernel: Vec<TermJson>,
    pub kernel_form: String,
    pub exponent: String,
    pub normalization: Normalization,
}

/// Basis of the solution space of the ansatz system, optionally with `k`
/// fixed to an integer.
pub fn solution_space(ansatz: &Ansatz, k_value: Option<i64>) -> Vec<Vec<Poly>> {
    let id = assemble_identity(ansatz);
    let mut rows = id.system();
    if let Some(kv) = k_value {
        for r in rows.iter_mut() {
            for e in r.iter_mut() {
                *e = e.eval(K, &int(kv));
            }
        }
    }
    log::debug!("certificate system: {} rows, {} unknowns", rows.len(), ansatz.unknowns());
    nullspace_poly(&rows, ansatz.unknowns(), &param_vars())
}

/// Nullity of the system with `(n, k, c)` set to rational values. The rank
/// over Q(n, k, c) is at least the rank at any point, so this bounds the
/// dimension of the symbolic solution space from above.
pub fn nullity_at_point(ansatz: &Ansatz, point: &[Rational; 3]) -> usize {
    let rows: Vec<Vec<Rational>> = assemble_identity(ansatz)
        .system()
        .iter()
        .map(|r| r.iter().map(|e| e.eval_all(point)).collect())
        .collect();
    crate::linalg::nullspace_rational(&rows, ansatz.unknowns()).len()
}

/// Solve for a certificate with `p_3 ≠ 0`, normalize it and check it with
/// [`verify_certificate`] before returning.
pub fn find_certificate(ansatz: &Ansatz, k_value: Option<i64>) -> Result<Certificate> {
    let basis = solution_space(ansatz, k_value);
    if basis.is_empty() {
        return Err(Error::EmptySolutionSpace);
    }
    let dim = basis.len();
    let mut usable: Vec<Vec<Poly>> = basis.into_iter().filter(|b| !b[3].is_zero()).collect();
    if usable.is_empty() {
        return Err(Error::DegenerateLeading);
    }
    let key = |b: &Vec<Poly>| -> Vec<Vec<u32>> {
        (0..4).rev().map(|i| b[i].leading_term().map(|(e, _)| e.to_vec()).unwrap_or_default()).collect()
    };
    usable.sort_by_key(key);
    let mut x = usable.swap_remove(0);
    if x[3].leading_coeff() < Rational::zero() {
        x = x.iter().map(|e| -e).collect();
    }
    let pv = param_vars();
    let common = x[..4].iter().fold(Poly::zero(&pv), |g, p| gcd(&g, p));
    let normalization = Normalization {
        scheme: "integer coefficients with content 1; p3 leading coefficient positive".into(),
        p_common_factor: common.to_string(),
        solution_dimension: dim,
        k_value,
        ansatz: *ansatz,
    };
    let cert = Certificate::from_unknowns(ansatz, &x, normalization);
    let check = verify_certificate(&cert, 0);
    if !check.ok() {
        return Err(Error::NotCertifiable { remainder: check.first_difference.unwrap_or_default() });
    }
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub exact: bool,
    /// Leading monomial of the nonzero remainder, if the exact check failed.
    pub first_difference: Option<String>,
    pub points_checked: usize,
    pub points_failed: usize,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.exact && self.points_failed == 0
    }
}

fn deriv(r: &RatFn, i: usize) -> RatFn {
    let num = &(&r.num().derivative(i) * r.den()) - &(r.num() * &r.den().derivative(i));
    RatFn::new(num, r.den() * r.den()).unwrap()
}

/// Both sides divided by `F`, built directly from `Q` with the quotient
/// rule; returns `lhs − rhs`.
fn residual(cert: &Certificate) -> RatFn {
    let v = vars();
    let (a, b) = cert.ansatz().div1;
    let (c, d) = cert.ansatz().div2;
    let z = RatFn::from(Poly::var_at(&v, Z));
    let w = RatFn::from(Poly::var_at(&v, W));
    let q = RatFn::new(kernel_cleared(), Poly::var_at(&v, W)).unwrap();
    let half = RatFn::constant(&v, rat(1, 2));
    let n = RatFn::from(Poly::var_at(&v, N));
    let k = RatFn::from(Poly::var_at(&v, K));
    // z ∂_z log F and w ∂_w log F
    let dlog_z = &(&(&(&z * &deriv(&q, Z)) / &q) * &(-&half)) - &n;
    let dlog_w = &(&(&(&w * &deriv(&q, W)) / &q) * &(-&half)) - &k;

    let h1 = &RatFn::from(cert.g1.clone()) / &monomial_zw(a as i64, b as i64);
    let h2 = &RatFn::from(cert.g2.clone()) / &monomial_zw(c as i64, d as i64);
    let t1 = &(&z * &deriv(&h1, Z)) + &(&h1 * &dlog_z);
    let t2 = &(&w * &deriv(&h2, W)) + &(&h2 * &dlog_w);

    let mut lhs = RatFn::zero(&v);
    for i in 0..4 {
        // F(n+i)/F = z^{-i}
        lhs = &lhs + &(&RatFn::from(cert.p[i].clone()) / &monomial_zw(i as i64, 0));
    }
    let mut res = &(&lhs - &t1) - &t2;
    if let Some(kv) = cert.normalization.k_value {
        res = res.eval(K, &int(kv)).unwrap_or(res);
    }
    res
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let num: i64 = rng.gen_range(-30..=30);
        let den: i64 = rng.gen_range(1..=12);
        if num != 0 {
            return rat(num, den);
        }
    }
}

/// Evaluate the uncleared identity (divided by `F`) at one point; `None`
/// on a pole.
fn point_residual(cert: &Certificate, pt: &[Rational; 5]) -> Option<Rational> {
    let [n, k, c, z, w] = pt;
    let (a, b) = cert.ansatz().div1;
    let (cc, d) = cert.ansatz().div2;
    let one = Rational::one();
    let t = &int(2) * c + (&one - c) * (w + w.recip());
    let q = &one - z * &t + z * z;
    if q.is_zero() {
        return None;
    }
    let zq = -(z * &t) + int(2) * z * z;
    let wq = -(z * (&one - c) * (w - w.recip()));
    let at = |p: &Poly| p.eval_all(pt);
    let g1 = at(&cert.g1);
    let g2 = at(&cert.g2);
    let zg1 = z * at(&cert.g1.derivative(Z));
    let wg2 = w * at(&cert.g2.derivative(W));
    let zpow = |e: u32| crate::poly::pow_rat(z, e);
    let wpow = |e: u32| crate::poly::pow_rat(w, e);
    let t1 = (zg1 + &g1 * (int(-(a as i64)) - &zq / (int(2) * &q) - n)) / (zpow(a) * wpow(b));
    let t2 = (wg2 + &g2 * (int(-(d as i64)) - &wq / (int(2) * &q) - k)) / (zpow(cc) * wpow(d));
    let mut lhs = Rational::zero();
    for i in 0..4 {
        lhs += at(&cert.p[i]) / zpow(i as u32);
    }
    Some(lhs - t1 - t2)
}

/// Exact rebuild of the identity plus `points` random rational point
/// evaluations with a fixed seed.
pub fn verify_certificate(cert: &Certificate, seed: u64) -> Verification {
    verify_certificate_with(cert, seed, 20)
}

pub fn verify_certificate_with(cert: &Certificate, seed: u64, points: usize) -> Verification {
    let shape_ok = cert.p.iter().all(|p| p.degree_in(Z).unwrap_or(0) == 0 && p.degree_in(W).unwrap_or(0) == 0)
        && [&cert.g1, &cert.g2]
            .iter()
            .all(|g| g.degree_in(Z).unwrap_or(0) <= cert.ansatz().deg_z && g.degree_in(W).unwrap_or(0) <= cert.ansatz().deg_w)
        && cert.p.iter().any(|p| !p.is_zero());
    let res = residual(cert);
    let exact = shape_ok && res.is_zero();
    let first_difference = if exact {
        None
    } else if !shape_ok {
        Some("degree bounds violated or p identically zero".into())
    } else {
        res.num().leading_term().map(|(e, c)| Poly::monomial(res.num().vars(), e.to_vec(), c.clone()).to_string())
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut failed = 0;
    while checked < points {
        let mut pt: [Rational; 5] = std::array::from_fn(|_| random_rational(&mut rng));
        if let Some(kv) = cert.normalization.k_value {
            pt[K] = int(kv);
        }
        if let Some(r) = point_residual(cert, &pt) {
            checked += 1;
            if !r.is_zero() {
                failed += 1;
            }
        }
    }
    Verification { exact, first_difference, points_checked: checked, points_failed: failed }
}

/// `Σ p_i B_{k,n+i} = 0` from a verified certificate. The common factor of
/// the `p_i` is removed; with a `k`-specialized certificate the result has
/// `k` eliminated.
pub fn rec2_from_certificate(cert: &Certificate) -> Result<Recurrence> {
    let check = verify_certificate_with(cert, 0, 0);
    if !check.exact {
        return Err(Error::NotCertifiable { remainder: check.first_difference.unwrap_or_default() });
    }
    let pv = param_vars();
    let coeffs = cert.p.iter().map(|p| p.embed(&pv)).collect::<Result<Vec<_>>>()?;
    let rec = Recurrence::new(&pv, coeffs, Status::Proved)?;
    match cert.normalization.k_value {
        Some(kv) => rec.specialize("k", &int(kv)),
        None => Ok(rec),
    }
}
