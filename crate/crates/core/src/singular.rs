//! Jacobian of `Y_u` along the standard plane.
//!
//! On `Pi` the Jacobian `(dg_i/dy_j)` has the block form `(0 | P)` with
//! `P = (p_i^(h))`, an `s x (m-k)` matrix of forms in `y_0..y_k`. The
//! singular locus of `Y_u` along `Pi` is where `P` drops rank. Its
//! dimension is estimated from rational point counts at several primes;
//! this is a heuristic and the raw counts always travel with the estimate.
//! Points of `Y_u` away from `Pi` are not examined.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{Matrix, PrimeField};
use crate::invariants::{classify, Parameters};
use crate::polyring::HomogPoly;
use crate::sampler::{sample_ci, CISample};

pub const DEFAULT_POINT_CAP: u64 = 50_000;

/// Point lists are stored in certificates only up to this count.
pub const POINT_LIST_LIMIT: usize = 100;

/// The block `P` of the Jacobian restricted to the standard plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianOnPlane {
    s: usize,
    m: usize,
    k: usize,
    /// `entries[i][h - k - 1] = p_i^(h)`.
    entries: Vec<Vec<HomogPoly>>,
}

impl JacobianOnPlane {
    pub fn entry(&self, i: usize, h: usize) -> &HomogPoly {
        &self.entries[i][h - self.k - 1]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.s, self.m - self.k)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> PrimeField {
        self.entries[0][0].field()
    }

    /// `P(y)` as a numeric matrix.
    pub fn evaluate(&self, y: &[u64]) -> Matrix {
        let rows: Vec<Vec<u64>> = self.entries.iter().map(|row| row.iter().map(|e| e.evaluate(y)).collect()).collect();
        Matrix::from_rows(&rows)
    }
}

/// Extract `P` from the coefficient table and cross-check it against
/// differentiating `g_i` and restricting to the plane.
pub fn jacobian_on_plane(sample: &CISample) -> Result<JacobianOnPlane> {
    let params = sample.params();
    let (m, k, s) = (params.m(), params.k(), params.s());
    let mut entries = Vec::with_capacity(s);
    for (i, g) in sample.forms().iter().enumerate() {
        for j in 0..=k {
            let dj = g.partial_derivative(j).restrict_to_standard_plane(k);
            if !dj.is_zero() {
                return Err(Error::Consistency(format!("d g_{} / d y_{j} does not vanish on the plane: {dj}", i + 1)));
            }
        }
        let mut row = Vec::with_capacity(m - k);
        for h in k + 1..=m {
            let from_table = sample.p_poly(i, h);
            let from_derivative = g.partial_derivative(h).restrict_to_standard_plane(k);
            if from_table != from_derivative && !(from_table.is_zero() && from_derivative.is_zero()) {
                return Err(Error::Consistency(format!(
                    "p_{}^({h}) = {from_table} but d g / d y_{h} restricts to {from_derivative}",
                    i + 1
                )));
            }
            row.push(from_table);
        }
        entries.push(row);
    }
    Ok(JacobianOnPlane { s, m, k, entries })
}

/// Canonical representatives of `P^k(F_p)`: first nonzero coordinate is 1.
pub fn projective_points(k: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    (0..=k).flat_map(move |lead| {
        let free = k - lead;
        let total = p.pow(free as u32);
        (0..total).map(move |mut n| {
            let mut y = vec![0u64; k + 1];
            y[lead] = 1;
            for pos in (lead + 1..=k).rev() {
                y[pos] = n % p;
                n /= p;
            }
            y
        })
    })
}

/// Points of `P^k(F_p)` where `P(y)` has rank below `s`.
pub fn rank_drop_points(jac: &JacobianOnPlane, cap: u64) -> Result<Vec<Vec<u64>>> {
    let f = jac.field();
    let p = f.modulus();
    let k = jac.k;
    let total: u128 = (0..=k as u32).map(|e| (p as u128).pow(e)).sum();
    if total > cap as u128 {
        return Err(Error::CapExceeded { count: total.to_string(), cap });
    }
    Ok(projective_points(k, p).filter(|y| jac.evaluate(y).rank(&f) < jac.s).collect())
}

/// Whether two binary forms have no common root over the algebraic
/// closure, via full rank of their Sylvester matrix.
pub fn binary_forms_coprime(a: &HomogPoly, b: &HomogPoly) -> bool {
    assert_eq!(a.num_vars(), 2);
    assert_eq!(b.num_vars(), 2);
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let f = a.field();
    let (da, db) = (a.degree() as usize, b.degree() as usize);
    let n = da + db;
    if n == 0 {
        return true;
    }
    // coefficient of y0^(d-e) y1^e at position e
    let ca: Vec<u64> = (0..=da).map(|e| a.coeff(&crate::polyring::Monomial::new(vec![(da - e) as u32, e as u32]))).collect();
    let cb: Vec<u64> = (0..=db).map(|e| b.coeff(&crate::polyring::Monomial::new(vec![(db - e) as u32, e as u32]))).collect();
    let mut syl = Matrix::zeros(n, n);
    for r in 0..db {
        for (e, &c) in ca.iter().enumerate() {
            syl.set(r, r + e, c);
        }
    }
    for r in 0..da {
        for (e, &c) in cb.iter().enumerate() {
            syl.set(db + r, r + e, c);
        }
    }
    syl.rank(&f) == n
}

/// Dimension read off from point counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingDimEstimate {
    Dim(i64),
    Inconclusive,
}

/// Counts over several primes and the resulting estimate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularReport {
    pub primes: Vec<u64>,
    pub counts: Vec<usize>,
    /// Per-prime point lists, omitted when longer than `POINT_LIST_LIMIT`.
    pub points: Vec<Option<Vec<Vec<u64>>>>,
    pub estimate: SingDimEstimate,
    pub expected: i64,
    pub matches: bool,
}

/// `count(p2)` is no larger than `max(1.5 * count(p1), count(p1) + 3)`.
fn bounded(c1: usize, c2: usize) -> bool {
    2 * c2 <= 3 * c1 || c2 <= c1 + 3
}

/// Whether the rank-drop locus is forced to be nonempty over the
/// algebraic closure. For `s = 1` it is the common zero set of `m - k`
/// forms in `P^k`, nonempty when `m - k <= k`.
fn locus_forced_nonempty(params: &Parameters) -> bool {
    params.s() == 1 && params.m() - params.k() <= params.k()
}

/// Turn per-prime counts (primes ascending) into a dimension estimate.
pub fn estimate_from_counts(params: &Parameters, primes: &[u64], counts: &[usize]) -> SingDimEstimate {
    assert_eq!(primes.len(), counts.len());
    if counts.iter().all(|&c| c == 0) {
        return SingDimEstimate::Dim(if locus_forced_nonempty(params) { 0 } else { -1 });
    }
    let mut verdict: Option<i64> = None;
    for w in 0..counts.len() - 1 {
        let (p1, p2) = (primes[w] as f64, primes[w + 1] as f64);
        let (c1, c2) = (counts[w], counts[w + 1]);
        let e = if bounded(c1, c2) {
            0
        } else if c1 == 0 {
            return SingDimEstimate::Inconclusive;
        } else {
            let e = ((c2 as f64 / c1 as f64).ln() / (p2 / p1).ln()).round() as i64;
            if e < 1 {
                return SingDimEstimate::Inconclusive;
            }
            e
        };
        match verdict {
            None => verdict = Some(e),
            Some(v) if v == e => {}
            Some(_) => return SingDimEstimate::Inconclusive,
        }
    }
    SingDimEstimate::Dim(verdict.expect("at least two primes"))
}

/// Sample `Y_u` from `seed` at each prime, count rank-drop points on the
/// plane, and estimate the dimension of the singular locus along it.
pub fn sing_dim_estimate(params: &Parameters, seed: u64, primes: &[u64], cap: u64) -> Result<SingularReport> {
    if primes.len() < 2 {
        return Err(Error::InvalidParams("need at least two primes".into()));
    }
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    if primes.len() < 2 {
        return Err(Error::InvalidParams("need at least two distinct primes".into()));
    }
    let mut counts = Vec::new();
    let mut points = Vec::new();
    for &p in &primes {
        let sample = sample_ci(params, p, seed)?;
        let jac = jacobian_on_plane(&sample)?;
        let pts = rank_drop_points(&jac, cap)?;
        counts.push(pts.len());
        points.push((pts.len() <= POINT_LIST_LIMIT).then_some(pts));
    }
    let estimate = estimate_from_counts(params, &primes, &counts);
    let expected = classify(params).expected_sing_dim;
    Ok(SingularReport { matches: estimate == SingDimEstimate::Dim(expected), primes, counts, points, estimate, expected })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: usize, k: usize, d: &[u32]) -> Parameters {
        Parameters::new(m, k, d.to_vec()).unwrap()
    }

    #[test]
    fn one_hot_jacobian() {
        let params = p(3, 1, &[4]);
        let f = PrimeField::new(101).unwrap();
        let mut c = CISample::zero_table(&params);
        c[0][0][0] = 1;
        let s = CISample::from_parts(&params, f, c, CISample::zero_residuals(&params, f)).unwrap();
        let jac = jacobian_on_plane(&s).unwrap();
        assert_eq!(jac.entry(0, 2).to_string(), "y0^3");
        assert!(jac.entry(0, 3).is_zero());
    }

    #[test]
    fn routes_agree_on_random_samples() {
        for params in [p(3, 1, &[4]), p(4, 2, &[3]), p(4, 2, &[2, 2]), p(5, 1, &[2, 2, 2]), p(5, 2, &[3])] {
            for seed in 0..10 {
                // p = 3 exercises derivatives with exponents divisible by p
                for prime in [3u64, 101] {
                    jacobian_on_plane(&sample_ci(&params, prime, seed).unwrap()).unwrap();
                }
            }
        }
    }

    #[test]
    fn projective_point_count() {
        assert_eq!(projective_points(2, 5).count(), 31);
        assert_eq!(projective_points(1, 7).count(), 8);
        let pts: Vec<_> = projective_points(1, 2).collect();
        assert_eq!(pts, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn zero_row_drops_everywhere() {
        let params = p(4, 2, &[3]);
        let f = PrimeField::new(5).unwrap();
        let s = CISample::from_parts(&params, f, CISample::zero_table(&params), CISample::zero_residuals(&params, f)).unwrap();
        let jac = jacobian_on_plane(&s).unwrap();
        assert_eq!(rank_drop_points(&jac, DEFAULT_POINT_CAP).unwrap().len(), 31);
    }

    #[test]
    fn binary_cubics_without_common_root_give_empty_locus() {
        let params = p(3, 1, &[4]);
        let mut empty = 0;
        for seed in 0..20 {
            let s = sample_ci(&params, 101, seed).unwrap();
            let jac = jacobian_on_plane(&s).unwrap();
            let pts = rank_drop_points(&jac, DEFAULT_POINT_CAP).unwrap();
            if binary_forms_coprime(jac.entry(0, 2), jac.entry(0, 3)) {
                assert!(pts.is_empty());
                empty += 1;
            }
        }
        assert!(empty >= 18);
    }

    #[test]
    fn sylvester_detects_common_root() {
        let f = PrimeField::new(11).unwrap();
        let y0 = HomogPoly::var(f, 2, 0);
        let y1 = HomogPoly::var(f, 2, 1);
        let a = y0.mul(&y1);
        let b = y0.mul(&y0.add(&y1));
        assert!(!binary_forms_coprime(&a, &b));
        let c = y0.pow(2).add(&y1.pow(2));
        assert!(binary_forms_coprime(&a, &c));
    }

    #[test]
    fn conics_obey_bezout() {
        let params = p(4, 2, &[3]);
        for seed in 0..10 {
            let jac = jacobian_on_plane(&sample_ci(&params, 101, seed).unwrap()).unwrap();
            assert!(rank_drop_points(&jac, DEFAULT_POINT_CAP).unwrap().len() <= 4);
        }
    }

    #[test]
    fn estimator_rules() {
        let smooth = p(3, 1, &[4]);
        assert_eq!(estimate_from_counts(&smooth, &[101, 211], &[0, 0]), SingDimEstimate::Dim(-1));
        let conics = p(4, 2, &[3]);
        assert_eq!(estimate_from_counts(&conics, &[101, 211], &[0, 0]), SingDimEstimate::Dim(0));
        assert_eq!(estimate_from_counts(&conics, &[101, 211], &[2, 4]), SingDimEstimate::Dim(0));
        let curve = p(4, 2, &[2, 2]);
        assert_eq!(estimate_from_counts(&curve, &[101, 211], &[102, 212]), SingDimEstimate::Dim(1));
        assert_eq!(estimate_from_counts(&curve, &[101, 211], &[0, 212]), SingDimEstimate::Inconclusive);
        assert_eq!(estimate_from_counts(&curve, &[101, 211, 401], &[102, 212, 3]), SingDimEstimate::Inconclusive);
    }

    #[test]
    fn point_cap() {
        let params = p(4, 2, &[3]);
        let jac = jacobian_on_plane(&sample_ci(&params, 211, 0).unwrap()).unwrap();
        assert!(matches!(rank_drop_points(&jac, 1000), Err(Error::CapExceeded { .. })));
    }
}
