//! Exhaustive search for the `F_q`-rational `k`-planes on `Y_u`.
//!
//! Planes are `(k+1)`-dimensional subspaces of `F_q^{m+1}`, each with a
//! unique RREF basis. Enumeration walks pivot-column sets in lex order and,
//! within a set, the free entries (row-major positions) in lex order, so
//! the output sequence is fixed. Containment is decided symbolically: the
//! pull-back of every form along the plane must be the zero polynomial.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{gaussian_binom, Matrix, PrimeField};
use crate::polyring::HomogPoly;
use crate::sampler::{standard_plane_matrix, CISample};

pub const DEFAULT_PLANE_CAP: u64 = 10_000_000;

/// A `k`-plane in `P^m` as its reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneRREF {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl PlaneRREF {
    /// Canonicalize an arbitrary spanning matrix; errors unless it has full row rank.
    pub fn from_basis(b: &Matrix, field: &PrimeField) -> Result<Self> {
        let (rref, pivots) = b.rref(field);
        if pivots.len() < b.nrows() {
            return Err(Error::RankDeficient { rank: pivots.len(), expected: b.nrows() });
        }
        Ok(Self { basis: rref, pivots })
    }

    pub fn standard(m: usize, k: usize) -> Self {
        Self { basis: standard_plane_matrix(m, k), pivots: (0..=k).collect() }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn k(&self) -> usize {
        self.basis.nrows() - 1
    }

    pub fn m(&self) -> usize {
        self.basis.ncols() - 1
    }
}

/// `[m+1 choose k+1]_q`.
pub fn plane_count(m: usize, k: usize, q: u64) -> BigUint {
    gaussian_binom(m as u32 + 1, k as u32 + 1, q)
}

fn check_cap(m: usize, k: usize, q: u64, cap: u64) -> Result<()> {
    let count = plane_count(m, k, q);
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded { count: count.to_string(), cap });
    }
    Ok(())
}

fn pivot_sets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            go(n, r, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, r, 0, &mut Vec::new(), &mut out);
    out
}

/// All planes with a given pivot set, in lex order of the free entries.
struct PivotCell {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    values: Vec<u64>,
    q: u64,
    m: usize,
    done: bool,
}

impl PivotCell {
    fn new(pivots: Vec<usize>, m: usize, q: u64) -> Self {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..=m).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let values = vec![0; free.len()];
        Self { pivots, free, values, q, m, done: false }
    }
}

impl Iterator for PivotCell {
    type Item = PlaneRREF;

    fn next(&mut self) -> Option<PlaneRREF> {
        if self.done {
            return None;
        }
        let mut basis = Matrix::zeros(self.pivots.len(), self.m + 1);
        for (r, &pc) in self.pivots.iter().enumerate() {
            basis.set(r, pc, 1);
        }
        for (&(r, c), &v) in self.free.iter().zip(&self.values) {
            basis.set(r, c, v);
        }
        // odometer, last position fastest
        self.done = true;
        for v in self.values.iter_mut().rev() {
            *v += 1;
            if *v < self.q {
                self.done = false;
                break;
            }
            *v = 0;
        }
        Some(PlaneRREF { basis, pivots: self.pivots.clone() })
    }
}

/// Every `k`-plane of `P^m(F_q)` exactly once, in the fixed order.
pub fn enumerate_planes(m: usize, k: usize, q: u64, cap: u64) -> Result<impl Iterator<Item = PlaneRREF>> {
    PrimeField::new(q)?;
    if k >= m {
        return Err(Error::InvalidParams(format!("need k < m, got k={k}, m={m}")));
    }
    check_cap(m, k, q, cap)?;
    Ok(pivot_sets(m + 1, k + 1).into_iter().flat_map(move |piv| PivotCell::new(piv, m, q)))
}

/// Small fixed set of plane points used to reject non-containment cheaply.
fn probe_points(k: usize) -> Vec<Vec<u64>> {
    let mut pts: Vec<Vec<u64>> = (0..=k)
        .map(|r| {
            let mut z = vec![0; k + 1];
            z[r] = 1;
            z
        })
        .collect();
    pts.push(vec![1; k + 1]);
    pts.push((1..=k as u64 + 1).collect());
    pts
}

/// True iff every form vanishes identically on the plane spanned by the rows of `b`.
pub fn contains_plane_forms(forms: &[HomogPoly], b: &Matrix) -> bool {
    let Some(first) = forms.first() else { return true };
    let f = first.field();
    let k = b.nrows() - 1;
    for z in probe_points(k) {
        let y: Vec<u64> = (0..b.ncols())
            .map(|j| (0..=k).fold(0, |acc, r| f.add(acc, f.mul(f.reduce(z[r]), b.get(r, j)))))
            .collect();
        if forms.iter().any(|g| g.evaluate(&y) != 0) {
            return false;
        }
    }
    forms.iter().all(|g| g.substitute_unchecked(b).is_zero())
}

pub fn contains_plane(sample: &CISample, plane: &PlaneRREF) -> bool {
    contains_plane_forms(sample.forms(), plane.basis())
}

/// The `F_q`-rational points of `F_k(Y_u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoResult {
    pub planes: Vec<PlaneRREF>,
    pub contains_standard: bool,
    pub count: usize,
}

/// Search all planes for those on `V(forms)`, in enumeration order.
pub fn fano_points_forms(forms: &[HomogPoly], m: usize, k: usize, q: u64, cap: u64) -> Result<FanoResult> {
    PrimeField::new(q)?;
    if k >= m {
        return Err(Error::InvalidParams(format!("need k < m, got k={k}, m={m}")));
    }
    check_cap(m, k, q, cap)?;
    let planes: Vec<PlaneRREF> = pivot_sets(m + 1, k + 1)
        .into_par_iter()
        .flat_map_iter(|piv| PivotCell::new(piv, m, q).filter(|pl| contains_plane_forms(forms, pl.basis())))
        .collect();
    let standard = PlaneRREF::standard(m, k);
    Ok(FanoResult { contains_standard: planes.contains(&standard), count: planes.len(), planes })
}

/// Search over the sample's own field.
pub fn fano_points(sample: &CISample, cap: u64) -> Result<FanoResult> {
    let params = sample.params();
    fano_points_forms(sample.forms(), params.m(), params.k(), sample.field().modulus(), cap)
}

/// Serializable view of a plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneRecord {
    pub rows: Vec<Vec<u64>>,
}

impl From<&PlaneRREF> for PlaneRecord {
    fn from(p: &PlaneRREF) -> Self {
        Self { rows: p.basis.to_rows() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::Parameters;
    use crate::polyring::Monomial;
    use crate::sampler::sample_ci;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        assert_eq!(enumerate_planes(3, 1, 2, DEFAULT_PLANE_CAP).unwrap().count(), 35);
        assert_eq!(enumerate_planes(3, 1, 3, DEFAULT_PLANE_CAP).unwrap().count(), 130);
        assert_eq!(enumerate_planes(2, 0, 2, DEFAULT_PLANE_CAP).unwrap().count(), 7);
    }

    #[test]
    fn enumeration_is_canonical_and_complete() {
        for q in [2u64, 3] {
            for m in 1..=4usize {
                for k in 0..m {
                    let f = PrimeField::new(q).unwrap();
                    let planes: Vec<PlaneRREF> = enumerate_planes(m, k, q, DEFAULT_PLANE_CAP).unwrap().collect();
                    let set: HashSet<&PlaneRREF> = planes.iter().collect();
                    assert_eq!(set.len(), planes.len());
                    assert_eq!(BigUint::from(planes.len()), plane_count(m, k, q));
                    for pl in planes.iter().take(50) {
                        assert_eq!(&PlaneRREF::from_basis(pl.basis(), &f).unwrap(), pl);
                    }
                }
            }
        }
    }

    #[test]
    fn cap_refusal() {
        let err = enumerate_planes(4, 1, 7, 1000).err().unwrap();
        assert!(matches!(err, Error::CapExceeded { cap: 1000, .. }));
    }

    #[test]
    fn first_plane_is_standard() {
        let first = enumerate_planes(4, 1, 5, DEFAULT_PLANE_CAP).unwrap().next().unwrap();
        assert_eq!(first, PlaneRREF::standard(4, 1));
    }

    #[test]
    fn containment_examples() {
        let f = PrimeField::new(5).unwrap();
        // hyperplane y2 = 0 against the line {y0 = y3 = 0}... not inside
        let g = vec![HomogPoly::var(f, 4, 2)];
        let line = PlaneRREF::from_basis(&Matrix::from_rows(&[vec![0, 1, 0, 0], vec![0, 0, 1, 0]]), &f).unwrap();
        assert!(!contains_plane_forms(&g, line.basis()));

        // y0 y3 - y1 y2 contains {y0 = y1 = 0}
        let quad = HomogPoly::from_terms(
            f,
            4,
            2,
            [(Monomial::new(vec![1, 0, 0, 1]), 1), (Monomial::new(vec![0, 1, 1, 0]), 4)],
        )
        .unwrap();
        let line = PlaneRREF::from_basis(&Matrix::from_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]), &f).unwrap();
        assert!(contains_plane_forms(std::slice::from_ref(&quad), line.basis()));
        // the smooth quadric surface has 2(q+1) lines over F_q
        assert_eq!(fano_points_forms(&[quad], 3, 1, 5, DEFAULT_PLANE_CAP).unwrap().count, 12);
    }

    #[test]
    fn symbolic_not_pointwise() {
        // y0^2 y1 - y0 y1^2 vanishes at every F_2 point of the line {y2=y3=0}
        // without vanishing identically
        let f = PrimeField::new(2).unwrap();
        let g = HomogPoly::from_terms(
            f,
            4,
            3,
            [(Monomial::new(vec![2, 1, 0, 0]), 1), (Monomial::new(vec![1, 2, 0, 0]), 1)],
        )
        .unwrap();
        let b = PlaneRREF::standard(3, 1);
        for z in [[0u64, 1], [1, 0], [1, 1]] {
            assert_eq!(g.evaluate(&[z[0], z[1], 0, 0]), 0);
        }
        assert!(!contains_plane_forms(&[g], b.basis()));
    }

    #[test]
    fn sampler_output_contains_standard() {
        let params = Parameters::new(3, 1, vec![4]).unwrap();
        for seed in 0..5 {
            let s = sample_ci(&params, 5, seed).unwrap();
            assert!(contains_plane(&s, &PlaneRREF::standard(3, 1)));
            let r = fano_points(&s, DEFAULT_PLANE_CAP).unwrap();
            assert!(r.contains_standard);
            assert!(r.count >= 1);
        }
    }

    #[test]
    fn reducible_surface_has_many_lines() {
        // g = y2 * y3 * (y0^2 + y1^2 + y2^2 + y3^2), a union containing two planes
        let params = Parameters::new(3, 1, vec![4]).unwrap();
        let f = PrimeField::new(3).unwrap();
        let quad = (0..4).fold(HomogPoly::zero(f, 4, 2), |acc, j| acc.add(&HomogPoly::var(f, 4, j).pow(2)));
        let r = HomogPoly::var(f, 4, 2).mul(&HomogPoly::var(f, 4, 3)).mul(&quad);
        let s = CISample::from_parts(&params, f, CISample::zero_table(&params), vec![r]).unwrap();
        let res = fano_points(&s, DEFAULT_PLANE_CAP).unwrap();
        // each plane y2=0, y3=0 carries q^2+q+1 = 13 lines, sharing one
        assert!(res.count >= 25, "{}", res.count);
        assert!(res.contains_standard);
    }

    #[test]
    fn containment_is_coordinate_free() {
        let params = Parameters::new(3, 1, vec![3]).unwrap();
        let q = 5u64;
        let f = PrimeField::new(q).unwrap();
        let t = Matrix::from_rows(&[vec![1, 2, 0, 1], vec![0, 1, 3, 0], vec![4, 0, 1, 2], vec![0, 1, 1, 1]]);
        let t_inv = t.inverse(&f).unwrap();
        for seed in 0..4 {
            let s = sample_ci(&params, q, seed).unwrap();
            let moved: Vec<HomogPoly> = s.forms().iter().map(|g| g.substitute_linear(&t).unwrap()).collect();
            for pl in enumerate_planes(3, 1, q, DEFAULT_PLANE_CAP).unwrap().step_by(7) {
                let pl2 = PlaneRREF::from_basis(&pl.basis().mul(&f, &t_inv), &f).unwrap();
                assert_eq!(contains_plane(&s, &pl), contains_plane_forms(&moved, pl2.basis()));
            }
        }
    }
}
