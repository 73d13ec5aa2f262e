//! The coefficient matrix `C` of the normal-bundle map
//! `sigma: H^0(N_{Pi/P^m}) -> H^0(N_{Y/P^m}|_Pi)` and its rank.
//!
//! Columns are the unknowns `a_{h,j}` (`k+1 <= h <= m`, `0 <= j <= k`) in
//! lex order on `(h, j)`. Rows are `(i, nu)` with `|nu| = d_i`, `i`-major,
//! `nu` descending lex. The entry at `((i, nu), (h, j))` is
//! `c^(h)_{i, nu - e_j}`, zero when `nu - e_j` has a negative entry.
//! `sigma` is injective exactly when `C` has full column rank, and then the
//! nullity `h^0(N_{Pi/Y})` is zero.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{Matrix, PrimeField};
use crate::invariants::{t_invariant, Parameters};
use crate::polyring::{monomials_lex, HomogPoly, Monomial, MonomialBasis};
use crate::sampler::{draw, p_basis, rng_for, CISample};

pub const ROW_ORDER: &str = "i-major-lex";
pub const COL_ORDER: &str = "(h,j)-lex";

/// Largest leading submatrix expanded symbolically.
pub const SYMBOLIC_CAP: usize = 8;

/// `C` with its row and column labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaMatrix {
    rows: Vec<(usize, Monomial)>,
    cols: Vec<(usize, usize)>,
    matrix: Matrix,
}

/// Row labels `(i, nu)` in `i`-major, descending-lex order.
pub fn row_labels(params: &Parameters) -> Vec<(usize, Monomial)> {
    params
        .degrees()
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| monomials_lex(params.k() + 1, d).into_iter().map(move |nu| (i, nu)))
        .collect()
}

/// Column labels `(h, j)` in lex order.
pub fn col_labels(params: &Parameters) -> Vec<(usize, usize)> {
    (params.k() + 1..=params.m())
        .flat_map(|h| (0..=params.k()).map(move |j| (h, j)))
        .collect()
}

pub fn build_sigma_matrix(sample: &CISample) -> SigmaMatrix {
    let params = sample.params();
    let rows = row_labels(params);
    let cols = col_labels(params);
    let bases: Vec<MonomialBasis> = (0..params.s()).map(|i| MonomialBasis::from_list(p_basis(params, i))).collect();
    let mut matrix = Matrix::zeros(rows.len(), cols.len());
    for (r, (i, nu)) in rows.iter().enumerate() {
        for (c, &(h, j)) in cols.iter().enumerate() {
            if let Some(mu) = nu.shift_down(j) {
                matrix.set(r, c, sample.coeff(*i, h, &mu, &bases[*i]));
            }
        }
    }
    SigmaMatrix { rows, cols, matrix }
}

impl SigmaMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rows(&self) -> &[(usize, Monomial)] {
        &self.rows
    }

    pub fn cols(&self) -> &[(usize, usize)] {
        &self.cols
    }

    /// The leading square block: the first `(k+1)(m-k)` rows.
    pub fn leading_square(&self) -> Option<Matrix> {
        let n = self.cols.len();
        (self.rows.len() >= n).then(|| self.matrix.select_rows(0..n))
    }
}

/// Exact rank over `F_p`.
pub fn rank_ff(matrix: &Matrix, p: u64) -> Result<usize> {
    Ok(matrix.rank(&PrimeField::new(p)?))
}

/// `sigma(A) = (sum_{h,j} a_{h,j} y_j p_i^(h))_i`, computed by polynomial
/// arithmetic and flattened to coefficients on the descending-lex bases of
/// degree `d_i` in `y_0..y_k`. `a` is indexed like the columns of `C`.
pub fn sigma_apply(sample: &CISample, a: &[u64]) -> Vec<u64> {
    let params = sample.params();
    let (m, k) = (params.m(), params.k());
    let f = sample.field();
    assert_eq!(a.len(), (k + 1) * (m - k));
    let mut out = Vec::new();
    for (i, &d) in params.degrees().iter().enumerate() {
        let mut acc = HomogPoly::zero(f, k + 1, d);
        for h in k + 1..=m {
            let coeffs = &a[(h - k - 1) * (k + 1)..(h - k) * (k + 1)];
            let phi = HomogPoly::linear(f, coeffs);
            acc = acc.add(&phi.mul(&sample.p_poly(i, h)));
        }
        let basis = MonomialBasis::lex(k + 1, d);
        out.extend(acc.coefficient_vector(&basis).expect("degree-d form in k+1 variables"));
    }
    out
}

/// ChaCha stream used for the random test vector, disjoint from sampling attempts.
const CHECK_STREAM: u64 = 1 << 40;

/// Compare `C * a` with `sigma(a)` for a random `a` drawn from `seed`.
pub fn functional_consistency(sample: &CISample, seed: u64) -> bool {
    let c = build_sigma_matrix(sample);
    let p = sample.field().modulus();
    let mut rng = rng_for(seed, CHECK_STREAM);
    let a: Vec<u64> = (0..c.cols.len()).map(|_| draw(&mut rng, p)).collect();
    c.matrix.mul_vec(&sample.field(), &a) == sigma_apply(sample, &a)
}

/// Rank certificate for one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rank: usize,
    /// `h^0(N_{Pi/Y})`.
    pub nullity: usize,
    pub is_rigid: bool,
}

pub fn rigidity_check(sample: &CISample) -> RigidityReport {
    let c = build_sigma_matrix(sample);
    let rank = c.matrix.rank(&sample.field());
    let cols = c.cols.len();
    RigidityReport { rank, nullity: cols - rank, is_rigid: rank == cols }
}

/// An indeterminate `c^(h)_{i,mu}` (zero-based `i`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Indeterminate {
    pub h: usize,
    pub i: usize,
    pub mu: Vec<u32>,
}

impl std::fmt::Display for Indeterminate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mu: Vec<String> = self.mu.iter().map(u32::to_string).collect();
        write!(f, "c[h={},i={},mu=({})]", self.h, self.i + 1, mu.join(","))
    }
}

/// Result of expanding `det` of the leading square block symbolically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantReport {
    pub size: usize,
    pub num_terms: usize,
    pub det_is_nonzero_poly: bool,
    /// Rendered greatest monomial, empty when the determinant vanishes.
    pub leading_monomial: String,
    pub leading_coeff: i64,
}

impl DeterminantReport {
    pub fn leading_coeff_is_unit(&self) -> bool {
        self.leading_coeff.abs() == 1
    }
}

/// Integer polynomial in the indeterminates: exponent vector (dense, in
/// ascending `(h, i, mu)` index order) to coefficient.
pub type IntPoly = BTreeMap<Vec<u32>, i64>;

/// All indeterminates `c^(h)_{i,mu}` sorted ascending by `(h, i, mu)`, with
/// `mu` compared as an integer tuple.
pub fn indeterminates(params: &Parameters) -> Vec<Indeterminate> {
    let mut vars: Vec<Indeterminate> = (params.k() + 1..=params.m())
        .flat_map(|h| {
            (0..params.s()).flat_map(move |i| {
                p_basis(params, i).into_iter().map(move |mu| Indeterminate { h, i, mu: mu.exponents().to_vec() })
            })
        })
        .collect();
    vars.sort();
    vars
}

/// Square matrix of indeterminate indices, `None` for a zero entry.
pub type SymbolicMatrix = Vec<Vec<Option<usize>>>;

/// Symbolic leading square block: each entry is an indeterminate index or
/// `None` for an improper shift.
pub fn symbolic_leading_square(params: &Parameters) -> Result<(Vec<Indeterminate>, SymbolicMatrix)> {
    let n = params.grassmannian_dim();
    if t_invariant(params).is_negative() {
        return Err(Error::Regime(format!("t < 0 for {params}: fewer rows than columns")));
    }
    if n > SYMBOLIC_CAP {
        return Err(Error::TooLarge(format!("leading block is {n}x{n}, cap is {SYMBOLIC_CAP}x{SYMBOLIC_CAP}")));
    }
    let vars = indeterminates(params);
    let pos: BTreeMap<&Indeterminate, usize> = vars.iter().enumerate().map(|(n, v)| (v, n)).collect();
    let cols = col_labels(params);
    let entries = row_labels(params)
        .into_iter()
        .take(n)
        .map(|(i, nu)| {
            cols.iter()
                .map(|&(h, j)| {
                    nu.shift_down(j).map(|mu| pos[&Indeterminate { h, i, mu: mu.exponents().to_vec() }])
                })
                .collect()
        })
        .collect();
    Ok((vars, entries))
}

/// Leibniz expansion of a matrix whose entries are single indeterminates.
pub fn symbolic_det(entries: &[Vec<Option<usize>>], num_vars: usize) -> IntPoly {
    fn go(
        entries: &[Vec<Option<usize>>],
        row: usize,
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        mon: &mut Vec<u32>,
        out: &mut IntPoly,
    ) {
        let n = entries.len();
        if row == n {
            let inversions = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            let e = out.entry(mon.clone()).or_insert(0);
            *e += sign;
            if *e == 0 {
                out.remove(mon);
            }
            return;
        }
        for col in 0..n {
            if used[col] {
                continue;
            }
            let Some(v) = entries[row][col] else { continue };
            used[col] = true;
            perm.push(col);
            mon[v] += 1;
            go(entries, row + 1, used, perm, mon, out);
            mon[v] -= 1;
            perm.pop();
            used[col] = false;
        }
    }
    let n = entries.len();
    let mut out = IntPoly::new();
    go(entries, 0, &mut vec![false; n], &mut Vec::with_capacity(n), &mut vec![0; num_vars], &mut out);
    out
}

/// The greatest monomial: exponent vectors compared position by position
/// along ascending indeterminate order, larger exponent wins.
pub fn leading_term(det: &IntPoly) -> Option<(&Vec<u32>, i64)> {
    // BTreeMap order on Vec<u32> is exactly this comparison
    det.iter().next_back().map(|(m, &c)| (m, c))
}

pub fn symbolic_det_leading(params: &Parameters) -> Result<DeterminantReport> {
    let (vars, entries) = symbolic_leading_square(params)?;
    let det = symbolic_det(&entries, vars.len());
    let (leading_monomial, leading_coeff) = match leading_term(&det) {
        Some((mon, c)) => {
            let parts: Vec<String> = mon
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { vars[v].to_string() } else { format!("{}^{e}", vars[v]) })
                .collect();
            (parts.join("*"), c)
        }
        None => (String::new(), 0),
    };
    Ok(DeterminantReport {
        size: entries.len(),
        num_terms: det.len(),
        det_is_nonzero_poly: !det.is_empty(),
        leading_monomial,
        leading_coeff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::sample_ci;

    fn p(m: usize, k: usize, d: &[u32]) -> Parameters {
        Parameters::new(m, k, d.to_vec()).unwrap()
    }

    fn one_hot() -> CISample {
        let params = p(3, 1, &[4]);
        let f = PrimeField::new(1009).unwrap();
        let mut c = CISample::zero_table(&params);
        c[0][0][0] = 1; // c^(2)_{1,(3,0)}
        CISample::from_parts(&params, f, c, CISample::zero_residuals(&params, f)).unwrap()
    }

    #[test]
    fn shape() {
        let s = sample_ci(&p(3, 1, &[4]), 1009, 1).unwrap();
        let c = build_sigma_matrix(&s);
        assert_eq!((c.matrix().nrows(), c.matrix().ncols()), (5, 4));
        assert_eq!(c.cols(), &[(2, 0), (2, 1), (3, 0), (3, 1)]);
        let s = sample_ci(&p(5, 1, &[2, 2, 2]), 1009, 1).unwrap();
        let c = build_sigma_matrix(&s);
        assert_eq!((c.matrix().nrows(), c.matrix().ncols()), (9, 8));
    }

    #[test]
    fn one_hot_entries() {
        let c = build_sigma_matrix(&one_hot());
        let nz: Vec<(usize, usize)> = (0..5)
            .flat_map(|r| (0..4).map(move |col| (r, col)))
            .filter(|&(r, col)| c.matrix().get(r, col) != 0)
            .collect();
        // rows nu=(4,0) and nu=(3,1); columns (2,0) and (2,1)
        assert_eq!(nz, vec![(0, 0), (1, 1)]);
        assert_eq!(c.rows()[0].1, Monomial::new(vec![4, 0]));
        assert_eq!(c.rows()[1].1, Monomial::new(vec![3, 1]));
        assert_eq!(rank_ff(c.matrix(), 1009).unwrap(), 2);
    }

    #[test]
    fn zero_sample() {
        let params = p(3, 1, &[4]);
        let f = PrimeField::new(1009).unwrap();
        let z = CISample::from_parts(&params, f, CISample::zero_table(&params), CISample::zero_residuals(&params, f)).unwrap();
        assert!(build_sigma_matrix(&z).matrix().is_zero());
        assert_eq!(rigidity_check(&z), RigidityReport { rank: 0, nullity: 4, is_rigid: false });
    }

    #[test]
    fn hand_rigid_example() {
        // p^(2) = y0^3, p^(3) = y1^3
        let params = p(3, 1, &[4]);
        let f = PrimeField::new(1009).unwrap();
        let mut c = CISample::zero_table(&params);
        c[0][0][0] = 1;
        c[0][1][3] = 1;
        let s = CISample::from_parts(&params, f, c, CISample::zero_residuals(&params, f)).unwrap();
        assert!(rigidity_check(&s).is_rigid);
    }

    #[test]
    fn cubic_threefold_nullity() {
        let params = p(4, 1, &[3]);
        for seed in 0..10 {
            let r = rigidity_check(&sample_ci(&params, 1009, seed).unwrap());
            assert!(r.nullity >= 2);
        }
    }

    #[test]
    fn matrix_matches_functional_form() {
        let params = p(4, 2, &[3]);
        let s = sample_ci(&params, 101, 5).unwrap();
        let c = build_sigma_matrix(&s);
        for seed in 0..20u64 {
            let a: Vec<u64> = (0..c.cols().len() as u64).map(|x| (x * 31 + seed * 17 + 3) % 101).collect();
            assert_eq!(c.matrix().mul_vec(&s.field(), &a), sigma_apply(&s, &a));
        }
    }

    #[test]
    fn residuals_do_not_matter() {
        let s = sample_ci(&p(3, 1, &[4]), 1009, 8).unwrap();
        let s2 = s.with_fresh_residuals(99).unwrap();
        assert_ne!(s.forms(), s2.forms());
        assert_eq!(build_sigma_matrix(&s), build_sigma_matrix(&s2));
    }

    #[test]
    fn symbolic_small_cases() {
        let r = symbolic_det_leading(&p(3, 1, &[3])).unwrap();
        assert_eq!(r.size, 4);
        assert!(r.det_is_nonzero_poly);
        assert!(r.leading_coeff_is_unit(), "{r:?}");
        assert!(symbolic_det_leading(&p(4, 1, &[3])).is_err());
        assert!(matches!(symbolic_det_leading(&p(6, 2, &[4])), Err(Error::TooLarge(_))));
    }

    #[test]
    fn det_of_known_matrix() {
        // [[x0, x1], [x2, x3]] -> x0 x3 - x1 x2
        let e = vec![vec![Some(0), Some(1)], vec![Some(2), Some(3)]];
        let d = symbolic_det(&e, 4);
        assert_eq!(d.len(), 2);
        assert_eq!(d[&vec![1, 0, 0, 1]], 1);
        assert_eq!(d[&vec![0, 1, 1, 0]], -1);
        assert_eq!(leading_term(&d), Some((&vec![1, 0, 0, 1], 1)));
        // repeated variable on the diagonal: x0^2 - x0 x0 = 0
        let e = vec![vec![Some(0), Some(0)], vec![Some(0), Some(0)]];
        assert!(symbolic_det(&e, 1).is_empty());
    }
}
