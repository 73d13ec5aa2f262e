//! Seeded sampling of complete intersections through the standard plane.
//!
//! The plane is always `Pi = {y_{k+1} = ... = y_m = 0}`. Each form is
//! written as
//!
//! ```text
//! g_i = sum_{h=k+1}^{m} y_h * p_i^(h)(y_0..y_k) + r_i,    r_i in (I_Pi^2)_{d_i}
//! ```
//!
//! with `p_i^(h) = sum_mu c[i][h][mu] y^mu` over `|mu| = d_i - 1`.
//!
//! Draw order (part of the certificate contract): one ChaCha20 stream
//! seeded with `seed`; all `c` entries with `i` ascending, then `h`
//! ascending, then `mu` descending lex; then for each `i` ascending the
//! `r_i` coefficients on the `(I_Pi^2)_{d_i}` basis in descending lex.
//! Each value is a uniform draw from `[0, p)` by rejection on `next_u64`.
//! If some `g_i` comes out zero the whole sample is redrawn on the next
//! ChaCha stream (`attempt + 1`).

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{Matrix, PrimeField};
use crate::invariants::Parameters;
use crate::polyring::{ideal_plane_bases, monomials_lex, HomogPoly, Monomial, MonomialBasis};

const MAX_ATTEMPTS: u64 = 1024;

/// Coefficients `c[i][h - k - 1][pos]`, `pos` indexing the descending-lex
/// basis of degree `d_i - 1` in `y_0..y_k`.
pub type CoefficientTable = Vec<Vec<Vec<u64>>>;

/// Where a sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum SampleOrigin {
    Seeded { seed: u64, attempt: u64 },
    Explicit,
}

/// A complete intersection `Y_u` containing the standard `k`-plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CISample {
    params: Parameters,
    field: PrimeField,
    origin: SampleOrigin,
    c: CoefficientTable,
    r: Vec<HomogPoly>,
    g: Vec<HomogPoly>,
}

/// Uniform element of `[0, p)` by rejection sampling.
pub(crate) fn draw(rng: &mut ChaCha20Rng, p: u64) -> u64 {
    let zone = (u64::MAX / p) * p;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % p;
        }
    }
}

/// The `(k+1) x (m+1)` matrix `[I | 0]` parameterizing the standard plane.
pub fn standard_plane_matrix(m: usize, k: usize) -> Matrix {
    let mut b = Matrix::zeros(k + 1, m + 1);
    for r in 0..=k {
        b.set(r, r, 1);
    }
    b
}

/// Basis for the `p_i^(h)` coefficients of form `i`.
pub fn p_basis(params: &Parameters, i: usize) -> Vec<Monomial> {
    monomials_lex(params.k() + 1, params.degrees()[i] - 1)
}

/// Basis for the residual `r_i`.
pub fn r_basis(params: &Parameters, i: usize) -> Vec<Monomial> {
    ideal_plane_bases(params.degrees()[i], params.m(), params.k())
        .expect("k < m for valid parameters")
        .1
}

pub(crate) fn rng_for(seed: u64, attempt: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// Draw a sample over `F_p` from `seed`.
pub fn sample_ci(params: &Parameters, p: u64, seed: u64) -> Result<CISample> {
    let field = PrimeField::new(p)?;
    let (m, k) = (params.m(), params.k());
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_for(seed, attempt);
        let c: CoefficientTable = (0..params.s())
            .map(|i| {
                let n = p_basis(params, i).len();
                (k + 1..=m).map(|_| (0..n).map(|_| draw(&mut rng, p)).collect()).collect()
            })
            .collect();
        let r: Vec<HomogPoly> = (0..params.s())
            .map(|i| {
                let basis = r_basis(params, i);
                let coeffs: Vec<u64> = basis.iter().map(|_| draw(&mut rng, p)).collect();
                HomogPoly::from_terms(field, m + 1, params.degrees()[i], basis.into_iter().zip(coeffs))
                    .expect("basis monomials have the right degree")
            })
            .collect();
        let g = assemble_g(&c, &r, params, field)?;
        if g.iter().all(|gi| !gi.is_zero()) {
            return Ok(CISample {
                params: params.clone(),
                field,
                origin: SampleOrigin::Seeded { seed, attempt },
                c,
                r,
                g,
            });
        }
    }
    Err(Error::Consistency(format!("seed {seed}: every attempt produced a zero form")))
}

/// `g_i = sum_{h>k} y_h * p_i^(h) + r_i`, expanded and canonical.
pub fn assemble_g(
    c: &CoefficientTable,
    r: &[HomogPoly],
    params: &Parameters,
    field: PrimeField,
) -> Result<Vec<HomogPoly>> {
    let (m, k, s) = (params.m(), params.k(), params.s());
    if c.len() != s || r.len() != s {
        return Err(Error::MissingCoefficient(format!(
            "expected {s} forms, got {} coefficient blocks and {} residuals",
            c.len(),
            r.len()
        )));
    }
    (0..s)
        .map(|i| {
            let d = params.degrees()[i];
            let basis = p_basis(params, i);
            if c[i].len() != m - k {
                return Err(Error::MissingCoefficient(format!("form {i}: expected {} blocks", m - k)));
            }
            let ri = &r[i];
            if ri.num_vars() != m + 1 || ri.field() != field || (!ri.is_zero() && ri.degree() != d) {
                return Err(Error::InvalidParams(format!("residual {i} has the wrong shape")));
            }
            if ri.terms().any(|(mon, _)| mon.degree_in(k + 1..m + 1) < 2) {
                return Err(Error::InvalidParams(format!("residual {i} is not in the square of the plane ideal")));
            }
            let mut terms = Vec::new();
            for (hi, block) in c[i].iter().enumerate() {
                if block.len() != basis.len() {
                    return Err(Error::MissingCoefficient(format!(
                        "c[{i}][{}]: expected {} entries, got {}",
                        k + 1 + hi,
                        basis.len(),
                        block.len()
                    )));
                }
                let yh = Monomial::var(m + 1, k + 1 + hi);
                for (mu, &v) in basis.iter().zip(block) {
                    terms.push((mu.extend(m + 1).mul(&yh), v));
                }
            }
            let linear_part = HomogPoly::from_terms(field, m + 1, d, terms)?;
            Ok(linear_part.add(ri))
        })
        .collect()
}

impl CISample {
    /// Build a sample from explicit coefficients (no seed).
    pub fn from_parts(params: &Parameters, field: PrimeField, c: CoefficientTable, r: Vec<HomogPoly>) -> Result<Self> {
        let g = assemble_g(&c, &r, params, field)?;
        Ok(Self { params: params.clone(), field, origin: SampleOrigin::Explicit, c, r, g })
    }

    /// All-zero coefficient table shaped for `params`.
    pub fn zero_table(params: &Parameters) -> CoefficientTable {
        (0..params.s())
            .map(|i| vec![vec![0; p_basis(params, i).len()]; params.m() - params.k()])
            .collect()
    }

    pub fn zero_residuals(params: &Parameters, field: PrimeField) -> Vec<HomogPoly> {
        params.degrees().iter().map(|&d| HomogPoly::zero(field, params.m() + 1, d)).collect()
    }

    /// Same `c`, fresh residuals drawn from `seed`.
    pub fn with_fresh_residuals(&self, seed: u64) -> Result<Self> {
        let mut rng = rng_for(seed, 0);
        let p = self.field.modulus();
        let r: Vec<HomogPoly> = (0..self.params.s())
            .map(|i| {
                let basis = r_basis(&self.params, i);
                let coeffs: Vec<u64> = basis.iter().map(|_| draw(&mut rng, p)).collect();
                HomogPoly::from_terms(self.field, self.params.m() + 1, self.params.degrees()[i], basis.into_iter().zip(coeffs))
                    .expect("basis monomials have the right degree")
            })
            .collect();
        Self::from_parts(&self.params, self.field, self.c.clone(), r)
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn origin(&self) -> SampleOrigin {
        self.origin
    }

    pub fn coefficients(&self) -> &CoefficientTable {
        &self.c
    }

    pub fn residuals(&self) -> &[HomogPoly] {
        &self.r
    }

    pub fn forms(&self) -> &[HomogPoly] {
        &self.g
    }

    /// `c^(h)_{i,mu}`, with `i` zero-based and `h` the actual variable index
    /// in `k+1..=m`. Zero when `mu` is not a valid exponent.
    pub fn coeff(&self, i: usize, h: usize, mu: &Monomial, basis: &MonomialBasis) -> u64 {
        basis.position(mu).map_or(0, |pos| self.c[i][h - self.params.k() - 1][pos])
    }

    /// `p_i^(h)` as a polynomial in `y_0..y_k`.
    pub fn p_poly(&self, i: usize, h: usize) -> HomogPoly {
        let basis = p_basis(&self.params, i);
        let block = &self.c[i][h - self.params.k() - 1];
        HomogPoly::from_terms(self.field, self.params.k() + 1, self.params.degrees()[i] - 1, basis.into_iter().zip(block.iter().copied()))
            .expect("basis monomials have the right degree")
    }

    /// Every `g_i` is nonzero, i.e. `u` lies in `S*`.
    pub fn is_in_s_star(&self) -> bool {
        self.g.iter().all(|gi| !gi.is_zero())
    }

    /// Total count of free coefficients drawn (`c` plus `r`).
    pub fn num_coefficients(&self) -> usize {
        self.c.iter().flatten().map(Vec::len).sum::<usize>()
            + (0..self.params.s()).map(|i| r_basis(&self.params, i).len()).sum::<usize>()
    }

    /// Residual coefficients on the `(I_Pi^2)` basis, descending lex.
    pub fn residual_table(&self) -> Vec<Vec<u64>> {
        (0..self.params.s())
            .map(|i| r_basis(&self.params, i).iter().map(|mu| self.r[i].coeff(mu)).collect())
            .collect()
    }
}
