//! Dense homogeneous polynomials over a prime field.
//!
//! Monomials are exponent vectors ordered by standard lex: `y0 > y1 > ... `,
//! compared from the first variable. Every monomial list in the crate is
//! emitted in *descending* lex order, so `[y0^2, y0*y1, y1^2]` for two
//! variables in degree two. Row indices of the rigidity matrix and the
//! leading-submatrix selection depend on this order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactmath::{Matrix, PrimeField};

/// Exponent vector `(mu_0, ..., mu_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Self(vec![0; num_vars])
    }

    /// The monomial `y_j`.
    pub fn var(num_vars: usize, j: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[j] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - e_j`, or `None` when the exponent of `y_j` is zero.
    pub fn shift_down(&self, j: usize) -> Option<Monomial> {
        let mut e = self.0.clone();
        e[j] = e[j].checked_sub(1)?;
        Some(Monomial(e))
    }

    /// Total degree in the variables with index in `range`.
    pub fn degree_in(&self, range: std::ops::Range<usize>) -> u32 {
        self.0[range].iter().sum()
    }

    pub fn truncate(&self, num_vars: usize) -> Monomial {
        Monomial(self.0[..num_vars].to_vec())
    }

    /// Pad with trailing zero exponents up to `num_vars` variables.
    pub fn extend(&self, num_vars: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(num_vars, 0);
        Monomial(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "y{j}")?;
            } else {
                write!(f, "y{j}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of `degree` in `num_vars` variables, strictly descending in lex.
pub fn monomials_lex(num_vars: usize, degree: u32) -> Vec<Monomial> {
    assert!(num_vars >= 1, "need at least one variable");
    let mut out = Vec::new();
    let mut cur = vec![0u32; num_vars];
    fill(&mut cur, 0, degree, &mut out);
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(Monomial(cur.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

/// A monomial list together with its position lookup.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn lex(num_vars: usize, degree: u32) -> Self {
        Self::from_list(monomials_lex(num_vars, degree))
    }

    pub fn from_list(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Monomial bases of `(I_Pi)_d` and `(I_Pi^2)_d` for the standard plane
/// `Pi = {y_{k+1} = ... = y_m = 0}` in `P^m`, both descending lex.
pub fn ideal_plane_bases(d: u32, m: usize, k: usize) -> Result<(Vec<Monomial>, Vec<Monomial>)> {
    if k >= m {
        return Err(Error::InvalidParams(format!("plane dimension k={k} must be below m={m}")));
    }
    let all = monomials_lex(m + 1, d);
    let ideal: Vec<Monomial> = all.into_iter().filter(|mu| mu.degree_in(k + 1..m + 1) >= 1).collect();
    let square = ideal.iter().filter(|mu| mu.degree_in(k + 1..m + 1) >= 2).cloned().collect();
    Ok((ideal, square))
}

/// Homogeneous polynomial with canonical storage: no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    field: PrimeField,
    num_vars: usize,
    degree: u32,
    coeffs: BTreeMap<Monomial, u64>,
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogPoly(F_{}, deg {}: {})", self.field.modulus(), self.degree, self)
    }
}

impl fmt::Display for HomogPoly {
    /// Terms in descending lex order, e.g. `2*y0^3*y2 + 6*y1^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (mon, &c)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            match (c, mon.degree()) {
                (_, 0) => write!(f, "{c}")?,
                (1, _) => write!(f, "{mon}")?,
                _ => write!(f, "{c}*{mon}")?,
            }
        }
        Ok(())
    }
}

impl HomogPoly {
    pub fn zero(field: PrimeField, num_vars: usize, degree: u32) -> Self {
        Self { field, num_vars, degree, coeffs: BTreeMap::new() }
    }

    pub fn constant(field: PrimeField, num_vars: usize, c: u64) -> Self {
        Self::from_terms(field, num_vars, 0, [(Monomial::one(num_vars), c)]).expect("degree 0")
    }

    /// The linear form `y_j`.
    pub fn var(field: PrimeField, num_vars: usize, j: usize) -> Self {
        Self::from_terms(field, num_vars, 1, [(Monomial::var(num_vars, j), 1)]).expect("degree 1")
    }

    /// Build from terms; repeated monomials are summed and zeros dropped.
    pub fn from_terms<I>(field: PrimeField, num_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, u64)>,
    {
        let mut p = Self::zero(field, num_vars, degree);
        for (mon, c) in terms {
            if mon.num_vars() != num_vars || mon.degree() != degree {
                return Err(Error::InvalidParams(format!(
                    "monomial {mon:?} does not fit {num_vars} variables in degree {degree}"
                )));
            }
            p.add_term(mon, field.reduce(c));
        }
        Ok(p)
    }

    /// Linear form `sum_j coeffs[j] * y_j`.
    pub fn linear(field: PrimeField, coeffs: &[u64]) -> Self {
        let n = coeffs.len();
        Self::from_terms(field, n, 1, coeffs.iter().enumerate().map(|(j, &c)| (Monomial::var(n, j), c)))
            .expect("degree 1")
    }

    fn add_term(&mut self, mon: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.coeffs.entry(mon) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, mon: &Monomial) -> u64 {
        self.coeffs.get(mon).copied().unwrap_or(0)
    }

    /// Nonzero terms in descending lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &u64)> {
        self.coeffs.iter().rev()
    }

    /// Coefficients against `basis`; errors if a term falls outside it.
    pub fn coefficient_vector(&self, basis: &MonomialBasis) -> Result<Vec<u64>> {
        let mut v = vec![0; basis.len()];
        for (mon, &c) in &self.coeffs {
            let pos = basis
                .position(mon)
                .ok_or_else(|| Error::OutOfRange(format!("monomial {mon:?} not in basis")))?;
            v[pos] = c;
        }
        Ok(v)
    }

    fn check_compatible(&self, other: &HomogPoly) {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
    }

    pub fn add(&self, other: &HomogPoly) -> HomogPoly {
        self.check_compatible(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (mon, &c) in &other.coeffs {
            out.add_term(mon.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &HomogPoly) -> HomogPoly {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u64) -> HomogPoly {
        let f = self.field;
        let c = f.reduce(c);
        let mut out = Self::zero(f, self.num_vars, self.degree);
        if c != 0 {
            out.coeffs = self.coeffs.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect();
        }
        out
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        self.check_compatible(other);
        let f = self.field;
        let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (ma, &a) in &self.coeffs {
            for (mb, &b) in &other.coeffs {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = f.add(*e, f.mul(a, b));
            }
        }
        HomogPoly {
            field: f,
            num_vars: self.num_vars,
            degree: self.degree + other.degree,
            coeffs: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> HomogPoly {
        let mut acc = HomogPoly::constant(self.field, self.num_vars, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `d g / d y_j`, with coefficients reduced mod p.
    pub fn partial_derivative(&self, j: usize) -> HomogPoly {
        assert!(j < self.num_vars, "variable index out of range");
        let f = self.field;
        let mut out = HomogPoly::zero(f, self.num_vars, self.degree.saturating_sub(1));
        for (mon, &c) in &self.coeffs {
            let e = mon.0[j];
            if e == 0 {
                continue;
            }
            let lowered = mon.shift_down(j).expect("positive exponent");
            out.add_term(lowered, f.mul(c, f.reduce(e as u64)));
        }
        out
    }

    pub fn evaluate(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.num_vars);
        let f = self.field;
        let mut total = 0;
        for (mon, &c) in &self.coeffs {
            let mut v = c;
            for (&x, &e) in point.iter().zip(&mon.0) {
                if e > 0 {
                    v = f.mul(v, f.pow(x, e as u64));
                }
            }
            total = f.add(total, v);
        }
        total
    }

    /// Set `y_{k+1}, ..., y_m` to zero, giving a polynomial in `y_0..y_k`.
    pub fn restrict_to_standard_plane(&self, k: usize) -> HomogPoly {
        let mut out = HomogPoly::zero(self.field, k + 1, self.degree);
        for (mon, &c) in &self.coeffs {
            if mon.degree_in(k + 1..self.num_vars) == 0 {
                out.add_term(mon.truncate(k + 1), c);
            }
        }
        out
    }

    /// Reinterpret a polynomial in `y_0..y_k` as one in `y_0..y_{n-1}`.
    pub fn extend_vars(&self, num_vars: usize) -> HomogPoly {
        assert!(num_vars >= self.num_vars);
        HomogPoly {
            field: self.field,
            num_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, &c)| (m.extend(num_vars), c)).collect(),
        }
    }

    /// Pull back along the parameterization `y = z * B`, where `B` is a
    /// `(k+1) x (m+1)` matrix of full row rank.
    pub fn substitute_linear(&self, b: &Matrix) -> Result<HomogPoly> {
        let f = self.field;
        if b.ncols() != self.num_vars {
            return Err(Error::InvalidParams(format!(
                "substitution matrix has {} columns, polynomial has {} variables",
                b.ncols(),
                self.num_vars
            )));
        }
        let rank = b.rank(&f);
        if rank < b.nrows() {
            return Err(Error::RankDeficient { rank, expected: b.nrows() });
        }
        Ok(self.substitute_unchecked(b))
    }

    /// `substitute_linear` without the rank check, for hot loops where the
    /// matrix is known to be an RREF plane basis.
    pub(crate) fn substitute_unchecked(&self, b: &Matrix) -> HomogPoly {
        let f = self.field;
        let kv = b.nrows();
        // y_j as a linear form in z
        let forms: Vec<HomogPoly> = (0..self.num_vars)
            .map(|j| HomogPoly::linear(f, &(0..kv).map(|r| b.get(r, j)).collect::<Vec<_>>()))
            .collect();
        let mut powers: HashMap<(usize, u32), HomogPoly> = HashMap::new();
        let mut out = HomogPoly::zero(f, kv, self.degree);
        for (mon, &c) in &self.coeffs {
            let mut term = HomogPoly::constant(f, kv, c);
            for (j, &e) in mon.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if forms[j].is_zero() {
                    term = HomogPoly::zero(f, kv, self.degree);
                    break;
                }
                let pw = powers.entry((j, e)).or_insert_with(|| forms[j].pow(e));
                term = term.mul(pw);
            }
            if !term.is_zero() {
                for (m, &v) in &term.coeffs {
                    out.add_term(m.clone(), v);
                }
            }
        }
        out
    }
}
