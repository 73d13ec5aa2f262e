//! Closed-form invariants of complete intersections through a `k`-plane.
//!
//! Everything here is exact integer (or rational) arithmetic on the tuple
//! `(m, k, d_1..d_s)`. The incidence varieties `J`, `W`, `I_h`, `T_h`,
//! `G^2_h` exist only through their dimension formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::binom;

/// Ambient dimension `m`, plane dimension `k` and multidegree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParameters")]
pub struct Parameters {
    m: usize,
    k: usize,
    d: Vec<u32>,
}

#[derive(Deserialize)]
struct RawParameters {
    m: usize,
    k: usize,
    d: Vec<u32>,
}

impl TryFrom<RawParameters> for Parameters {
    type Error = Error;
    fn try_from(r: RawParameters) -> Result<Self> {
        Parameters::new(r.m, r.k, r.d)
    }
}

impl Parameters {
    /// Validates `1 <= s <= m-2`, `d_i >= 1`, `prod d_i > 2`, `1 <= k <= m-s`.
    pub fn new(m: usize, k: usize, d: Vec<u32>) -> Result<Self> {
        let s = d.len();
        if s == 0 || s + 2 > m {
            return Err(Error::InvalidParams(format!("need 1 <= s <= m-2, got s={s}, m={m}")));
        }
        if let Some(bad) = d.iter().find(|&&di| di == 0) {
            return Err(Error::InvalidParams(format!("degrees must be positive, got {bad}")));
        }
        let prod: u128 = d.iter().map(|&x| x as u128).product();
        if prod <= 2 {
            return Err(Error::InvalidParams(format!(
                "product of degrees must exceed 2 (got {prod}): linear spaces and quadrics are excluded"
            )));
        }
        if k == 0 || k + s > m {
            return Err(Error::InvalidParams(format!("need 1 <= k <= m-s, got k={k}, m-s={}", m - s)));
        }
        Ok(Self { m, k, d })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.d.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.d
    }

    /// `(k+1)(m-k)`: the Grassmannian dimension, also the column count of
    /// the rigidity matrix.
    pub fn grassmannian_dim(&self) -> usize {
        (self.k + 1) * (self.m - self.k)
    }

    /// Compact label such as `m3_k1_d4` or `m5_k1_d2-2-2`.
    pub fn label(&self) -> String {
        let d: Vec<String> = self.d.iter().map(u32::to_string).collect();
        format!("m{}_k{}_d{}", self.m, self.k, d.join("-"))
    }
}

impl std::fmt::Display for Parameters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(m={}, k={}, d={:?})", self.m, self.k, self.d)
    }
}

fn big(x: usize) -> BigInt {
    BigInt::from(x)
}

fn sum_binom(d: &[u32], lower: i64) -> BigInt {
    d.iter().map(|&di| binom(di as i64 + lower, lower)).sum()
}

/// `t = sum_i C(d_i + k, k) - (k+1)(m-k)`.
pub fn t_invariant(params: &Parameters) -> BigInt {
    sum_binom(&params.d, params.k as i64) - big((params.k + 1) * (params.m - params.k))
}

/// `delta_h = sum C(d_i+k,k) - sum C(d_i+h,h) - (k-h)(m+h+1-k)` for
/// `-1 <= h <= k-1`; `C(., -1)` is zero so `delta_{-1} = t`.
pub fn delta_h(params: &Parameters, h: i64) -> Result<BigInt> {
    let (m, k) = (params.m as i64, params.k as i64);
    if h < -1 || h > k - 1 {
        return Err(Error::OutOfRange(format!("h={h} outside [-1, {}]", k - 1)));
    }
    Ok(sum_binom(&params.d, k) - sum_binom(&params.d, h) - BigInt::from((k - h) * (m + h + 1 - k)))
}

/// `D(x) = (h+1)/(k-h) C(x+k,k) - (k+1)/(k-h) C(x+h,h)`.
pub fn d_value(x: i64, k: i64, h: i64) -> Result<BigRational> {
    if h < 0 || h >= k {
        return Err(Error::OutOfRange(format!("need 0 <= h < k, got h={h}, k={k}")));
    }
    let denom = BigInt::from(k - h);
    let a = BigRational::new(BigInt::from(h + 1), denom.clone()) * BigRational::from_integer(binom(x + k, k));
    let b = BigRational::new(BigInt::from(k + 1), denom) * BigRational::from_integer(binom(x + h, h));
    Ok(a - b)
}

/// `dim S_d = C(d+m, m)`.
pub fn dim_forms(m: usize, d: u32) -> BigInt {
    binom(d as i64 + m as i64, m as i64)
}

/// `h^0(I_Pi(d))` for a `k`-plane in `P^m`.
pub fn h0_plane(m: usize, k: usize, d: u32) -> BigInt {
    dim_forms(m, d) - binom(d as i64 + k as i64, k as i64)
}

/// `h^0(I_{Pi1 u Pi2}(d))` for two `k`-planes meeting in a `P^h`.
pub fn h0_two_planes(m: usize, k: usize, h: i64, d: u32) -> BigInt {
    dim_forms(m, d) - 2 * binom(d as i64 + k as i64, k as i64) + binom(d as i64 + h, h)
}

/// Dimension formulas for the incidence correspondences, each entry
/// computed from its own defining expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimFormulas {
    pub h: i64,
    #[serde(with = "crate::jsonint")]
    pub dim_s_star: BigInt,
    #[serde(with = "crate::jsonint")]
    pub dim_j: BigInt,
    #[serde(with = "crate::jsonint")]
    pub dim_g2h: BigInt,
    #[serde(with = "crate::jsonint")]
    pub dim_th: BigInt,
    #[serde(with = "crate::jsonint::vec")]
    pub h0_plane: Vec<BigInt>,
    #[serde(with = "crate::jsonint::vec")]
    pub h0_two_planes: Vec<BigInt>,
}

pub fn dim_formulas(params: &Parameters, h: i64) -> Result<DimFormulas> {
    let (m, k) = (params.m, params.k);
    if h < -1 || h > k as i64 - 1 {
        return Err(Error::OutOfRange(format!("h={h} outside [-1, {}]", k as i64 - 1)));
    }
    let dim_s_star: BigInt = params.d.iter().map(|&di| dim_forms(m, di)).sum();
    let grass = big((k + 1) * (m - k));
    // J is a vector bundle over G with fibre sum_i H^0(I_Pi(d_i))
    let h0_plane: Vec<BigInt> = params.d.iter().map(|&di| h0_plane(m, k, di)).collect();
    let dim_j = &grass + h0_plane.iter().sum::<BigInt>();
    // pairs meeting in P^h: fibre over [Pi1] is G(h,k) x G(k-h-1, m-h-1)
    let (hh, kk, mm) = (h, k as i64, m as i64);
    let dim_g2h = &grass + BigInt::from((hh + 1) * (kk - hh) + (kk - hh) * (mm - kk));
    let h0_two_planes: Vec<BigInt> = params.d.iter().map(|&di| h0_two_planes(m, k, h, di)).collect();
    let dim_th = &dim_g2h + h0_two_planes.iter().sum::<BigInt>();
    Ok(DimFormulas { h, dim_s_star, dim_j, dim_g2h, dim_th, h0_plane, h0_two_planes })
}

/// Regime summary for a parameter tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeReport {
    #[serde(with = "crate::jsonint")]
    pub t: BigInt,
    /// `t > 0`: the locus `W` of complete intersections containing a plane is proper.
    pub w_is_proper: bool,
    /// `s <= m - 2k`.
    pub smooth_possible: bool,
    #[serde(with = "crate::jsonint")]
    pub expected_fano_dim: BigInt,
    pub expected_sing_dim: i64,
    #[serde(with = "crate::jsonint")]
    pub w_codim: BigInt,
}

pub fn classify(params: &Parameters) -> RegimeReport {
    let t = t_invariant(params);
    let (m, k, s) = (params.m as i64, params.k as i64, params.s() as i64);
    let positive = t.is_positive();
    RegimeReport {
        w_is_proper: positive,
        smooth_possible: s <= m - 2 * k,
        expected_fano_dim: if positive { BigInt::zero() } else { -&t },
        expected_sing_dim: (-1).max(2 * k + s - m - 1),
        w_codim: if positive { t.clone() } else { BigInt::zero() },
        t,
    }
}

/// Grid limits for exhaustive scans. Multidegrees are enumerated as
/// non-decreasing tuples since every formula is symmetric in the `d_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridBounds {
    pub m_max: usize,
    pub s_max: usize,
    pub d_max: u32,
}

impl Default for GridBounds {
    fn default() -> Self {
        Self { m_max: 10, s_max: 4, d_max: 6 }
    }
}

impl GridBounds {
    /// Every valid `Parameters` inside the bounds, in a fixed order.
    pub fn points(&self) -> Vec<Parameters> {
        let mut out = Vec::new();
        for m in 3..=self.m_max {
            for s in 1..=self.s_max.min(m - 2) {
                let mut degs = Vec::new();
                multisets(s, 1, self.d_max, &mut Vec::new(), &mut degs);
                for d in degs {
                    for k in 1..=m - s {
                        if let Ok(p) = Parameters::new(m, k, d.clone()) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

fn multisets(len: usize, lo: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for x in lo..=hi {
        cur.push(x);
        multisets(len, x, hi, cur, out);
        cur.pop();
    }
}

/// A grid point where `delta_h <= 0` but `t > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCounterexample {
    pub params: Parameters,
    pub h: i64,
    #[serde(with = "crate::jsonint")]
    pub delta: BigInt,
    #[serde(with = "crate::jsonint")]
    pub t: BigInt,
}

/// Scan `points` for `(params, h)` with `0 <= h <= k-1`, `delta_h <= 0`
/// and `t > 0`. Points with `prod d_i <= 2` are skipped.
pub fn lemma_scan_points(points: &[Parameters]) -> Vec<LemmaCounterexample> {
    points
        .par_iter()
        .filter(|p| p.d.iter().map(|&x| x as u128).product::<u128>() > 2)
        .flat_map_iter(|p| {
            let t = t_invariant(p);
            (0..p.k as i64).filter_map(move |h| {
                let delta = delta_h(p, h).expect("h in range");
                (!delta.is_positive() && t.is_positive()).then(|| LemmaCounterexample {
                    params: p.clone(),
                    h,
                    delta,
                    t: t.clone(),
                })
            })
        })
        .collect()
}

pub fn lemma_scan(bounds: &GridBounds) -> Vec<LemmaCounterexample> {
    lemma_scan_points(&bounds.points())
}

/// A failed identity at a grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityViolation {
    pub params: Parameters,
    pub identity: &'static str,
    pub h: Option<i64>,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Check, at one grid point, that `dim J = dim S* - t`,
/// `dim T_h = dim J - delta_h` for `0 <= h <= k-1`, `delta_{-1} = t`, and
/// `smooth_possible <=> expected_sing_dim = -1`.
pub fn check_identities(params: &Parameters) -> Vec<IdentityViolation> {
    let mut out = Vec::new();
    let t = t_invariant(params);
    let mut push = |identity, h, lhs: BigInt, rhs: BigInt| {
        if lhs != rhs {
            out.push(IdentityViolation { params: params.clone(), identity, h, lhs, rhs });
        }
    };
    let base = dim_formulas(params, -1).expect("h=-1 always admissible");
    push("dim_J = dim_S_star - t", None, base.dim_j.clone(), &base.dim_s_star - &t);
    push("delta_-1 = t", Some(-1), delta_h(params, -1).expect("h=-1"), t.clone());
    for h in 0..params.k as i64 {
        let dims = dim_formulas(params, h).expect("h in range");
        let delta = delta_h(params, h).expect("h in range");
        push("dim_Th = dim_J - delta_h", Some(h), dims.dim_th, &dims.dim_j - delta);
    }
    let report = classify(params);
    let lhs = BigInt::from(report.smooth_possible as i64);
    let rhs = BigInt::from((report.expected_sing_dim == -1) as i64);
    push("smooth_possible <=> expected_sing_dim = -1", None, lhs, rhs);
    out
}

pub fn identity_scan(bounds: &GridBounds) -> Vec<IdentityViolation> {
    bounds.points().par_iter().flat_map_iter(check_identities).collect()
}

/// `D(1) = 0`, `D(2) = (h+1)(k+1)/2`, `D(3) = (k+1)(h+1)(k+h+5)/6`.
pub fn d_identities_hold(k: i64, h: i64) -> Result<bool> {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    Ok(d_value(1, k, h)?.is_zero()
        && d_value(2, k, h)? == r((h + 1) * (k + 1), 2)
        && d_value(3, k, h)? == r((k + 1) * (h + 1) * (k + h + 5), 6))
}

/// True when `D` is strictly increasing on `2..=x_max` and positive there.
pub fn d_increasing_positive(k: i64, h: i64, x_max: i64) -> Result<bool> {
    let mut prev = d_value(1, k, h)?;
    for x in 2..=x_max {
        let cur = d_value(x, k, h)?;
        if cur <= prev || !cur.is_positive() {
            return Ok(false);
        }
        prev = cur;
    }
    Ok(true)
}
