use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Exact binomial coefficient; zero when `r < 0` or `r > n`.
pub fn binom(n: i64, r: i64) -> BigInt {
    if n < 0 || r < 0 || r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Small-value binomial for index arithmetic. Panics on overflow.
pub fn binom_i64(n: i64, r: i64) -> i64 {
    i64::try_from(binom(n, r)).expect("binomial overflows i64")
}

/// Number of `r`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binom(n: u32, r: u32, q: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        num *= q.pow(n - i) - 1u32;
        den *= q.pow(i + 1) - 1u32;
    }
    num / den
}
