//! Canonical RREF representatives of the k-planes of P^m(F_q).

use fanokit::exactmath::gaussian_binom;
use fanokit::fano::{enumerate_planes, DEFAULT_PLANE_CAP};

fn main() -> fanokit::Result<()> {
    for line in enumerate_planes(2, 1, 2, DEFAULT_PLANE_CAP)? {
        println!("{:?} pivots {:?}", line.basis().to_rows(), line.pivots());
    }
    for (m, k) in [(2, 0), (3, 1), (4, 1), (4, 2)] {
        let counts: Vec<String> = [2u64, 3, 5, 7]
            .iter()
            .map(|&q| {
                let n = enumerate_planes(m, k, q, DEFAULT_PLANE_CAP).map(Iterator::count).unwrap_or(0);
                format!("q={q}: {n} (expected {})", gaussian_binom(m as u32 + 1, k as u32 + 1, q))
            })
            .collect();
        println!("G({k},{m}) {}", counts.join(", "));
    }
    Ok(())
}
