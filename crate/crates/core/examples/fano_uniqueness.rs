//! Count the rational lines on quartic surfaces through the standard line.

use std::collections::BTreeMap;

use fanokit::fano::{fano_points, DEFAULT_PLANE_CAP};
use fanokit::{sample_ci, Parameters};

fn main() -> fanokit::Result<()> {
    let params = Parameters::new(3, 1, vec![4])?;
    let trials = 200;
    let mut hist = BTreeMap::new();
    let mut found = 0;
    for seed in 0..trials {
        let res = fano_points(&sample_ci(&params, 7, seed)?, DEFAULT_PLANE_CAP)?;
        found += res.contains_standard as u64;
        *hist.entry(res.count).or_insert(0u64) += 1;
    }
    println!("{params} over F_7, seeds 0..{trials}");
    println!("standard line found {found}/{trials}");
    for (lines, n) in hist {
        println!("  {lines} line(s): {n}");
    }
    Ok(())
}
