//! Rank of the normal-bundle matrix on sampled complete intersections.

use fanokit::rigidity::{build_sigma_matrix, functional_consistency, rigidity_check};
use fanokit::{sample_ci, Parameters};

fn main() -> fanokit::Result<()> {
    for (m, k, d) in [(3, 1, vec![4]), (4, 2, vec![3]), (4, 1, vec![3])] {
        let params = Parameters::new(m, k, d)?;
        let sample = sample_ci(&params, 1009, 42)?;
        let c = build_sigma_matrix(&sample);
        let report = rigidity_check(&sample);
        println!(
            "{params}: C is {}x{}, rank {}, h0(N) = {}, rigid {}, functional check {}",
            c.matrix().nrows(),
            c.matrix().ncols(),
            report.rank,
            report.nullity,
            report.is_rigid,
            functional_consistency(&sample, 42)
        );
    }
    let params = Parameters::new(3, 1, vec![4])?;
    let sample = sample_ci(&params, 1009, 42)?;
    println!("g = {}", sample.forms()[0]);
    Ok(())
}
