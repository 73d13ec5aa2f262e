//! Rank-drop points of the Jacobian along the plane, counted at two primes.

use fanokit::singular::{sing_dim_estimate, DEFAULT_POINT_CAP};
use fanokit::Parameters;

fn main() -> fanokit::Result<()> {
    let primes = [101, 211];
    for (m, k, d) in [(3, 1, vec![4]), (4, 2, vec![3]), (4, 2, vec![2, 2]), (5, 2, vec![3])] {
        let params = Parameters::new(m, k, d)?;
        let mut matches = 0;
        for seed in 0..10 {
            let rep = sing_dim_estimate(&params, seed, &primes, DEFAULT_POINT_CAP)?;
            matches += rep.matches as usize;
            if seed == 0 {
                println!("{params}: seed 0 counts {:?} -> {:?} (expected {})", rep.counts, rep.estimate, rep.expected);
            }
        }
        println!("    matches expected dimension in {matches}/10 seeds");
    }
    Ok(())
}
