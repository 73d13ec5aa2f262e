//! Expand det of the leading square block of C with indeterminate entries.

use fanokit::rigidity::{indeterminates, symbolic_det_leading};
use fanokit::Parameters;

fn main() -> fanokit::Result<()> {
    for (m, k, d) in [(3, 1, vec![3]), (3, 1, vec![4]), (4, 2, vec![3]), (5, 1, vec![2, 2, 2])] {
        let params = Parameters::new(m, k, d)?;
        let r = symbolic_det_leading(&params)?;
        println!(
            "{params}: {}x{} block in {} indeterminates, {} terms, leading coeff {:+}",
            r.size,
            r.size,
            indeterminates(&params).len(),
            r.num_terms,
            r.leading_coeff
        );
        println!("    {}", r.leading_monomial);
    }
    Ok(())
}
