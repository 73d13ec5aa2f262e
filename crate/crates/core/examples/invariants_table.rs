//! Print t, delta_h and the regime for a few parameter tuples.

use fanokit::invariants::{classify, delta_h, dim_formulas, identity_scan, GridBounds};
use fanokit::Parameters;

fn main() -> fanokit::Result<()> {
    let cases = [(3, 1, vec![3]), (3, 1, vec![4]), (4, 1, vec![3]), (4, 2, vec![3]), (4, 2, vec![2, 2]), (5, 1, vec![2, 2, 2])];
    println!("{:<24} {:>4} {:>9} {:>9} {:>9}  deltas", "params", "t", "fano dim", "sing dim", "dim J");
    for (m, k, d) in cases {
        let p = Parameters::new(m, k, d)?;
        let r = classify(&p);
        let dims = dim_formulas(&p, -1)?;
        let deltas: Vec<String> = (0..k as i64).map(|h| Ok(format!("{h}:{}", delta_h(&p, h)?))).collect::<fanokit::Result<_>>()?;
        println!(
            "{:<24} {:>4} {:>9} {:>9} {:>9}  {}",
            p.to_string(),
            r.t,
            r.expected_fano_dim,
            r.expected_sing_dim,
            dims.dim_j,
            deltas.join(" ")
        );
    }
    let bounds = GridBounds::default();
    println!("identity violations on the default grid: {}", identity_scan(&bounds).len());
    Ok(())
}
