//! Search for delta_h <= 0 with t > 0, and show how close the grid comes.

use fanokit::invariants::{delta_h, lemma_scan, t_invariant, GridBounds};
use num_bigint::BigInt;

fn main() {
    let bounds = GridBounds::default();
    let points = bounds.points();
    println!("{} grid points, {} counterexamples", points.len(), lemma_scan(&bounds).len());

    // points with delta_h <= 0 all have t <= 0
    let mut tight = 0;
    let mut worst_t: Option<BigInt> = None;
    for p in &points {
        for h in 0..p.k() as i64 {
            if delta_h(p, h).unwrap() <= BigInt::from(0) {
                tight += 1;
                let t = t_invariant(p);
                if worst_t.as_ref().is_none_or(|w| t > *w) {
                    worst_t = Some(t);
                }
            }
        }
    }
    println!("(params, h) with delta_h <= 0: {tight}, largest t among them: {}", worst_t.unwrap_or_default());
}
