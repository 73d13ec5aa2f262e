//! Exact finite-field experiments on complete intersections `Y` in `P^m`
//! that contain a `k`-dimensional linear subspace.
//!
//! The crate computes the numeric invariants `t` and `delta_h` with their
//! dimension identities, samples complete intersections through the
//! standard plane, certifies infinitesimal rigidity of that plane by the
//! rank of the normal-bundle matrix, enumerates all rational `k`-planes on
//! `Y` over small fields, and analyses the Jacobian along the plane. Every
//! randomized experiment is seeded and can be written out as a replayable
//! JSON certificate.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --release --example invariants_table
//! cargo run --release --example lemma_scan
//! cargo run --release --example rigidity_certificate
//! cargo run --release --example symbolic_determinant
//! cargo run --release --example enumerate_grassmannian
//! cargo run --release --example fano_uniqueness
//! cargo run --release --example singular_locus
//! cargo run --release --example replay_certificate
//! ```
//!
//! The `fanokit` binary exposes the same operations as subcommands.

pub mod certify;
pub mod cli;
pub mod error;
pub mod exactmath;
pub mod fano;
pub mod invariants;
pub(crate) mod jsonint;
pub mod polyring;
pub mod rigidity;
pub mod sampler;
pub mod singular;

pub use error::{Error, Result};
pub use invariants::Parameters;
pub use sampler::{sample_ci, CISample};
