//! Test-only reference implementations.
//!
//! Everything here is written the slow, obvious way on `Vec<Vec<f64>>`:
//! explicit loops, cyclic Jacobi for eigenvalues, Gauss-Jordan for inverses,
//! pair enumeration for rank statistics. None of it shares code paths with
//! `site-core`, so agreement between the two is meaningful.

pub mod benchmarks;
pub mod fixtures;
pub mod naive;
pub mod rank;

pub use naive::Mat;
