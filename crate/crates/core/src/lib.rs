//! Exact verification engine for symplectic differential complexes: the
//! symplectic exterior algebra, Fedosov and Kähler curvature, the coupled
//! Rumin–Seshadri complex, symplectic tractors and Heisenberg cohomology.

// Tensor code indexes several arrays with the same loop variable.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod heisenberg;
pub mod induced;
pub mod symplin;

pub use error::Error;
pub use sympcalc_exact as exact;
pub mod report;
pub mod rumin;
pub mod sections;
pub mod suites;
pub mod tractor;
