//! Exact computations around Thompson's group F: the group elements as
//! piecewise-linear homeomorphisms of [0,1], Schreier graphs of the action on
//! dyadic rationals, the unitary action on the Haar wavelet basis, forest
//! diagrams for the positive monoid, the induced Cayley subgraph on vertices
//! `x_n u`, and graph-amenability diagnostics (boundaries, Cheeger ratios,
//! Folner sets, doubling witnesses).
//!
//! Everything is computed in exact arithmetic: dyadic rationals `k/2^e`,
//! their quadratic extension `a + b*sqrt(2)`, and arbitrary-precision
//! integers underneath. No floating point is used anywhere.
//!
//! With the default `parallel` feature the large enumerations (word sweeps,
//! graph builds, sampled reports) run on a rayon pool; disabling the feature
//! gives a fully sequential build with identical results.

pub mod amenability;
pub mod dyadic;
pub mod error;
pub mod exec;
pub mod forest;
pub mod gamma_s;
pub mod graph;
pub mod haar;
pub mod lemmas;
pub mod plhomeo;
pub mod report;
pub mod schreier;
pub mod word;

pub use dyadic::{Dyadic, QuadDyadic};
pub use forest::{BinaryForest, Tree};
pub use graph::{EdgeLabel, LabeledGraph, Truncation};
pub use plhomeo::PLHomeo;
pub use report::{Report, ReportItem};
pub use word::{Letter, Word};
