//! Stability of matrices of linear forms under `SL(I) × SL(W)` and the
//! cohomology of the moduli spaces `M_{n,m,2}` of Steiner bundles.

pub mod cohomology;
pub mod corpus;
pub mod exactalg;
pub mod gitstab;
pub mod selftest;
pub mod tangweights;
pub mod torusfix;
