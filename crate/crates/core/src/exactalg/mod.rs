//! Exact arithmetic kernel: rationals, univariate polynomials, rational
//! matrices and the rank analysis of linear pencils `βF − αG`.
//!
//! Nothing in here touches floating point. Every rank is an exact rank over
//! the rationals (or over a quotient ring `Q[x]/(p)` for drop points that are
//! not rational).

mod matrix;
mod pencil;
mod poly;

pub use matrix::RatMatrix;
pub use pencil::{
    common_kernel_dim, pencil_drop_locus, pencil_generic_rank, rank_over_quotient, DropLocusEntry,
    DropPoint, PencilAnalysis, PencilPoint,
};
pub use poly::UniPoly;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("ragged rows: expected {expected} columns, row {row} has {found}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("(0:0) is not a point of the projective line")]
    ZeroPencilPoint,
    #[error("rank certification failed at {point}: elimination gave {direct}, invariant factors gave {predicted}")]
    RankCertification {
        point: String,
        direct: usize,
        predicted: usize,
    },
}

pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `binomial` narrowed to `u64`; panics only if the value does not fit, which
/// no parameter range used by this crate comes near.
pub fn binomial_u64(n: u64, k: i64) -> u64 {
    u64::try_from(binomial(n, k)).expect("binomial coefficient exceeds u64")
}
