//! Matrices of linear forms and their GIT (semi)stability under
//! `SL(W) × SL(I)`. The `k = 2` case is decided exactly from the pencil of
//! row entries; for larger `k` only explicit instability certificates are
//! checked.

mod certificate;
mod format;
mod matrix;
mod stability;

pub use certificate::{check_instability_certificate, CertificateOutcome, InstabilityCertificate};
pub use format::MatrixFile;
pub use matrix::{parse_scalar, LinearMatrix};
pub use stability::{
    boundary_point_even_m, degeneracy_dim_k2, stability_k2, strata_indices, validate, BoundaryPair,
    K2Analysis, Pencil, StabilityVerdict, StrataIndices, Verdict, Violation, Witness,
};

use thiserror::Error;

use crate::exactalg::AlgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GitError {
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("entry ({row}, {col}) has {found} coefficients, expected {expected}")]
    MalformedEntry {
        row: usize,
        col: usize,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    FormParse(String),
    #[error("cannot parse coefficient `{0}`")]
    CoefficientParse(String),
    #[error("invalid matrix document: {0}")]
    Json(String),
    #[error("the pencil criterion needs k = 2, got k = {k}")]
    RequiresTwoRows { k: usize },
    #[error("matrix is not injective on W")]
    NotInjective,
    #[error("matrix is not semistable")]
    NotSemistable,
    #[error("matrix is not in block form: {0}")]
    NotBlockForm(String),
    #[error("leading-zero counts {0:?} are not nonincreasing")]
    NotNonincreasing(Vec<usize>),
    #[error("leading-zero count {value} exceeds m + k = {max}")]
    LeadingZeroOutOfRange { value: usize, max: usize },
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// The isomorphism `M_{n,m,2} ≅ M_{n,2n−m−2,2}` on parameters.
pub fn dual_format(n: usize, m: usize) -> Option<(usize, usize)> {
    (2 * n).checked_sub(m + 2).map(|d| (n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duality_is_an_involution() {
        for n in 2..=12 {
            for m in 1..=2 * n - 3 {
                let (n2, m2) = dual_format(n, m).unwrap();
                assert!((1..=2 * n - 3).contains(&m2));
                assert_eq!(dual_format(n2, m2), Some((n, m)));
            }
        }
        assert_eq!(dual_format(3, 3), Some((3, 1)));
        assert_eq!(dual_format(1, 1), None);
    }
}
