use std::fmt;

use serde::Serialize;

use super::{GitError, LinearMatrix};

/// Leading-zero counts `i_0 ≥ … ≥ i_{k−1}` of a fixed presentation of a
/// `k × (m+k)` matrix, together with the row index `s` they are claimed to
/// witness instability at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstabilityCertificate {
    pub k: usize,
    pub m: usize,
    pub leading_zeros: Vec<usize>,
    pub s: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateOutcome {
    Invalid,
    /// The presentation shows the matrix is not stable.
    NonStable,
    /// The presentation shows the matrix is not semistable (hence not stable).
    NonSemistable,
}

impl fmt::Display for CertificateOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateOutcome::Invalid => "invalid",
            CertificateOutcome::NonStable => "valid-for-nonstable",
            CertificateOutcome::NonSemistable => "valid-for-nonsemistable",
        })
    }
}

impl InstabilityCertificate {
    pub fn new(k: usize, m: usize, leading_zeros: Vec<usize>, s: usize) -> Result<Self, GitError> {
        if leading_zeros.len() != k {
            return Err(GitError::BadShape(format!(
                "certificate has {} leading-zero counts for k={k}",
                leading_zeros.len()
            )));
        }
        if s >= k {
            return Err(GitError::BadShape(format!(
                "row index s={s} outside 0..{k}"
            )));
        }
        if leading_zeros.windows(2).any(|w| w[0] < w[1]) {
            return Err(GitError::NotNonincreasing(leading_zeros));
        }
        if let Some(&bad) = leading_zeros.iter().find(|&&i| i > m + k) {
            return Err(GitError::LeadingZeroOutOfRange {
                value: bad,
                max: m + k,
            });
        }
        Ok(InstabilityCertificate {
            k,
            m,
            leading_zeros,
            s,
        })
    }

    /// Reads the counts off a matrix in its given presentation.
    pub fn from_matrix(a: &LinearMatrix, s: usize) -> Result<Self, GitError> {
        Self::new(a.k(), a.m(), a.leading_zero_counts(), s)
    }
}

/// Evaluates the Hilbert-Mumford inequalities at the claimed index. Both
/// sides are scaled by `k` so the comparison stays in the integers.
pub fn check_instability_certificate(c: &InstabilityCertificate) -> CertificateOutcome {
    let k = c.k as i64;
    let s = c.s as i64;
    let lhs = k * c.leading_zeros[c.s] as i64;
    let rhs = (c.m as i64 + k) * (k - 1 - s);
    if lhs > rhs {
        return CertificateOutcome::NonSemistable;
    }
    let last = c.leading_zeros[c.k - 1];
    if (s != k - 1 && lhs >= rhs) || last > 0 {
        return CertificateOutcome::NonStable;
    }
    CertificateOutcome::Invalid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(k: usize, m: usize, v: &[usize], s: usize) -> CertificateOutcome {
        check_instability_certificate(&InstabilityCertificate::new(k, m, v.to_vec(), s).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(check(2, 3, &[3, 0], 0), CertificateOutcome::NonSemistable);
        assert_eq!(check(3, 3, &[4, 1, 0], 0), CertificateOutcome::NonStable);
        assert_eq!(check(2, 3, &[0, 0], 0), CertificateOutcome::Invalid);
        assert_eq!(check(2, 3, &[0, 0], 1), CertificateOutcome::Invalid);
    }

    #[test]
    fn boundary_equality_is_only_nonstable() {
        // k=2, m=2: (m+k)(k-1-s)/k = 2
        assert_eq!(check(2, 2, &[2, 0], 0), CertificateOutcome::NonStable);
        assert_eq!(check(2, 2, &[3, 0], 0), CertificateOutcome::NonSemistable);
    }

    #[test]
    fn last_row_zeros_flag_nonstable() {
        assert_eq!(check(2, 3, &[1, 1], 1), CertificateOutcome::NonSemistable);
        assert_eq!(check(2, 3, &[1, 1], 0), CertificateOutcome::NonStable);
    }

    #[test]
    fn last_index_inequality_never_fires_alone() {
        // s = k-1 makes the right side 0; with i_{k-1} = 0 the ≥ branch is excluded
        assert_eq!(check(3, 4, &[2, 1, 0], 2), CertificateOutcome::Invalid);
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(matches!(
            InstabilityCertificate::new(2, 3, vec![0, 3], 0),
            Err(GitError::NotNonincreasing(_))
        ));
        assert!(matches!(
            InstabilityCertificate::new(2, 3, vec![6, 0], 0),
            Err(GitError::LeadingZeroOutOfRange { value: 6, max: 5 })
        ));
        assert!(InstabilityCertificate::new(2, 3, vec![3], 0).is_err());
        assert!(InstabilityCertificate::new(2, 3, vec![3, 0], 2).is_err());
    }

    #[test]
    fn read_from_matrix() {
        let a = LinearMatrix::parse(3, "0 0 0 x0 x1; x0 x1 x2 x3 x0").unwrap();
        let c = InstabilityCertificate::from_matrix(&a, 0).unwrap();
        assert_eq!(c.leading_zeros, vec![3, 0]);
        assert_eq!(
            check_instability_certificate(&c),
            CertificateOutcome::NonSemistable
        );
    }
}
