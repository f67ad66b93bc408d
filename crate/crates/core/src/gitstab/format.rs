use serde::{Deserialize, Serialize};

use super::{parse_scalar, GitError, InstabilityCertificate, LinearMatrix};
use crate::exactalg::Scalar;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
enum Coefficient {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct CertificateSpec {
    s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    leading_zeros: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    n: usize,
    m: usize,
    k: usize,
    entries: Vec<Vec<Vec<Coefficient>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateSpec>,
}

/// A parsed matrix file: the matrix and, for `k ≥ 3`, an optional claimed
/// instability certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub matrix: LinearMatrix,
    pub certificate: Option<InstabilityCertificate>,
}

impl MatrixFile {
    pub fn from_json(text: &str) -> Result<Self, GitError> {
        let doc: MatrixDoc =
            serde_json::from_str(text).map_err(|e| GitError::Json(e.to_string()))?;
        let entries = doc
            .entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|form| form.into_iter().map(coefficient).collect())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let matrix = LinearMatrix::new(doc.n, doc.m, doc.k, entries)?;
        let certificate = doc
            .certificate
            .map(|c| {
                let zeros = c
                    .leading_zeros
                    .unwrap_or_else(|| matrix.leading_zero_counts());
                InstabilityCertificate::new(doc.k, doc.m, zeros, c.s)
            })
            .transpose()?;
        Ok(MatrixFile {
            matrix,
            certificate,
        })
    }

    pub fn to_json(&self) -> String {
        let entries = self
            .matrix
            .entries()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|form| form.iter().map(write_coefficient).collect())
                    .collect()
            })
            .collect();
        let doc = MatrixDoc {
            n: self.matrix.n(),
            m: self.matrix.m(),
            k: self.matrix.k(),
            entries,
            certificate: self.certificate.as_ref().map(|c| CertificateSpec {
                s: c.s,
                leading_zeros: Some(c.leading_zeros.clone()),
            }),
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }
}

impl From<LinearMatrix> for MatrixFile {
    fn from(matrix: LinearMatrix) -> Self {
        MatrixFile {
            matrix,
            certificate: None,
        }
    }
}

fn coefficient(c: Coefficient) -> Result<Scalar, GitError> {
    match c {
        Coefficient::Int(v) => Ok(crate::exactalg::scalar(v)),
        Coefficient::Text(t) => parse_scalar(&t).ok_or(GitError::CoefficientParse(t)),
    }
}

fn write_coefficient(c: &Scalar) -> Coefficient {
    match (c.is_integer(), i64::try_from(c.numer())) {
        (true, Ok(v)) => Coefficient::Int(v),
        _ => Coefficient::Text(c.to_string()),
    }
}
