//! Torus weights at the fixed points and the number `n(A)` of positive
//! tangent weights that places each fixed component in the
//! Białynicki-Birula decomposition.
//!
//! The tangent space at `A` is `Ext¹(F_A, F_A)`, whose weights are those of
//! `I* ⊗ (W ⊗ V) / a(I)` minus those of `W* ⊗ W`, plus one trivial weight.

mod calibrate;
mod closed_form;
mod convention;
mod report;

pub use calibrate::{calibrate, calibrate_with, Calibration, CalibrationError};
pub use closed_form::{closed_form_n1_n2, discrepancy_report, Discrepancy, DiscrepancySink};
pub use convention::{ConventionParseError, SignConvention};
pub use report::{tangent_counts, tangent_report, TangentCounts, TangentReport};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::gitstab::LinearMatrix;
use crate::torusfix::{FixedPoint, TorusError, Type1Point, Type2Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight system inconsistent at entry ({row}, {col})")]
    Inconsistent { row: usize, col: usize },
    #[error("weight system does not determine every weight")]
    Underdetermined,
    #[error("weight {weight} of a(I) does not occur in I* ⊗ W ⊗ V")]
    RemovedWeightMissing { weight: i64 },
    #[error("n = {0} is too large for 64-bit weights")]
    TooLarge(usize),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// Weights `c_i = 2^i` of `x_i`, `a` of the basis of `I`, `b` of the basis
/// of `W`. Every nonzero entry `(r, s)` in the variable `x_i` satisfies
/// `a_r − b_s = c_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightData {
    pub c: Vec<i64>,
    pub a: [i64; 2],
    pub b: Vec<i64>,
}

pub fn base_weights(n: usize) -> Result<Vec<i64>, WeightError> {
    if n > 60 {
        return Err(WeightError::TooLarge(n));
    }
    Ok((0..=n).map(|i| 1i64 << i).collect())
}

pub fn type1_weights(p: &Type1Point) -> WeightData {
    let c: Vec<i64> = (0..=p.n).map(|i| 1i64 << i).collect();
    let a1 = c[p.j[0]] - c[p.i[0]];
    let mut b: Vec<i64> = p.i.iter().map(|&i| -c[i]).collect();
    b.extend(p.j[1..].iter().map(|&j| a1 - c[j]));
    WeightData { c, a: [0, a1], b }
}

pub fn type2_weights(p: &Type2Point) -> WeightData {
    let c: Vec<i64> = (0..=p.n).map(|i| 1i64 << i).collect();
    let b = p.i.iter().map(|&i| -c[i]).collect();
    WeightData { c, a: [0, 0], b }
}

/// Weights from the closed solution, checked against the matrix of the
/// point.
pub fn solve_weights(p: &FixedPoint) -> Result<WeightData, WeightError> {
    base_weights(p.n())?;
    let w = match p {
        FixedPoint::Type1(q) => type1_weights(q),
        FixedPoint::Type2(q) => type2_weights(q),
    };
    check_equivariance(&w, &p.matrix())?;
    Ok(w)
}

pub fn check_equivariance(w: &WeightData, a: &LinearMatrix) -> Result<(), WeightError> {
    for r in 0..a.k().min(2) {
        for s in 0..a.cols() {
            for (i, coeff) in a.entry(r, s).iter().enumerate() {
                if !coeff.is_zero() && w.a[r] - w.b[s] != w.c[i] {
                    return Err(WeightError::Inconsistent { row: r, col: s });
                }
            }
        }
    }
    Ok(())
}

/// Solves `a_r − b_s = c_i` over the nonzero entries of a `2 × (m+2)`
/// matrix by propagation from `a_0 = 0`.
pub fn solve_from_matrix(a: &LinearMatrix) -> Result<WeightData, WeightError> {
    if a.k() != 2 {
        return Err(WeightError::Underdetermined);
    }
    let c = base_weights(a.n())?;
    let mut ar: [Option<i64>; 2] = [Some(0), None];
    let mut b: Vec<Option<i64>> = vec![None; a.cols()];
    let mut terms = Vec::new();
    for r in 0..2 {
        for s in 0..a.cols() {
            for (i, x) in a.entry(r, s).iter().enumerate() {
                if !x.is_zero() {
                    terms.push((r, s, c[i]));
                }
            }
        }
    }
    loop {
        let mut changed = false;
        for &(r, s, ci) in &terms {
            match (ar[r], b[s]) {
                (Some(x), None) => {
                    b[s] = Some(x - ci);
                    changed = true;
                }
                (None, Some(y)) => {
                    ar[r] = Some(y + ci);
                    changed = true;
                }
                (Some(x), Some(y)) if x - y != ci => {
                    return Err(WeightError::Inconsistent { row: r, col: s });
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let a_w = [
        ar[0].ok_or(WeightError::Underdetermined)?,
        ar[1].ok_or(WeightError::Underdetermined)?,
    ];
    let b = b
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(WeightError::Underdetermined)?;
    Ok(WeightData { c, a: a_w, b })
}
