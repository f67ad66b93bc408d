use serde::Serialize;
use thiserror::Error;

use super::SignConvention;
use crate::cohomology::{betti, CohomologyError, GoldenTable, ModuliParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalibrationError {
    #[error("golden table has no row for n = {0}")]
    MissingRow(usize),
    #[error("no sign convention reproduces the golden row for n = {0}")]
    NoMatch(usize),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Calibration {
    pub convention: SignConvention,
    /// Conventions reproducing the reference row.
    pub reference_matches: Vec<SignConvention>,
    /// Those among them that also reproduce the disambiguation row; empty if
    /// the reference row already singled one out.
    pub disambiguation_matches: Vec<SignConvention>,
}

/// Calibrates against the `n = 3` row, falling back to `n = 5` when several
/// conventions fit.
pub fn calibrate(golden: &GoldenTable) -> Result<Calibration, CalibrationError> {
    calibrate_with(golden, 3, 5)
}

/// Tries every convention on `M_{reference,reference,2}`. Conventions that
/// break the weight bookkeeping count as non-matching. Remaining ties are
/// resolved on `M_{fallback,fallback,2}`, then by the order of
/// [`SignConvention::all`].
pub fn calibrate_with(
    golden: &GoldenTable,
    reference: usize,
    fallback: usize,
) -> Result<Calibration, CalibrationError> {
    let reference_matches = matching(golden, reference, SignConvention::all())?;
    if reference_matches.is_empty() {
        return Err(CalibrationError::NoMatch(reference));
    }
    if reference_matches.len() == 1 {
        return Ok(Calibration {
            convention: reference_matches[0],
            reference_matches,
            disambiguation_matches: Vec::new(),
        });
    }
    let disambiguation_matches = matching(golden, fallback, reference_matches.clone())?;
    let convention = *disambiguation_matches
        .first()
        .ok_or(CalibrationError::NoMatch(fallback))?;
    Ok(Calibration {
        convention,
        reference_matches,
        disambiguation_matches,
    })
}

fn matching(
    golden: &GoldenTable,
    n: usize,
    candidates: Vec<SignConvention>,
) -> Result<Vec<SignConvention>, CalibrationError> {
    if golden.row(n).is_none() {
        return Err(CalibrationError::MissingRow(n));
    }
    let params = ModuliParams::new(n, n)?;
    let mut out = Vec::new();
    for conv in candidates {
        match betti(&params, conv) {
            Ok(h) => {
                if golden.diff(n, &h).is_some_and(|d| d.is_empty()) {
                    out.push(conv);
                }
            }
            Err(CohomologyError::Weight(_))
            | Err(CohomologyError::ShiftOutOfRange { .. })
            | Err(CohomologyError::ComponentDimension { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}
