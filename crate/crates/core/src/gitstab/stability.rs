use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use super::{GitError, LinearMatrix};
use crate::exactalg::{
    common_kernel_dim, scalar, DropPoint, PencilAnalysis, PencilPoint, RatMatrix,
};

/// Reasons a matrix cannot be semistable before any pencil analysis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `m > k n`: the semistable locus is empty for these parameters.
    EmptySemistableLocus { n: usize, m: usize, k: usize },
    /// `A : W → I ⊗ V` is not injective.
    NotInjectiveOnW { rank: usize, required: usize },
    /// Some combination of rows vanishes identically.
    DegenerateRows { rank: usize, required: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySemistableLocus { n, m, k } => {
                write!(f, "m={m} > k*n={}: no semistable points", k * n)
            }
            Violation::NotInjectiveOnW { rank, required } => {
                write!(f, "not injective on W (rank {rank} < {required})")
            }
            Violation::DegenerateRows { rank, required } => {
                write!(f, "row span degenerate (rank {rank} < {required})")
            }
        }
    }
}

/// Checks the necessary conditions for semistability that do not depend on
/// the pencil. Any reported violation implies the matrix is unstable.
pub fn validate(a: &LinearMatrix) -> Vec<Violation> {
    let mut out = Vec::new();
    if a.m() > a.k() * a.n() {
        out.push(Violation::EmptySemistableLocus {
            n: a.n(),
            m: a.m(),
            k: a.k(),
        });
    }
    let w_rank = a.w_flattening().rank();
    if w_rank < a.cols() {
        out.push(Violation::NotInjectiveOnW {
            rank: w_rank,
            required: a.cols(),
        });
    }
    let row_rank = a.row_flattening().rank();
    if row_rank < a.k() {
        out.push(Violation::DegenerateRows {
            rank: row_rank,
            required: a.k(),
        });
    }
    out
}

/// The pencil attached to a `2 × (m+2)` matrix: row `j` of `f` (resp. `g`)
/// is the coefficient vector of the entry in column `j` of the first
/// (resp. second) row. The member at `(α:β)` is `β f − α g`; its left kernel
/// has dimension `dim(R_ω ∩ T_A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    pub f: RatMatrix,
    pub g: RatMatrix,
}

impl Pencil {
    pub fn from_matrix(a: &LinearMatrix) -> Result<Self, GitError> {
        require_k2(a)?;
        let side = |r: usize| {
            RatMatrix::from_rows((0..a.cols()).map(|j| a.entry(r, j).to_vec()).collect())
                .expect("entries share a length")
        };
        Ok(Pencil {
            f: side(0),
            g: side(1),
        })
    }

    pub fn analyze(&self) -> Result<PencilAnalysis, GitError> {
        Ok(PencilAnalysis::compute(&self.f, &self.g)?)
    }
}

fn require_k2(a: &LinearMatrix) -> Result<(), GitError> {
    if a.k() != 2 {
        return Err(GitError::RequiresTwoRows { k: a.k() });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Unstable,
    StrictlySemistable,
    Stable,
}

impl Verdict {
    pub fn is_semistable(self) -> bool {
        self != Verdict::Unstable
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Unstable => "Unstable",
            Verdict::StrictlySemistable => "StrictlySemistable",
            Verdict::Stable => "Stable",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Point(DropPoint),
    Violation(Violation),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(p) => write!(f, "{p}"),
            Witness::Violation(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    /// `max_ω dim(R_ω ∩ T_A)`; absent when a violation decided the verdict.
    pub s_max: Option<usize>,
    pub witness: Option<Witness>,
}

/// Everything the pencil says about a `k = 2` matrix, computed once.
#[derive(Clone, Debug)]
pub struct K2Analysis {
    pub violations: Vec<Violation>,
    pub verdict: StabilityVerdict,
    /// `None` when `A` is not injective on `W`.
    pub degeneracy_dim: Option<i64>,
    pub pencil: Option<PencilAnalysis>,
    pub common_kernel: Option<usize>,
}

impl K2Analysis {
    pub fn compute(a: &LinearMatrix) -> Result<Self, GitError> {
        require_k2(a)?;
        let violations = validate(a);
        let injective = !violations
            .iter()
            .any(|v| matches!(v, Violation::NotInjectiveOnW { .. }));
        if !injective {
            let verdict = StabilityVerdict {
                verdict: Verdict::Unstable,
                s_max: None,
                witness: violations.first().cloned().map(Witness::Violation),
            };
            return Ok(K2Analysis {
                violations,
                verdict,
                degeneracy_dim: None,
                pencil: None,
                common_kernel: None,
            });
        }
        let pencil = Pencil::from_matrix(a)?;
        let analysis = pencil.analyze()?;
        let k0 = common_kernel_dim(&pencil.f, &pencil.g)?;
        let verdict = if let Some(v) = violations.first() {
            StabilityVerdict {
                verdict: Verdict::Unstable,
                s_max: Some(a.cols() - analysis.min_rank()),
                witness: Some(Witness::Violation(v.clone())),
            }
        } else {
            verdict_from_pencil(a, &analysis)
        };
        let degeneracy_dim = Some(degeneracy_from_pencil(a.n(), &analysis, k0));
        Ok(K2Analysis {
            violations,
            verdict,
            degeneracy_dim,
            pencil: Some(analysis),
            common_kernel: Some(k0),
        })
    }

    pub fn strata(&self, a: &LinearMatrix) -> Result<StrataIndices, GitError> {
        if !self.verdict.verdict.is_semistable() {
            return Err(GitError::NotSemistable);
        }
        let s_max = self
            .verdict
            .s_max
            .expect("semistable implies pencil analysis") as i64;
        let dim_d = self.degeneracy_dim.expect("semistable implies injective");
        Ok(StrataIndices {
            j_s: (s_max - (a.m() as i64 - a.n() as i64)).max(1),
            j_tilde: (dim_d + 2).max(1),
        })
    }
}

fn verdict_from_pencil(a: &LinearMatrix, analysis: &PencilAnalysis) -> StabilityVerdict {
    let cols = a.cols();
    let min_rank = analysis.min_rank();
    let s_max = cols - min_rank;
    // compare s_max against (m+2)/2 without division
    let verdict = match (2 * s_max).cmp(&cols) {
        Ordering::Less => Verdict::Stable,
        Ordering::Equal => Verdict::StrictlySemistable,
        Ordering::Greater => Verdict::Unstable,
    };
    let extremal = analysis
        .drop_locus
        .iter()
        .filter(|e| e.rank == min_rank)
        .map(|e| e.point.clone())
        .next();
    let witness = match (verdict, extremal) {
        (_, Some(p)) => Some(Witness::Point(p)),
        (Verdict::Stable, None) => None,
        (_, None) => Some(Witness::Point(DropPoint::Rational(generic_point(analysis)))),
    };
    StabilityVerdict {
        verdict,
        s_max: Some(s_max),
        witness,
    }
}

/// First point of `0, ∞, 1, −1, 2, −2, …` outside the drop locus.
fn generic_point(analysis: &PencilAnalysis) -> PencilPoint {
    let taken = |p: &PencilPoint| {
        analysis
            .drop_locus
            .iter()
            .any(|e| e.point == DropPoint::Rational(p.clone()))
    };
    let candidates = std::iter::once(PencilPoint::finite(scalar(0)))
        .chain(std::iter::once(PencilPoint::infinity()))
        .chain(
            (1..)
                .flat_map(|i| [scalar(i), scalar(-i)])
                .map(PencilPoint::finite),
        );
    candidates
        .into_iter()
        .find(|p| !taken(p))
        .expect("the drop locus is finite")
}

/// `D(A) = ⋃_ω P(ker M(ω))`. Away from the common zero locus the parameter
/// `ω` of a point is unique, so the generic kernels sweep a variety of
/// dimension `κ_gen` exactly when `κ_gen > k₀`.
fn degeneracy_from_pencil(n: usize, analysis: &PencilAnalysis, k0: usize) -> i64 {
    let coords = n as i64 + 1;
    let kappa_gen = coords - analysis.generic_rank as i64;
    let mut dim = k0 as i64 - 1;
    if kappa_gen > k0 as i64 {
        dim = dim.max(kappa_gen);
    }
    for e in &analysis.drop_locus {
        dim = dim.max(coords - e.rank as i64 - 1);
    }
    dim
}

/// GIT (semi)stability of a `2 × (m+2)` matrix from the pencil criterion
/// `dim(R_ω ∩ T_A) ≤ (m+2)/2` (resp. `<`) for every `ω`.
pub fn stability_k2(a: &LinearMatrix) -> Result<StabilityVerdict, GitError> {
    Ok(K2Analysis::compute(a)?.verdict)
}

/// Projective dimension of the degeneracy locus; `-1` when it is empty.
pub fn degeneracy_dim_k2(a: &LinearMatrix) -> Result<i64, GitError> {
    K2Analysis::compute(a)?
        .degeneracy_dim
        .ok_or(GitError::NotInjective)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StrataIndices {
    /// Largest `j` with `A ∈ S^j`.
    pub j_s: i64,
    /// Largest `j` with `A ∈ S̃^j`.
    pub j_tilde: i64,
}

pub fn strata_indices(a: &LinearMatrix) -> Result<StrataIndices, GitError> {
    K2Analysis::compute(a)?.strata(a)
}

/// The unordered pair of row-space spans read off a block matrix
/// `[[0, f], [g, 0]]`, each as a reduced row echelon basis. The pair is
/// stored in sorted order so that equal pairs compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPair {
    pub first: RatMatrix,
    pub second: RatMatrix,
}

pub fn boundary_point_even_m(a: &LinearMatrix) -> Result<BoundaryPair, GitError> {
    require_k2(a)?;
    let m = a.m();
    if m % 2 == 1 {
        return Err(GitError::NotBlockForm("m is odd".into()));
    }
    let half = m / 2 + 1;
    let is_zero = |r: usize, c: usize| a.entry(r, c).iter().all(num_traits::Zero::is_zero);
    let zero_left = (0..half).all(|c| is_zero(0, c));
    let zero_right = (half..a.cols()).all(|c| is_zero(1, c));
    if !(zero_left && zero_right) {
        return Err(GitError::NotBlockForm(format!(
            "expected zeros in row 0 columns 0..{half} and row 1 columns {half}..{}",
            a.cols()
        )));
    }
    let span = |r: usize, cols: std::ops::Range<usize>| -> Result<RatMatrix, GitError> {
        let basis = RatMatrix::from_rows(cols.map(|c| a.entry(r, c).to_vec()).collect())?;
        let (rref, pivots) = basis.rref();
        if pivots.len() != half {
            return Err(GitError::NotBlockForm(format!(
                "row {r} block spans only {} of {half} dimensions",
                pivots.len()
            )));
        }
        Ok(rref)
    };
    let f = span(0, half..a.cols())?;
    let g = span(1, 0..half)?;
    let (first, second) = if f.to_rows() <= g.to_rows() {
        (f, g)
    } else {
        (g, f)
    };
    Ok(BoundaryPair { first, second })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(n: usize, s: &str) -> LinearMatrix {
        LinearMatrix::parse(n, s).unwrap()
    }

    #[test]
    fn validate_examples() {
        let zero_col = mat(2, "0 x0 x1 x2; 0 x1 x2 x0");
        assert!(validate(&zero_col)
            .iter()
            .any(|v| matches!(v, Violation::NotInjectiveOnW { .. })));
        let zero_row = mat(2, "0 0 0 0; x0 x1 x2 x0");
        assert!(validate(&zero_row)
            .iter()
            .any(|v| matches!(v, Violation::DegenerateRows { .. })));
        assert!(validate(&mat(1, "x0 x1 0; 0 x0 x1")).is_empty());
        let too_wide = mat(1, "x0 x1 0 0 0; 0 0 x0 x1 x0");
        assert!(validate(&too_wide)
            .iter()
            .any(|v| matches!(v, Violation::EmptySemistableLocus { .. })));
    }

    #[test]
    fn remark_matrix_is_stable() {
        let a = mat(3, "0 0 x0 x1 x2; x0 x1 0 0 x3");
        let v = stability_k2(&a).unwrap();
        assert_eq!(v.verdict, Verdict::Stable);
        assert_eq!(v.s_max, Some(2));
        assert_eq!(degeneracy_dim_k2(&a).unwrap(), 1);
        assert_eq!(
            strata_indices(&a).unwrap(),
            StrataIndices { j_s: 2, j_tilde: 3 }
        );
    }

    #[test]
    fn zero_pattern_is_unstable() {
        let a = mat(3, "0 0 0 x0 x1; x0 x1 x2 x3 x0");
        let v = stability_k2(&a).unwrap();
        assert_eq!(v.verdict, Verdict::Unstable);
        assert!(v.s_max.unwrap() >= 3);
        assert_eq!(
            v.witness,
            Some(Witness::Point(DropPoint::Rational(PencilPoint::finite(
                scalar(0)
            ))))
        );
    }

    #[test]
    fn block_matrix_is_strictly_semistable() {
        let a = mat(2, "0 0 x0 x1; x0 x1 0 0");
        let v = stability_k2(&a).unwrap();
        assert_eq!(v.verdict, Verdict::StrictlySemistable);
        assert_eq!(v.s_max, Some(2));
    }

    #[test]
    fn schwarzenberger_matrix() {
        let a = mat(1, "x0 x1 0; 0 x0 x1");
        assert_eq!(stability_k2(&a).unwrap().verdict, Verdict::Stable);
        assert_eq!(degeneracy_dim_k2(&a).unwrap(), -1);
        assert_eq!(
            strata_indices(&a).unwrap(),
            StrataIndices { j_s: 1, j_tilde: 1 }
        );
    }

    #[test]
    fn codimension_normal_form() {
        let a = mat(3, "x0 x1 0 0 x2; 0 0 x0 x1 x3");
        assert_eq!(stability_k2(&a).unwrap().verdict, Verdict::Stable);
        assert_eq!(degeneracy_dim_k2(&a).unwrap(), 1);
        assert_eq!(
            strata_indices(&a).unwrap(),
            StrataIndices { j_s: 2, j_tilde: 3 }
        );
    }

    #[test]
    fn non_injective_short_circuits() {
        let a = mat(2, "0 x0 x1 x2; 0 x1 x2 x0");
        let v = stability_k2(&a).unwrap();
        assert_eq!(v.verdict, Verdict::Unstable);
        assert_eq!(v.s_max, None);
        assert!(matches!(v.witness, Some(Witness::Violation(_))));
        assert_eq!(degeneracy_dim_k2(&a), Err(GitError::NotInjective));
        assert_eq!(strata_indices(&a), Err(GitError::NotSemistable));
    }

    #[test]
    fn rank_three_rejected() {
        let a = mat(1, "x0 0 0 0; 0 x0 0 0; 0 0 x0 x1");
        assert_eq!(stability_k2(&a), Err(GitError::RequiresTwoRows { k: 3 }));
    }

    #[test]
    fn boundary_pairs() {
        let a = mat(2, "0 0 x0 x1; x0 x1 0 0");
        let p = boundary_point_even_m(&a).unwrap();
        assert_eq!(p.first, p.second);
        assert_eq!(
            p.first,
            RatMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]).unwrap()
        );

        let b = mat(2, "0 0 x0 x1; x1 x2 0 0");
        let q = boundary_point_even_m(&b).unwrap();
        assert_eq!(
            q.first,
            RatMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1]]).unwrap()
        );
        assert_eq!(
            q.second,
            RatMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]).unwrap()
        );

        // swap rows, then move the second block in front
        let swapped = b.swap_rows(0, 1).permute_columns(&[2, 3, 0, 1]);
        assert_eq!(boundary_point_even_m(&swapped).unwrap(), q);
    }

    #[test]
    fn boundary_rejects_non_block_input() {
        let a = mat(2, "x0 0 x0 x1; x0 x1 0 0");
        assert!(matches!(
            boundary_point_even_m(&a),
            Err(GitError::NotBlockForm(_))
        ));
        let odd = mat(3, "0 0 x0 x1 x2; x0 x1 0 0 x3");
        assert!(matches!(
            boundary_point_even_m(&odd),
            Err(GitError::NotBlockForm(_))
        ));
    }
}
