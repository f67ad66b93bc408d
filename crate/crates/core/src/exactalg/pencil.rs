//! Rank analysis of the linear pencil `β F − α G` over the projective line.
//!
//! Everything is computed in the chart `β = 1`, where the pencil is the
//! polynomial matrix `F − x G` over `Q[x]`. Its Smith normal form gives the
//! generic rank (number of invariant factors) and the exact rank at every
//! finite point: at `x = a` the rank is the number of invariant factors not
//! vanishing at `a`. The point `(1:0)` is checked directly as `rank G`.

use std::fmt;

use num_traits::{One, Zero};

use super::{AlgError, RatMatrix, Scalar, UniPoly};

/// A point `(α:β)` of the projective line, normalized so that the last
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PencilPoint {
    alpha: Scalar,
    beta: Scalar,
}

impl PencilPoint {
    pub fn new(alpha: Scalar, beta: Scalar) -> Result<Self, AlgError> {
        if !beta.is_zero() {
            Ok(PencilPoint {
                alpha: alpha / beta,
                beta: Scalar::one(),
            })
        } else if !alpha.is_zero() {
            Ok(PencilPoint {
                alpha: Scalar::one(),
                beta: Scalar::zero(),
            })
        } else {
            Err(AlgError::ZeroPencilPoint)
        }
    }

    /// The finite point `(a:1)`.
    pub fn finite(a: Scalar) -> Self {
        PencilPoint {
            alpha: a,
            beta: Scalar::one(),
        }
    }

    /// The point `(1:0)`.
    pub fn infinity() -> Self {
        PencilPoint {
            alpha: Scalar::one(),
            beta: Scalar::zero(),
        }
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn is_infinity(&self) -> bool {
        self.beta.is_zero()
    }

    /// The pencil member `β F − α G` at this point.
    pub fn member(&self, f: &RatMatrix, g: &RatMatrix) -> Result<RatMatrix, AlgError> {
        f.combine(&self.beta, g, &-&self.alpha)
    }
}

impl fmt::Display for PencilPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.alpha, self.beta)
    }
}

/// Where the pencil rank drops: a rational point, or the roots of a
/// squarefree polynomial without rational roots (in the chart `β = 1`, the
/// variable is `α`). Every root of such a polynomial has the same rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DropPoint {
    Rational(PencilPoint),
    Algebraic(UniPoly),
}

impl DropPoint {
    /// Number of points of the projective line this entry stands for.
    pub fn point_count(&self) -> usize {
        match self {
            DropPoint::Rational(_) => 1,
            DropPoint::Algebraic(p) => p.degree().unwrap_or(0),
        }
    }
}

impl fmt::Display for DropPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DropPoint::Rational(p) => write!(f, "{p}"),
            DropPoint::Algebraic(poly) => write!(f, "root of {poly}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DropLocusEntry {
    pub point: DropPoint,
    pub rank: usize,
}

/// Full rank profile of a pencil.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilAnalysis {
    pub generic_rank: usize,
    /// Monic invariant factors `d_1 | d_2 | ... | d_r` of `F − x G`.
    pub invariant_factors: Vec<UniPoly>,
    pub drop_locus: Vec<DropLocusEntry>,
}

impl PencilAnalysis {
    pub fn compute(f: &RatMatrix, g: &RatMatrix) -> Result<Self, AlgError> {
        check_shapes(f, g)?;
        let factors = invariant_factors(chart_matrix(f, g));
        let r = factors.len();
        let mut drops = Vec::new();

        if r > 0 {
            let mut sf = factors[r - 1].squarefree_part();
            for a in sf.rational_roots() {
                let predicted = rank_from_factors(&factors, &a);
                let point = PencilPoint::finite(a.clone());
                let direct = point.member(f, g)?.rank();
                if direct != predicted {
                    return Err(AlgError::RankCertification {
                        point: point.to_string(),
                        direct,
                        predicted,
                    });
                }
                sf = sf.div_rem(&UniPoly::linear(-a, Scalar::one())).0;
                drops.push(DropLocusEntry {
                    point: DropPoint::Rational(point),
                    rank: direct,
                });
            }
            // Remaining roots are irrational; split them by the first
            // invariant factor that vanishes there.
            if !sf.is_constant() {
                let mut below = UniPoly::one();
                for (i, d) in factors.iter().enumerate() {
                    let upto = sf.gcd(d);
                    let exact = upto.div_rem(&below).0.monic();
                    if !exact.is_constant() {
                        for (piece, direct) in rank_over_quotient(f, g, &exact)? {
                            if direct != i {
                                return Err(AlgError::RankCertification {
                                    point: format!("root of {piece}"),
                                    direct,
                                    predicted: i,
                                });
                            }
                        }
                        drops.push(DropLocusEntry {
                            point: DropPoint::Algebraic(exact),
                            rank: i,
                        });
                    }
                    below = upto;
                }
            }
            let at_infinity = g.rank();
            if at_infinity < r {
                drops.push(DropLocusEntry {
                    point: DropPoint::Rational(PencilPoint::infinity()),
                    rank: at_infinity,
                });
            }
        }

        Ok(PencilAnalysis {
            generic_rank: r,
            invariant_factors: factors,
            drop_locus: drops,
        })
    }

    /// Minimum of the rank over the whole projective line.
    pub fn min_rank(&self) -> usize {
        self.drop_locus
            .iter()
            .map(|e| e.rank)
            .min()
            .unwrap_or(self.generic_rank)
            .min(self.generic_rank)
    }
}

/// Rank of `β F − α G` over the field of rational functions in `(α:β)`.
pub fn pencil_generic_rank(f: &RatMatrix, g: &RatMatrix) -> Result<usize, AlgError> {
    check_shapes(f, g)?;
    Ok(invariant_factors(chart_matrix(f, g)).len())
}

/// The finite set of points where `rank(β F − α G)` is below the generic
/// rank, each with its exact rank.
pub fn pencil_drop_locus(f: &RatMatrix, g: &RatMatrix) -> Result<Vec<DropLocusEntry>, AlgError> {
    Ok(PencilAnalysis::compute(f, g)?.drop_locus)
}

/// `dim (ker F ∩ ker G)` for column kernels.
pub fn common_kernel_dim(f: &RatMatrix, g: &RatMatrix) -> Result<usize, AlgError> {
    check_shapes(f, g)?;
    Ok(f.vstack(g)?.kernel_dim())
}

fn check_shapes(f: &RatMatrix, g: &RatMatrix) -> Result<(), AlgError> {
    if f.shape() != g.shape() {
        return Err(f.mismatch(g));
    }
    Ok(())
}

/// `F − x G` as a grid of polynomials.
fn chart_matrix(f: &RatMatrix, g: &RatMatrix) -> Vec<Vec<UniPoly>> {
    (0..f.rows())
        .map(|r| {
            (0..f.cols())
                .map(|c| UniPoly::linear(f.get(r, c).clone(), -g.get(r, c)))
                .collect()
        })
        .collect()
}

fn rank_from_factors(factors: &[UniPoly], a: &Scalar) -> usize {
    factors.iter().filter(|d| !d.eval(a).is_zero()).count()
}

/// Monic invariant factors of a polynomial matrix via Smith normal form.
fn invariant_factors(mut a: Vec<Vec<UniPoly>>) -> Vec<UniPoly> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();

    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = min_degree_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }

        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if a[r][t].is_zero() {
                    continue;
                }
                let (q, rem) = a[r][t].div_rem(&a[t][t]);
                let pivot = a[t].clone();
                for (x, p) in a[r][t..cols].iter_mut().zip(&pivot[t..cols]) {
                    *x = &*x - &(&q * p);
                }
                dirty |= !rem.is_zero();
            }
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let (q, rem) = a[t][c].div_rem(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[c] - &(&q * &row[t]);
                    row[c] = v;
                }
                dirty |= !rem.is_zero();
            }
            if dirty {
                // A smaller-degree remainder appeared in row or column t;
                // bring it to the pivot and eliminate again.
                let cand_col = min_degree_entry(&a, t..rows, t..t + 1);
                let cand_row = min_degree_entry(&a, t..t + 1, t..cols);
                let best = [cand_col, cand_row]
                    .into_iter()
                    .flatten()
                    .min_by_key(|&(r, c)| a[r][c].degree());
                if let Some((r, c)) = best {
                    a.swap(t, r);
                    for row in a.iter_mut() {
                        row.swap(t, c);
                    }
                }
                continue;
            }
            // Pivot must divide the whole remaining block.
            let offender =
                (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !a[t][t].divides(&a[r][c])));
            match offender {
                Some(r) => {
                    let other = a[r].clone();
                    for (x, y) in a[t][t..cols].iter_mut().zip(&other[t..cols]) {
                        *x = &*x + y;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].monic());
    }
    out
}

fn min_degree_entry(
    a: &[Vec<UniPoly>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for r in rows {
        for c in cols.clone() {
            if let Some(d) = a[r][c].degree() {
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((r, c, d));
                }
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

/// Rank of `F − x G` over `Q[x]/(p)` for a squarefree `p`.
///
/// When `p` is reducible the quotient is a product of fields and elimination
/// can meet a nonzero zero divisor `e`; the modulus is then split into
/// `gcd(e, p)` and its cofactor and each part is handled on its own. The
/// result lists coprime factors of `p` whose product is `p`, each with the
/// rank shared by all of its roots.
pub fn rank_over_quotient(
    f: &RatMatrix,
    g: &RatMatrix,
    p: &UniPoly,
) -> Result<Vec<(UniPoly, usize)>, AlgError> {
    check_shapes(f, g)?;
    let p = p.monic();
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let grid: Vec<Vec<UniPoly>> = chart_matrix(f, g)
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.rem(&p)).collect())
        .collect();
    Ok(rank_mod(grid, p))
}

fn rank_mod(mut a: Vec<Vec<UniPoly>>, p: UniPoly) -> Vec<(UniPoly, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        let g = a[pr][col].gcd(&p);
        if !g.is_constant() {
            let cofactor = p.div_rem(&g).0.monic();
            let reduce = |m: &Vec<Vec<UniPoly>>, q: &UniPoly| -> Vec<Vec<UniPoly>> {
                m.iter()
                    .map(|row| row.iter().map(|e| e.rem(q)).collect())
                    .collect()
            };
            // `a` is row-equivalent to the input, so each part restarts from
            // scratch and reports the full rank.
            let mut out = rank_mod(reduce(&a, &g), g.clone());
            out.extend(rank_mod(reduce(&a, &cofactor), cofactor));
            return out;
        }
        a.swap(rank, pr);
        let inv = inverse_mod(&a[rank][col], &p);
        for x in a[rank][col..cols].iter_mut() {
            *x = (&*x * &inv).rem(&p);
        }
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot = a[rank].clone();
            for (x, y) in a[r][col..cols].iter_mut().zip(&pivot[col..cols]) {
                *x = (&*x - &(&factor * y)).rem(&p);
            }
        }
        rank += 1;
    }
    vec![(p, rank)]
}

/// Inverse of a unit `e` in `Q[x]/(p)` by the extended Euclidean algorithm.
fn inverse_mod(e: &UniPoly, p: &UniPoly) -> UniPoly {
    let (mut r0, mut r1) = (p.clone(), e.clone());
    let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::one());
    while !r1.is_zero() {
        let (q, r2) = r0.div_rem(&r1);
        let s2 = &s0 - &(&q * &s1);
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant since e is a unit
    let c = r0.leading().expect("unit has nonzero gcd").recip();
    s0.scale(&c).rem(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{ratio, scalar};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn point_normalization() {
        let p = PencilPoint::new(scalar(2), scalar(4)).unwrap();
        assert_eq!(p, PencilPoint::finite(ratio(1, 2)));
        let q = PencilPoint::new(scalar(-3), scalar(0)).unwrap();
        assert_eq!(q, PencilPoint::infinity());
        assert_eq!(
            PencilPoint::new(scalar(0), scalar(0)),
            Err(AlgError::ZeroPencilPoint)
        );
        assert_eq!(q.to_string(), "(1:0)");
    }

    #[test]
    fn generic_rank_examples() {
        let id = RatMatrix::identity(2);
        assert_eq!(pencil_generic_rank(&id, &id).unwrap(), 2);
        let f = m(&[&[1, 0], &[0, 0]]);
        let g = m(&[&[0, 0], &[0, 1]]);
        assert_eq!(pencil_generic_rank(&f, &g).unwrap(), 2);
    }

    #[test]
    fn diagonal_pencil_drops_at_both_ends() {
        let f = m(&[&[1, 0], &[0, 0]]);
        let g = m(&[&[0, 0], &[0, 1]]);
        let locus = pencil_drop_locus(&f, &g).unwrap();
        assert_eq!(
            locus,
            vec![
                DropLocusEntry {
                    point: DropPoint::Rational(PencilPoint::finite(scalar(0))),
                    rank: 1
                },
                DropLocusEntry {
                    point: DropPoint::Rational(PencilPoint::infinity()),
                    rank: 1
                },
            ]
        );
    }

    #[test]
    fn proportional_pencil_vanishes_at_one_point() {
        let f = m(&[&[1, 2, 0], &[0, 1, 1]]);
        let locus = pencil_drop_locus(&f, &f).unwrap();
        assert_eq!(
            locus,
            vec![DropLocusEntry {
                point: DropPoint::Rational(PencilPoint::finite(scalar(1))),
                rank: 0
            }]
        );
    }

    #[test]
    fn irrational_drop_points() {
        // F - xG = [[x, 2], [1, x]] has determinant x^2 - 2
        let f = m(&[&[0, 2], &[1, 0]]);
        let g = m(&[&[-1, 0], &[0, -1]]);
        let locus = pencil_drop_locus(&f, &g).unwrap();
        assert_eq!(
            locus,
            vec![DropLocusEntry {
                point: DropPoint::Algebraic(UniPoly::from_i64(&[-2, 0, 1])),
                rank: 1
            }]
        );
    }

    #[test]
    fn quotient_rank_splits_reducible_modulus() {
        // diag(x - 1, x^2 - 2): over Q[x]/((x-1)(x^2-2)) the rank is 1 on both parts,
        // but diag(x - 1, 1) has rank 1 at x=1 and rank 2 at the roots of x^2-2.
        let f = m(&[&[1, 0], &[0, 1]]);
        let g = m(&[&[1, 0], &[0, 0]]);
        let p = &UniPoly::from_i64(&[-1, 1]) * &UniPoly::from_i64(&[-2, 0, 1]);
        let mut parts = rank_over_quotient(&f, &g, &p).unwrap();
        parts.sort_by_key(|(q, _)| q.degree());
        assert_eq!(
            parts,
            vec![
                (UniPoly::from_i64(&[-1, 1]), 1),
                (UniPoly::from_i64(&[-2, 0, 1]), 2)
            ]
        );
    }

    #[test]
    fn common_kernel_examples() {
        let z = RatMatrix::zeros(3, 4);
        assert_eq!(common_kernel_dim(&z, &z).unwrap(), 4);
        let id = RatMatrix::identity(3);
        assert_eq!(common_kernel_dim(&id, &RatMatrix::zeros(3, 3)).unwrap(), 0);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = RatMatrix::zeros(2, 3);
        let b = RatMatrix::zeros(3, 2);
        assert!(pencil_generic_rank(&a, &b).is_err());
        assert!(pencil_drop_locus(&a, &b).is_err());
        assert!(common_kernel_dim(&a, &b).is_err());
    }

    #[test]
    fn zero_pencil_has_no_drops() {
        let z = RatMatrix::zeros(2, 2);
        let a = PencilAnalysis::compute(&z, &z).unwrap();
        assert_eq!(a.generic_rank, 0);
        assert!(a.drop_locus.is_empty());
        assert_eq!(a.min_rank(), 0);
    }
}
