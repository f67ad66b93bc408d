//! Hodge and Betti numbers of `M_{n,m,2}` (`m` odd) assembled from the torus
//! fixed points, together with the closed-form Euler characteristic and the
//! dimension formulas for the strata.

mod golden;

pub use golden::{GoldenTable, Mismatch, TABLE_MAX_DEGREE};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{binomial, binomial_u64};
use crate::tangweights::{
    tangent_counts, type1_weights, type2_weights, SignConvention, TangentCounts, WeightError,
};
use crate::torusfix::{check_params, enum_type2, par_type1, TorusError, Type2Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("l = {0} must be odd and at least 3")]
    BadL(usize),
    #[error("j = {j} outside 2 <= j < {upper}")]
    StrataRange { j: usize, upper: usize },
    #[error("m = {m} is odd; the strictly semistable boundary is empty")]
    OddM { m: usize },
    #[error("m = {m} is even; only odd m is supported")]
    EvenM { m: usize },
    #[error("(n, m) = ({n}, {m}) outside 1 <= m <= 2n - 1")]
    OutOfRange { n: usize, m: usize },
    #[error("fixed point {point}: contribution shifted to degree {shift} outside 0..={dim}")]
    ShiftOutOfRange {
        point: String,
        shift: i64,
        dim: usize,
    },
    #[error("fixed point {point}: {found} zero weights, component has dimension {expected}")]
    ComponentDimension {
        point: String,
        expected: i64,
        found: i64,
    },
    #[error("golden table: {0}")]
    Golden(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

fn check_l(l: usize) -> Result<(), CohomologyError> {
    if l < 3 || l.is_multiple_of(2) {
        return Err(CohomologyError::BadL(l));
    }
    Ok(())
}

/// `h^{p,p}(M_l) = Σ_{j=0}^{min(p, l−3−p)} C(l−1, j)` for `0 ≤ p ≤ l−3`.
pub fn hodge_ml(l: usize, p: i64) -> Result<u64, CohomologyError> {
    check_l(l)?;
    if p < 0 || p > l as i64 - 3 {
        return Ok(0);
    }
    let top = p.min(l as i64 - 3 - p);
    Ok((0..=top).map(|j| binomial_u64(l as u64 - 1, j)).sum())
}

/// `(h^{0,0}, …, h^{l−3,l−3})` of `M_l`.
pub fn hodge_ml_vector(l: usize) -> Result<Vec<u64>, CohomologyError> {
    check_l(l)?;
    (0..=l as i64 - 3).map(|p| hodge_ml(l, p)).collect()
}

pub fn euler_ml(l: usize) -> Result<u64, CohomologyError> {
    Ok(hodge_ml_vector(l)?.iter().sum())
}

/// Parameters of `M_{n,m,2}` with `m` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliParams {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    /// `⌊(m+3)/2⌋`.
    pub j_m: usize,
    /// `j(m) + n − m`.
    pub j0: i64,
    pub dim: usize,
}

impl ModuliParams {
    pub fn new(n: usize, m: usize) -> Result<Self, CohomologyError> {
        if m.is_multiple_of(2) {
            return Err(CohomologyError::EvenM { m });
        }
        let t = check_params(n, m).map_err(|_| CohomologyError::OutOfRange { n, m })?;
        let j_m = (m + 3) / 2;
        Ok(ModuliParams {
            n,
            m,
            t,
            j_m,
            j0: j_m as i64 + n as i64 - m as i64,
            dim: moduli_dim(n, m),
        })
    }

    /// Parameters of the isomorphic space `M_{n, 2n−m−2, 2}`, if any.
    pub fn dual(&self) -> Option<ModuliParams> {
        let m = (2 * self.n).checked_sub(self.m + 2)?;
        ModuliParams::new(self.n, m).ok()
    }
}

/// `2(m+2)(n+1) − (m+2)² − 3`.
pub fn moduli_dim(n: usize, m: usize) -> usize {
    2 * (m + 2) * (n + 1) - (m + 2) * (m + 2) - 3
}

/// Diagonal Hodge numbers `h^{p,p}`, `p = 0..=dim`; the Betti numbers are
/// `b_{2p} = h^{p,p}` and vanish in odd degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct HodgePolynomial {
    h: Vec<u64>,
}

impl HodgePolynomial {
    pub fn new(h: Vec<u64>) -> Self {
        HodgePolynomial { h }
    }

    pub fn hodge(&self) -> &[u64] {
        &self.h
    }

    /// `b_i`, zero in odd degree and above the top degree.
    pub fn b(&self, i: usize) -> u64 {
        if i % 2 == 1 {
            return 0;
        }
        self.h.get(i / 2).copied().unwrap_or(0)
    }

    /// `b_0, b_1, …, b_{2 dim}`.
    pub fn betti_numbers(&self) -> Vec<u64> {
        (0..2 * self.h.len().max(1) - 1)
            .map(|i| self.b(i))
            .collect()
    }

    pub fn euler(&self) -> u64 {
        self.h.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.h.iter().eq(self.h.iter().rev())
    }
}

fn add_into(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn shift_index(
    point: impl FnOnce() -> String,
    shift: i64,
    len: usize,
    dim: usize,
) -> Result<usize, CohomologyError> {
    if shift < 0 || shift as usize + len > dim + 1 {
        return Err(CohomologyError::ShiftOutOfRange {
            point: point(),
            shift,
            dim,
        });
    }
    Ok(shift as usize)
}

fn check_zero_count(
    point: impl FnOnce() -> String,
    counts: &TangentCounts,
    expected: i64,
) -> Result<(), CohomologyError> {
    if counts.zero_count != expected {
        return Err(CohomologyError::ComponentDimension {
            point: point(),
            expected,
            found: counts.zero_count,
        });
    }
    Ok(())
}

/// Białynicki-Birula assembly: each isolated point adds 1 in degree `n(A)`,
/// each component `M_l` adds its Hodge vector shifted by `n(A)`.
pub fn betti(
    params: &ModuliParams,
    conv: SignConvention,
) -> Result<HodgePolynomial, CohomologyError> {
    let (n, m, dim) = (params.n, params.m, params.dim);
    let zero = || vec![0u64; dim + 1];
    let isolated = par_type1(n, m)?
        .try_fold(zero, |mut h, p| {
            let counts = tangent_counts(&type1_weights(&p), conv)?;
            let name = || format!("{:?}", (&p.i, &p.j));
            check_zero_count(name, &counts, 0)?;
            h[shift_index(name, counts.n(), 1, dim)?] += 1;
            Ok::<_, CohomologyError>(h)
        })
        .try_reduce(zero, |a, b| Ok(add_into(a, b)))?;
    let components: Vec<Type2Point> = enum_type2(n, m)?.collect();
    let spread = components
        .par_iter()
        .try_fold(zero, |mut h, p| {
            let counts = tangent_counts(&type2_weights(p), conv)?;
            let name = || format!("{:?}", p.i);
            check_zero_count(name, &counts, p.l() as i64 - 3)?;
            let hodge = hodge_ml_vector(p.l())?;
            let at = shift_index(name, counts.n(), hodge.len(), dim)?;
            for (k, x) in hodge.into_iter().enumerate() {
                h[at + k] += x;
            }
            Ok::<_, CohomologyError>(h)
        })
        .try_reduce(zero, |a, b| Ok(add_into(a, b)))?;
    Ok(HodgePolynomial::new(add_into(isolated, spread)))
}

/// `C(n+1,2)·C(n,t)² + Σ_{d=1}^{n−t} C(n+1,t−d)·C(n+1−t+d,2d+1)·e(M_{2d+1})`.
pub fn euler_formula(params: &ModuliParams) -> BigUint {
    let (n, t) = (params.n as u64, params.t as i64);
    let mut total = binomial(n + 1, 2) * binomial(n, t).pow(2);
    for d in 1..=(n as i64 - t) {
        let e = euler_ml(2 * d as usize + 1).expect("2d+1 >= 3 is odd");
        total += binomial(n + 1, t - d) * binomial((n as i64 + 1 - t + d) as u64, 2 * d + 1) * e;
    }
    total
}

/// Euler characteristic as a sum over the enumerated fixed components.
pub fn census_euler(params: &ModuliParams) -> Result<BigUint, CohomologyError> {
    let isolated = par_type1(params.n, params.m)?.count() as u64;
    let mut total = BigUint::from(isolated);
    for p in enum_type2(params.n, params.m)? {
        total += euler_ml(p.l())?;
    }
    Ok(total)
}

/// Codimension `(j+m−n)(j−1) − 1` of the stratum `S^j` for `2 ≤ j < j(m)`.
pub fn strata_codim(n: usize, m: usize, j: usize) -> Result<i64, CohomologyError> {
    let upper = (m + 3) / 2;
    if j < 2 || j >= upper {
        return Err(CohomologyError::StrataRange { j, upper });
    }
    Ok((j as i64 + m as i64 - n as i64) * (j as i64 - 1) - 1)
}

/// `(n − m/2)(m/2 + 1)` for even `m`.
pub fn boundary_dim_even_m(n: usize, m: usize) -> Result<i64, CohomologyError> {
    if m % 2 == 1 {
        return Err(CohomologyError::OddM { m });
    }
    let h = (m / 2) as i64;
    Ok((n as i64 - h) * (h + 1))
}
