//! Fixed points of the torus acting on `M_{n,m,2}` (`m` odd) through the
//! weights `x_i ↦ t^{2^i} x_i`.
//!
//! They come in two families. Type 1 points are isolated and indexed by a
//! pair of index sets `(I, J)`. Type 2 points are whole components, each a
//! configuration space `M_l` of `l` points on the line, indexed by a
//! nondecreasing vector in which no value occurs more than twice.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{binomial_u64, scalar, Scalar};
use crate::gitstab::LinearMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("m = {m} is even; fixed points are classified only for odd m")]
    EvenM { m: usize },
    #[error("(n, m) = ({n}, {m}) outside 1 <= m <= 2n - 1")]
    OutOfRange { n: usize, m: usize },
    #[error("invalid fixed point: {0}")]
    InvalidPoint(String),
}

/// `t = (m + 1) / 2` after checking that `m` is odd and in range.
pub fn check_params(n: usize, m: usize) -> Result<usize, TorusError> {
    if m.is_multiple_of(2) {
        return Err(TorusError::EvenM { m });
    }
    if n == 0 || m > 2 * n - 1 {
        return Err(TorusError::OutOfRange { n, m });
    }
    Ok(m.div_ceil(2))
}

/// An isolated fixed point `A_{I,J}`: row 0 is `(x_{i0}, x_{i1}, …, x_{it}, 0, …, 0)`
/// and row 1 is `(x_{j0}, 0, …, 0, x_{j1}, …, x_{jt})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Type1Point {
    pub n: usize,
    pub m: usize,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

/// A fixed component indexed by `i_1 ≤ … ≤ i_{m+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Type2Point {
    pub n: usize,
    pub m: usize,
    pub i: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixedPoint {
    Type1(Type1Point),
    Type2(Type2Point),
}

impl Type1Point {
    pub fn new(n: usize, m: usize, i: Vec<usize>, j: Vec<usize>) -> Result<Self, TorusError> {
        let t = check_params(n, m)?;
        let bad = |msg: &str| Err(TorusError::InvalidPoint(format!("I={i:?}, J={j:?}: {msg}")));
        if i.len() != t + 1 || j.len() != t + 1 {
            return bad(&format!("index sets need {} entries", t + 1));
        }
        if i.iter().chain(&j).any(|&x| x > n) {
            return bad(&format!("indices must lie in 0..={n}"));
        }
        if i[0] >= j[0] {
            return bad("need i0 < j0");
        }
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&i[1..]) || !increasing(&j[1..]) {
            return bad("tails must be strictly increasing");
        }
        if i[1..].contains(&i[0]) || j[1..].contains(&j[0]) {
            return bad("head repeated in its tail");
        }
        Ok(Type1Point { n, m, i, j })
    }

    pub fn t(&self) -> usize {
        self.i.len() - 1
    }

    pub fn matrix(&self) -> LinearMatrix {
        let t = self.t();
        let mut row0 = vec![Some(self.i[0])];
        row0.extend(self.i[1..].iter().map(|&x| Some(x)));
        row0.extend(std::iter::repeat_n(None, t));
        let mut row1 = vec![Some(self.j[0])];
        row1.extend(std::iter::repeat_n(None, t));
        row1.extend(self.j[1..].iter().map(|&x| Some(x)));
        LinearMatrix::monomial(self.n, &[row0, row1]).expect("indices checked on construction")
    }
}

impl Type2Point {
    pub fn new(n: usize, m: usize, i: Vec<usize>) -> Result<Self, TorusError> {
        check_params(n, m)?;
        let bad = |msg: &str| Err(TorusError::InvalidPoint(format!("i={i:?}: {msg}")));
        if i.len() != m + 2 {
            return bad(&format!("need {} entries", m + 2));
        }
        if i.iter().any(|&x| x > n) {
            return bad(&format!("indices must lie in 0..={n}"));
        }
        if i.windows(2).any(|w| w[0] > w[1]) {
            return bad("not nondecreasing");
        }
        let counts: Vec<usize> = i.iter().dedup_with_count().map(|(c, _)| c).collect();
        if counts.iter().any(|&c| c > 2) {
            return bad("a value occurs more than twice");
        }
        if counts.iter().filter(|&&c| c == 1).count() < 3 {
            return bad("fewer than three singletons");
        }
        Ok(Type2Point { n, m, i })
    }

    fn multiplicities(&self) -> impl Iterator<Item = usize> + '_ {
        self.i.iter().dedup_with_count().map(|(c, _)| c)
    }

    /// Number of values occurring exactly once.
    pub fn l(&self) -> usize {
        self.multiplicities().filter(|&c| c == 1).count()
    }

    /// Number of values occurring twice.
    pub fn d(&self) -> usize {
        (self.m + 2 - self.l()) / 2
    }

    /// The representative with singleton points taken from the start of
    /// `0, 1, −1, 2, −2, …`.
    pub fn representative(&self) -> LinearMatrix {
        self.representative_with(0)
    }

    /// Pairs use the basis `e0, e1` of `I`; the `k`-th singleton slot gets the
    /// point `(1 : r)` with `r` the `(offset + k)`-th term of `0, 1, −1, 2, −2, …`.
    pub fn representative_with(&self, offset: usize) -> LinearMatrix {
        let mut top = Vec::with_capacity(self.m + 2);
        let mut bottom = Vec::with_capacity(self.m + 2);
        let mut singles = offset;
        let mut s = 0;
        while s < self.i.len() {
            let x = self.i[s];
            let mut form = vec![Scalar::zero(); self.n + 1];
            form[x] = Scalar::one();
            let zero = vec![Scalar::zero(); self.n + 1];
            if self.i.get(s + 1) == Some(&x) {
                top.extend([form.clone(), zero.clone()]);
                bottom.extend([zero, form]);
                s += 2;
            } else {
                let r = point_sequence(singles);
                top.push(form.clone());
                bottom.push(form.into_iter().map(|c| c * &r).collect());
                singles += 1;
                s += 1;
            }
        }
        LinearMatrix::new(self.n, self.m, 2, vec![top, bottom]).expect("shape fixed by m")
    }
}

/// `0, 1, −1, 2, −2, …`
pub fn point_sequence(k: usize) -> Scalar {
    let half = k.div_ceil(2) as i64;
    scalar(if k % 2 == 1 { half } else { -half })
}

impl FixedPoint {
    pub fn n(&self) -> usize {
        match self {
            FixedPoint::Type1(p) => p.n,
            FixedPoint::Type2(p) => p.n,
        }
    }

    pub fn m(&self) -> usize {
        match self {
            FixedPoint::Type1(p) => p.m,
            FixedPoint::Type2(p) => p.m,
        }
    }

    pub fn kind(&self) -> u8 {
        match self {
            FixedPoint::Type1(_) => 1,
            FixedPoint::Type2(_) => 2,
        }
    }

    /// `l` for a component, `None` for an isolated point.
    pub fn l(&self) -> Option<usize> {
        match self {
            FixedPoint::Type1(_) => None,
            FixedPoint::Type2(p) => Some(p.l()),
        }
    }

    /// The matrix `A_{I,J}` or the default component representative.
    pub fn matrix(&self) -> LinearMatrix {
        match self {
            FixedPoint::Type1(p) => p.matrix(),
            FixedPoint::Type2(p) => p.representative(),
        }
    }

    /// Parses the [`Display`](fmt::Display) form: `1:i0,…,it;j0,…,jt` or `2:i1,…,i_{m+2}`.
    pub fn parse(n: usize, text: &str) -> Result<Self, TorusError> {
        let bad = || TorusError::InvalidPoint(format!("cannot parse `{text}`"));
        let list = |s: &str| -> Result<Vec<usize>, TorusError> {
            s.split(',')
                .map(|x| x.trim().parse().map_err(|_| bad()))
                .collect()
        };
        let (kind, body) = text.trim().split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "1" => {
                let (i, j) = body.split_once(';').ok_or_else(bad)?;
                let (i, j) = (list(i)?, list(j)?);
                let m = (2 * i.len()).checked_sub(3).ok_or_else(bad)?;
                Type1Point::new(n, m, i, j).map(FixedPoint::Type1)
            }
            "2" => {
                let i = list(body)?;
                let m = i.len().checked_sub(2).ok_or_else(bad)?;
                Type2Point::new(n, m, i).map(FixedPoint::Type2)
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().join(",");
        match self {
            FixedPoint::Type1(p) => write!(f, "1:{};{}", join(&p.i), join(&p.j)),
            FixedPoint::Type2(p) => write!(f, "2:{}", join(&p.i)),
        }
    }
}

impl From<Type1Point> for FixedPoint {
    fn from(p: Type1Point) -> Self {
        FixedPoint::Type1(p)
    }
}

impl From<Type2Point> for FixedPoint {
    fn from(p: Type2Point) -> Self {
        FixedPoint::Type2(p)
    }
}

fn type1_heads(n: usize, t: usize) -> Vec<(usize, Vec<usize>)> {
    (0..n)
        .flat_map(|i0| {
            (0..=n)
                .filter(move |&x| x != i0)
                .combinations(t)
                .map(move |tail| (i0, tail))
        })
        .collect()
}

fn type1_tails(
    n: usize,
    m: usize,
    t: usize,
    i0: usize,
    i_tail: Vec<usize>,
) -> impl Iterator<Item = Type1Point> {
    let mut i = vec![i0];
    i.extend(i_tail);
    (i0 + 1..=n).flat_map(move |j0| {
        let i = i.clone();
        (0..=n)
            .filter(move |&x| x != j0)
            .combinations(t)
            .map(move |tail| {
                let mut j = vec![j0];
                j.extend(tail);
                Type1Point {
                    n,
                    m,
                    i: i.clone(),
                    j,
                }
            })
    })
}

/// All type 1 points in lexicographic order of `(I, J)`.
pub fn enum_type1(n: usize, m: usize) -> Result<impl Iterator<Item = Type1Point>, TorusError> {
    let t = check_params(n, m)?;
    Ok(type1_heads(n, t)
        .into_iter()
        .flat_map(move |(i0, tail)| type1_tails(n, m, t, i0, tail)))
}

/// The same points as [`enum_type1`], split into independent chunks by
/// `(i0, I')`.
pub fn par_type1(
    n: usize,
    m: usize,
) -> Result<impl ParallelIterator<Item = Type1Point>, TorusError> {
    let t = check_params(n, m)?;
    Ok(type1_heads(n, t)
        .into_par_iter()
        .flat_map_iter(move |(i0, tail)| type1_tails(n, m, t, i0, tail)))
}

/// All type 2 index vectors with `l ≥ 3`, in lexicographic order.
pub fn enum_type2(n: usize, m: usize) -> Result<impl Iterator<Item = Type2Point>, TorusError> {
    check_params(n, m)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m + 2);
    type2_search(n, m, 0, 0, &mut current, &mut out);
    Ok(out.into_iter())
}

fn type2_search(
    n: usize,
    m: usize,
    value: usize,
    singles: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Type2Point>,
) {
    let remaining = m + 2 - current.len();
    if remaining == 0 {
        if singles >= 3 {
            out.push(Type2Point {
                n,
                m,
                i: current.clone(),
            });
        }
        return;
    }
    let values_left = n + 1 - value.min(n + 1);
    if 2 * values_left < remaining || singles + remaining.min(values_left) < 3 {
        return;
    }
    for mult in [2, 1, 0] {
        if mult > remaining {
            continue;
        }
        current.extend(std::iter::repeat_n(value, mult));
        type2_search(
            n,
            m,
            value + 1,
            singles + usize::from(mult == 1),
            current,
            out,
        );
        current.truncate(current.len() - mult);
    }
}

/// `C(n+1, 2) · C(n, t)²`.
pub fn type1_count(n: usize, m: usize) -> Result<u64, TorusError> {
    let t = check_params(n, m)? as i64;
    let n = n as u64;
    Ok(binomial_u64(n + 1, 2) * binomial_u64(n, t).pow(2))
}

/// Number of type 2 vectors with exactly `d` repeated values:
/// `C(n+1, d) · C(n+1−d, m+2−2d)`, restricted to `l = m+2−2d ≥ 3`.
pub fn type2_count(n: usize, m: usize, d: usize) -> Result<u64, TorusError> {
    check_params(n, m)?;
    if m + 2 < 2 * d + 3 {
        return Ok(0);
    }
    let n = n as u64;
    Ok(binomial_u64(n + 1, d as i64) * binomial_u64(n + 1 - d as u64, (m + 2 - 2 * d) as i64))
}
