use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::GitError;
use crate::exactalg::{RatMatrix, Scalar};

/// A `k × (m+k)` matrix whose entries are linear forms in `x_0..x_n`.
///
/// Each entry is stored as its coefficient vector of length `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMatrix {
    n: usize,
    m: usize,
    k: usize,
    entries: Vec<Vec<Vec<Scalar>>>,
}

impl LinearMatrix {
    pub fn new(
        n: usize,
        m: usize,
        k: usize,
        entries: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self, GitError> {
        if n == 0 || m == 0 || k == 0 {
            return Err(GitError::BadShape(format!(
                "n, m and k must be positive (got n={n}, m={m}, k={k})"
            )));
        }
        if entries.len() != k {
            return Err(GitError::BadShape(format!(
                "expected {k} rows, found {}",
                entries.len()
            )));
        }
        for (r, row) in entries.iter().enumerate() {
            if row.len() != m + k {
                return Err(GitError::BadShape(format!(
                    "row {r} has {} entries, expected {}",
                    row.len(),
                    m + k
                )));
            }
            for (c, form) in row.iter().enumerate() {
                if form.len() != n + 1 {
                    return Err(GitError::MalformedEntry {
                        row: r,
                        col: c,
                        expected: n + 1,
                        found: form.len(),
                    });
                }
            }
        }
        Ok(LinearMatrix { n, m, k, entries })
    }

    /// Builds a matrix with monomial entries: `Some(i)` is `x_i`, `None` is 0.
    pub fn monomial(n: usize, grid: &[Vec<Option<usize>>]) -> Result<Self, GitError> {
        let k = grid.len();
        let width = grid.first().map_or(0, Vec::len);
        let entries = grid
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        let mut form = vec![Scalar::zero(); n + 1];
                        if let Some(i) = *v {
                            if i > n {
                                return Err(GitError::FormParse(format!(
                                    "variable x{i} outside x0..x{n}"
                                )));
                            }
                            form[i] = Scalar::one();
                        }
                        Ok(form)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        if width < k {
            return Err(GitError::BadShape(format!(
                "{k} rows need at least {} columns",
                k + 1
            )));
        }
        Self::new(n, width - k, k, entries)
    }

    /// Parses rows separated by `;`, entries separated by whitespace, each
    /// entry a linear form such as `0`, `x2`, `-x0+3x1` or `1/2x3`.
    pub fn parse(n: usize, text: &str) -> Result<Self, GitError> {
        let rows: Vec<Vec<Vec<Scalar>>> = text
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|tok| parse_form(n, tok))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let k = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if width <= k {
            return Err(GitError::BadShape(format!(
                "{k} rows need at least {} columns",
                k + 1
            )));
        }
        Self::new(n, width - k, k, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cols(&self) -> usize {
        self.m + self.k
    }

    pub fn entry(&self, row: usize, col: usize) -> &[Scalar] {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[Vec<Vec<Scalar>>] {
        &self.entries
    }

    /// The `k(n+1) × (m+k)` scalar matrix of `A` as a linear map on `W`:
    /// row `(r, i)`, column `j` holds the coefficient of `x_i` in `a_{r,j}`.
    pub fn w_flattening(&self) -> RatMatrix {
        let rows = (0..self.k)
            .flat_map(|r| {
                (0..=self.n).map(move |i| {
                    (0..self.cols())
                        .map(|j| self.entries[r][j][i].clone())
                        .collect()
                })
            })
            .collect();
        RatMatrix::from_rows(rows).expect("rectangular by construction")
    }

    /// The `k × (m+k)(n+1)` matrix whose rows are the rows of `A` written
    /// out as coefficient lists.
    pub fn row_flattening(&self) -> RatMatrix {
        let rows = self
            .entries
            .iter()
            .map(|row| row.iter().flatten().cloned().collect())
            .collect();
        RatMatrix::from_rows(rows).expect("rectangular by construction")
    }

    /// `i_s(A)` for every row `s`: the index of the first nonzero entry, or
    /// `m + k` for a zero row.
    pub fn leading_zero_counts(&self) -> Vec<usize> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .position(|form| form.iter().any(|c| !c.is_zero()))
                    .unwrap_or(self.cols())
            })
            .collect()
    }

    /// True if every entry is zero or a scalar multiple of one variable.
    pub fn is_monomial(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|form| form.iter().filter(|c| !c.is_zero()).count() <= 1)
    }

    /// Swaps two rows.
    pub fn swap_rows(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.entries.swap(a, b);
        out
    }

    /// Reorders columns: column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            *row = perm.iter().map(|&p| row[p].clone()).collect();
        }
        out
    }
}

fn parse_form(n: usize, tok: &str) -> Result<Vec<Scalar>, GitError> {
    let mut form = vec![Scalar::zero(); n + 1];
    if tok == "0" {
        return Ok(form);
    }
    let bad = || GitError::FormParse(format!("cannot parse linear form `{tok}`"));
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in tok.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(&tok[start..i]);
            start = i;
        }
    }
    terms.push(&tok[start..]);
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-Scalar::one(), &term[1..]),
            Some(b'+') => (Scalar::one(), &term[1..]),
            _ => (Scalar::one(), term),
        };
        let xpos = body.find('x').ok_or_else(bad)?;
        let coeff = if xpos == 0 {
            Scalar::one()
        } else {
            parse_scalar(&body[..xpos]).ok_or_else(bad)?
        };
        let var: usize = body[xpos + 1..].parse().map_err(|_| bad())?;
        if var > n {
            return Err(GitError::FormParse(format!(
                "variable x{var} outside x0..x{n}"
            )));
        }
        form[var] += sign * coeff;
    }
    Ok(form)
}

/// Parses `p` or `p/q` with integer `p`, `q`.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| Scalar::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(Scalar::from_integer),
    }
}

fn write_form(f: &mut fmt::Formatter<'_>, form: &[Scalar]) -> fmt::Result {
    let mut first = true;
    for (i, c) in form.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            write!(f, "-")?;
        } else if !first {
            write!(f, "+")?;
        }
        let mag = c.abs();
        if !mag.is_one() {
            write!(f, "{mag}")?;
        }
        write!(f, "x{i}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LinearMatrix {
    /// Same syntax that [`LinearMatrix::parse`] reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.entries.iter().enumerate() {
            if r > 0 {
                write!(f, "; ")?;
            }
            for (c, form) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write_form(f, form)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{ratio, scalar};

    #[test]
    fn parse_and_display_round_trip() {
        let a = LinearMatrix::parse(3, "0 0 x0 x1 x2; x0 x1 0 0 x3").unwrap();
        assert_eq!((a.n(), a.m(), a.k()), (3, 3, 2));
        assert_eq!(a.to_string(), "0 0 x0 x1 x2; x0 x1 0 0 x3");
        let b = LinearMatrix::parse(2, "1/2x0-x2 3x1+x1 0; x0 0 x2").unwrap();
        assert_eq!(b.entry(0, 0), &[ratio(1, 2), scalar(0), scalar(-1)]);
        assert_eq!(b.entry(0, 1), &[scalar(0), scalar(4), scalar(0)]);
        assert_eq!(LinearMatrix::parse(2, &b.to_string()).unwrap(), b);
    }

    #[test]
    fn parse_errors() {
        assert!(LinearMatrix::parse(1, "x2 0; 0 x0").is_err());
        assert!(LinearMatrix::parse(1, "y0 0; 0 x0").is_err());
        assert!(LinearMatrix::parse(1, "x0 0; 0").is_err());
    }

    #[test]
    fn malformed_entry_length() {
        let err = LinearMatrix::new(
            1,
            1,
            1,
            vec![vec![vec![scalar(1)], vec![scalar(0), scalar(1)]]],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            GitError::MalformedEntry {
                row: 0,
                col: 0,
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn leading_zeros() {
        let a = LinearMatrix::parse(3, "0 0 x0 x1 x2; x0 x1 0 0 x3").unwrap();
        assert_eq!(a.leading_zero_counts(), vec![2, 0]);
        let z = LinearMatrix::parse(1, "0 0 0; x0 x1 0").unwrap();
        assert_eq!(z.leading_zero_counts(), vec![3, 0]);
    }

    #[test]
    fn flattenings_have_declared_shapes() {
        let a = LinearMatrix::parse(3, "0 0 x0 x1 x2; x0 x1 0 0 x3").unwrap();
        assert_eq!(a.w_flattening().shape(), (8, 5));
        assert_eq!(a.row_flattening().shape(), (2, 20));
    }
}
