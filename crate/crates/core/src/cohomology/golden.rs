use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CohomologyError, HodgePolynomial};

const EMBEDDED: &str = include_str!("../../data/betti_table.csv");

/// Highest degree the table covers; unlisted degrees up to it are zero.
pub const TABLE_MAX_DEGREE: usize = 36;

#[derive(Deserialize)]
struct Record {
    n: usize,
    i: usize,
    b_i: u64,
}

/// Published Betti numbers `b_i(M_{n,n,2})`, keyed by `n` and then by the
/// (even) degree `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenTable {
    rows: BTreeMap<usize, BTreeMap<usize, u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub degree: usize,
    pub expected: u64,
    pub found: u64,
}

impl GoldenTable {
    pub fn embedded() -> Self {
        Self::from_csv(EMBEDDED).expect("embedded table is well formed")
    }

    /// Reads `n,i,b_i` rows with a header line.
    pub fn from_csv(text: &str) -> Result<Self, CohomologyError> {
        let mut rows: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        for record in reader.deserialize() {
            let r: Record = record.map_err(|e| CohomologyError::Golden(e.to_string()))?;
            if r.i % 2 == 1 || r.i > TABLE_MAX_DEGREE {
                return Err(CohomologyError::Golden(format!(
                    "degree {} for n={} is odd or beyond {TABLE_MAX_DEGREE}",
                    r.i, r.n
                )));
            }
            if rows.entry(r.n).or_default().insert(r.i, r.b_i).is_some() {
                return Err(CohomologyError::Golden(format!(
                    "duplicate entry for n={}, i={}",
                    r.n, r.i
                )));
            }
        }
        Ok(GoldenTable { rows })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "i", "b_i"]).expect("in-memory write");
        for (n, row) in &self.rows {
            for (i, b) in row {
                w.write_record([n.to_string(), i.to_string(), b.to_string()])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }

    pub fn ns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, n: usize) -> Option<&BTreeMap<usize, u64>> {
        self.rows.get(&n)
    }

    pub fn set(&mut self, n: usize, degree: usize, value: u64) {
        self.rows.entry(n).or_default().insert(degree, value);
    }

    /// Degrees `0, 2, …, 36` where `h` disagrees with row `n`; `None` if the
    /// table has no such row.
    pub fn diff(&self, n: usize, h: &HodgePolynomial) -> Option<Vec<Mismatch>> {
        let row = self.rows.get(&n)?;
        Some(
            (0..=TABLE_MAX_DEGREE)
                .step_by(2)
                .filter_map(|degree| {
                    let expected = row.get(&degree).copied().unwrap_or(0);
                    let found = h.b(degree);
                    (expected != found).then_some(Mismatch {
                        degree,
                        expected,
                        found,
                    })
                })
                .collect(),
        )
    }
}
