use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use super::{tangent_counts, type1_weights, type2_weights, SignConvention, WeightError};
use crate::exactalg::binomial_u64;
use crate::torusfix::{enum_type1, enum_type2, FixedPoint};

/// `(n₁, n₂)` from the printed closed formulas, evaluated verbatim. These
/// disagree with the weight counts on most points and are reported, never
/// used.
pub fn closed_form_n1_n2(p: &FixedPoint) -> (i64, i64) {
    let m = p.m() as i64;
    let n = p.n() as i64;
    let pairs = binomial_u64(m as u64 + 2, 2) as i64;
    match p {
        FixedPoint::Type1(q) => {
            let t = q.t() as i64;
            let (i, j) = (&q.i, &q.j);
            let (i0, j0) = (i[0], j[0]);
            let sum = |v: &[usize]| v.iter().sum::<usize>() as i64;
            let n1 = 4 * t * n + 2 * t + 2 * n
                - 1
                - sum(i)
                - sum(j)
                - i[1..].iter().filter(|&&x| x > i0).sum::<usize>() as i64
                - j[1..].iter().filter(|&&x| x > i0).sum::<usize>() as i64
                - j[1..].iter().filter(|&&x| x > j0).count() as i64
                - i0 as i64 * j[1..].iter().filter(|&&x| x <= i0).count() as i64;
            (n1, pairs)
        }
        FixedPoint::Type2(q) => {
            let n1 = 2 * (m + 2) * n - 2 * q.i.iter().sum::<usize>() as i64;
            (n1, pairs + (m + 2 - q.l() as i64) / 2)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Discrepancy {
    pub point: String,
    pub counted: (i64, i64),
    pub closed_form: (i64, i64),
}

/// Collects discrepancies from concurrent workers; [`DiscrepancySink::finish`]
/// sorts them so the result does not depend on arrival order.
#[derive(Default)]
pub struct DiscrepancySink {
    entries: Mutex<Vec<Discrepancy>>,
}

impl DiscrepancySink {
    pub fn record(&self, d: Discrepancy) {
        self.entries.lock().expect("sink poisoned").push(d);
    }

    pub fn finish(self) -> Vec<Discrepancy> {
        let mut v = self.entries.into_inner().expect("sink poisoned");
        v.sort();
        v
    }
}

/// Every fixed point of `M_{n,m,2}` at which the counted `(n₁, n₂)` differ
/// from the closed formulas.
pub fn discrepancy_report(
    n: usize,
    m: usize,
    conv: SignConvention,
) -> Result<Vec<Discrepancy>, WeightError> {
    let mut points: Vec<FixedPoint> = enum_type1(n, m)?.map(FixedPoint::from).collect();
    points.extend(enum_type2(n, m)?.map(FixedPoint::from));
    let sink = DiscrepancySink::default();
    points
        .par_iter()
        .try_for_each(|p| -> Result<(), WeightError> {
            let w = match p {
                FixedPoint::Type1(q) => type1_weights(q),
                FixedPoint::Type2(q) => type2_weights(q),
            };
            let c = tangent_counts(&w, conv)?;
            let counted = (c.n1 as i64, c.n2 as i64);
            let closed_form = closed_form_n1_n2(p);
            if counted != closed_form {
                sink.record(Discrepancy {
                    point: p.to_string(),
                    counted,
                    closed_form,
                });
            }
            Ok(())
        })?;
    Ok(sink.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_values() {
        let p = FixedPoint::parse(3, "1:0,2,3;1,2,3").unwrap();
        assert_eq!(closed_form_n1_n2(&p), (10, 10));
        let q = FixedPoint::parse(3, "2:0,0,1,2,3").unwrap();
        assert_eq!(closed_form_n1_n2(&q).1, 11);
    }

    #[test]
    fn report_is_sorted_and_repeatable() {
        let a = discrepancy_report(3, 3, SignConvention::default()).unwrap();
        let b = discrepancy_report(3, 3, SignConvention::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] <= w[1]));
        assert!(!a.is_empty());
    }
}
