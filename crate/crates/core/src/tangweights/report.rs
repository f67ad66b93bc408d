use serde::Serialize;

use super::{SignConvention, WeightData, WeightError};

/// Full weight multisets at a fixed point, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    /// Weights of `W* ⊗ W`.
    pub w2: Vec<i64>,
    /// Weights of `I* ⊗ (W ⊗ V) / a(I)`.
    pub w3: Vec<i64>,
    pub n1: usize,
    pub n2: usize,
    pub n: i64,
    /// Multiplicity of the zero weight on `Ext¹`.
    pub zero_count: i64,
}

/// The counts of a [`TangentReport`] without the multisets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TangentCounts {
    pub n1: usize,
    pub n2: usize,
    pub zero_count: i64,
}

impl TangentCounts {
    pub fn n(&self) -> i64 {
        self.n2 as i64 - self.n1 as i64
    }
}

/// The four weights `a_{r'} − a_r` of the image of `I* ⊗ I`.
fn removed_weights(w: &WeightData, conv: SignConvention) -> [i64; 4] {
    let a = w.a.map(|x| conv.sign_i() * x);
    [0, a[1] - a[0], a[0] - a[1], 0]
}

pub fn tangent_report(w: &WeightData, conv: SignConvention) -> Result<TangentReport, WeightError> {
    let (sw, si, sv) = (conv.sign_w(), conv.sign_i(), conv.sign_v());
    let mut w2: Vec<i64> =
        w.b.iter()
            .flat_map(|bj| w.b.iter().map(move |bk| sw * (bj - bk)))
            .collect();
    let mut w3: Vec<i64> = Vec::with_capacity(2 * w.b.len() * w.c.len());
    for bj in &w.b {
        for cl in &w.c {
            for ar in &w.a {
                w3.push(sw * bj + sv * cl - si * ar);
            }
        }
    }
    let removed = removed_weights(w, conv);
    for weight in removed {
        let needed = removed.iter().filter(|&&x| x == weight).count();
        if w3.iter().filter(|&&x| x == weight).count() < needed {
            return Err(WeightError::RemovedWeightMissing { weight });
        }
    }
    for weight in removed {
        let pos = w3.iter().position(|&x| x == weight).expect("checked above");
        w3.swap_remove(pos);
    }
    w2.sort_unstable();
    w3.sort_unstable();
    let count = |v: &[i64]| v.iter().filter(|&&x| conv.counts(x)).count();
    let zeros = |v: &[i64]| v.iter().filter(|&&x| x == 0).count() as i64;
    let (n1, n2) = (count(&w2), count(&w3));
    Ok(TangentReport {
        n1,
        n2,
        n: n2 as i64 - n1 as i64,
        zero_count: zeros(&w3) - zeros(&w2) + 1,
        w2,
        w3,
    })
}

/// Same counts as [`tangent_report`] without building the multisets: `c` is
/// strictly monotone, so for fixed `(j, r)` the weights `b_j + c_l − a_r`
/// that are positive, zero or negative form ranges found by bisection.
pub fn tangent_counts(w: &WeightData, conv: SignConvention) -> Result<TangentCounts, WeightError> {
    let (sw, si, sv) = (conv.sign_w(), conv.sign_i(), conv.sign_v());
    let mut c: Vec<i64> = w.c.iter().map(|x| sv * x).collect();
    c.sort_unstable();
    let a = w.a.map(|x| si * x);
    let total = c.len();

    let mut b: Vec<i64> = w.b.iter().map(|x| sw * x).collect();
    b.sort_unstable();
    let mut tie_squares = 0usize;
    let mut start = 0;
    while start < b.len() {
        let end = start + b[start..].iter().take_while(|&&x| x == b[start]).count();
        tie_squares += (end - start) * (end - start);
        start = end;
    }
    let n1 = (b.len() * b.len() - tie_squares) / 2;

    // weight b_j + c_l − a_r compared with `target` through c_l vs target − b_j + a_r
    let split = |target: i64| -> (usize, usize, usize) {
        let (mut below, mut equal, mut above) = (0, 0, 0);
        for &bj in &b {
            for &ar in &a {
                let theta = target - bj + ar;
                let lo = c.partition_point(|&x| x < theta);
                let hi = c.partition_point(|&x| x <= theta);
                below += lo;
                equal += hi - lo;
                above += total - hi;
            }
        }
        (below, equal, above)
    };
    let (neg, zero, pos) = split(0);
    let mut counted = if conv.count_negative { neg } else { pos };
    let mut zeros3 = zero as i64;

    let removed = removed_weights(w, conv);
    for (idx, &weight) in removed.iter().enumerate() {
        if removed[..idx].contains(&weight) {
            continue;
        }
        let needed = removed.iter().filter(|&&x| x == weight).count();
        let (_, present, _) = split(weight);
        if present < needed {
            return Err(WeightError::RemovedWeightMissing { weight });
        }
    }
    for weight in removed {
        if conv.counts(weight) {
            counted -= 1;
        }
        if weight == 0 {
            zeros3 -= 1;
        }
    }
    Ok(TangentCounts {
        n1,
        n2: counted,
        zero_count: zeros3 - tie_squares as i64 + 1,
    })
}
