//! Reference matrices and seeded random samples shared by the self-test and
//! the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{ratio, Scalar};
use crate::gitstab::LinearMatrix;
use crate::torusfix::{enum_type1, enum_type2};

pub fn remark_matrix() -> LinearMatrix {
    LinearMatrix::parse(3, "0 0 x0 x1 x2; x0 x1 0 0 x3").expect("well formed")
}

/// `[[x0 … x_{t−1}, 0 … 0, x_t], [0 … 0, x0 … x_{t−1}, x_{t+1}]]` on
/// `P^n` with `t = (m+1)/2`; needs `m` odd and `n ≥ t + 1`.
pub fn codimension_normal_form(n: usize, m: usize) -> LinearMatrix {
    let t = m.div_ceil(2);
    let vars = |r: std::ops::Range<usize>| r.map(Some).collect::<Vec<_>>();
    let zeros = vec![None; t];
    let mut top = vars(0..t);
    top.extend(zeros.iter().copied());
    top.push(Some(t));
    let mut bottom = zeros;
    bottom.extend(vars(0..t));
    bottom.push(Some(t + 1));
    LinearMatrix::monomial(n, &[top, bottom]).expect("n >= t + 1")
}

/// `[[0 … 0, f-block], [g-block, 0 … 0]]` with blocks of width `m/2 + 1`
/// holding consecutive variables starting at `f_start` and `g_start`.
pub fn block_matrix(n: usize, m: usize, f_start: usize, g_start: usize) -> LinearMatrix {
    let h = m / 2 + 1;
    let mut top = vec![None; h];
    top.extend((f_start..f_start + h).map(Some));
    let mut bottom: Vec<_> = (g_start..g_start + h).map(Some).collect();
    bottom.extend(vec![None; h]);
    LinearMatrix::monomial(n, &[top, bottom]).expect("variables in range")
}

/// Every type 1 matrix and type 2 representative for odd `m` with
/// `n ≤ m ≤ min(2n − 1, max)` and `n ≤ max`.
pub fn fixed_point_matrices(max: usize) -> Vec<LinearMatrix> {
    let mut out = Vec::new();
    for n in 1..=max {
        for m in (n..=(2 * n - 1).min(max)).filter(|m| m % 2 == 1) {
            out.extend(
                enum_type1(n, m)
                    .expect("odd m in range")
                    .map(|p| p.matrix()),
            );
            out.extend(
                enum_type2(n, m)
                    .expect("odd m in range")
                    .map(|p| p.representative()),
            );
        }
    }
    out
}

fn sparse_coefficient(rng: &mut ChaCha8Rng) -> Scalar {
    if rng.gen_bool(0.6) {
        return ratio(0, 1);
    }
    let num = rng.gen_range(-3..=3);
    let den = if rng.gen_bool(0.2) {
        rng.gen_range(2..=3)
    } else {
        1
    };
    ratio(num, den)
}

fn build(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    coeff: fn(&mut ChaCha8Rng) -> Scalar,
) -> LinearMatrix {
    let entries = (0..2)
        .map(|_| {
            (0..m + 2)
                .map(|_| (0..=n).map(|_| coeff(rng)).collect())
                .collect()
        })
        .collect();
    LinearMatrix::new(n, m, 2, entries).expect("shape fixed")
}

/// Sparse `2 × (m+2)` matrices with `1 ≤ n, m ≤ 5` and small rational
/// coefficients, many of them degenerate.
pub fn random_k2_matrices(count: usize, seed: u64) -> Vec<LinearMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=5);
            build(&mut rng, n, m, sparse_coefficient)
        })
        .collect()
}

/// Dense matrices with `2 ≤ n ≤ 4` and `n ≤ m ≤ 2n − 1`.
pub fn random_dense_k2_matrices(count: usize, seed: u64) -> Vec<LinearMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=4);
            let m = rng.gen_range(n..=2 * n - 1);
            build(&mut rng, n, m, |r| ratio(r.gen_range(-5..=5), 1))
        })
        .collect()
}
