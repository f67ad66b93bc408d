//! End-to-end self-test: calibrates the sign convention against the
//! golden table, then runs every acceptance check and renders a report that
//! depends only on the inputs (never on timing or thread count).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::cohomology::{
    betti, census_euler, euler_formula, GoldenTable, HodgePolynomial, ModuliParams,
};
use crate::corpus;
use crate::exactalg::RatMatrix;
use crate::gitstab::{boundary_point_even_m, K2Analysis, LinearMatrix, Verdict, Violation};
use crate::tangweights::{
    calibrate, discrepancy_report, tangent_counts, type1_weights, type2_weights, Calibration,
    SignConvention,
};
use crate::torusfix::{enum_type1, enum_type2, type1_count, type2_count};

pub const RANDOM_SEED: u64 = 0x5eed_2024;
pub const BUNDLE_SEED: u64 = 0xb0d1e5;

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub golden: GoldenTable,
    /// Skips calibration when set.
    pub convention: Option<SignConvention>,
    pub random_samples: usize,
    pub bundle_samples: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            golden: GoldenTable::embedded(),
            convention: None,
            random_samples: 500,
            bundle_samples: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub calibration: Result<Calibration, String>,
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<String>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.calibration.is_ok() && self.checks.iter().all(|c| c.passed)
    }

    /// Passed/failed per criterion number.
    pub fn by_criterion(&self) -> BTreeMap<u8, bool> {
        let mut out = BTreeMap::new();
        for c in &self.checks {
            *out.entry(c.criterion).or_insert(true) &= c.passed;
        }
        out
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let list = |v: &[SignConvention]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        match &self.calibration {
            Ok(c) => {
                let _ = writeln!(s, "calibration: {}", c.convention);
                let _ = writeln!(s, "  reference matches: {}", list(&c.reference_matches));
                if !c.disambiguation_matches.is_empty() {
                    let _ = writeln!(
                        s,
                        "  disambiguation matches: {}",
                        list(&c.disambiguation_matches)
                    );
                }
            }
            Err(e) => {
                let _ = writeln!(s, "calibration: FAILED: {e}");
            }
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag} [{}] {}", c.criterion, c.name);
            for d in &c.detail {
                let _ = writeln!(s, "    {d}");
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(
            s,
            "summary: {} passed, {} failed{}",
            self.checks.len() - failed,
            failed,
            if self.calibration.is_err() {
                ", calibration failed"
            } else {
                ""
            }
        );
        s
    }
}

struct Checks(Vec<CheckResult>);

impl Checks {
    fn push(&mut self, criterion: u8, name: impl Into<String>, detail: Vec<String>) {
        self.0.push(CheckResult {
            criterion,
            name: name.into(),
            passed: detail.is_empty(),
            detail,
        });
    }
}

/// Runs calibration and every check. Parallel work happens in whatever
/// rayon pool the caller installed.
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let calibration = match cfg.convention {
        Some(c) => Ok(Calibration {
            convention: c,
            reference_matches: vec![c],
            disambiguation_matches: Vec::new(),
        }),
        None => calibrate(&cfg.golden).map_err(|e| {
            let mut msg = e.to_string();
            if let Ok(h) = betti(
                &ModuliParams::new(3, 3).expect("valid"),
                SignConvention::default(),
            ) {
                for d in cfg.golden.diff(3, &h).unwrap_or_default() {
                    let _ = write!(
                        msg,
                        "; b{} golden {} computed {}",
                        d.degree, d.expected, d.found
                    );
                }
            }
            msg
        }),
    };
    let Ok(cal) = &calibration else {
        return SelftestReport {
            calibration,
            checks: Vec::new(),
            warnings: Vec::new(),
        };
    };
    let conv = cal.convention;
    let mut checks = Checks(Vec::new());
    let mut warnings = Vec::new();

    let hodge: BTreeMap<usize, Result<HodgePolynomial, String>> = [3, 5, 7, 9, 11]
        .into_iter()
        .map(|n| {
            let h = ModuliParams::new(n, n)
                .and_then(|p| betti(&p, conv))
                .map_err(|e| e.to_string());
            (n, h)
        })
        .collect();

    golden_rows(&mut checks, cfg, &hodge);
    euler_triangle(&mut checks, &hodge);
    duality(&mut checks, &hodge);
    minimal_index(&mut checks, conv);
    stability_suite(&mut checks);
    property_suites(&mut checks, &mut warnings, cfg);
    discrepancies(&mut checks, &mut warnings, conv);
    determinism(&mut checks, conv);

    SelftestReport {
        calibration,
        checks: checks.0,
        warnings,
    }
}

fn golden_rows(
    checks: &mut Checks,
    cfg: &SelftestConfig,
    hodge: &BTreeMap<usize, Result<HodgePolynomial, String>>,
) {
    for n in [3, 5, 7, 9] {
        let detail = match &hodge[&n] {
            Err(e) => vec![e.clone()],
            Ok(h) => match cfg.golden.diff(n, h) {
                None => vec![format!("golden table has no row for n={n}")],
                Some(d) => d
                    .iter()
                    .map(|x| format!("b{}: golden {} computed {}", x.degree, x.expected, x.found))
                    .collect(),
            },
        };
        checks.push(1, format!("golden Betti row n={n}"), detail);
    }
}

fn euler_triangle(checks: &mut Checks, hodge: &BTreeMap<usize, Result<HodgePolynomial, String>>) {
    for n in [3, 5, 7, 9] {
        let params = ModuliParams::new(n, n).expect("valid");
        let formula = euler_formula(&params);
        let mut detail = Vec::new();
        match census_euler(&params) {
            Ok(c) if c == formula => {}
            Ok(c) => detail.push(format!("closed form {formula}, census {c}")),
            Err(e) => detail.push(e.to_string()),
        }
        match &hodge[&n] {
            Ok(h) if formula == h.euler().into() => {}
            Ok(h) => detail.push(format!("closed form {formula}, Betti sum {}", h.euler())),
            Err(e) => detail.push(e.clone()),
        }
        let pinned = match n {
            3 => Some(58u32),
            5 => Some(1602),
            _ => None,
        };
        if let Some(v) = pinned {
            if formula != v.into() {
                detail.push(format!("expected {v}, got {formula}"));
            }
        }
        checks.push(2, format!("Euler characteristic n={n}: {formula}"), detail);
    }
}

fn duality(checks: &mut Checks, hodge: &BTreeMap<usize, Result<HodgePolynomial, String>>) {
    for (&n, h) in hodge {
        let detail = match h {
            Err(e) => vec![e.clone()],
            Ok(h) => {
                let mut d = Vec::new();
                if !h.is_palindromic() {
                    d.push("Hodge vector not palindromic".to_string());
                }
                if h.b(0) != 1 {
                    d.push(format!("b0 = {}", h.b(0)));
                }
                if h.b(2) != 1 {
                    d.push(format!("b2 = {}", h.b(2)));
                }
                d
            }
        };
        checks.push(3, format!("symmetry, b0 = b2 = 1 at n={n}"), detail);
    }
}

fn minimal_index(checks: &mut Checks, conv: SignConvention) {
    for n in [5usize, 7] {
        let t = n.div_ceil(2);
        let mut detail = Vec::new();
        let mut isolated = Vec::new();
        let mut components = Vec::new();
        for p in enum_type1(n, n).expect("valid") {
            match tangent_counts(&type1_weights(&p), conv) {
                Ok(c) if c.n() == 1 => isolated.push(p),
                Ok(_) => {}
                Err(e) => detail.push(e.to_string()),
            }
        }
        for p in enum_type2(n, n).expect("valid") {
            match tangent_counts(&type2_weights(&p), conv) {
                Ok(c) if c.n() == 1 => components.push(p),
                Ok(_) => {}
                Err(e) => detail.push(e.to_string()),
            }
        }
        match (isolated.as_slice(), components.len()) {
            ([p], 0) => {
                let i: BTreeSet<usize> = p.i.iter().copied().collect();
                let j: BTreeSet<usize> = p.j.iter().copied().collect();
                let a: BTreeSet<usize> = (n - t..=n).collect();
                let b: BTreeSet<usize> = std::iter::once(n - t - 2).chain(n - t + 1..=n).collect();
                if !((i == a && j == b) || (i == b && j == a)) {
                    detail.push(format!("unexpected index sets I={:?}, J={:?}", p.i, p.j));
                }
            }
            _ => detail.push(format!(
                "{} isolated points and {} components with n(A) = 1",
                isolated.len(),
                components.len()
            )),
        }
        checks.push(4, format!("unique point with n(A) = 1 at n={n}"), detail);
    }
}

fn analyze(a: &LinearMatrix) -> Result<K2Analysis, String> {
    K2Analysis::compute(a).map_err(|e| e.to_string())
}

fn coordinate_span(n: usize, vars: std::ops::Range<usize>) -> RatMatrix {
    let rows = vars
        .map(|v| {
            (0..=n)
                .map(|i| crate::exactalg::scalar(i64::from(i == v)))
                .collect()
        })
        .collect();
    RatMatrix::from_rows(rows).expect("rectangular")
}

fn stability_suite(checks: &mut Checks) {
    let mut detail = Vec::new();
    let remark = corpus::remark_matrix();
    match analyze(&remark) {
        Ok(k) => {
            if k.verdict.verdict != Verdict::Stable {
                detail.push(format!("verdict {}", k.verdict.verdict));
            }
            if k.degeneracy_dim != Some(1) {
                detail.push(format!("degeneracy dimension {:?}", k.degeneracy_dim));
            }
            match k.strata(&remark) {
                Ok(s) if (s.j_s, s.j_tilde) == (2, 3) => {}
                other => detail.push(format!("strata {other:?}")),
            }
        }
        Err(e) => detail.push(e),
    }
    checks.push(5, "remark matrix: Stable, dim D = 1, strata (2, 3)", detail);

    for (n, m) in [(3, 3), (5, 5)] {
        let a = corpus::codimension_normal_form(n, m);
        let detail = match analyze(&a) {
            Ok(k) => {
                let mut d = Vec::new();
                if k.verdict.verdict != Verdict::Stable {
                    d.push(format!("verdict {}", k.verdict.verdict));
                }
                let codim = k.degeneracy_dim.map(|x| n as i64 - x);
                if codim != Some((m as i64 + 1) / 2) {
                    d.push(format!("codim D = {codim:?}"));
                }
                d
            }
            Err(e) => vec![e],
        };
        checks.push(
            5,
            format!("normal form m={m}: Stable, codim D = {}", m.div_ceil(2)),
            detail,
        );
    }

    let degenerate = [
        ("zero column", "0 x0 x1 x2; 0 x1 x2 x0", "not injective"),
        ("zero row", "0 0 0 0; x0 x1 x2 x0", "degenerate rows"),
    ];
    for (name, text, expected) in degenerate {
        let a = LinearMatrix::parse(2, text).expect("well formed");
        let detail = match analyze(&a) {
            Ok(k) => {
                let mut d = Vec::new();
                if k.verdict.verdict != Verdict::Unstable {
                    d.push(format!("verdict {}", k.verdict.verdict));
                }
                let found = k.violations.iter().any(|v| match v {
                    Violation::NotInjectiveOnW { .. } => expected == "not injective",
                    Violation::DegenerateRows { .. } => expected == "degenerate rows",
                    Violation::EmptySemistableLocus { .. } => false,
                });
                if !found {
                    d.push(format!("missing violation: {expected}"));
                }
                d
            }
            Err(e) => vec![e],
        };
        checks.push(5, format!("{name}: Unstable"), detail);
    }

    for (n, m, f, g) in [(2, 2, 0, 0), (2, 2, 1, 0), (3, 4, 1, 0), (5, 4, 0, 3)] {
        let a = corpus::block_matrix(n, m, f, g);
        let h = m / 2 + 1;
        let mut detail = Vec::new();
        match analyze(&a) {
            Ok(k) if k.verdict.verdict == Verdict::StrictlySemistable => {}
            Ok(k) => detail.push(format!("verdict {}", k.verdict.verdict)),
            Err(e) => detail.push(e),
        }
        let expected: BTreeSet<Vec<Vec<_>>> =
            [coordinate_span(n, f..f + h), coordinate_span(n, g..g + h)]
                .iter()
                .map(RatMatrix::to_rows)
                .collect();
        let mut perm: Vec<usize> = (h..2 * h).collect();
        perm.extend(0..h);
        for b in [a.clone(), a.swap_rows(0, 1).permute_columns(&perm)] {
            match boundary_point_even_m(&b) {
                Ok(p) => {
                    let got: BTreeSet<_> = [p.first.to_rows(), p.second.to_rows()]
                        .into_iter()
                        .collect();
                    if got != expected {
                        detail.push(format!("boundary pair {} / {}", p.first, p.second));
                    }
                }
                Err(e) => detail.push(e.to_string()),
            }
        }
        checks.push(
            5,
            format!("block matrix {a}: StrictlySemistable, boundary pair"),
            detail,
        );
    }
}

/// Filtration, parity and codimension properties of one matrix; returns
/// the problems found.
pub fn matrix_properties(a: &LinearMatrix) -> Vec<String> {
    let k = match K2Analysis::compute(a) {
        Ok(k) => k,
        Err(e) => return vec![format!("{a}: {e}")],
    };
    let mut out = Vec::new();
    let verdict = k.verdict.verdict;
    if verdict == Verdict::StrictlySemistable && a.m() % 2 == 1 {
        out.push(format!("{a}: strictly semistable with m odd"));
    }
    if verdict == Verdict::Stable && a.m() % 2 == 1 {
        let bound = a.n() as i64 - (a.m() as i64 + 1) / 2;
        if k.degeneracy_dim.is_some_and(|d| d > bound) {
            out.push(format!(
                "{a}: dim D = {:?} exceeds {bound}",
                k.degeneracy_dim
            ));
        }
    }
    if verdict.is_semistable() {
        match k.strata(a) {
            Ok(s) => {
                if !(s.j_s <= s.j_tilde && s.j_tilde <= s.j_s + 1) {
                    out.push(format!(
                        "{a}: strata ({}, {}) break j_S <= j~ <= j_S + 1",
                        s.j_s, s.j_tilde
                    ));
                }
                if (s.j_s >= 2) != (s.j_tilde >= 2) {
                    out.push(format!(
                        "{a}: strata ({}, {}) break S2 = S~2",
                        s.j_s, s.j_tilde
                    ));
                }
            }
            Err(e) => out.push(format!("{a}: {e}")),
        }
    }
    out
}

fn property_suites(checks: &mut Checks, warnings: &mut Vec<String>, cfg: &SelftestConfig) {
    let fixed = corpus::fixed_point_matrices(5);
    let mut detail: Vec<String> = fixed.par_iter().flat_map_iter(matrix_properties).collect();
    let unstable: Vec<String> = fixed
        .par_iter()
        .filter(
            |a| !matches!(K2Analysis::compute(a), Ok(k) if k.verdict.verdict == Verdict::Stable),
        )
        .map(|a| format!("{a}: fixed point not stable"))
        .collect();
    detail.extend(unstable);
    checks.push(
        6,
        format!("properties on {} fixed-point matrices", fixed.len()),
        detail,
    );

    let random = corpus::random_k2_matrices(cfg.random_samples, RANDOM_SEED);
    let detail: Vec<String> = random.par_iter().flat_map_iter(matrix_properties).collect();
    checks.push(
        6,
        format!("properties on {} random matrices", random.len()),
        detail,
    );

    let bundles = corpus::random_dense_k2_matrices(cfg.bundle_samples, BUNDLE_SEED);
    let notes: Vec<String> = bundles
        .par_iter()
        .filter_map(|a| match K2Analysis::compute(a) {
            Ok(k) if k.degeneracy_dim == Some(-1) && k.verdict.verdict != Verdict::Stable => {
                Some(format!(
                    "vector bundle matrix not stable ({}): {a}",
                    k.verdict.verdict
                ))
            }
            Ok(_) => None,
            Err(e) => Some(format!("{a}: {e}")),
        })
        .collect();
    warnings.extend(notes);

    let mut detail = Vec::new();
    for m in (1..=9usize).step_by(2) {
        for n in m.div_ceil(2)..=m {
            if n < 1 || m > 2 * n - 1 {
                continue;
            }
            let got = enum_type1(n, m).expect("valid").count() as u64;
            let want = type1_count(n, m).expect("valid");
            if got != want {
                detail.push(format!("type 1 at ({n}, {m}): {got} != {want}"));
            }
            let mut per_d: BTreeMap<usize, u64> = BTreeMap::new();
            for p in enum_type2(n, m).expect("valid") {
                *per_d.entry(p.d()).or_default() += 1;
            }
            for d in 0..=(m + 2) / 2 {
                let got = per_d.get(&d).copied().unwrap_or(0);
                let want = type2_count(n, m, d).expect("valid");
                if got != want {
                    detail.push(format!("type 2 at ({n}, {m}), d={d}: {got} != {want}"));
                }
            }
        }
    }
    checks.push(
        6,
        "fixed-point census against closed counts, odd m <= 9",
        detail,
    );
}

fn discrepancies(checks: &mut Checks, warnings: &mut Vec<String>, conv: SignConvention) {
    let first = discrepancy_report(3, 3, conv);
    let second = discrepancy_report(3, 3, conv);
    let mut detail = Vec::new();
    match (&first, &second) {
        (Ok(a), Ok(b)) => {
            if a != b {
                detail.push("discrepancy report differs between runs".to_string());
            }
            warnings.extend(a.iter().map(|d| {
                format!(
                    "closed form differs at {}: counted (n1, n2) = {:?}, closed form {:?}",
                    d.point, d.counted, d.closed_form
                )
            }));
        }
        (Err(e), _) | (_, Err(e)) => detail.push(e.to_string()),
    }
    checks.push(
        7,
        "closed-form discrepancy report at n=3 is deterministic",
        detail,
    );
}

fn determinism(checks: &mut Checks, conv: SignConvention) {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            let h =
                betti(&ModuliParams::new(7, 7).expect("valid"), conv).map_err(|e| e.to_string());
            let d = discrepancy_report(3, 3, conv).map_err(|e| e.to_string());
            (h, d)
        })
    };
    let detail = if run(1) == run(8) {
        Vec::new()
    } else {
        vec!["results differ between 1 and 8 worker threads".to_string()]
    };
    checks.push(8, "assembly identical on 1 and 8 worker threads", detail);
}
