use steiner_core::corpus::{
    fixed_point_matrices, random_dense_k2_matrices, random_k2_matrices, remark_matrix,
};
use steiner_core::gitstab::{
    check_instability_certificate, degeneracy_dim_k2, stability_k2, strata_indices,
    CertificateOutcome, InstabilityCertificate, K2Analysis, LinearMatrix, MatrixFile, Verdict,
};
use steiner_core::selftest::{matrix_properties, RANDOM_SEED};

fn reversed(len: usize) -> Vec<usize> {
    (0..len).rev().collect()
}

fn rotated(len: usize, by: usize) -> Vec<usize> {
    (0..len).map(|j| (j + by) % len).collect()
}

#[test]
fn random_corpus_satisfies_properties() {
    let corpus = random_k2_matrices(500, RANDOM_SEED);
    let problems: Vec<String> = corpus.iter().flat_map(matrix_properties).collect();
    assert!(problems.is_empty(), "{problems:#?}");
    let verdicts: Vec<Verdict> = corpus
        .iter()
        .map(|a| stability_k2(a).unwrap().verdict)
        .collect();
    for v in [
        Verdict::Stable,
        Verdict::StrictlySemistable,
        Verdict::Unstable,
    ] {
        assert!(verdicts.contains(&v), "corpus never reaches {v}");
    }
}

#[test]
fn fixed_points_are_stable_and_satisfy_properties() {
    for a in fixed_point_matrices(5) {
        assert_eq!(stability_k2(&a).unwrap().verdict, Verdict::Stable, "{a}");
        assert!(matrix_properties(&a).is_empty(), "{a}");
    }
}

#[test]
fn verdict_and_invariants_survive_row_swap_and_column_permutation() {
    for a in random_k2_matrices(150, 11) {
        let base = K2Analysis::compute(&a).unwrap();
        let cols = a.cols();
        for b in [
            a.swap_rows(0, 1),
            a.permute_columns(&reversed(cols)),
            a.swap_rows(0, 1).permute_columns(&rotated(cols, 1)),
        ] {
            let k = K2Analysis::compute(&b).unwrap();
            assert_eq!(k.verdict.verdict, base.verdict.verdict, "{a} vs {b}");
            assert_eq!(k.verdict.s_max, base.verdict.s_max, "{a} vs {b}");
            assert_eq!(k.degeneracy_dim, base.degeneracy_dim, "{a} vs {b}");
            if base.verdict.verdict.is_semistable() {
                assert_eq!(
                    k.strata(&b).unwrap(),
                    base.strata(&a).unwrap(),
                    "{a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn dense_vector_bundle_samples() {
    let mut unstable = Vec::new();
    let mut bundles = 0;
    for a in random_dense_k2_matrices(100, 5) {
        let k = K2Analysis::compute(&a).unwrap();
        if k.degeneracy_dim == Some(-1) {
            bundles += 1;
            if k.verdict.verdict != Verdict::Stable {
                unstable.push(format!("{a}: {}", k.verdict.verdict));
            }
        }
    }
    eprintln!("{bundles} of 100 dense samples define vector bundles");
    for line in &unstable {
        eprintln!("warning: vector bundle matrix not stable: {line}");
    }
}

#[test]
fn remark_matrix_end_to_end() {
    let a = remark_matrix();
    assert_eq!(stability_k2(&a).unwrap().verdict, Verdict::Stable);
    assert_eq!(degeneracy_dim_k2(&a).unwrap(), 1);
    let s = strata_indices(&a).unwrap();
    assert_eq!((s.j_s, s.j_tilde), (2, 3));
}

#[test]
fn matrix_file_round_trip() {
    let a = LinearMatrix::parse(2, "1/2x0 -x1+x2 0; x2 0 3x0").unwrap();
    let file = MatrixFile::from(a.clone());
    let back = MatrixFile::from_json(&file.to_json()).unwrap();
    assert_eq!(back.matrix, a);
    assert!(back.certificate.is_none());
}

#[test]
fn certificate_thresholds_for_three_rows() {
    // k = 3, m = 3: row s = 0 needs 3 i_0 > 12 for non-semistability
    let check = |zeros: Vec<usize>, s| {
        check_instability_certificate(&InstabilityCertificate::new(3, 3, zeros, s).unwrap())
    };
    assert_eq!(check(vec![5, 0, 0], 0), CertificateOutcome::NonSemistable);
    assert_eq!(check(vec![4, 0, 0], 0), CertificateOutcome::NonStable);
    assert_eq!(check(vec![3, 0, 0], 0), CertificateOutcome::Invalid);
    assert_eq!(check(vec![3, 2, 1], 2), CertificateOutcome::NonSemistable);
    assert_eq!(check(vec![3, 2, 0], 2), CertificateOutcome::Invalid);
}
