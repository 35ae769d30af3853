//! Randomized structural invariants, driven by proptest over generator specs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kframe_core::duality::{
    check_dual, dual_is_jframe, extract_w, generate_dual, w_range_criterion,
};
use kframe_core::jframe::{
    analyze_jframe, canonical_dual, coefficient_projection, jframe_operator_matrix,
    nullspace_splitting, require_jframe,
};
use kframe_core::krein::{classify_subspace, is_maximal_definite, SubspaceClass};
use kframe_core::linalg::{self, CMat};
use kframe_core::parseval::{
    canonical_parseval, naimark_coefficient_check, naimark_dilate, parseval_decomposition,
    parseval_equivalence, principal_sqrt,
};
use kframe_core::sampling::{oracle_sum, random_admissible_dual, random_jframe, random_vector};
use kframe_core::{FrameFamily, GenSpec, Sign, DEFAULT_RTOL};

fn spec_strategy() -> impl Strategy<Value = GenSpec> {
    (
        1usize..=3,
        0usize..=2,
        0usize..=2,
        0usize..=2,
        0u64..1u64 << 48,
    )
        .prop_map(|(p, q, extra_plus, extra_minus, seed)| {
            let n_minus = if q == 0 { 0 } else { q + extra_minus };
            GenSpec::new(p, q, p + extra_plus, q + extra_minus.min(n_minus)).with_seed(seed)
        })
}

fn indefinite_spec_strategy() -> impl Strategy<Value = GenSpec> {
    (
        1usize..=3,
        1usize..=2,
        0usize..=2,
        0usize..=2,
        0u64..1u64 << 48,
    )
        .prop_map(|(p, q, extra_plus, extra_minus, seed)| {
            GenSpec::new(p, q, p + extra_plus, q + extra_minus).with_seed(seed)
        })
}

fn frame_for(spec: &GenSpec) -> FrameFamily {
    random_jframe(spec).expect("generator meets its own spec")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generated_families_are_jframes_with_requested_shape(spec in spec_strategy()) {
        let f = frame_for(&spec);
        let analysis = analyze_jframe(&f, DEFAULT_RTOL);
        prop_assert!(analysis.is_jframe());
        prop_assert_eq!(f.excess(), spec.excess());
        prop_assert_eq!(f.indices(Sign::Plus).len(), spec.n_plus);
        prop_assert_eq!(f.indices(Sign::Minus).len(), spec.n_minus);
        if spec.q > 0 {
            prop_assert_eq!(
                classify_subspace(analysis.m_plus(), DEFAULT_RTOL),
                SubspaceClass::UniformlyPositive
            );
            prop_assert!(is_maximal_definite(analysis.m_plus(), DEFAULT_RTOL).unwrap());
        }
    }

    #[test]
    fn operator_splits_into_signed_parts(spec in indefinite_spec_strategy()) {
        let f = frame_for(&spec);
        let analysis = require_jframe(&f, DEFAULT_RTOL).unwrap();
        let s = analysis.s().entries();
        let s_plus = analysis.s_plus().entries();
        let s_minus = analysis.s_minus().entries();
        let norm = linalg::op_norm(s).max(1.0);
        prop_assert!(linalg::op_norm(&(s_plus - s_minus - s)) <= 1e-10 * norm);
        let q = analysis.q().expect("J-frames carry the span projection").entries();
        prop_assert!(linalg::op_norm(&(q * s - s_plus)) <= 1e-9 * norm);
        let d = f.space().dim();
        let eye = CMat::identity(d, d);
        prop_assert!(linalg::op_norm(&((&eye - q) * s + s_minus)) <= 1e-9 * norm);
        prop_assert!(analysis.s().j_selfadjoint_defect().unwrap() <= 1e-10);
    }

    #[test]
    fn coefficient_projection_commutes_with_sign_blocks(spec in indefinite_spec_strategy()) {
        let f = frame_for(&spec);
        let e = coefficient_projection(&f).unwrap();
        let em = e.entries();
        let norm = linalg::op_norm(em).max(1.0);
        prop_assert!(linalg::op_norm(&(em * em - em)) <= 1e-9 * norm);
        prop_assert!(e.j_selfadjoint_defect().unwrap() <= 1e-9);
        for sign in [Sign::Plus, Sign::Minus] {
            let p = f.sign_projector(sign);
            prop_assert!(linalg::op_norm(&(em * &p - &p * em)) <= 1e-9 * norm);
        }
    }

    #[test]
    fn canonical_dual_is_a_jframe_dual_with_inverse_operator(spec in spec_strategy()) {
        let f = frame_for(&spec);
        let g = canonical_dual(&f).unwrap();
        let report = check_dual(&f, &g, 1e-8).unwrap();
        prop_assert!(report.is_dual);
        prop_assert!(report.is_jframe_dual);
        let s = jframe_operator_matrix(&f);
        let s_dual = jframe_operator_matrix(&g);
        let inv = linalg::inverse(&s).unwrap();
        prop_assert!(linalg::rel_residual(&s_dual, &inv) <= 1e-8);
        for (sf, sg) in f.signs().iter().zip(g.signs()) {
            prop_assert_eq!(sf, sg);
        }
    }

    #[test]
    fn nullspace_splits_whenever_there_is_excess(spec in indefinite_spec_strategy()) {
        let f = frame_for(&spec);
        let report = nullspace_splitting(&f, 1e-10).unwrap();
        prop_assert!(report.pass);
        prop_assert_eq!(report.null_dim, f.excess());
        prop_assert_eq!(report.null_plus_dim + report.null_minus_dim, report.null_dim);
        prop_assert!(report.commutation_residual <= 1e-10);
    }

    #[test]
    fn perturbation_roundtrip_reproduces_the_dual(spec in indefinite_spec_strategy()) {
        let f = frame_for(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9e3779b97f4a7c15);
        let g = random_admissible_dual(&f, &mut rng).unwrap();
        let w = extract_w(&f, &g).unwrap();
        let again = generate_dual(&f, &w).unwrap();
        for (x, y) in g.vectors().iter().zip(again.vectors()) {
            prop_assert!((x - y).norm() <= 1e-9 * x.norm().max(1.0));
        }
    }

    #[test]
    fn jframe_dual_verdict_matches_range_criterion(spec in indefinite_spec_strategy()) {
        let f = frame_for(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x6a09e667f3bcc909);
        for _ in 0..3 {
            let g = random_admissible_dual(&f, &mut rng).unwrap();
            let direct = dual_is_jframe(&f, &g, 1e-8).unwrap();
            let via_w = w_range_criterion(&f, &g, 1e-8).unwrap();
            prop_assert_eq!(direct.is_jframe_dual, via_w.holds());
        }
    }

    #[test]
    fn principal_root_squares_back_inside_the_sector(spec in indefinite_spec_strategy()) {
        let f = frame_for(&spec);
        let analysis = require_jframe(&f, DEFAULT_RTOL).unwrap();
        let root = principal_sqrt(analysis.s(), DEFAULT_RTOL).unwrap();
        let s = analysis.s().entries();
        let p = root.entries();
        prop_assert!(linalg::op_norm(&(p * p - s)) <= 1e-9 * linalg::op_norm(s).max(1.0));
        for lambda in linalg::eigenvalues(p).unwrap() {
            prop_assert!(lambda.arg().abs() < std::f64::consts::FRAC_PI_4);
        }
        prop_assert!(root.j_selfadjoint_defect().unwrap() <= 1e-8);
    }

    #[test]
    fn canonical_parseval_passes_every_test(spec in indefinite_spec_strategy()) {
        let f = frame_for(&spec);
        let p = canonical_parseval(&f).unwrap();
        let eq = parseval_equivalence(&p, 1e-9).unwrap();
        prop_assert!(eq.is_parseval());
        prop_assert!(eq.verdicts_agree());
        for (sf, sp) in f.signs().iter().zip(p.signs()) {
            prop_assert_eq!(sf, sp);
        }
        let (l_plus, l_minus) = parseval_decomposition(&f).unwrap();
        prop_assert_eq!(l_plus.dim(), f.space().num_positive());
        prop_assert_eq!(l_minus.dim(), f.space().num_negative());
        let j = f.space().j_matrix();
        let cross = linalg::op_norm(&(l_plus.basis().adjoint() * j * l_minus.basis()));
        prop_assert!(cross <= 1e-9);
    }

    #[test]
    fn dilation_roundtrip_and_coefficient_identity(spec in indefinite_spec_strategy()) {
        let f = frame_for(&spec);
        let p = canonical_parseval(&f).unwrap();
        let dilation = naimark_dilate(&p, 1e-9).unwrap();
        let check = dilation.check(&p).unwrap();
        prop_assert!(check.worst_structural() <= 1e-9);
        prop_assert!(check.projection_selfadjoint_defect <= 1e-9);
        let on_parseval = naimark_coefficient_check(&p, 1e-8).unwrap();
        prop_assert!(on_parseval.passes());
        let on_original = naimark_coefficient_check(&f, 1e-8).unwrap();
        let is_p = parseval_equivalence(&f, 1e-8).unwrap().is_parseval();
        prop_assert_eq!(on_original.passes(), is_p);
    }

    #[test]
    fn oracle_and_matrix_paths_agree(spec in spec_strategy()) {
        let f = frame_for(&spec);
        let s = jframe_operator_matrix(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0xbb67ae8584caa73b);
        for _ in 0..5 {
            let v = random_vector(&mut rng, f.space().dim());
            let direct = oracle_sum(&f, &v).unwrap();
            let matvec = &s * &v;
            prop_assert!((&direct - &matvec).norm() <= 1e-12 * direct.norm().max(1.0));
        }
    }
}
