mod common;

use common::*;
use epipolar::geometry::{is_canonical, symmetric_epipolar_distance_with, SedVariant};
use epipolar::metrics::{gt_inlier_indices, metric_ea};
use epipolar::{
    enforce_rank2, evaluate, filter_inliers, normalize_f, reconstruct_rank2,
    symmetric_epipolar_distance, Correspondence, CorrespondenceSet, EpiError, Mat3,
    MetricsConfig, RankTwoParams, Vec2, Vec3,
};
use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = Vec3> {
    proptest::array::uniform3(-10.0f64..10.0).prop_map(Vec3::from)
}

/// Sum of two outer products: rank 2 unless the draws line up.
fn rank2() -> impl Strategy<Value = Mat3> {
    (vec3(), vec3(), vec3(), vec3())
        .prop_map(|(a, b, c, d)| a * b.transpose() + c * d.transpose())
        .prop_filter("rank exactly 2", |m| {
            let sv = m.singular_values();
            let mut s = [sv[0], sv[1], sv[2]];
            s.sort_by(f64::total_cmp);
            s[1] / s[2] > 1e-3
        })
}

fn point() -> impl Strategy<Value = Vec2> {
    (-500.0f64..500.0, -500.0f64..500.0).prop_map(|(x, y)| Vec2::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn normalize_is_scale_invariant(m in rank2(), k in -20i32..20, neg in any::<bool>(), s in 0.01f64..100.0) {
        let base = normalize_f(&m).unwrap();
        let p = 2f64.powi(k) * if neg { -1.0 } else { 1.0 };
        let exact = normalize_f(&(m * p)).unwrap();
        prop_assert_eq!(exact.to_row_major().map(f64::to_bits), base.to_row_major().map(f64::to_bits));
        let general = normalize_f(&(m * s)).unwrap();
        prop_assert!(general.frobenius_distance(&base) <= 1e-14);
        prop_assert!(is_canonical(base.matrix()));
    }

    #[test]
    fn sed_is_symmetric_under_transpose(m in rank2(), a in point(), b in point()) {
        let f = normalize_f(&m).unwrap();
        let ft = f.transpose();
        let fa = arr(&f);
        // The residual is a sum of terms that can cancel, so compare square
        // roots against the size of those terms.
        let mut terms = 0.0;
        for (i, p) in [b.x, b.y, 1.0].iter().enumerate() {
            for (j, q) in [a.x, a.y, 1.0].iter().enumerate() {
                terms += (p * fa[i][j] * q).abs();
            }
        }
        let l1 = line(&fa, a.x, a.y);
        let l2 = line_t(&fa, b.x, b.y);
        let g = (1.0 / (l1[0] * l1[0] + l1[1] * l1[1]) + 1.0 / (l2[0] * l2[0] + l2[1] * l2[1])).sqrt();
        let close = |x: f64, y: f64| (x.sqrt() - y.sqrt()).abs() <= 1e-12 * terms * g;
        let brute = sed(&fa, (a.x, a.y), (b.x, b.y));
        if let (Ok(x), Ok(y)) = (
            symmetric_epipolar_distance(&f, a, b),
            symmetric_epipolar_distance(&ft, b, a),
        ) {
            prop_assert!(close(x, y));
            prop_assert!(close(x, brute));
        }
        if let Ok(x) = symmetric_epipolar_distance_with(&f, a, b, SedVariant::Transposed) {
            prop_assert!(close(x, brute));
        }
    }

    #[test]
    fn rank2_parameters_round_trip(m in rank2()) {
        let f = normalize_f(&m).unwrap();
        if let Ok(p) = RankTwoParams::from_matrix(f.matrix()) {
            let back = reconstruct_rank2(&p).unwrap();
            prop_assert!(back.frobenius_distance(&f) <= 1e-9);
        }
    }

    #[test]
    fn enforce_rank2_fixes_rank2_and_projects_others(m in rank2(), e in proptest::array::uniform9(-1e-3f64..1e-3)) {
        let f = normalize_f(&m).unwrap();
        let same = enforce_rank2(f.matrix()).unwrap();
        prop_assert!(same.frobenius_distance(&f) <= 1e-12);
        let noisy = f.matrix() + Mat3::from_row_slice(&e);
        let projected = enforce_rank2(&noisy).unwrap();
        prop_assert!(is_canonical(projected.matrix()));
    }

    #[test]
    fn metrics_stay_in_range(seed in 0u64..5000, m in rank2(), tol in 0.1f64..20.0) {
        let sc = scene(seed, 0.5, 0.3);
        let f_est = normalize_f(&m).unwrap();
        let cfg = MetricsConfig { angle_point_tolerance: tol, ..MetricsConfig::default() };
        match evaluate(&f_est, &sc.f_gt, &sc.set, &cfg) {
            Ok(r) => {
                prop_assert!(r.m_ec >= 0.0 && r.m_ed >= 0.0);
                prop_assert!((0.0..=90.0).contains(&r.m_ea_degrees));
                prop_assert_eq!(r.n_angle_inliers + r.n_angle_outliers, r.n_used);
            }
            Err(e) => prop_assert!(matches!(e, EpiError::NoInliers | EpiError::DegenerateLine(_))),
        }
    }

    #[test]
    fn wider_tolerance_never_drops_angle_pairs(seed in 0u64..5000, t1 in 0.1f64..5.0, extra in 0.0f64..20.0) {
        let sc = scene(seed, 0.0, 0.0);
        let used = sc.set.subset(&(0..30).collect::<Vec<_>>());
        // Perturb the estimate so some lines miss their points.
        let f_est = enforce_rank2(&(sc.f_gt.matrix() + Mat3::from_element(1e-7))).unwrap();
        let count = |t: f64| {
            let cfg = MetricsConfig { angle_point_tolerance: t, ..MetricsConfig::default() };
            match metric_ea(&f_est, &sc.f_gt, &used, &cfg) {
                Ok((_, c)) => c.inliers,
                Err(EpiError::AllAngleOutliers(_)) => 0,
                Err(e) => panic!("{e}"),
            }
        };
        prop_assert!(count(t1 + extra) >= count(t1));
    }

    #[test]
    fn inlier_filter_is_deterministic_and_bounded(seed in 0u64..5000, n in 1usize..80, s in any::<u64>()) {
        let sc = scene(seed, 0.3, 0.3);
        let cfg = MetricsConfig { sample_size: n, seed: s, ..MetricsConfig::default() };
        let a = filter_inliers(&sc.set, &sc.f_gt, &cfg);
        let b = filter_inliers(&sc.set, &sc.f_gt, &cfg);
        prop_assert_eq!(&a, &b);
        let available = gt_inlier_indices(&sc.set, &sc.f_gt, cfg.inlier_threshold).len();
        match a {
            Ok(kept) => prop_assert_eq!(kept.len(), available.min(n)),
            Err(e) => {
                prop_assert_eq!(e, EpiError::NoInliers);
                prop_assert_eq!(available, 0);
            }
        }
    }

    #[test]
    fn evaluate_ignores_estimate_scale(seed in 0u64..5000, k in -10i32..10) {
        let sc = scene(seed, 0.0, 0.0);
        let f_est = enforce_rank2(&(sc.f_gt.matrix() + Mat3::from_element(1e-6))).unwrap();
        let rescaled = normalize_f(&(f_est.matrix() * 2f64.powi(k) * -1.0)).unwrap();
        let cfg = MetricsConfig::default();
        prop_assert_eq!(
            evaluate(&f_est, &sc.f_gt, &sc.set, &cfg),
            evaluate(&rescaled, &sc.f_gt, &sc.set, &cfg)
        );
    }
}

#[test]
fn angle_is_scale_free_on_raw_matrices() {
    let f_gt = Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0);
    let d = 5f64.to_radians();
    let f_est = Mat3::new(0.0, 0.0, d.sin(), 0.0, 0.0, -d.cos(), -d.sin(), d.cos(), 0.0);
    let set: CorrespondenceSet = (0..10)
        .map(|i| {
            let m = Vec2::new(i as f64 * 7.0 - 30.0, i as f64 * 3.0 + 1.0);
            Correspondence::new(m, m)
        })
        .collect();
    let cfg = MetricsConfig::default();
    let (a, _) = metric_ea(&f_est, &f_gt, &set, &cfg).unwrap();
    let (b, _) = metric_ea(&(f_est * -3.5), &(f_gt * 0.25), &set, &cfg).unwrap();
    assert!((a - 5.0).abs() <= 1e-9);
    assert!((a - b).abs() <= 1e-12);
}
