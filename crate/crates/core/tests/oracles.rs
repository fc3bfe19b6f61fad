mod common;

use common::*;
use epipolar::loss::L2Mode;
use epipolar::{
    enforce_rank2, loss_epipolar, loss_l1l2, loss_total, metric_ec, metric_ed, Correspondence,
    CorrespondenceSet, LossConfig, Mat3, Vec2,
};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Mat3> {
    proptest::array::uniform9(-5.0f64..5.0).prop_map(|v| Mat3::from_row_slice(&v))
}

fn pair_set() -> impl Strategy<Value = CorrespondenceSet> {
    proptest::collection::vec(proptest::array::uniform4(-300.0f64..300.0), 1..40).prop_map(|v| {
        v.into_iter()
            .map(|[a, b, c, d]| Correspondence::new(Vec2::new(a, b), Vec2::new(c, d)))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn ec_and_ed_match_brute_force(m in matrix(), set in pair_set()) {
        let Ok(f) = enforce_rank2(&m) else { return Ok(()) };
        let fa = arr(&f);
        let ps = pairs(&set);
        let ec: Vec<f64> = ps.iter().map(|&(a, b)| residual(&fa, a, b).abs()).collect();
        let ed: Vec<f64> = ps.iter().map(|&(a, b)| sed(&fa, a, b)).collect();
        prop_assert!(rel_close(metric_ec(&f, &set).unwrap(), mean(&ec), 1e-12));
        if let Ok(got) = metric_ed(&f, &set) {
            prop_assert!(rel_close(got, mean(&ed), 1e-12));
        }
    }

    #[test]
    fn matrix_loss_terms_match_brute_force(a in matrix(), b in matrix(), alpha in 0.0f64..2.0, beta in 0.0f64..2.0) {
        let (Ok(fa), Ok(fb)) = (enforce_rank2(&a), enforce_rank2(&b)) else { return Ok(()) };
        let (x, y) = (arr(&fa), arr(&fb));
        let (mut l1, mut l2) = (0.0, 0.0);
        for r in 0..3 {
            for c in 0..3 {
                l1 += (x[r][c] - y[r][c]).abs();
                l2 += (x[r][c] - y[r][c]).powi(2);
            }
        }
        let cfg = LossConfig { alpha, beta, ..LossConfig::default() };
        let (g1, g2) = loss_l1l2(&fa, &fb, &cfg).unwrap();
        prop_assert!(rel_close(g1, alpha * l1, 1e-14));
        prop_assert!(rel_close(g2, beta * l2, 1e-14));
        let frob = LossConfig { l2_mode: L2Mode::Frobenius, ..cfg };
        prop_assert!(rel_close(loss_l1l2(&fa, &fb, &frob).unwrap().1, beta * l2.sqrt(), 1e-14));
    }

    #[test]
    fn residual_loss_and_total_match_brute_force(seed in 0u64..5000, m in matrix()) {
        let Ok(f_hat) = enforce_rank2(&m) else { return Ok(()) };
        let sc = scene(seed, 0.05, 0.3);
        let cfg = LossConfig::default();
        let (fa, ga) = (arr(&f_hat), arr(&sc.f_gt));
        let kept: Vec<f64> = pairs(&sc.set)
            .iter()
            .filter(|&&(a, b)| sed(&ga, a, b) < cfg.inlier_threshold)
            .map(|&(a, b)| residual(&fa, a, b).abs())
            .collect();
        prop_assume!(!kept.is_empty());
        let le = loss_epipolar(&f_hat, &sc.set, &sc.f_gt, &cfg).unwrap();
        prop_assert!(rel_close(le, cfg.gamma * mean(&kept), 1e-12));
        let t = loss_total(&f_hat, &sc.f_gt, &sc.set, &cfg).unwrap();
        prop_assert_eq!(t.total, t.l1_term + t.l2_term + t.le_term);
        prop_assert!(t.l1_term >= 0.0 && t.l2_term >= 0.0 && t.le_term >= 0.0);
    }
}
