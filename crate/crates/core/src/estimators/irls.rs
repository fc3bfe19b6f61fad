use super::linear::solve_linear;
use super::{EstimationResult, EstimatorConfig};
use crate::correspondence::CorrespondenceSet;
use crate::error::{EpiError, Result};
use crate::geometry::{
    epipolar_line, epipolar_line_first, symmetric_epipolar_distance, FundamentalMatrix, Mat3,
};

const WEIGHT_FLOOR: f64 = 1e-12;
const WEIGHT_CEIL: f64 = 1e12;

/// Sum of symmetric epipolar distances; `+inf` if any line is degenerate.
pub fn sed_objective(f: &Mat3, set: &CorrespondenceSet) -> f64 {
    let terms: Option<Vec<f64>> = set
        .iter()
        .map(|p| symmetric_epipolar_distance(f, p.m, p.m_prime).ok())
        .collect();
    terms.map_or(f64::INFINITY, |t| crate::numeric::pairwise_sum(&t))
}

/// Per-pair factor `1/|(F m)_12|^2 + 1/|(F^T m')_12|^2`, clamped.
fn reweight(f: &Mat3, set: &CorrespondenceSet) -> (Vec<f64>, bool) {
    let mut all_clamped = true;
    let w = set
        .iter()
        .map(|p| {
            let inv = |g: Result<f64>| g.map_or(f64::INFINITY, |g| 1.0 / g);
            let raw = inv(epipolar_line(f, p.m).map(|l| l.gradient_norm_sq()))
                + inv(epipolar_line_first(f, p.m_prime).map(|l| l.gradient_norm_sq()));
            let w = raw.clamp(WEIGHT_FLOOR, WEIGHT_CEIL);
            all_clamped &= w != raw;
            w
        })
        .collect();
    (w, all_clamped)
}

/// Iteratively reweighted least squares on the symmetric epipolar distance.
///
/// Each round freezes the SED gradient factors under the current estimate
/// and solves the weighted 8-point problem with them. Weights are rescaled
/// to mean 1 before the solve. Returns the iterate (including `init`) with
/// the lowest objective; `score` is that objective and the mask gates SED
/// at `cfg.ransac_inlier_threshold`.
pub fn irls_sed(
    set: &CorrespondenceSet,
    init: &FundamentalMatrix,
    cfg: &EstimatorConfig,
) -> Result<EstimationResult> {
    cfg.validate()?;
    if set.len() < 8 {
        return Err(EpiError::TooFewPoints {
            needed: 8,
            got: set.len(),
        });
    }
    let mut current = *init;
    let mut best = (*init, sed_objective(init, set));
    let mut iterations = 0;

    for k in 1..=cfg.irls_max_iters {
        let (mut w, all_clamped) = reweight(&current, set);
        if all_clamped {
            return Err(EpiError::DivergedToDegenerate);
        }
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        w.iter_mut().for_each(|v| *v /= mean);

        let next = solve_linear(set.pairs(), Some(&w), cfg.hartley_normalization)?;
        iterations = k;
        let objective = sed_objective(&next, set);
        if objective < best.1 {
            best = (next, objective);
        }
        let change = next.frobenius_distance(&current);
        current = next;
        if change < cfg.irls_tolerance {
            break;
        }
    }

    let (f, objective) = best;
    let inlier_mask = set
        .iter()
        .map(|p| {
            matches!(symmetric_epipolar_distance(&f, p.m, p.m_prime),
                Ok(d) if d < cfg.ransac_inlier_threshold)
        })
        .collect();
    Ok(EstimationResult {
        f,
        inlier_mask,
        score: objective,
        iterations_used: iterations,
    })
}
