use nalgebra::DMatrix;

use super::{EstimationResult, EstimatorConfig};
use crate::correspondence::{Correspondence, CorrespondenceSet};
use crate::error::{EpiError, Result};
use crate::geometry::{canonical_rank2, enforce_rank2, epipolar_residual, Mat3, Vec2};

const MIN_PAIRS: usize = 8;
/// Relative gap below which the two smallest singular values count as equal.
const NULLSPACE_GAP: f64 = 1e-12;

/// Similarity moving the centroid of `points` to the origin with mean
/// distance `sqrt(2)`. `None` when every point coincides.
pub fn conditioning_transform<'a>(points: impl Iterator<Item = &'a Vec2> + Clone) -> Option<Mat3> {
    let n = points.clone().count() as f64;
    let (sx, sy) = points.clone().fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    let (cx, cy) = (sx / n, sy / n);
    let mean_dist = points
        .map(|p| ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt())
        .sum::<f64>()
        / n;
    if !(mean_dist > 0.0) || !mean_dist.is_finite() {
        return None;
    }
    let s = std::f64::consts::SQRT_2 / mean_dist;
    Some(Mat3::new(s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0))
}

fn apply(t: &Mat3, p: Vec2) -> Vec2 {
    Vec2::new(
        t[(0, 0)] * p.x + t[(0, 1)] * p.y + t[(0, 2)],
        t[(1, 0)] * p.x + t[(1, 1)] * p.y + t[(1, 2)],
    )
}

/// Minimizes `sum_i w_i (m'_i^T F m_i)^2` over unit-norm `f`.
///
/// Pairs with zero weight are dropped before conditioning; the remaining
/// weights are divided by their maximum, which leaves the minimizer
/// unchanged.
pub(super) fn solve_linear(
    pairs: &[Correspondence],
    weights: Option<&[f64]>,
    hartley: bool,
) -> Result<crate::geometry::FundamentalMatrix> {
    let active: Vec<(Correspondence, f64)> = match weights {
        None => pairs.iter().map(|p| (*p, 1.0)).collect(),
        Some(w) => {
            let max = w.iter().copied().fold(0.0, f64::max);
            pairs
                .iter()
                .zip(w)
                .filter(|(_, &w)| w > 0.0)
                .map(|(p, &w)| (*p, w / max))
                .collect()
        }
    };
    if active.len() < MIN_PAIRS {
        return Err(EpiError::TooFewPoints {
            needed: MIN_PAIRS,
            got: active.len(),
        });
    }

    let (t1, t2) = if hartley {
        let t1 = conditioning_transform(active.iter().map(|(p, _)| &p.m));
        let t2 = conditioning_transform(active.iter().map(|(p, _)| &p.m_prime));
        match (t1, t2) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(EpiError::DegenerateConfiguration),
        }
    } else {
        (Mat3::identity(), Mat3::identity())
    };

    let rows = active.len().max(9);
    let mut a = DMatrix::<f64>::zeros(rows, 9);
    for (i, (pair, w)) in active.iter().enumerate() {
        let (p, q) = if hartley {
            (apply(&t1, pair.m), apply(&t2, pair.m_prime))
        } else {
            (pair.m, pair.m_prime)
        };
        let s = w.sqrt();
        let row = [
            q.x * p.x,
            q.x * p.y,
            q.x,
            q.y * p.x,
            q.y * p.y,
            q.y,
            p.x,
            p.y,
            1.0,
        ];
        for (j, v) in row.into_iter().enumerate() {
            a[(i, j)] = s * v;
        }
    }

    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or(EpiError::DegenerateConfiguration)?;
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
    let (largest, second, smallest) = (sv[order[0]], sv[order[7]], sv[order[8]]);
    if !(largest > 0.0) || second - smallest <= NULLSPACE_GAP * largest {
        return Err(EpiError::DegenerateConfiguration);
    }

    let f: Vec<f64> = v_t.row(order[8]).iter().copied().collect();
    let conditioned = Mat3::from_row_slice(&f);
    let projected = enforce_rank2(&conditioned).map_err(|_| EpiError::DegenerateConfiguration)?;
    let f = t2.transpose() * projected.matrix() * t1;
    canonical_rank2(&f).map_err(|_| EpiError::DegenerateConfiguration)
}

fn algebraic_result(
    set: &CorrespondenceSet,
    f: crate::geometry::FundamentalMatrix,
    cfg: &EstimatorConfig,
) -> EstimationResult {
    let mut sum_sq = 0.0;
    let mut mask = Vec::with_capacity(set.len());
    for p in set {
        let r = epipolar_residual(&f, p.m, p.m_prime);
        sum_sq += r * r;
        let sed = crate::geometry::symmetric_epipolar_distance(&f, p.m, p.m_prime);
        mask.push(matches!(sed, Ok(d) if d < cfg.ransac_inlier_threshold));
    }
    EstimationResult {
        f,
        inlier_mask: mask,
        score: sum_sq.sqrt(),
        iterations_used: 1,
    }
}

/// Linear 8-point estimate over every pair.
///
/// The inlier mask marks pairs whose SED is below
/// `cfg.ransac_inlier_threshold`; the score is the algebraic residual norm
/// `sqrt(sum (m'^T F m)^2)` of the canonical estimate.
pub fn eight_point(set: &CorrespondenceSet, cfg: &EstimatorConfig) -> Result<EstimationResult> {
    if set.len() < MIN_PAIRS {
        return Err(EpiError::TooFewPoints {
            needed: MIN_PAIRS,
            got: set.len(),
        });
    }
    let f = solve_linear(set.pairs(), None, cfg.hartley_normalization)?;
    Ok(algebraic_result(set, f, cfg))
}

/// Weighted 8-point: each design row scaled by `sqrt(w_i)`.
pub fn weighted_eight_point(
    set: &CorrespondenceSet,
    weights: &[f64],
    cfg: &EstimatorConfig,
) -> Result<EstimationResult> {
    if weights.len() != set.len() {
        return Err(EpiError::LengthMismatch {
            what: "weights",
            expected: set.len(),
            got: weights.len(),
        });
    }
    if let Some((index, &value)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
    {
        return Err(EpiError::InvalidWeight { index, value });
    }
    let mass: f64 = weights.iter().sum();
    if mass < cfg.min_weight_mass {
        return Err(EpiError::InsufficientWeightMass {
            mass,
            required: cfg.min_weight_mass,
        });
    }
    let f = solve_linear(set.pairs(), Some(weights), cfg.hartley_normalization)?;
    Ok(algebraic_result(set, f, cfg))
}
