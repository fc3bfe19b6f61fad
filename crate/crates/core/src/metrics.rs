//! Evaluation of an estimated F against ground truth on GT-filtered pairs:
//! mean absolute epipolar residual (`m_ec`), mean symmetric epipolar
//! distance (`m_ed`) and the inlier epipolar angle (`m_ea_degrees`).

use serde::{Deserialize, Serialize};

use crate::correspondence::CorrespondenceSet;
use crate::error::{EpiError, Result};
use crate::estimators::DEFAULT_INLIER_THRESHOLD;
use crate::geometry::{
    epipolar_line, epipolar_line_first, epipolar_residual, symmetric_epipolar_distance,
    symmetric_epipolar_distance_with, EpipolarLine, Mat3, SedVariant,
};
use crate::numeric::pairwise_mean;
use crate::rng::Prng;

/// Value stored in `m_ea_degrees` when every pair was an angle outlier.
pub const ALL_OUTLIER_ANGLE: f64 = 90.0;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsConfig {
    /// Pairs with GT SED strictly below this are inliers.
    pub inlier_threshold: f64,
    /// At most this many GT inliers are kept, drawn with `seed`.
    pub sample_size: usize,
    /// Max distance (px) from `m'` to the estimated line for the pair to
    /// count in the angle average.
    pub angle_point_tolerance: f64,
    pub seed: u64,
    pub sed_variant: SedVariant,
    /// Average the angle over both images instead of image 2 only.
    pub angle_both_directions: bool,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            inlier_threshold: DEFAULT_INLIER_THRESHOLD,
            sample_size: 40,
            angle_point_tolerance: 1.0,
            seed: 0,
            sed_variant: SedVariant::Transposed,
            angle_both_directions: false,
        }
    }
}

impl MetricsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.inlier_threshold > 0.0) {
            return Err(EpiError::InvalidConfig("inlier_threshold must be > 0".into()));
        }
        if !(self.angle_point_tolerance > 0.0) {
            return Err(EpiError::InvalidConfig(
                "angle_point_tolerance must be > 0".into(),
            ));
        }
        if self.sample_size < 1 {
            return Err(EpiError::InvalidConfig("sample_size must be ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub m_ec: f64,
    pub m_ed: f64,
    /// Mean angle over angle inliers; [`ALL_OUTLIER_ANGLE`] when there are none.
    pub m_ea_degrees: f64,
    pub n_used: usize,
    pub n_angle_inliers: usize,
    pub n_angle_outliers: usize,
    pub angle_point_tolerance: f64,
}

impl MetricsReport {
    /// False when every pair failed the through-point rule.
    pub fn angle_defined(&self) -> bool {
        self.n_angle_inliers > 0
    }

    /// Flat `key=value` record, one field per line.
    pub fn to_kv(&self) -> String {
        format!(
            "m_ec={}\nm_ed={}\nm_ea_degrees={}\nn_used={}\nn_angle_inliers={}\nn_angle_outliers={}\nangle_point_tolerance={}\n",
            self.m_ec,
            self.m_ed,
            self.m_ea_degrees,
            self.n_used,
            self.n_angle_inliers,
            self.n_angle_outliers,
            self.angle_point_tolerance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleCounts {
    pub inliers: usize,
    pub outliers: usize,
}

/// GT-inlier filter, then seeded down-sampling to `sample_size`, order kept.
pub fn filter_inliers(
    set: &CorrespondenceSet,
    f_gt: &Mat3,
    cfg: &MetricsConfig,
) -> Result<CorrespondenceSet> {
    let mut keep = gt_inlier_indices(set, f_gt, cfg.inlier_threshold);
    if keep.is_empty() {
        return Err(EpiError::NoInliers);
    }
    if keep.len() > cfg.sample_size {
        let mut rng = Prng::new(cfg.seed);
        let mut picks = rng.sample_indices(keep.len(), cfg.sample_size);
        picks.sort_unstable();
        keep = picks.into_iter().map(|i| keep[i]).collect();
    }
    Ok(set.subset(&keep))
}

/// Indices of pairs with SED under `f_gt` strictly below `threshold`.
pub fn gt_inlier_indices(set: &CorrespondenceSet, f_gt: &Mat3, threshold: f64) -> Vec<usize> {
    set.iter()
        .enumerate()
        .filter(|(_, p)| {
            matches!(symmetric_epipolar_distance(f_gt, p.m, p.m_prime), Ok(d) if d < threshold)
        })
        .map(|(i, _)| i)
        .collect()
}

/// Mean `|m'^T F m|`.
pub fn metric_ec(f: &Mat3, set: &CorrespondenceSet) -> Result<f64> {
    if set.is_empty() {
        return Err(EpiError::EmptySet);
    }
    let terms: Vec<f64> = set
        .iter()
        .map(|p| epipolar_residual(f, p.m, p.m_prime).abs())
        .collect();
    Ok(pairwise_mean(&terms))
}

/// Mean symmetric epipolar distance.
pub fn metric_ed(f: &Mat3, set: &CorrespondenceSet) -> Result<f64> {
    metric_ed_with(f, set, SedVariant::Transposed)
}

pub fn metric_ed_with(f: &Mat3, set: &CorrespondenceSet, variant: SedVariant) -> Result<f64> {
    if set.is_empty() {
        return Err(EpiError::EmptySet);
    }
    let terms = set
        .iter()
        .enumerate()
        .map(|(i, p)| {
            symmetric_epipolar_distance_with(f, p.m, p.m_prime, variant)
                .map_err(|_| EpiError::DegenerateLine(Some(i)))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_mean(&terms))
}

/// Acute angle between two lines, degrees in `[0, 90]`.
pub fn line_angle_degrees(a: &EpipolarLine, b: &EpipolarLine) -> f64 {
    let cross = (a.a * b.b - a.b * b.a).abs();
    let dot = (a.a * b.a + a.b * b.b).abs();
    cross.atan2(dot).to_degrees()
}

/// Angle between the estimated and GT lines in one image, or `None` when
/// the estimated line misses `point` by more than `tol` pixels.
fn pair_angle(
    est: Result<EpipolarLine>,
    gt: Result<EpipolarLine>,
    point: crate::geometry::Vec2,
    tol: f64,
    index: usize,
) -> Result<Option<f64>> {
    let gt = gt.map_err(|_| EpiError::DegenerateLine(Some(index)))?;
    let Ok(est) = est else {
        return Ok(None);
    };
    // `!(d <= tol)` also rejects NaN distances.
    if !(est.signed_distance(point).abs() <= tol) {
        return Ok(None);
    }
    Ok(Some(line_angle_degrees(&est, &gt)))
}

/// Inlier epipolar angle: mean angle between `f_est m` and `f_gt m` over
/// pairs whose estimated line passes within `angle_point_tolerance` of `m'`.
pub fn metric_ea(
    f_est: &Mat3,
    f_gt: &Mat3,
    set: &CorrespondenceSet,
    cfg: &MetricsConfig,
) -> Result<(f64, AngleCounts)> {
    if set.is_empty() {
        return Err(EpiError::EmptySet);
    }
    let tol = cfg.angle_point_tolerance;
    let mut angles = Vec::with_capacity(set.len());
    for (i, p) in set.iter().enumerate() {
        let second = pair_angle(
            epipolar_line(f_est, p.m),
            epipolar_line(f_gt, p.m),
            p.m_prime,
            tol,
            i,
        )?;
        let angle = if cfg.angle_both_directions {
            let first = pair_angle(
                epipolar_line_first(f_est, p.m_prime),
                epipolar_line_first(f_gt, p.m_prime),
                p.m,
                tol,
                i,
            )?;
            second.zip(first).map(|(a, b)| 0.5 * (a + b))
        } else {
            second
        };
        if let Some(a) = angle {
            angles.push(a);
        }
    }
    let counts = AngleCounts {
        inliers: angles.len(),
        outliers: set.len() - angles.len(),
    };
    if angles.is_empty() {
        return Err(EpiError::AllAngleOutliers(set.len()));
    }
    Ok((pairwise_mean(&angles), counts))
}

/// Filters with `f_gt`, then computes all three metrics on the same sample.
pub fn evaluate(
    f_est: &Mat3,
    f_gt: &Mat3,
    set: &CorrespondenceSet,
    cfg: &MetricsConfig,
) -> Result<MetricsReport> {
    cfg.validate()?;
    let used = filter_inliers(set, f_gt, cfg)?;
    let m_ec = metric_ec(f_est, &used)?;
    let m_ed = metric_ed_with(f_est, &used, cfg.sed_variant)?;
    let (m_ea_degrees, counts) = match metric_ea(f_est, f_gt, &used, cfg) {
        Ok(v) => v,
        Err(EpiError::AllAngleOutliers(n)) => (
            ALL_OUTLIER_ANGLE,
            AngleCounts {
                inliers: 0,
                outliers: n,
            },
        ),
        Err(e) => return Err(e),
    };
    Ok(MetricsReport {
        m_ec,
        m_ed,
        m_ea_degrees,
        n_used: used.len(),
        n_angle_inliers: counts.inliers,
        n_angle_outliers: counts.outliers,
        angle_point_tolerance: cfg.angle_point_tolerance,
    })
}
