//! Matrix-distance plus epipolar-residual objective, evaluated on canonical
//! fundamental matrices.

use serde::{Deserialize, Serialize};

use crate::correspondence::CorrespondenceSet;
use crate::error::{EpiError, Result};
use crate::estimators::DEFAULT_INLIER_THRESHOLD;
use crate::geometry::{is_canonical, Mat3};
use crate::metrics::{gt_inlier_indices, metric_ec};

/// How the second matrix-distance term is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum L2Mode {
    /// Sum of squared entry differences (squared Frobenius).
    #[default]
    SquaredSum,
    /// Frobenius norm of the difference.
    Frobenius,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub inlier_threshold: f64,
    pub l2_mode: L2Mode,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            beta: 0.01,
            gamma: 0.001,
            inlier_threshold: DEFAULT_INLIER_THRESHOLD,
            l2_mode: L2Mode::SquaredSum,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        let coeffs_ok = [self.alpha, self.beta, self.gamma]
            .iter()
            .all(|c| c.is_finite() && *c >= 0.0);
        if !coeffs_ok {
            return Err(EpiError::InvalidConfig(
                "alpha, beta and gamma must be ≥ 0".into(),
            ));
        }
        if !(self.inlier_threshold > 0.0) {
            return Err(EpiError::InvalidConfig("inlier_threshold must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub l1_term: f64,
    pub l2_term: f64,
    pub le_term: f64,
    pub total: f64,
}

impl LossBreakdown {
    pub fn to_kv(&self) -> String {
        format!(
            "l1_term={}\nl2_term={}\nle_term={}\ntotal={}\n",
            self.l1_term, self.l2_term, self.le_term, self.total
        )
    }
}

fn require_canonical(m: &Mat3) -> Result<()> {
    if is_canonical(m) {
        Ok(())
    } else {
        Err(EpiError::NonCanonicalInput)
    }
}

/// `(alpha * sum |dF|, beta * sum dF^2)` over the nine entries.
pub fn loss_l1l2(f_hat: &Mat3, f_gt: &Mat3, cfg: &LossConfig) -> Result<(f64, f64)> {
    require_canonical(f_hat)?;
    require_canonical(f_gt)?;
    let diff = f_hat - f_gt;
    let l1_raw: f64 = diff.iter().map(|d| d.abs()).sum();
    let squared: f64 = diff.iter().map(|d| d * d).sum();
    let l2_raw = match cfg.l2_mode {
        L2Mode::SquaredSum => squared,
        L2Mode::Frobenius => squared.sqrt(),
    };
    Ok((cfg.alpha * l1_raw, cfg.beta * l2_raw))
}

/// `gamma` times the mean `|m'^T F_hat m|` over every GT inlier (no sampling).
pub fn loss_epipolar(
    f_hat: &Mat3,
    set: &CorrespondenceSet,
    f_gt: &Mat3,
    cfg: &LossConfig,
) -> Result<f64> {
    if set.is_empty() {
        return Err(EpiError::EmptySet);
    }
    let inliers = gt_inlier_indices(set, f_gt, cfg.inlier_threshold);
    if inliers.is_empty() {
        return Err(EpiError::NoInliers);
    }
    Ok(cfg.gamma * metric_ec(f_hat, &set.subset(&inliers))?)
}

pub fn loss_total(
    f_hat: &Mat3,
    f_gt: &Mat3,
    set: &CorrespondenceSet,
    cfg: &LossConfig,
) -> Result<LossBreakdown> {
    cfg.validate()?;
    let (l1_term, l2_term) = loss_l1l2(f_hat, f_gt, cfg)?;
    let le_term = loss_epipolar(f_hat, set, f_gt, cfg)?;
    Ok(LossBreakdown {
        l1_term,
        l2_term,
        le_term,
        total: l1_term + l2_term + le_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::Correspondence;
    use crate::geometry::{cross_matrix, normalize_f, Vec2, Vec3};

    fn canonical_x() -> Mat3 {
        *normalize_f(&cross_matrix(&Vec3::x())).unwrap().matrix()
    }

    #[test]
    fn single_entry_difference() {
        let a = canonical_x();
        let mut b = a;
        b[(0, 1)] = 0.5;
        let (l1, l2) = loss_l1l2(&b, &a, &LossConfig::default()).unwrap();
        assert!((l1 - 0.05).abs() < 1e-17);
        assert!((l2 - 0.0025).abs() < 1e-18);
        assert_eq!(loss_l1l2(&a, &a, &LossConfig::default()).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn frobenius_mode() {
        let a = canonical_x();
        let mut b = a;
        b[(0, 1)] = 0.5;
        let cfg = LossConfig {
            l2_mode: L2Mode::Frobenius,
            ..LossConfig::default()
        };
        let (_, l2) = loss_l1l2(&b, &a, &cfg).unwrap();
        assert!((l2 - 0.005).abs() < 1e-18);
    }

    #[test]
    fn non_canonical_rejected() {
        let raw = cross_matrix(&Vec3::x());
        assert_eq!(
            loss_l1l2(&raw, &canonical_x(), &LossConfig::default()),
            Err(EpiError::NonCanonicalInput)
        );
        assert_eq!(
            loss_l1l2(&canonical_x(), &Mat3::identity(), &LossConfig::default()),
            Err(EpiError::NonCanonicalInput)
        );
    }

    #[test]
    fn epipolar_term_mean_times_gamma() {
        // Under f_hat the residual is y' - y + x, so GT inliers (y' = y)
        // at x = 1 and x = 3 give residuals 1 and 3.
        let f_gt = canonical_x();
        let f_hat = Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, -1.0, 0.0);
        assert!(is_canonical(&f_hat));
        let set: CorrespondenceSet = [
            Correspondence::new(Vec2::new(1.0, 0.0), Vec2::new(4.0, 0.0)),
            Correspondence::new(Vec2::new(3.0, 2.0), Vec2::new(1.0, 2.0)),
            Correspondence::new(Vec2::new(0.0, 0.0), Vec2::new(0.0, 50.0)),
        ]
        .into_iter()
        .collect();
        let le = loss_epipolar(&f_hat, &set, &f_gt, &LossConfig::default()).unwrap();
        assert!((le - 0.002).abs() < 1e-18);
    }

    #[test]
    fn no_inliers() {
        let set: CorrespondenceSet = [Correspondence::new(Vec2::new(0.0, 0.0), Vec2::new(0.0, 9.0))]
            .into_iter()
            .collect();
        assert_eq!(
            loss_epipolar(&canonical_x(), &set, &canonical_x(), &LossConfig::default()),
            Err(EpiError::NoInliers)
        );
    }
}
