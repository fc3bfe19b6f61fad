//! Two-view epipolar geometry toolkit.
//!
//! Builds ground-truth fundamental matrices from camera parameters,
//! estimates them from correspondences (linear and weighted 8-point,
//! RANSAC, SED-reweighted least squares), and scores estimates with the
//! epipolar-constraint, symmetric-epipolar-distance and inlier-epipolar-angle
//! metrics plus a matrix/residual loss.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calib;
pub mod cli;
pub mod config;
pub mod correspondence;
pub mod error;
pub mod estimators;
pub mod formats;
pub mod geometry;
pub mod loss;
pub mod metrics;
pub mod numeric;
pub mod rng;
pub mod synthetic;

pub use correspondence::{Correspondence, CorrespondenceSet};
pub use error::{EpiError, Result};
pub use estimators::{
    eight_point, irls_sed, ransac, weighted_eight_point, EstimationResult, EstimatorConfig, Method,
};
pub use geometry::{
    enforce_rank2, epipolar_line, epipolar_residual, fundamental_from_cameras, normalize_f,
    reconstruct_rank2, symmetric_epipolar_distance, CameraIntrinsics, EpipolarLine,
    FundamentalMatrix, Mat3, RankTwoParams, RelativePose, Vec2, Vec3,
};
pub use loss::{loss_epipolar, loss_l1l2, loss_total, LossBreakdown, LossConfig};
pub use metrics::{evaluate, filter_inliers, metric_ea, metric_ec, metric_ed, MetricsConfig, MetricsReport};
pub use synthetic::{generate_scene, oracle_weights, CameraRig, Scene, SceneConfig};
