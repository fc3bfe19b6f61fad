//! Fundamental matrix estimation from correspondences.

mod irls;
mod linear;
mod ransac;

pub use irls::{irls_sed, sed_objective};
pub use linear::{conditioning_transform, eight_point, weighted_eight_point};
pub use ransac::ransac;

use crate::error::{EpiError, Result};
use crate::geometry::FundamentalMatrix;

/// SED gate shared by RANSAC support counting and the metrics inlier filter.
pub const DEFAULT_INLIER_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    /// Similarity preconditioning of each image before the linear solve.
    pub hartley_normalization: bool,
    pub ransac_iterations: usize,
    pub ransac_inlier_threshold: f64,
    pub ransac_seed: u64,
    pub irls_max_iters: usize,
    /// Stop once the canonical F moves less than this (Frobenius).
    pub irls_tolerance: f64,
    pub min_weight_mass: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            hartley_normalization: true,
            ransac_iterations: 2000,
            ransac_inlier_threshold: DEFAULT_INLIER_THRESHOLD,
            ransac_seed: 0,
            irls_max_iters: 50,
            irls_tolerance: 1e-12,
            min_weight_mass: 8.0,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(EpiError::InvalidConfig(msg.to_string()));
        if self.ransac_iterations < 1 {
            return bad("ransac_iterations must be ≥ 1");
        }
        if self.irls_max_iters < 1 {
            return bad("irls_max_iters must be ≥ 1");
        }
        if !(self.ransac_inlier_threshold > 0.0) {
            return bad("ransac_inlier_threshold must be > 0");
        }
        if !(self.irls_tolerance > 0.0) {
            return bad("irls_tolerance must be > 0");
        }
        if !(self.min_weight_mass > 0.0) {
            return bad("min_weight_mass must be > 0");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub f: FundamentalMatrix,
    pub inlier_mask: Vec<bool>,
    /// Algebraic residual norm (linear), inlier count (RANSAC) or final
    /// SED sum (IRLS).
    pub score: f64,
    pub iterations_used: usize,
}

impl EstimationResult {
    pub fn inlier_count(&self) -> usize {
        self.inlier_mask.iter().filter(|&&b| b).count()
    }
}

/// Estimator selector used by the CLI and the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    EightPoint,
    WeightedEightPoint,
    Ransac,
    Irls,
    GroundTruth,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::EightPoint,
        Method::WeightedEightPoint,
        Method::Ransac,
        Method::Irls,
        Method::GroundTruth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::EightPoint => "8point",
            Method::WeightedEightPoint => "weighted8point",
            Method::Ransac => "ransac",
            Method::Irls => "irls",
            Method::GroundTruth => "groundtruth",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
                format!("unknown method '{s}' (expected one of {})", known.join(", "))
            })
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
