//! Reproducible two-view scenes: rig, 3D points, projections, pixel noise
//! and injected outliers.



use crate::correspondence::{Correspondence, CorrespondenceSet};
use crate::error::{EpiError, Result};
use crate::geometry::{
    fundamental_from_cameras, symmetric_epipolar_distance, CameraIntrinsics, FundamentalMatrix,
    Mat3, RelativePose, Vec2, Vec3,
};
use crate::rng::Prng;

/// SED below which an injected outlier counts as an accidental inlier.
pub const ACCIDENTAL_INLIER_SED: f64 = 1e-2;
/// Redraws allowed per injected outlier before accepting the last draw.
pub const OUTLIER_REDRAWS: usize = 100;
/// Sampling attempts allowed per requested point.
const ATTEMPTS_PER_POINT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraRig {
    pub k1: CameraIntrinsics,
    pub k2: CameraIntrinsics,
    pub pose: RelativePose,
}

impl CameraRig {
    pub fn validate(&self) -> Result<()> {
        self.k1.validate()?;
        self.k2.validate()?;
        self.pose.validate()
    }

    pub fn fundamental(&self) -> Result<FundamentalMatrix> {
        self.validate()?;
        fundamental_from_cameras(&self.k1, &self.k2, &self.pose)
    }
}

impl Default for CameraRig {
    /// KITTI-like stereo pair: 720 px focal length, 0.54 m baseline.
    fn default() -> Self {
        let k = CameraIntrinsics::new(720.0, 720.0, 620.0, 187.0);
        Self {
            k1: k,
            k2: k,
            pose: RelativePose {
                rotation: Mat3::identity(),
                translation: Vec3::new(-0.54, 0.0, 0.0),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub seed: u64,
    pub num_points: usize,
    pub image_width: f64,
    pub image_height: f64,
    pub depth_range: (f64, f64),
    pub noise_sigma: f64,
    pub outlier_fraction: f64,
    pub rig: CameraRig,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            num_points: 100,
            image_width: 1242.0,
            image_height: 375.0,
            depth_range: (5.0, 50.0),
            noise_sigma: 0.0,
            outlier_fraction: 0.0,
            rig: CameraRig::default(),
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(EpiError::InvalidConfig(msg.to_string()));
        if self.num_points < 8 {
            return bad("num_points ≥ 8");
        }
        if !(self.image_width > 0.0 && self.image_height > 0.0)
            || !self.image_width.is_finite()
            || !self.image_height.is_finite()
        {
            return bad("image_width and image_height must be positive");
        }
        let (near, far) = self.depth_range;
        if !(near > 0.0) {
            return bad("depth_range near must be > 0");
        }
        if !(far > near) || !far.is_finite() {
            return bad("depth_range far must be > near");
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return bad("noise_sigma must be ≥ 0");
        }
        if !(0.0..1.0).contains(&self.outlier_fraction) {
            return bad("outlier_fraction must be in [0, 1)");
        }
        self.rig.validate()
    }

    /// Number of pairs turned into outliers.
    pub fn outlier_count(&self) -> usize {
        (self.outlier_fraction * self.num_points as f64).round() as usize
    }

    fn in_image(&self, p: Vec2) -> bool {
        p.x >= 0.0 && p.x < self.image_width && p.y >= 0.0 && p.y < self.image_height
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub set: CorrespondenceSet,
    pub f_gt: FundamentalMatrix,
    /// Noise-free projections, index-aligned with `set`.
    pub clean: Vec<(Vec2, Vec2)>,
}

/// Generates a scene; a pure function of `cfg`.
///
/// Points are drawn by picking a pixel uniformly in image 1 and a depth
/// uniformly in `depth_range`, then kept only if they project in front of
/// camera 2 and inside image 2. Gaussian noise is added to both
/// projections, after which `round(outlier_fraction * num_points)` pairs
/// have `m'` replaced by a uniform in-image point. Draw order: points,
/// noise (m.x, m.y, m'.x, m'.y per pair), outlier indices, outlier positions.
pub fn generate_scene(cfg: &SceneConfig) -> Result<Scene> {
    cfg.validate()?;
    let f_gt = cfg.rig.fundamental()?;
    let mut rng = Prng::new(cfg.seed);
    let k1_inv = cfg.rig.k1.inverse()?;
    let (near, far) = cfg.depth_range;

    let max_attempts = ATTEMPTS_PER_POINT * cfg.num_points;
    let mut clean = Vec::with_capacity(cfg.num_points);
    let mut attempts = 0;
    while clean.len() < cfg.num_points && attempts < max_attempts {
        attempts += 1;
        let m = Vec2::new(
            rng.uniform_in(0.0, cfg.image_width),
            rng.uniform_in(0.0, cfg.image_height),
        );
        let depth = rng.uniform_in(near, far);
        let x1 = k1_inv * m.lift().coords() * depth;
        let x2 = cfg.rig.pose.rotation * x1 + cfg.rig.pose.translation;
        if x2.z <= 0.0 {
            continue;
        }
        let m_prime = cfg.rig.k2.project(&x2);
        if cfg.in_image(m_prime) {
            clean.push((m, m_prime));
        }
    }
    if clean.len() < cfg.num_points {
        return Err(EpiError::InsufficientVisiblePoints {
            got: clean.len(),
            needed: cfg.num_points,
            rounds: attempts,
        });
    }

    let sigma = cfg.noise_sigma;
    let mut pairs: Vec<Correspondence> = clean
        .iter()
        .map(|&(m, mp)| {
            let noisy_m = Vec2::new(m.x + sigma * rng.normal(), m.y + sigma * rng.normal());
            let noisy_mp = Vec2::new(mp.x + sigma * rng.normal(), mp.y + sigma * rng.normal());
            Correspondence::flagged(noisy_m, noisy_mp, true)
        })
        .collect();

    let outliers = rng.sample_indices(pairs.len(), cfg.outlier_count());
    for &i in &outliers {
        let pair = &mut pairs[i];
        for _ in 0..OUTLIER_REDRAWS {
            pair.m_prime = Vec2::new(
                rng.uniform_in(0.0, cfg.image_width),
                rng.uniform_in(0.0, cfg.image_height),
            );
            match symmetric_epipolar_distance(&f_gt, pair.m, pair.m_prime) {
                Ok(d) if d < ACCIDENTAL_INLIER_SED => continue,
                _ => break,
            }
        }
        pair.is_true_inlier = Some(false);
    }

    Ok(Scene {
        set: CorrespondenceSet::new(pairs),
        f_gt,
        clean,
    })
}

/// Indicator weights from ground-truth flags: 1 for inliers, 0 for outliers.
pub fn oracle_weights(set: &CorrespondenceSet) -> Result<Vec<f64>> {
    set.iter()
        .map(|p| match p.is_true_inlier {
            Some(true) => Ok(1.0),
            Some(false) => Ok(0.0),
            None => Err(EpiError::MissingFlags),
        })
        .collect()
}
