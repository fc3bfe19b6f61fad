//! Two-view epipolar geometry primitives.
//!
//! Points are pixel coordinates lifted to homogeneous form with `w = 1`.
//! A [`FundamentalMatrix`] is always held in canonical form: rank 2, the
//! entry of largest magnitude equal to `+1` (ties resolved by the first
//! entry in row-major order).

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{EpiError, Result};

pub type Mat3 = Matrix3<f64>;
pub type Vec3 = Vector3<f64>;

/// Largest admissible `sigma_min / sigma_max` for a fundamental matrix.
pub const RANK_TOLERANCE: f64 = 1e-9;
/// Entries at or below this magnitude count as zero.
pub const ZERO_TOLERANCE: f64 = 1e-15;
/// Matrices built rank 2 by algebra are only re-projected when round-off
/// pushes the singular value ratio above this.
const RANK_GUARD: f64 = 1e-12;
const ROTATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn lift(self) -> HomPoint {
        HomPoint(Vec3::new(self.x, self.y, 1.0))
    }
}

/// Homogeneous image point; never the zero vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomPoint(Vec3);

impl HomPoint {
    pub fn new(h: Vec3) -> Option<Self> {
        (h != Vec3::zeros()).then_some(Self(h))
    }

    pub fn coords(&self) -> &Vec3 {
        &self.0
    }

    /// Inhomogeneous image, `None` for points at infinity.
    pub fn project(&self) -> Option<Vec2> {
        let w = self.0.z;
        (w.abs() > ZERO_TOLERANCE).then(|| Vec2::new(self.0.x / w, self.0.y / w))
    }
}

/// A line `a x + b y + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpipolarLine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl EpipolarLine {
    fn from_vec(v: Vec3) -> Result<Self> {
        if v.x.abs() <= ZERO_TOLERANCE && v.y.abs() <= ZERO_TOLERANCE {
            return Err(EpiError::DegenerateLine(None));
        }
        Ok(Self {
            a: v.x,
            b: v.y,
            c: v.z,
        })
    }

    pub fn gradient_norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    /// Signed perpendicular distance from `p` to the line, in pixels.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        (self.a * p.x + self.b * p.y + self.c) / self.gradient_norm_sq().sqrt()
    }

    /// Rescaled so that `a^2 + b^2 = 1`.
    pub fn normalized(&self) -> Self {
        let n = self.gradient_norm_sq().sqrt();
        Self {
            a: self.a / n,
            b: self.b / n,
            c: self.c / n,
        }
    }
}

/// Pinhole intrinsics `[[fx, skew, cx], [0, fy, cy], [0, 0, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    #[serde(default)]
    pub skew: f64,
}

impl CameraIntrinsics {
    pub const fn new(fx: f64, fy: f64, cx: f64, cy: f64) -> Self {
        Self {
            fx,
            fy,
            cx,
            cy,
            skew: 0.0,
        }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 1.0, 0.0, 0.0)
    }

    pub fn matrix(&self) -> Mat3 {
        Mat3::new(
            self.fx, self.skew, self.cx, //
            0.0, self.fy, self.cy, //
            0.0, 0.0, 1.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.fx, self.fy, self.cx, self.cy, self.skew]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.fx <= 0.0 || self.fy <= 0.0 {
            return Err(EpiError::SingularIntrinsics);
        }
        Ok(())
    }

    pub fn inverse(&self) -> Result<Mat3> {
        self.validate()?;
        self.matrix()
            .try_inverse()
            .ok_or(EpiError::SingularIntrinsics)
    }

    /// Pixel projection of a point given in this camera's frame.
    pub fn project(&self, p: &Vec3) -> Vec2 {
        let h = self.matrix() * p;
        Vec2::new(h.x / h.z, h.y / h.z)
    }
}

/// Maps camera-1 coordinates to camera-2 coordinates: `x2 = R x1 + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativePose {
    pub rotation: Mat3,
    pub translation: Vec3,
}

impl RelativePose {
    pub fn new(rotation: Mat3, translation: Vec3) -> Result<Self> {
        let pose = Self {
            rotation,
            translation,
        };
        pose.validate()?;
        Ok(pose)
    }

    /// Rotation `Rz(yaw) * Ry(pitch) * Rx(roll)`, angles in degrees.
    pub fn from_euler_deg(roll: f64, pitch: f64, yaw: f64, translation: Vec3) -> Self {
        let r = nalgebra::Rotation3::from_euler_angles(
            roll.to_radians(),
            pitch.to_radians(),
            yaw.to_radians(),
        );
        Self {
            rotation: *r.matrix(),
            translation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dev = rotation_deviation(&self.rotation);
        if !(dev <= ROTATION_TOLERANCE) {
            return Err(EpiError::InvalidRotation(dev));
        }
        Ok(())
    }
}

/// Max of `|R^T R - I|` entries and `|det R - 1|`; NaN-propagating.
pub fn rotation_deviation(r: &Mat3) -> f64 {
    let ortho = (r.transpose() * r - Mat3::identity()).abs().max();
    let det = (r.determinant() - 1.0).abs();
    if ortho.is_nan() || det.is_nan() {
        return f64::NAN;
    }
    ortho.max(det)
}

/// Cross-product matrix: `cross_matrix(t) * v == t.cross(v)`.
pub fn cross_matrix(t: &Vec3) -> Mat3 {
    Mat3::new(
        0.0, -t.z, t.y, //
        t.z, 0.0, -t.x, //
        -t.y, t.x, 0.0,
    )
}

/// `sigma_min / sigma_max`; 0 for the zero matrix.
pub fn singular_ratio(m: &Mat3) -> f64 {
    let sv = m.svd(false, false).singular_values;
    let max = sv.max();
    if max == 0.0 {
        return 0.0;
    }
    sv.min() / max
}

/// Rank-2 fundamental matrix in canonical form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalMatrix(Mat3);

impl FundamentalMatrix {
    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn into_inner(self) -> Mat3 {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> [f64; 9] {
        row_major(&self.0)
    }

    pub fn transpose(&self) -> Self {
        // Transposition preserves rank and the entry multiset, but can move
        // the governing tie-break entry, so re-canonicalize.
        Self(canonical_scale(&self.0.transpose()).expect("nonzero by invariant"))
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm()
    }

    /// Frobenius distance up to sign. Canonical forms of nearly equal
    /// matrices disagree in sign when their two largest entries tie in
    /// magnitude, as for any rectified stereo pair.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm().min((self.0 + other.0).norm())
    }
}

impl std::ops::Deref for FundamentalMatrix {
    type Target = Mat3;

    fn deref(&self) -> &Mat3 {
        &self.0
    }
}

pub fn row_major(m: &Mat3) -> [f64; 9] {
    let mut out = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            out[3 * r + c] = m[(r, c)];
        }
    }
    out
}

pub fn from_row_major(v: &[f64; 9]) -> Mat3 {
    Mat3::from_row_slice(v)
}

/// Position of the largest-magnitude entry; the first in row-major order wins ties.
fn pivot(m: &Mat3) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_abs = -1.0;
    for r in 0..3 {
        for c in 0..3 {
            let a = m[(r, c)].abs();
            if a > best_abs {
                best_abs = a;
                best = (r, c);
            }
        }
    }
    best
}

fn canonical_scale(m: &Mat3) -> Result<Mat3> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(EpiError::InvalidConfig("matrix has non-finite entries".into()));
    }
    let p = m[pivot(m)];
    if p.abs() <= ZERO_TOLERANCE {
        return Err(EpiError::ZeroMatrix);
    }
    // `+ 0.0` folds negative zeros so equal matrices compare equal bitwise.
    Ok(m.map(|v| v / p + 0.0))
}

/// Whether `m` satisfies every invariant of [`FundamentalMatrix`].
pub fn is_canonical(m: &Mat3) -> bool {
    m.iter().all(|v| v.is_finite()) && m[pivot(m)] == 1.0 && singular_ratio(m) <= RANK_TOLERANCE
}

/// Divides by the max-magnitude entry and fixes its sign to positive.
pub fn normalize_f(m: &Mat3) -> Result<FundamentalMatrix> {
    let c = canonical_scale(m)?;
    let ratio = singular_ratio(&c);
    if ratio > RANK_TOLERANCE {
        return Err(EpiError::NotRankTwo(ratio));
    }
    Ok(FundamentalMatrix(c))
}

/// Frobenius-nearest rank-2 matrix, canonicalized.
pub fn enforce_rank2(m: &Mat3) -> Result<FundamentalMatrix> {
    // Scale first so the SVD runs on O(1) entries.
    let scaled = canonical_scale(m)?;
    let svd = scaled.svd(true, true);
    let mut sv = svd.singular_values;
    let imin = sv.imin();
    sv[imin] = 0.0;
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let projected = u * Mat3::from_diagonal(&sv) * vt;
    let c = canonical_scale(&projected)?;
    let ratio = singular_ratio(&c);
    if ratio > RANK_TOLERANCE {
        return Err(EpiError::NotRankTwo(ratio));
    }
    Ok(FundamentalMatrix(c))
}

/// Canonicalizes `m`, re-projecting to rank 2 only if round-off demands it.
pub(crate) fn canonical_rank2(m: &Mat3) -> Result<FundamentalMatrix> {
    let c = canonical_scale(m)?;
    if singular_ratio(&c) <= RANK_GUARD {
        Ok(FundamentalMatrix(c))
    } else {
        enforce_rank2(&c)
    }
}

/// `F = K2^{-T} [t]_x R K1^{-1}`.
pub fn fundamental_from_cameras(
    k1: &CameraIntrinsics,
    k2: &CameraIntrinsics,
    pose: &RelativePose,
) -> Result<FundamentalMatrix> {
    let tn = pose.translation.norm();
    if !(tn > 1e-12) {
        return Err(EpiError::ZeroTranslation(tn));
    }
    let k1_inv = k1.inverse()?;
    let k2_inv = k2.inverse()?;
    let m = k2_inv.transpose() * cross_matrix(&pose.translation) * pose.rotation * k1_inv;
    canonical_rank2(&m)
}

/// Line `F m` in the second image.
pub fn epipolar_line(f: &Mat3, m: Vec2) -> Result<EpipolarLine> {
    EpipolarLine::from_vec(f * m.lift().0)
}

/// Line `F^T m'` in the first image.
pub fn epipolar_line_first(f: &Mat3, m_prime: Vec2) -> Result<EpipolarLine> {
    EpipolarLine::from_vec(f.tr_mul(&m_prime.lift().0))
}

/// Signed algebraic residual `m'^T F m`.
pub fn epipolar_residual(f: &Mat3, m: Vec2, m_prime: Vec2) -> f64 {
    m_prime.lift().0.dot(&(f * m.lift().0))
}

/// Which line the second denominator of the symmetric epipolar distance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SedVariant {
    /// `F^T m'`, the epipolar line of `m'` in the first image.
    #[default]
    Transposed,
    /// `F m'` read literally.
    Literal,
}

/// `(1/|(Fm)_12|^2 + 1/|(F^T m')_12|^2) (m'^T F m)^2`.
pub fn symmetric_epipolar_distance(f: &Mat3, m: Vec2, m_prime: Vec2) -> Result<f64> {
    symmetric_epipolar_distance_with(f, m, m_prime, SedVariant::Transposed)
}

pub fn symmetric_epipolar_distance_with(
    f: &Mat3,
    m: Vec2,
    m_prime: Vec2,
    variant: SedVariant,
) -> Result<f64> {
    let l2 = epipolar_line(f, m)?;
    let l1 = match variant {
        SedVariant::Transposed => epipolar_line_first(f, m_prime)?,
        SedVariant::Literal => epipolar_line(f, m_prime)?,
    };
    let r = epipolar_residual(f, m, m_prime);
    Ok((1.0 / l2.gradient_norm_sq() + 1.0 / l1.gradient_norm_sq()) * r * r)
}

/// Rank-2 parameterization: columns `[f1 | f2 | alpha f1 + beta f2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTwoParams {
    pub f1: Vec3,
    pub f2: Vec3,
    pub alpha: f64,
    pub beta: f64,
}

fn independent(f1: &Vec3, f2: &Vec3) -> bool {
    let scale = f1.norm() * f2.norm();
    scale > 0.0 && f1.cross(f2).norm() > 1e-12 * scale
}

impl RankTwoParams {
    /// Least-squares fit of the third column on the first two.
    pub fn from_matrix(m: &Mat3) -> Result<Self> {
        let f1: Vec3 = m.column(0).into();
        let f2: Vec3 = m.column(1).into();
        let f3: Vec3 = m.column(2).into();
        if !independent(&f1, &f2) {
            return Err(EpiError::DependentColumns);
        }
        let (a11, a12, a22) = (f1.dot(&f1), f1.dot(&f2), f2.dot(&f2));
        let det = a11 * a22 - a12 * a12;
        let solve = |r: &Vec3| {
            let (b1, b2) = (f1.dot(r), f2.dot(r));
            ((b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det)
        };
        let (mut alpha, mut beta) = solve(&f3);
        // One refinement step recovers the accuracy the normal equations
        // lose when f1 and f2 are nearly parallel.
        let (da, db) = solve(&(f3 - f1 * alpha - f2 * beta));
        alpha += da;
        beta += db;
        Ok(Self {
            f1,
            f2,
            alpha,
            beta,
        })
    }

    pub fn third_column(&self) -> Vec3 {
        self.f1 * self.alpha + self.f2 * self.beta
    }

    pub fn matrix(&self) -> Mat3 {
        Mat3::from_columns(&[self.f1, self.f2, self.third_column()])
    }
}

/// Assembles `[f1 | f2 | alpha f1 + beta f2]` and canonicalizes.
pub fn reconstruct_rank2(p: &RankTwoParams) -> Result<FundamentalMatrix> {
    if !independent(&p.f1, &p.f2) {
        return Err(EpiError::DependentColumns);
    }
    canonical_rank2(&p.matrix())
}
