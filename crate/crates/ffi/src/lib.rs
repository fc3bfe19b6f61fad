//! C ABI over the `epipolar` crate.
//!
//! Matrices cross the boundary as 9 doubles in row-major order and points as
//! `(x, y)` pairs. Correspondence sets and estimation results are opaque
//! handles owned by the caller and released with their `_free` function.
//! Every entry point returns an [`EpiStatus`]; on failure a message is kept
//! per thread and can be read with [`epi_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use epipolar::cli::run_method;
use epipolar::geometry::{from_row_major, row_major, symmetric_epipolar_distance};
use epipolar::{
    enforce_rank2, evaluate, fundamental_from_cameras, generate_scene, loss_total, normalize_f,
    oracle_weights, CameraIntrinsics, CameraRig, Correspondence, CorrespondenceSet, EpiError,
    EstimationResult, EstimatorConfig, LossConfig, Method, MetricsConfig, RelativePose,
    SceneConfig, Vec2, Vec3,
};

/// Result code of every call. Values are stable.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Panic = 3,
    ZeroTranslation = 10,
    SingularIntrinsics = 11,
    InvalidRotation = 12,
    DegenerateLine = 13,
    ZeroMatrix = 14,
    NotRankTwo = 15,
    DependentColumns = 16,
    TooFewPoints = 17,
    DegenerateConfiguration = 18,
    InsufficientWeightMass = 19,
    LengthMismatch = 20,
    InvalidWeight = 21,
    NoValidSample = 22,
    DivergedToDegenerate = 23,
    InsufficientVisiblePoints = 24,
    MissingFlags = 25,
    NoInliers = 26,
    EmptySet = 27,
    AllAngleOutliers = 28,
    NonCanonicalInput = 29,
    InvalidConfig = 30,
}

impl From<&EpiError> for EpiStatus {
    fn from(e: &EpiError) -> Self {
        match e {
            EpiError::ZeroTranslation(_) => Self::ZeroTranslation,
            EpiError::SingularIntrinsics => Self::SingularIntrinsics,
            EpiError::InvalidRotation(_) => Self::InvalidRotation,
            EpiError::DegenerateLine(_) => Self::DegenerateLine,
            EpiError::ZeroMatrix => Self::ZeroMatrix,
            EpiError::NotRankTwo(_) => Self::NotRankTwo,
            EpiError::DependentColumns => Self::DependentColumns,
            EpiError::TooFewPoints { .. } => Self::TooFewPoints,
            EpiError::DegenerateConfiguration => Self::DegenerateConfiguration,
            EpiError::InsufficientWeightMass { .. } => Self::InsufficientWeightMass,
            EpiError::LengthMismatch { .. } => Self::LengthMismatch,
            EpiError::InvalidWeight { .. } => Self::InvalidWeight,
            EpiError::NoValidSample => Self::NoValidSample,
            EpiError::DivergedToDegenerate => Self::DivergedToDegenerate,
            EpiError::InsufficientVisiblePoints { .. } => Self::InsufficientVisiblePoints,
            EpiError::MissingFlags => Self::MissingFlags,
            EpiError::NoInliers => Self::NoInliers,
            EpiError::EmptySet => Self::EmptySet,
            EpiError::AllAngleOutliers(_) => Self::AllAngleOutliers,
            EpiError::NonCanonicalInput => Self::NonCanonicalInput,
            EpiError::InvalidConfig(_) => Self::InvalidConfig,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(EpiStatus, String);

impl From<EpiError> for Failure {
    fn from(e: EpiError) -> Self {
        Failure((&e).into(), format!("{}: {e}", e.name()))
    }
}

fn null(what: &str) -> Failure {
    Failure(EpiStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(EpiStatus::InvalidArgument, msg.into())
}

/// Runs `f`, records any failure or panic, and returns its status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EpiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EpiStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            EpiStatus::Panic
        }
    }
}

unsafe fn read<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn matrix(p: *const f64, what: &str) -> Result<epipolar::Mat3, Failure> {
    let v = read(p.cast::<[f64; 9]>(), what)?;
    Ok(from_row_major(v))
}

unsafe fn write_matrix(p: *mut f64, m: &epipolar::Mat3) -> Result<(), Failure> {
    *out(p.cast::<[f64; 9]>(), "output matrix")? = row_major(m);
    Ok(())
}

/// Message of the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn epi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn epi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EpiIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub skew: f64,
}

impl From<EpiIntrinsics> for CameraIntrinsics {
    fn from(k: EpiIntrinsics) -> Self {
        CameraIntrinsics {
            fx: k.fx,
            fy: k.fy,
            cx: k.cx,
            cy: k.cy,
            skew: k.skew,
        }
    }
}

impl From<CameraIntrinsics> for EpiIntrinsics {
    fn from(k: CameraIntrinsics) -> Self {
        EpiIntrinsics {
            fx: k.fx,
            fy: k.fy,
            cx: k.cx,
            cy: k.cy,
            skew: k.skew,
        }
    }
}

/// Two-camera rig; `rotation` is row-major and maps camera-1 to camera-2
/// coordinates together with `translation`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EpiRig {
    pub k1: EpiIntrinsics,
    pub k2: EpiIntrinsics,
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
}

impl EpiRig {
    fn to_rig(self) -> Result<CameraRig, Failure> {
        let pose = RelativePose::new(from_row_major(&self.rotation), Vec3::from(self.translation))?;
        Ok(CameraRig {
            k1: self.k1.into(),
            k2: self.k2.into(),
            pose,
        })
    }
}

/// Ground-truth canonical F of a rig.
///
/// # Safety
/// `rig` must point to a valid `EpiRig`; `f_out` to 9 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn epi_fundamental_from_rig(rig: *const EpiRig, f_out: *mut f64) -> EpiStatus {
    guard(|| {
        let rig = read(rig, "rig")?.to_rig()?;
        let f = fundamental_from_cameras(&rig.k1, &rig.k2, &rig.pose)?;
        write_matrix(f_out, f.matrix())
    })
}

/// Canonical form of a rank-2 matrix.
///
/// # Safety
/// `f_in` must point to 9 readable doubles and `f_out` to 9 writable ones.
#[no_mangle]
pub unsafe extern "C" fn epi_normalize_f(f_in: *const f64, f_out: *mut f64) -> EpiStatus {
    guard(|| {
        let f = normalize_f(&matrix(f_in, "f_in")?)?;
        write_matrix(f_out, f.matrix())
    })
}

/// Nearest rank-2 matrix in Frobenius norm, canonicalized.
///
/// # Safety
/// As for [`epi_normalize_f`].
#[no_mangle]
pub unsafe extern "C" fn epi_enforce_rank2(f_in: *const f64, f_out: *mut f64) -> EpiStatus {
    guard(|| {
        let f = enforce_rank2(&matrix(f_in, "f_in")?)?;
        write_matrix(f_out, f.matrix())
    })
}

/// Symmetric epipolar distance of one pair.
///
/// # Safety
/// `f` points to 9 doubles, `m` and `m_prime` to 2 each, `out` to one.
#[no_mangle]
pub unsafe extern "C" fn epi_symmetric_epipolar_distance(
    f: *const f64,
    m: *const f64,
    m_prime: *const f64,
    out_distance: *mut f64,
) -> EpiStatus {
    guard(|| {
        let f = matrix(f, "f")?;
        let m = read(m.cast::<[f64; 2]>(), "m")?;
        let mp = read(m_prime.cast::<[f64; 2]>(), "m_prime")?;
        let d = symmetric_epipolar_distance(&f, Vec2::new(m[0], m[1]), Vec2::new(mp[0], mp[1]))?;
        *out(out_distance, "out_distance")? = d;
        Ok(())
    })
}

/// Opaque correspondence set.
pub struct EpiCorrespondenceSet(CorrespondenceSet);

/// Builds a set from `n` rows of `x y x' y'` in `xy` (4n doubles).
/// `flags` may be null; otherwise it holds `n` values: 1 inlier, 0 outlier,
/// anything else unknown.
///
/// # Safety
/// `xy` must hold `4 * n` doubles, `flags` (if non-null) `n` bytes, and
/// `out_set` must be writable. Free the result with [`epi_set_free`].
#[no_mangle]
pub unsafe extern "C" fn epi_set_new(
    xy: *const f64,
    flags: *const i8,
    n: usize,
    out_set: *mut *mut EpiCorrespondenceSet,
) -> EpiStatus {
    guard(|| {
        let out_set = out(out_set, "out_set")?;
        let len = n.checked_mul(4).ok_or_else(|| invalid("n is too large"))?;
        let xy = slice(xy, len, "xy")?;
        let flags = if flags.is_null() { None } else { Some(slice(flags, n, "flags")?) };
        let pairs = xy
            .chunks_exact(4)
            .enumerate()
            .map(|(i, r)| Correspondence {
                m: Vec2::new(r[0], r[1]),
                m_prime: Vec2::new(r[2], r[3]),
                is_true_inlier: flags.and_then(|f| match f[i] {
                    1 => Some(true),
                    0 => Some(false),
                    _ => None,
                }),
            })
            .collect();
        *out_set = Box::into_raw(Box::new(EpiCorrespondenceSet(CorrespondenceSet::new(pairs))));
        Ok(())
    })
}

/// Releases a set; null is ignored.
///
/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn epi_set_free(set: *mut EpiCorrespondenceSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of pairs, or 0 for null.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn epi_set_len(set: *const EpiCorrespondenceSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the pairs as `x y x' y'` rows into `xy` (capacity `4 * len`).
///
/// # Safety
/// `set` must be a live handle and `xy` must hold `4 * len` doubles.
#[no_mangle]
pub unsafe extern "C" fn epi_set_copy_points(
    set: *const EpiCorrespondenceSet,
    xy: *mut f64,
    len: usize,
) -> EpiStatus {
    guard(|| {
        let set = &read(set, "set")?.0;
        if len != set.len() {
            return Err(invalid(format!("len is {len}, set has {} pairs", set.len())));
        }
        if len == 0 {
            return Ok(());
        }
        if xy.is_null() {
            return Err(null("xy"));
        }
        let dst = std::slice::from_raw_parts_mut(xy, 4 * len);
        for (row, p) in dst.chunks_exact_mut(4).zip(set.iter()) {
            row.copy_from_slice(&[p.m.x, p.m.y, p.m_prime.x, p.m_prime.y]);
        }
        Ok(())
    })
}

/// Oracle weights (1 on flagged inliers, 0 elsewhere) into `weights`.
///
/// # Safety
/// `set` must be a live handle and `weights` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn epi_oracle_weights(
    set: *const EpiCorrespondenceSet,
    weights: *mut f64,
    len: usize,
) -> EpiStatus {
    guard(|| {
        let set = &read(set, "set")?.0;
        let w = oracle_weights(set)?;
        if len != w.len() {
            return Err(invalid(format!("len is {len}, set has {} pairs", w.len())));
        }
        if len > 0 {
            if weights.is_null() {
                return Err(null("weights"));
            }
            std::slice::from_raw_parts_mut(weights, len).copy_from_slice(&w);
        }
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EpiSceneParams {
    pub seed: u64,
    pub num_points: usize,
    pub image_width: f64,
    pub image_height: f64,
    pub depth_near: f64,
    pub depth_far: f64,
    pub noise_sigma: f64,
    pub outlier_fraction: f64,
    pub rig: EpiRig,
}

/// Fills `params` with the library defaults.
///
/// # Safety
/// `params` must be writable.
#[no_mangle]
pub unsafe extern "C" fn epi_scene_params_default(params: *mut EpiSceneParams) -> EpiStatus {
    guard(|| {
        let d = SceneConfig::default();
        let t = d.rig.pose.translation;
        *out(params, "params")? = EpiSceneParams {
            seed: d.seed,
            num_points: d.num_points,
            image_width: d.image_width,
            image_height: d.image_height,
            depth_near: d.depth_range.0,
            depth_far: d.depth_range.1,
            noise_sigma: d.noise_sigma,
            outlier_fraction: d.outlier_fraction,
            rig: EpiRig {
                k1: d.rig.k1.into(),
                k2: d.rig.k2.into(),
                rotation: row_major(&d.rig.pose.rotation),
                translation: [t.x, t.y, t.z],
            },
        };
        Ok(())
    })
}

/// Generates a synthetic scene; writes its set handle and canonical F_GT.
///
/// # Safety
/// `params` must be valid, `out_set` writable and `f_gt_out` must hold 9
/// doubles. Free the set with [`epi_set_free`].
#[no_mangle]
pub unsafe extern "C" fn epi_generate_scene(
    params: *const EpiSceneParams,
    out_set: *mut *mut EpiCorrespondenceSet,
    f_gt_out: *mut f64,
) -> EpiStatus {
    guard(|| {
        let p = read(params, "params")?;
        let out_set = out(out_set, "out_set")?;
        let cfg = SceneConfig {
            seed: p.seed,
            num_points: p.num_points,
            image_width: p.image_width,
            image_height: p.image_height,
            depth_range: (p.depth_near, p.depth_far),
            noise_sigma: p.noise_sigma,
            outlier_fraction: p.outlier_fraction,
            rig: p.rig.to_rig()?,
        };
        let scene = generate_scene(&cfg)?;
        write_matrix(f_gt_out, scene.f_gt.matrix())?;
        *out_set = Box::into_raw(Box::new(EpiCorrespondenceSet(scene.set)));
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpiMethod {
    EightPoint = 0,
    WeightedEightPoint = 1,
    Ransac = 2,
    Irls = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EpiEstimatorParams {
    /// Non-zero enables similarity preconditioning.
    pub hartley_normalization: i32,
    pub ransac_iterations: usize,
    pub ransac_inlier_threshold: f64,
    pub ransac_seed: u64,
    pub irls_max_iters: usize,
    pub irls_tolerance: f64,
    pub min_weight_mass: f64,
}

impl From<&EpiEstimatorParams> for EstimatorConfig {
    fn from(p: &EpiEstimatorParams) -> Self {
        EstimatorConfig {
            hartley_normalization: p.hartley_normalization != 0,
            ransac_iterations: p.ransac_iterations,
            ransac_inlier_threshold: p.ransac_inlier_threshold,
            ransac_seed: p.ransac_seed,
            irls_max_iters: p.irls_max_iters,
            irls_tolerance: p.irls_tolerance,
            min_weight_mass: p.min_weight_mass,
        }
    }
}

/// Fills `params` with the library defaults.
///
/// # Safety
/// `params` must be writable.
#[no_mangle]
pub unsafe extern "C" fn epi_estimator_params_default(params: *mut EpiEstimatorParams) -> EpiStatus {
    guard(|| {
        let d = EstimatorConfig::default();
        *out(params, "params")? = EpiEstimatorParams {
            hartley_normalization: i32::from(d.hartley_normalization),
            ransac_iterations: d.ransac_iterations,
            ransac_inlier_threshold: d.ransac_inlier_threshold,
            ransac_seed: d.ransac_seed,
            irls_max_iters: d.irls_max_iters,
            irls_tolerance: d.irls_tolerance,
            min_weight_mass: d.min_weight_mass,
        };
        Ok(())
    })
}

/// Opaque estimation result.
pub struct EpiEstimate(EstimationResult);

/// Estimates F. `weights` (length `n_weights`) is only read by the weighted
/// method; null there means oracle weights from the set's flags. IRLS starts
/// from the 8-point estimate. `params` may be null for defaults.
///
/// # Safety
/// `set` must be a live handle, `weights` valid for `n_weights` doubles when
/// non-null, `params` null or valid, and `out_estimate` writable. Free the
/// result with [`epi_estimate_free`].
#[no_mangle]
pub unsafe extern "C" fn epi_estimate(
    set: *const EpiCorrespondenceSet,
    method: EpiMethod,
    weights: *const f64,
    n_weights: usize,
    params: *const EpiEstimatorParams,
    out_estimate: *mut *mut EpiEstimate,
) -> EpiStatus {
    guard(|| {
        let set = &read(set, "set")?.0;
        let out_estimate = out(out_estimate, "out_estimate")?;
        let cfg = params.as_ref().map_or_else(EstimatorConfig::default, EstimatorConfig::from);
        let method = match method {
            EpiMethod::EightPoint => Method::EightPoint,
            EpiMethod::WeightedEightPoint => Method::WeightedEightPoint,
            EpiMethod::Ransac => Method::Ransac,
            EpiMethod::Irls => Method::Irls,
        };
        let w = if weights.is_null() { None } else { Some(slice(weights, n_weights, "weights")?) };
        if w.is_some() && method != Method::WeightedEightPoint {
            return Err(invalid("weights only apply to the weighted 8-point method"));
        }
        let result = run_method(method, set, None, w, &cfg)?;
        *out_estimate = Box::into_raw(Box::new(EpiEstimate(result)));
        Ok(())
    })
}

/// Releases an estimate; null is ignored.
///
/// # Safety
/// `estimate` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn epi_estimate_free(estimate: *mut EpiEstimate) {
    if !estimate.is_null() {
        drop(Box::from_raw(estimate));
    }
}

/// Canonical F of an estimate.
///
/// # Safety
/// `estimate` must be a live handle and `f_out` must hold 9 doubles.
#[no_mangle]
pub unsafe extern "C" fn epi_estimate_f(estimate: *const EpiEstimate, f_out: *mut f64) -> EpiStatus {
    guard(|| write_matrix(f_out, read(estimate, "estimate")?.0.f.matrix()))
}

/// Score, inlier count and iterations of an estimate. Any output may be null.
///
/// # Safety
/// `estimate` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn epi_estimate_summary(
    estimate: *const EpiEstimate,
    score: *mut f64,
    inlier_count: *mut usize,
    iterations_used: *mut usize,
) -> EpiStatus {
    guard(|| {
        let r = &read(estimate, "estimate")?.0;
        if let Some(s) = score.as_mut() {
            *s = r.score;
        }
        if let Some(c) = inlier_count.as_mut() {
            *c = r.inlier_count();
        }
        if let Some(i) = iterations_used.as_mut() {
            *i = r.iterations_used;
        }
        Ok(())
    })
}

/// Inlier mask as 0/1 bytes; `len` must equal the set size.
///
/// # Safety
/// `estimate` must be a live handle and `mask` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn epi_estimate_inlier_mask(
    estimate: *const EpiEstimate,
    mask: *mut u8,
    len: usize,
) -> EpiStatus {
    guard(|| {
        let r = &read(estimate, "estimate")?.0;
        if len != r.inlier_mask.len() {
            return Err(invalid(format!("len is {len}, mask has {}", r.inlier_mask.len())));
        }
        if len > 0 {
            if mask.is_null() {
                return Err(null("mask"));
            }
            let dst = std::slice::from_raw_parts_mut(mask, len);
            for (d, &b) in dst.iter_mut().zip(&r.inlier_mask) {
                *d = u8::from(b);
            }
        }
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EpiMetricsParams {
    pub inlier_threshold: f64,
    pub sample_size: usize,
    pub angle_point_tolerance: f64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EpiMetrics {
    pub m_ec: f64,
    pub m_ed: f64,
    /// 90 when every pair was an angle outlier.
    pub m_ea_degrees: f64,
    pub n_used: usize,
    pub n_angle_inliers: usize,
    pub n_angle_outliers: usize,
}

/// Fills `params` with the library defaults.
///
/// # Safety
/// `params` must be writable.
#[no_mangle]
pub unsafe extern "C" fn epi_metrics_params_default(params: *mut EpiMetricsParams) -> EpiStatus {
    guard(|| {
        let d = MetricsConfig::default();
        *out(params, "params")? = EpiMetricsParams {
            inlier_threshold: d.inlier_threshold,
            sample_size: d.sample_size,
            angle_point_tolerance: d.angle_point_tolerance,
            seed: d.seed,
        };
        Ok(())
    })
}

/// Filters the set with `f_gt` and scores `f_est` on the kept pairs.
///
/// # Safety
/// `f_est`/`f_gt` must hold 9 doubles, `set` be a live handle, `params`
/// null (defaults) or valid, and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn epi_evaluate(
    f_est: *const f64,
    f_gt: *const f64,
    set: *const EpiCorrespondenceSet,
    params: *const EpiMetricsParams,
    report: *mut EpiMetrics,
) -> EpiStatus {
    guard(|| {
        let f_est = matrix(f_est, "f_est")?;
        let f_gt = matrix(f_gt, "f_gt")?;
        let set = &read(set, "set")?.0;
        let cfg = match params.as_ref() {
            None => MetricsConfig::default(),
            Some(p) => MetricsConfig {
                inlier_threshold: p.inlier_threshold,
                sample_size: p.sample_size,
                angle_point_tolerance: p.angle_point_tolerance,
                seed: p.seed,
                ..MetricsConfig::default()
            },
        };
        let r = evaluate(&f_est, &f_gt, set, &cfg)?;
        *out(report, "report")? = EpiMetrics {
            m_ec: r.m_ec,
            m_ed: r.m_ed,
            m_ea_degrees: r.m_ea_degrees,
            n_used: r.n_used,
            n_angle_inliers: r.n_angle_inliers,
            n_angle_outliers: r.n_angle_outliers,
        };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EpiLoss {
    pub l1_term: f64,
    pub l2_term: f64,
    pub le_term: f64,
    pub total: f64,
}

/// Composite loss with default coefficients. Both matrices must be canonical.
///
/// # Safety
/// `f_hat`/`f_gt` must hold 9 doubles, `set` be a live handle and `loss`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn epi_loss_total(
    f_hat: *const f64,
    f_gt: *const f64,
    set: *const EpiCorrespondenceSet,
    loss: *mut EpiLoss,
) -> EpiStatus {
    guard(|| {
        let f_hat = matrix(f_hat, "f_hat")?;
        let f_gt = matrix(f_gt, "f_gt")?;
        let set = &read(set, "set")?.0;
        let b = loss_total(&f_hat, &f_gt, set, &LossConfig::default())?;
        *out(loss, "loss")? = EpiLoss {
            l1_term: b.l1_term,
            l2_term: b.l2_term,
            le_term: b.le_term,
            total: b.total,
        };
        Ok(())
    })
}
