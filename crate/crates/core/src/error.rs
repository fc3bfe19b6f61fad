use thiserror::Error;

/// Errors raised by the geometry, estimation, evaluation and scene-generation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EpiError {
    #[error("translation norm {0:e} is too small, F is undefined for a pure rotation")]
    ZeroTranslation(f64),
    #[error("intrinsics matrix is not invertible")]
    SingularIntrinsics,
    #[error("rotation is not orthonormal with determinant +1 (deviation {0:e})")]
    InvalidRotation(f64),
    #[error("degenerate epipolar line{}", index_suffix(*.0))]
    DegenerateLine(Option<usize>),
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("matrix is not rank 2 (sigma_min / sigma_max = {0:e})")]
    NotRankTwo(f64),
    #[error("first two columns are linearly dependent")]
    DependentColumns,
    #[error("need at least {needed} correspondences, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("degenerate configuration, the linear solution is not unique")]
    DegenerateConfiguration,
    #[error("total weight {mass} is below the required {required}")]
    InsufficientWeightMass { mass: f64, required: f64 },
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid weight {value} at index {index}")]
    InvalidWeight { index: usize, value: f64 },
    #[error("every sampled minimal set was degenerate")]
    NoValidSample,
    #[error("all reweighting factors clamped at a bound")]
    DivergedToDegenerate,
    #[error("only {got} of {needed} points visible after {rounds} sampling rounds")]
    InsufficientVisiblePoints {
        got: usize,
        needed: usize,
        rounds: usize,
    },
    #[error("correspondences carry no ground-truth inlier flags")]
    MissingFlags,
    #[error("no correspondence passes the ground-truth inlier threshold")]
    NoInliers,
    #[error("correspondence set is empty")]
    EmptySet,
    #[error("every one of {0} pairs was excluded by the through-point rule")]
    AllAngleOutliers(usize),
    #[error("input matrix is not in canonical form")]
    NonCanonicalInput,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

fn index_suffix(index: Option<usize>) -> String {
    match index {
        Some(i) => format!(" at pair {i}"),
        None => String::new(),
    }
}

impl EpiError {
    /// Stable identifier, used on the CLI diagnostic stream and by the C ABI.
    pub fn name(&self) -> &'static str {
        match self {
            EpiError::ZeroTranslation(_) => "ZeroTranslation",
            EpiError::SingularIntrinsics => "SingularIntrinsics",
            EpiError::InvalidRotation(_) => "InvalidRotation",
            EpiError::DegenerateLine(_) => "DegenerateLine",
            EpiError::ZeroMatrix => "ZeroMatrix",
            EpiError::NotRankTwo(_) => "NotRankTwo",
            EpiError::DependentColumns => "DependentColumns",
            EpiError::TooFewPoints { .. } => "TooFewPoints",
            EpiError::DegenerateConfiguration => "DegenerateConfiguration",
            EpiError::InsufficientWeightMass { .. } => "InsufficientWeightMass",
            EpiError::LengthMismatch { .. } => "LengthMismatch",
            EpiError::InvalidWeight { .. } => "InvalidWeight",
            EpiError::NoValidSample => "NoValidSample",
            EpiError::DivergedToDegenerate => "DivergedToDegenerate",
            EpiError::InsufficientVisiblePoints { .. } => "InsufficientVisiblePoints",
            EpiError::MissingFlags => "MissingFlags",
            EpiError::NoInliers => "NoInliers",
            EpiError::EmptySet => "EmptySet",
            EpiError::AllAngleOutliers(_) => "AllAngleOutliers",
            EpiError::NonCanonicalInput => "NonCanonicalInput",
            EpiError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

pub type Result<T, E = EpiError> = std::result::Result<T, E>;
