use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{gt_path_for, load_f, load_scene, load_settings, read, write, CliError, CliResult};
use crate::correspondence::CorrespondenceSet;
use crate::error::{EpiError, Result};
use crate::estimators::{
    eight_point, irls_sed, ransac, weighted_eight_point, EstimationResult, EstimatorConfig, Method,
};
use crate::formats::{format_f, parse_weights};
use crate::geometry::{symmetric_epipolar_distance, FundamentalMatrix};
use crate::synthetic::oracle_weights;

/// Where weighted 8-point takes its weights from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightsSource {
    /// Ground-truth inlier flags of the scene.
    Oracle,
    File(PathBuf),
}

impl FromStr for WeightsSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "oracle" => Ok(Self::Oracle),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(Self::File(PathBuf::from(p))),
                _ => Err(format!("expected 'oracle' or 'file:<path>', found '{s}'")),
            },
        }
    }
}

/// Runs one estimator.
///
/// `weights` defaults to the oracle weights for [`Method::WeightedEightPoint`];
/// [`Method::Irls`] starts from the 8-point estimate over all pairs;
/// [`Method::GroundTruth`] returns `f_gt` unchanged.
pub fn run_method(
    method: Method,
    set: &CorrespondenceSet,
    f_gt: Option<&FundamentalMatrix>,
    weights: Option<&[f64]>,
    cfg: &EstimatorConfig,
) -> Result<EstimationResult> {
    cfg.validate()?;
    match method {
        Method::EightPoint => eight_point(set, cfg),
        Method::WeightedEightPoint => match weights {
            Some(w) => weighted_eight_point(set, w, cfg),
            None => weighted_eight_point(set, &oracle_weights(set)?, cfg),
        },
        Method::Ransac => ransac(set, cfg),
        Method::Irls => {
            let init = eight_point(set, cfg)?.f;
            irls_sed(set, &init, cfg)
        }
        Method::GroundTruth => {
            let f = *f_gt.ok_or_else(|| {
                EpiError::InvalidConfig("groundtruth needs the scene's GT F file".into())
            })?;
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
                score: 0.0,
                iterations_used: 0,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct EstimateOutput {
    pub result: EstimationResult,
    pub f_path: PathBuf,
    pub result_path: PathBuf,
}

/// `<out>.result`: method, score, iterations and the inlier mask as 0/1.
pub fn format_result(method: Method, r: &EstimationResult) -> String {
    let mask: String = r
        .inlier_mask
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    format!(
        "method={method}\nscore={}\niterations_used={}\ninlier_count={}\ninlier_mask={mask}\n",
        r.score,
        r.iterations_used,
        r.inlier_count()
    )
}

/// Estimates F for a scene file and writes `out` (F file) plus `<out>.result`.
pub fn cmd_estimate(
    scene_file: &Path,
    method: &str,
    weights: Option<&WeightsSource>,
    config: Option<&Path>,
    out: &Path,
    seed: Option<u64>,
) -> CliResult<EstimateOutput> {
    let method: Method = method.parse().map_err(CliError::Usage)?;
    if weights.is_some() && method != Method::WeightedEightPoint {
        return Err(CliError::Usage(format!(
            "--weights only applies to weighted8point, not {method}"
        )));
    }
    let mut settings = load_settings(config)?;
    if let Some(seed) = seed {
        settings.estimator.ransac_seed = seed;
    }
    let scene = load_scene(scene_file)?;

    let file_weights = match weights {
        Some(WeightsSource::File(p)) => Some(parse_weights(&read(p)?).map_err(|source| {
            CliError::Format {
                path: p.clone(),
                source,
            }
        })?),
        _ => None,
    };
    let f_gt = match method {
        Method::GroundTruth => Some(load_f(&gt_path_for(scene_file))?),
        _ => None,
    };
    let result = run_method(
        method,
        &scene.set,
        f_gt.as_ref(),
        file_weights.as_deref(),
        &settings.estimator,
    )?;

    let result_path = PathBuf::from(format!("{}.result", out.display()));
    write(out, &format_f(result.f.matrix()))?;
    write(&result_path, &format_result(method, &result))?;
    Ok(EstimateOutput {
        result,
        f_path: out.to_path_buf(),
        result_path,
    })
}
