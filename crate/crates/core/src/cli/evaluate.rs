use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{load_f, load_scene, load_settings, write, CliResult};
use crate::config::Settings;
use crate::correspondence::CorrespondenceSet;
use crate::error::Result;
use crate::geometry::FundamentalMatrix;
use crate::loss::{loss_total, LossBreakdown};
use crate::metrics::{evaluate, MetricsReport, ALL_OUTLIER_ANGLE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvaluationRecord {
    pub metrics: MetricsReport,
    pub loss: LossBreakdown,
    /// Mean angle, or `None` when every pair was an angle outlier.
    pub m_ea_excluding_undefined: Option<f64>,
    /// Mean angle with an all-outlier pair set counted as 90 degrees.
    pub m_ea_undefined_as_90: f64,
}

impl EvaluationRecord {
    pub fn to_kv(&self) -> String {
        let excl = self
            .m_ea_excluding_undefined
            .map_or_else(|| "undefined".to_string(), |v| v.to_string());
        format!(
            "{}{}m_ea_excluding_undefined={excl}\nm_ea_undefined_as_90={}\n",
            self.metrics.to_kv(),
            self.loss.to_kv(),
            self.m_ea_undefined_as_90
        )
    }
}

/// Metrics and loss for one estimate, exactly as the library computes them.
pub fn evaluate_pair(
    f_est: &FundamentalMatrix,
    f_gt: &FundamentalMatrix,
    set: &CorrespondenceSet,
    settings: &Settings,
) -> Result<EvaluationRecord> {
    let metrics = evaluate(f_est, f_gt, set, &settings.metrics)?;
    let loss = loss_total(f_est, f_gt, set, &settings.loss)?;
    let defined = metrics.angle_defined();
    Ok(EvaluationRecord {
        metrics,
        loss,
        m_ea_excluding_undefined: defined.then_some(metrics.m_ea_degrees),
        m_ea_undefined_as_90: if defined {
            metrics.m_ea_degrees
        } else {
            ALL_OUTLIER_ANGLE
        },
    })
}

/// Writes the flat record to `out` and the JSON object to `<out>.json`.
/// `seed` overrides the metrics sampling seed.
pub fn cmd_evaluate(
    f_est_file: &Path,
    f_gt_file: &Path,
    scene_file: &Path,
    config: Option<&Path>,
    out: &Path,
    seed: Option<u64>,
) -> CliResult<EvaluationRecord> {
    let mut settings = load_settings(config)?;
    if let Some(seed) = seed {
        settings.metrics.seed = seed;
    }
    let f_est = load_f(f_est_file)?;
    let f_gt = load_f(f_gt_file)?;
    let scene = load_scene(scene_file)?;
    let record = evaluate_pair(&f_est, &f_gt, &scene.set, &settings)?;
    write(out, &record.to_kv())?;
    let json = serde_json::to_string_pretty(&record).expect("plain data serializes") + "\n";
    write(&PathBuf::from(format!("{}.json", out.display())), &json)?;
    Ok(record)
}
