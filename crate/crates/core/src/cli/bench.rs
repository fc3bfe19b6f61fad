use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::evaluate::{evaluate_pair, EvaluationRecord};
use super::{gt_path_for, load_f, load_scene, load_settings, run_method, write, CliError, CliResult};
use crate::config::Settings;
use crate::error::EpiError;
use crate::estimators::Method;
use crate::numeric::pairwise_mean;

/// Per-method means over the scenes that produced a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRow {
    pub method_name: String,
    pub m_ec: Option<f64>,
    pub m_ed: Option<f64>,
    /// Mean over scenes where at least one pair passed the through-point rule.
    pub m_ea_degrees: Option<f64>,
    /// Mean over all evaluated scenes, all-outlier scenes counted as 90.
    pub m_ea_degrees_undefined_as_90: Option<f64>,
    pub pairs_evaluated: usize,
    pub angle_outlier_pairs: usize,
    pub scenes_evaluated: usize,
    pub scenes_angle_undefined: usize,
    pub scenes_no_inliers: usize,
    pub scenes_failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SceneOutcome {
    Evaluated(EvaluationRecord),
    NoInliers,
    /// Estimation or evaluation error, by name.
    Failed(&'static str),
}

#[derive(Debug, Clone)]
pub struct BenchOutput {
    pub rows: Vec<BenchmarkRow>,
    /// `(scene file name, method, outcome)` in method-then-filename order.
    pub outcomes: Vec<(String, Method, SceneOutcome)>,
    pub table: String,
}

pub fn parse_methods(list: &str) -> CliResult<Vec<Method>> {
    let methods = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Method>().map_err(CliError::Usage))
        .collect::<CliResult<Vec<_>>>()?;
    if methods.is_empty() {
        return Err(CliError::Usage("no methods given".into()));
    }
    Ok(methods)
}

/// `*.scene` files in `dir`, sorted by file name.
pub fn list_scenes(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut scenes: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "scene"))
        .collect();
    scenes.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if scenes.is_empty() {
        return Err(CliError::EmptyDirectory(dir.to_path_buf()));
    }
    Ok(scenes)
}

fn run_scene(
    path: &Path,
    methods: &[Method],
    settings: &Settings,
) -> CliResult<Vec<SceneOutcome>> {
    let scene = load_scene(path)?;
    let f_gt = load_f(&gt_path_for(path))?;
    Ok(methods
        .iter()
        .map(|&method| {
            let outcome = run_method(method, &scene.set, Some(&f_gt), None, &settings.estimator)
                .and_then(|r| evaluate_pair(&r.f, &f_gt, &scene.set, settings));
            match outcome {
                Ok(rec) => SceneOutcome::Evaluated(rec),
                Err(EpiError::NoInliers) => SceneOutcome::NoInliers,
                Err(e) => SceneOutcome::Failed(e.name()),
            }
        })
        .collect())
}

fn mean_of(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| pairwise_mean(v))
}

fn aggregate(method: Method, outcomes: &[&SceneOutcome]) -> BenchmarkRow {
    let records: Vec<&EvaluationRecord> = outcomes
        .iter()
        .filter_map(|o| match o {
            SceneOutcome::Evaluated(r) => Some(r),
            _ => None,
        })
        .collect();
    let collect = |f: &dyn Fn(&EvaluationRecord) -> Option<f64>| -> Vec<f64> {
        records.iter().filter_map(|r| f(r)).collect()
    };
    BenchmarkRow {
        method_name: method.name().to_string(),
        m_ec: mean_of(&collect(&|r| Some(r.metrics.m_ec))),
        m_ed: mean_of(&collect(&|r| Some(r.metrics.m_ed))),
        m_ea_degrees: mean_of(&collect(&|r| r.m_ea_excluding_undefined)),
        m_ea_degrees_undefined_as_90: mean_of(&collect(&|r| Some(r.m_ea_undefined_as_90))),
        pairs_evaluated: records.iter().map(|r| r.metrics.n_used).sum(),
        angle_outlier_pairs: records.iter().map(|r| r.metrics.n_angle_outliers).sum(),
        scenes_evaluated: records.len(),
        scenes_angle_undefined: records
            .iter()
            .filter(|r| r.m_ea_excluding_undefined.is_none())
            .count(),
        scenes_no_inliers: outcomes
            .iter()
            .filter(|o| matches!(o, SceneOutcome::NoInliers))
            .count(),
        scenes_failed: outcomes
            .iter()
            .filter(|o| matches!(o, SceneOutcome::Failed(_)))
            .count(),
    }
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"))
}

/// Aligned plain-text table with footnotes for excluded scenes.
pub fn format_table(rows: &[BenchmarkRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>14} {:>14} {:>14} {:>14} {:>7} {:>9} {:>7}",
        "method", "M_EC", "M_ED", "M_EA(deg)", "M_EA@90(deg)", "pairs", "angle_out", "scenes"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<16} {:>14} {:>14} {:>14} {:>14} {:>7} {:>9} {:>7}",
            r.method_name,
            cell(r.m_ec),
            cell(r.m_ed),
            cell(r.m_ea_degrees),
            cell(r.m_ea_degrees_undefined_as_90),
            r.pairs_evaluated,
            r.angle_outlier_pairs,
            r.scenes_evaluated
        );
    }
    for r in rows {
        if r.scenes_no_inliers > 0 {
            let _ = writeln!(
                out,
                "* {}: {} scene(s) without ground-truth inliers excluded from means",
                r.method_name, r.scenes_no_inliers
            );
        }
        if r.scenes_failed > 0 {
            let _ = writeln!(
                out,
                "* {}: {} scene(s) where estimation failed excluded from means",
                r.method_name, r.scenes_failed
            );
        }
        if r.scenes_angle_undefined > 0 {
            let _ = writeln!(
                out,
                "* {}: {} scene(s) with every pair an angle outlier (M_EA counts them at 90)",
                r.method_name, r.scenes_angle_undefined
            );
        }
    }
    out
}

/// Runs every method on every scene in `scene_dir` and writes the table to
/// `out_table` and one JSON row per method to `<out_table>.jsonl`.
pub fn cmd_bench(
    scene_dir: &Path,
    methods: &str,
    config: Option<&Path>,
    out_table: &Path,
) -> CliResult<BenchOutput> {
    let methods = parse_methods(methods)?;
    let settings = load_settings(config)?;
    settings.estimator.validate()?;
    settings.metrics.validate()?;
    settings.loss.validate()?;
    let scenes = list_scenes(scene_dir)?;

    let per_scene: Vec<Vec<SceneOutcome>> = scenes
        .par_iter()
        .map(|p| run_scene(p, &methods, &settings))
        .collect::<CliResult<_>>()?;

    let mut outcomes = Vec::new();
    let mut rows = Vec::new();
    for (mi, &method) in methods.iter().enumerate() {
        let column: Vec<&SceneOutcome> = per_scene.iter().map(|s| &s[mi]).collect();
        rows.push(aggregate(method, &column));
        for (path, o) in scenes.iter().zip(column) {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            outcomes.push((name, method, o.clone()));
        }
    }

    let table = format_table(&rows);
    write(out_table, &table)?;
    let jsonl: String = rows
        .iter()
        .map(|r| serde_json::to_string(r).expect("plain data serializes") + "\n")
        .collect();
    write(&PathBuf::from(format!("{}.jsonl", out_table.display())), &jsonl)?;
    Ok(BenchOutput {
        rows,
        outcomes,
        table,
    })
}
