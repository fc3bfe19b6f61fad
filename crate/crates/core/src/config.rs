//! Flat `key = value` configuration files.
//!
//! Keys are the field names of [`SceneConfig`], [`EstimatorConfig`],
//! [`MetricsConfig`] and [`LossConfig`]. A key may carry a section prefix
//! (`scene.`, `estimator.`, `metrics.`, `loss.`); an unprefixed key sets the
//! field in every section that has it, so `seed = 3` seeds both the scene
//! and the metrics sampler. `#` starts a comment.
//!
//! Scene rig keys: `k1.fx k1.fy k1.cx k1.cy k1.skew` (same for `k2`),
//! `rotation` (9 numbers, row-major), `rotation_euler_deg` (roll pitch yaw)
//! and `translation` (3 numbers). `depth_range` takes two numbers.

use std::fmt;

use thiserror::Error;

use crate::estimators::EstimatorConfig;
use crate::geometry::{Mat3, RelativePose, SedVariant, Vec3};
use crate::loss::{L2Mode, LossConfig};
use crate::metrics::MetricsConfig;
use crate::synthetic::SceneConfig;

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub line: usize,
    pub key: String,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            write!(f, "line {}: {}", self.line, self.msg)
        } else {
            write!(f, "line {}: field '{}': {}", self.line, self.key, self.msg)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Scene,
    Estimator,
    Metrics,
    Loss,
}

const SECTIONS: [(Section, &str); 4] = [
    (Section::Scene, "scene"),
    (Section::Estimator, "estimator"),
    (Section::Metrics, "metrics"),
    (Section::Loss, "loss"),
];

/// Every tunable in one place.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub scene: SceneConfig,
    pub estimator: EstimatorConfig,
    pub metrics: MetricsConfig,
    pub loss: LossConfig,
}

fn parse_num<T: std::str::FromStr>(v: &str, what: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("expected {what}, found '{v}'"))
}

fn parse_real(v: &str) -> Result<f64, String> {
    let x: f64 = parse_num(v, "a number")?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, found '{v}'"))
    }
}

fn parse_reals<const N: usize>(v: &str) -> Result<[f64; N], String> {
    let vals = v
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(parse_real)
        .collect::<Result<Vec<_>, _>>()?;
    vals.try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} numbers, found {}", v.len()))
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "1" | "on" | "yes" => Ok(true),
        "false" | "0" | "off" | "no" => Ok(false),
        _ => Err(format!("expected true or false, found '{v}'")),
    }
}

/// `Ok(false)` when the section has no such field.
fn apply_scene(c: &mut SceneConfig, key: &str, v: &str) -> Result<bool, String> {
    match key {
        "seed" => c.seed = parse_num(v, "an unsigned integer")?,
        "num_points" => c.num_points = parse_num(v, "a count")?,
        "image_width" => c.image_width = parse_real(v)?,
        "image_height" => c.image_height = parse_real(v)?,
        "depth_range" => {
            let [near, far] = parse_reals::<2>(v)?;
            c.depth_range = (near, far);
        }
        "noise_sigma" => c.noise_sigma = parse_real(v)?,
        "outlier_fraction" => c.outlier_fraction = parse_real(v)?,
        "rotation" => c.rig.pose.rotation = Mat3::from_row_slice(&parse_reals::<9>(v)?),
        "rotation_euler_deg" => {
            let [r, p, y] = parse_reals::<3>(v)?;
            c.rig.pose.rotation = RelativePose::from_euler_deg(r, p, y, Vec3::zeros()).rotation;
        }
        "translation" => c.rig.pose.translation = Vec3::from(parse_reals::<3>(v)?),
        _ => {
            let Some((cam, field)) = key.split_once('.') else {
                return Ok(false);
            };
            let k = match cam {
                "k1" => &mut c.rig.k1,
                "k2" => &mut c.rig.k2,
                _ => return Ok(false),
            };
            let slot = match field {
                "fx" => &mut k.fx,
                "fy" => &mut k.fy,
                "cx" => &mut k.cx,
                "cy" => &mut k.cy,
                "skew" => &mut k.skew,
                _ => return Ok(false),
            };
            *slot = parse_real(v)?;
        }
    }
    Ok(true)
}

fn apply_estimator(c: &mut EstimatorConfig, key: &str, v: &str) -> Result<bool, String> {
    match key {
        "hartley_normalization" => c.hartley_normalization = parse_bool(v)?,
        "ransac_iterations" => c.ransac_iterations = parse_num(v, "a count")?,
        "ransac_inlier_threshold" => c.ransac_inlier_threshold = parse_real(v)?,
        "ransac_seed" => c.ransac_seed = parse_num(v, "an unsigned integer")?,
        "irls_max_iters" => c.irls_max_iters = parse_num(v, "a count")?,
        "irls_tolerance" => c.irls_tolerance = parse_real(v)?,
        "min_weight_mass" => c.min_weight_mass = parse_real(v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

fn apply_metrics(c: &mut MetricsConfig, key: &str, v: &str) -> Result<bool, String> {
    match key {
        "inlier_threshold" => c.inlier_threshold = parse_real(v)?,
        "sample_size" => c.sample_size = parse_num(v, "a count")?,
        "angle_point_tolerance" => c.angle_point_tolerance = parse_real(v)?,
        "seed" => c.seed = parse_num(v, "an unsigned integer")?,
        "sed_variant" => {
            c.sed_variant = match v {
                "transposed" => SedVariant::Transposed,
                "literal" => SedVariant::Literal,
                _ => return Err(format!("expected transposed or literal, found '{v}'")),
            }
        }
        "angle_both_directions" => c.angle_both_directions = parse_bool(v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

fn apply_loss(c: &mut LossConfig, key: &str, v: &str) -> Result<bool, String> {
    match key {
        "alpha" => c.alpha = parse_real(v)?,
        "beta" => c.beta = parse_real(v)?,
        "gamma" => c.gamma = parse_real(v)?,
        "inlier_threshold" => c.inlier_threshold = parse_real(v)?,
        "l2_mode" => {
            c.l2_mode = match v {
                "squared_sum" => L2Mode::SquaredSum,
                "frobenius" => L2Mode::Frobenius,
                _ => return Err(format!("expected squared_sum or frobenius, found '{v}'")),
            }
        }
        _ => return Ok(false),
    }
    Ok(true)
}

impl Settings {
    fn apply(&mut self, section: Section, key: &str, v: &str) -> Result<bool, String> {
        match section {
            Section::Scene => apply_scene(&mut self.scene, key, v),
            Section::Estimator => apply_estimator(&mut self.estimator, key, v),
            Section::Metrics => apply_metrics(&mut self.metrics, key, v),
            Section::Loss => apply_loss(&mut self.loss, key, v),
        }
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let prefixed = key.split_once('.').and_then(|(head, rest)| {
            SECTIONS
                .iter()
                .find(|(_, name)| *name == head)
                .map(|(s, _)| (*s, rest))
        });
        let recognized = match prefixed {
            Some((section, field)) => self.apply(section, field, value)?,
            None => {
                let mut any = false;
                for (section, _) in SECTIONS {
                    any |= self.apply(section, key, value)?;
                }
                any
            }
        };
        if recognized {
            Ok(())
        } else {
            Err("unknown key".into())
        }
    }

    /// Parses a config file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    line: i + 1,
                    key: String::new(),
                    msg: "expected 'key = value'".into(),
                });
            };
            let key = key.trim();
            s.set(key, value.trim()).map_err(|msg| ConfigError {
                line: i + 1,
                key: key.to_string(),
                msg,
            })?;
        }
        Ok(s)
    }
}

/// Scene config as `key value` pairs, in the config-file key vocabulary.
pub fn scene_to_kv(c: &SceneConfig) -> Vec<(String, String)> {
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = vec![
        ("seed".to_string(), c.seed.to_string()),
        ("num_points".into(), c.num_points.to_string()),
        ("image_width".into(), c.image_width.to_string()),
        ("image_height".into(), c.image_height.to_string()),
        ("depth_range".into(), join(&[c.depth_range.0, c.depth_range.1])),
        ("noise_sigma".into(), c.noise_sigma.to_string()),
        ("outlier_fraction".into(), c.outlier_fraction.to_string()),
    ];
    for (name, k) in [("k1", &c.rig.k1), ("k2", &c.rig.k2)] {
        for (field, v) in [("fx", k.fx), ("fy", k.fy), ("cx", k.cx), ("cy", k.cy), ("skew", k.skew)] {
            out.push((format!("{name}.{field}"), v.to_string()));
        }
    }
    out.push((
        "rotation".into(),
        join(&crate::geometry::row_major(&c.rig.pose.rotation)),
    ));
    out.push(("translation".into(), join(c.rig.pose.translation.as_slice())));
    out
}
