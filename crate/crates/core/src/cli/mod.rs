//! Command implementations behind the `epipolar` binary.
//!
//! Every command is an ordinary function so it can be driven in-process;
//! the binary only parses arguments and maps [`CliError`] to exit codes.

mod bench;
mod estimate;
mod evaluate;
mod lines;
mod synth;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use bench::{cmd_bench, format_table, list_scenes, parse_methods, BenchOutput, BenchmarkRow, SceneOutcome};
pub use estimate::{cmd_estimate, format_result, run_method, EstimateOutput, WeightsSource};
pub use evaluate::{cmd_evaluate, evaluate_pair, EvaluationRecord};
pub use lines::{clip_line, cmd_lines, LinesOutput};
pub use synth::{cmd_synth, SynthOutput};

use crate::calib::{export_calib, import_calib, CalibError, CalibRecord};
use crate::config::{ConfigError, Settings};
use crate::error::EpiError;
use crate::formats::{format_f, parse_f, parse_scene, FormatError, SceneFile};
use crate::geometry::{normalize_f, FundamentalMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_NO_INLIERS: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Config {
        path: PathBuf,
        source: ConfigError,
    },
    #[error("{path}: {source}")]
    Format {
        path: PathBuf,
        source: FormatError,
    },
    #[error("{path}: {source}")]
    Calib {
        path: PathBuf,
        source: CalibError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: no scene files (*.scene) found", .0.display())]
    EmptyDirectory(PathBuf),
    #[error("{}: {}", .0.name(), .0)]
    Epi(#[from] EpiError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Config { .. }
            | CliError::Format { .. }
            | CliError::Calib { .. }
            | CliError::Io { .. }
            | CliError::EmptyDirectory(_) => EXIT_INPUT,
            CliError::Epi(e) => match e {
                EpiError::NoInliers => EXIT_NO_INLIERS,
                EpiError::InvalidConfig(_)
                | EpiError::MissingFlags
                | EpiError::InvalidRotation(_)
                | EpiError::SingularIntrinsics
                | EpiError::LengthMismatch { .. }
                | EpiError::InvalidWeight { .. }
                | EpiError::NonCanonicalInput => EXIT_INPUT,
                _ => EXIT_NUMERICAL,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Defaults, overlaid with the config file when one is given.
pub fn load_settings(path: Option<&Path>) -> CliResult<Settings> {
    match path {
        None => Ok(Settings::default()),
        Some(p) => Settings::parse(&read(p)?).map_err(|source| CliError::Config {
            path: p.to_path_buf(),
            source,
        }),
    }
}

pub fn load_scene(path: &Path) -> CliResult<SceneFile> {
    parse_scene(&read(path)?).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads an F file and returns its canonical representative.
pub fn load_f(path: &Path) -> CliResult<FundamentalMatrix> {
    let m = parse_f(&read(path)?).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(normalize_f(&m)?)
}

/// Ground-truth F stored next to a scene file (`<stem>.f`).
pub fn gt_path_for(scene: &Path) -> PathBuf {
    scene.with_extension("f")
}

pub fn cmd_calib_import(calib_file: &Path, out: Option<&Path>) -> CliResult<(CalibRecord, String)> {
    let rec = import_calib(&read(calib_file)?).map_err(|source| CliError::Calib {
        path: calib_file.to_path_buf(),
        source,
    })?;
    let text = format_f(rec.fundamental()?.matrix());
    if let Some(out) = out {
        write(out, &text)?;
    }
    Ok((rec, text))
}

pub fn cmd_calib_export(config: Option<&Path>, source_id: &str, out: &Path) -> CliResult<String> {
    let settings = load_settings(config)?;
    settings.scene.rig.validate()?;
    let text = export_calib(&CalibRecord {
        rig: settings.scene.rig,
        source_id: source_id.to_string(),
    });
    write(out, &text)?;
    Ok(text)
}
