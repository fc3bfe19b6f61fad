use std::fs;
use std::path::{Path, PathBuf};

use super::{load_settings, read, write, CliError, CliResult};
use crate::calib::import_calib;
use crate::config::scene_to_kv;
use crate::formats::{format_f, format_scene};
use crate::synthetic::generate_scene;

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub scene_path: PathBuf,
    pub f_path: PathBuf,
    /// Effective scene config, one `key = value` per line.
    pub effective_config: String,
}

/// Writes `<out_dir>/<name>.scene` and the ground-truth `<out_dir>/<name>.f`.
///
/// `seed` overrides the config's scene seed; `calib` replaces the rig.
pub fn cmd_synth(
    config: Option<&Path>,
    out_dir: &Path,
    name: &str,
    seed: Option<u64>,
    calib: Option<&Path>,
) -> CliResult<SynthOutput> {
    let mut settings = load_settings(config)?;
    if let Some(seed) = seed {
        settings.scene.seed = seed;
    }
    if let Some(path) = calib {
        let rec = import_calib(&read(path)?).map_err(|source| CliError::Calib {
            path: path.to_path_buf(),
            source,
        })?;
        settings.scene.rig = rec.rig;
    }
    let cfg = settings.scene;
    cfg.validate()?;
    let scene = generate_scene(&cfg)?;

    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let echo = scene_to_kv(&cfg);
    let scene_path = out_dir.join(format!("{name}.scene"));
    let f_path = out_dir.join(format!("{name}.f"));
    write(&scene_path, &format_scene(&echo, &scene.set))?;
    write(&f_path, &format_f(scene.f_gt.matrix()))?;

    let effective_config = echo
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect();
    Ok(SynthOutput {
        scene_path,
        f_path,
        effective_config,
    })
}
