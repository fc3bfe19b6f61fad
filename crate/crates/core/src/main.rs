use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use epipolar::cli::{
    cmd_bench, cmd_calib_export, cmd_calib_import, cmd_estimate, cmd_evaluate, cmd_lines,
    cmd_synth, CliError, WeightsSource, EXIT_OK, EXIT_USAGE,
};

/// Two-view epipolar geometry: synthesize scenes, estimate and evaluate F.
#[derive(Parser)]
#[command(name = "epipolar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scene (<name>.scene) and its ground-truth F (<name>.f).
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "scene")]
        name: String,
        /// Overrides the scene seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Take the camera rig from a JSON calibration record.
        #[arg(long)]
        calib: Option<PathBuf>,
    },
    /// Estimate F from a scene file.
    Estimate {
        scene: PathBuf,
        /// 8point, weighted8point, ransac, irls or groundtruth.
        #[arg(long)]
        method: String,
        /// Weights for weighted8point: `oracle` or `file:<path>`.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// F file to write; the estimation record goes to <out>.result.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the RANSAC seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Score an estimated F against ground truth.
    Evaluate {
        f_est: PathBuf,
        f_gt: PathBuf,
        scene: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Key-value record; JSON goes to <out>.json.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the metrics sampling seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run methods over every scene in a directory and tabulate mean metrics.
    Bench {
        scene_dir: PathBuf,
        /// Comma-separated method names.
        #[arg(long, default_value = "8point,ransac")]
        method: String,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Table file; JSON rows go to <out>.jsonl.
        #[arg(long)]
        out: PathBuf,
    },
    /// Export epipolar lines as SVG (and CSV next to it).
    Lines {
        f: PathBuf,
        scene: PathBuf,
        /// WxH in pixels; defaults to the size in the scene header.
        #[arg(long, value_parser = parse_size)]
        image_size: Option<(f64, f64)>,
        /// Ground-truth F used to select the evaluated pairs.
        #[arg(long)]
        gt: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Calibration records.
    #[command(subcommand)]
    Calib(CalibCommand),
}

#[derive(Subcommand)]
enum CalibCommand {
    /// Validate a JSON calibration record and print its ground-truth F.
    Import {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the rig of a config file as a JSON calibration record.
    Export {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "config")]
        source_id: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_size(s: &str) -> Result<(f64, f64), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, found '{s}'"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad size '{s}'"));
    Ok((parse(w)?, parse(h)?))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synth {
            config,
            out,
            name,
            seed,
            calib,
        } => {
            let o = cmd_synth(config.as_deref(), &out, &name, seed, calib.as_deref())?;
            print!("{}", o.effective_config);
            eprintln!("wrote {} and {}", o.scene_path.display(), o.f_path.display());
        }
        Command::Estimate {
            scene,
            method,
            weights,
            config,
            out,
            seed,
        } => {
            let weights = weights
                .map(|w| w.parse::<WeightsSource>())
                .transpose()
                .map_err(CliError::Usage)?;
            let o = cmd_estimate(&scene, &method, weights.as_ref(), config.as_deref(), &out, seed)?;
            eprintln!(
                "{}: {} inliers, score {}, {} iterations",
                method,
                o.result.inlier_count(),
                o.result.score,
                o.result.iterations_used
            );
        }
        Command::Evaluate {
            f_est,
            f_gt,
            scene,
            config,
            out,
            seed,
        } => {
            let rec = cmd_evaluate(&f_est, &f_gt, &scene, config.as_deref(), &out, seed)?;
            print!("{}", rec.to_kv());
        }
        Command::Bench {
            scene_dir,
            method,
            config,
            out,
        } => {
            let o = cmd_bench(&scene_dir, &method, config.as_deref(), &out)?;
            print!("{}", o.table);
        }
        Command::Lines {
            f,
            scene,
            image_size,
            gt,
            config,
            out,
        } => {
            let o = cmd_lines(&f, &scene, image_size, gt.as_deref(), config.as_deref(), &out)?;
            eprintln!(
                "{} lines ({} drawn, {} degenerate skipped) -> {}, {}",
                o.lines,
                o.drawn,
                o.skipped_degenerate,
                o.svg_path.display(),
                o.csv_path.display()
            );
        }
        Command::Calib(CalibCommand::Import { file, out }) => {
            let (_, text) = cmd_calib_import(&file, out.as_deref())?;
            print!("{text}");
        }
        Command::Calib(CalibCommand::Export {
            config,
            source_id,
            out,
        }) => {
            cmd_calib_export(config.as_deref(), &source_id, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
