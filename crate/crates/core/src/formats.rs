//! Text formats: F files (9 numbers, row-major) and scene files.
//!
//! Floats are written with 17 significant digits so every value reads back
//! bit-exactly.

use std::fmt::Write as _;

use thiserror::Error;

use crate::correspondence::{Correspondence, CorrespondenceSet};
use crate::geometry::{row_major, Mat3, Vec2};
use crate::rng::PRNG_NAME;

pub const SCENE_FORMAT: &str = "epipolar-scene v1";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}{msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct FormatError {
    pub line: Option<usize>,
    pub msg: String,
}

impl FormatError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            msg: msg.into(),
        }
    }
}

/// `{:.16e}`: one leading digit plus 16 decimals.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Three rows of three numbers.
pub fn format_f(m: &Mat3) -> String {
    let v = row_major(m);
    let mut out = String::new();
    for row in v.chunks(3) {
        let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

/// Exactly nine numbers separated by arbitrary whitespace; lines starting
/// with `#` are comments.
pub fn parse_f(text: &str) -> Result<Mat3, FormatError> {
    let mut values = Vec::with_capacity(9);
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| {
                FormatError::at(i + 1, format!("'{tok}' is not a number"))
            })?;
            values.push(v);
        }
    }
    if values.len() != 9 {
        return Err(FormatError {
            line: None,
            msg: format!(
                "expected 9 whitespace-separated numbers (row-major 3x3 F), found {}",
                values.len()
            ),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(FormatError {
            line: None,
            msg: "F entries must be finite".into(),
        });
    }
    Ok(Mat3::from_row_slice(&values))
}

/// Scene file contents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SceneFile {
    /// `key value` header entries in file order.
    pub header: Vec<(String, String)>,
    pub set: CorrespondenceSet,
}

impl SceneFile {
    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Image size recorded by the generator, if any.
    pub fn image_size(&self) -> Option<(f64, f64)> {
        let w = self.header_value("image_width")?.parse().ok()?;
        let h = self.header_value("image_height")?.parse().ok()?;
        Some((w, h))
    }
}

/// Header: format line, PRNG line, then `# key value` config echo; body:
/// `x y x' y' flag` with flag `1`, `0` or `-` (unknown).
pub fn format_scene(config_echo: &[(String, String)], set: &CorrespondenceSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {SCENE_FORMAT}");
    let _ = writeln!(out, "# prng {PRNG_NAME}");
    for (k, v) in config_echo {
        let _ = writeln!(out, "# {k} {v}");
    }
    let _ = writeln!(out, "# columns x y x' y' inlier_flag");
    for p in set {
        let flag = match p.is_true_inlier {
            Some(true) => "1",
            Some(false) => "0",
            None => "-",
        };
        let _ = writeln!(
            out,
            "{} {} {} {} {flag}",
            fmt_f64(p.m.x),
            fmt_f64(p.m.y),
            fmt_f64(p.m_prime.x),
            fmt_f64(p.m_prime.y)
        );
    }
    out
}

/// Parses a scene file. Rows may have four columns (no flag) or five.
pub fn parse_scene(text: &str) -> Result<SceneFile, FormatError> {
    let mut header = Vec::new();
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some((k, v)) = rest.split_once(char::is_whitespace) {
                header.push((k.to_string(), v.trim().to_string()));
            }
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 && cols.len() != 5 {
            return Err(FormatError::at(
                i + 1,
                format!("expected 'x y x' y' [flag]', found {} columns", cols.len()),
            ));
        }
        let mut v = [0.0; 4];
        for (slot, tok) in v.iter_mut().zip(&cols) {
            *slot = tok
                .parse()
                .ok()
                .filter(|x: &f64| x.is_finite())
                .ok_or_else(|| FormatError::at(i + 1, format!("'{tok}' is not a finite number")))?;
        }
        let flag = match cols.get(4) {
            None | Some(&"-") => None,
            Some(&"1") => Some(true),
            Some(&"0") => Some(false),
            Some(other) => {
                return Err(FormatError::at(
                    i + 1,
                    format!("inlier flag must be 1, 0 or -, found '{other}'"),
                ))
            }
        };
        pairs.push(Correspondence {
            m: Vec2::new(v[0], v[1]),
            m_prime: Vec2::new(v[2], v[3]),
            is_true_inlier: flag,
        });
    }
    Ok(SceneFile {
        header,
        set: CorrespondenceSet::new(pairs),
    })
}

/// One weight per line (or any whitespace), each in `[0, 1]`.
pub fn parse_weights(text: &str) -> Result<Vec<f64>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let w: f64 = tok
                .parse()
                .map_err(|_| FormatError::at(i + 1, format!("'{tok}' is not a number")))?;
            if !(0.0..=1.0).contains(&w) {
                return Err(FormatError::at(i + 1, format!("weight {w} outside [0, 1]")));
            }
            out.push(w);
        }
    }
    Ok(out)
}
