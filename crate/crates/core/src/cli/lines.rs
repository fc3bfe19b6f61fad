use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{load_f, load_scene, load_settings, write, CliError, CliResult};
use crate::geometry::{epipolar_line, EpipolarLine, Vec2};
use crate::metrics::filter_inliers;

/// Segment of `line` inside `[0, w] x [0, h]`, or `None` if it misses.
pub fn clip_line(line: &EpipolarLine, w: f64, h: f64) -> Option<(Vec2, Vec2)> {
    let eps = 1e-9 * w.max(h);
    let inside = |p: &Vec2| p.x >= -eps && p.x <= w + eps && p.y >= -eps && p.y <= h + eps;
    let mut hits: Vec<Vec2> = Vec::with_capacity(4);
    if line.b != 0.0 {
        for x in [0.0, w] {
            hits.push(Vec2::new(x, -(line.a * x + line.c) / line.b));
        }
    }
    if line.a != 0.0 {
        for y in [0.0, h] {
            hits.push(Vec2::new(-(line.b * y + line.c) / line.a, y));
        }
    }
    hits.retain(|p| inside(p));
    let mut best: Option<(Vec2, Vec2, f64)> = None;
    for (i, p) in hits.iter().enumerate() {
        for q in &hits[i + 1..] {
            let d = (p.x - q.x).powi(2) + (p.y - q.y).powi(2);
            if best.is_none_or(|(_, _, bd)| d > bd) {
                best = Some((*p, *q, d));
            }
        }
    }
    best.filter(|(_, _, d)| *d > 0.0).map(|(p, q, _)| (p, q))
}

#[derive(Debug, Clone)]
pub struct LinesOutput {
    pub svg_path: PathBuf,
    pub csv_path: PathBuf,
    /// Non-degenerate lines (one CSV row each).
    pub lines: usize,
    /// Lines that intersect the image and were drawn.
    pub drawn: usize,
    pub skipped_degenerate: usize,
}

/// Epipolar lines `F m` in image 2 with the matching `m'` as markers.
///
/// With `gt` the pairs are first reduced to the GT-inlier sample used by
/// the metrics; otherwise every pair is drawn. The image size defaults to
/// the one recorded in the scene header. The CSV (next to the SVG, `.csv`)
/// holds unit-gradient line coefficients and the clipped endpoints.
pub fn cmd_lines(
    f_file: &Path,
    scene_file: &Path,
    image_size: Option<(f64, f64)>,
    gt: Option<&Path>,
    config: Option<&Path>,
    out_svg: &Path,
) -> CliResult<LinesOutput> {
    let settings = load_settings(config)?;
    let f = load_f(f_file)?;
    let scene = load_scene(scene_file)?;
    let (w, h) = image_size.or_else(|| scene.image_size()).ok_or_else(|| {
        CliError::Usage("image size unknown: pass --image-size WxH".into())
    })?;
    if !(w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite()) {
        return Err(CliError::Usage("image size must be positive".into()));
    }
    let set = match gt {
        Some(p) => filter_inliers(&scene.set, load_f(p)?.matrix(), &settings.metrics)?,
        None => scene.set,
    };

    let mut csv = String::from("index,a,b,c,x0,y0,x1,y1,point_x,point_y\n");
    let mut segments = String::new();
    let mut markers = String::new();
    let (mut lines, mut drawn, mut skipped) = (0, 0, 0);
    for (i, p) in set.iter().enumerate() {
        let Ok(line) = epipolar_line(&f, p.m) else {
            skipped += 1;
            continue;
        };
        let line = line.normalized();
        lines += 1;
        let seg = clip_line(&line, w, h);
        let ends = match seg {
            Some((s, e)) => format!("{},{},{},{}", s.x, s.y, e.x, e.y),
            None => ",,,".to_string(),
        };
        let _ = writeln!(
            csv,
            "{i},{},{},{},{ends},{},{}",
            line.a, line.b, line.c, p.m_prime.x, p.m_prime.y
        );
        if let Some((s, e)) = seg {
            drawn += 1;
            let _ = writeln!(
                segments,
                "    <line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\"/>",
                s.x, s.y, e.x, e.y
            );
        }
        let _ = writeln!(
            markers,
            "    <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"2\"/>",
            p.m_prime.x, p.m_prime.y
        );
    }

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        svg,
        "  <!-- {lines} lines, {drawn} drawn, {skipped} skipped (degenerate) -->"
    );
    let _ = writeln!(
        svg,
        r#"  <rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="black"/>"#
    );
    let _ = writeln!(svg, r##"  <g stroke="#1f77b4" stroke-width="1">"##);
    svg.push_str(&segments);
    let _ = writeln!(svg, "  </g>");
    let _ = writeln!(svg, r##"  <g fill="#d62728">"##);
    svg.push_str(&markers);
    let _ = writeln!(svg, "  </g>");
    let _ = writeln!(svg, "</svg>");

    let csv_path = out_svg.with_extension("csv");
    write(out_svg, &svg)?;
    write(&csv_path, &csv)?;
    Ok(LinesOutput {
        svg_path: out_svg.to_path_buf(),
        csv_path,
        lines,
        drawn,
        skipped_degenerate: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizontal_line_spans_width() {
        let l = EpipolarLine { a: 0.0, b: 1.0, c: -4.0 };
        let (p, q) = clip_line(&l, 10.0, 8.0).unwrap();
        assert_eq!((p.y, q.y), (4.0, 4.0));
        assert_eq!((p.x - q.x).abs(), 10.0);
    }

    #[test]
    fn diagonal_and_missing_lines() {
        let l = EpipolarLine { a: 1.0, b: -1.0, c: 0.0 };
        let (p, q) = clip_line(&l, 5.0, 5.0).unwrap();
        assert_eq!(((p.x - q.x).abs(), (p.y - q.y).abs()), (5.0, 5.0));
        let miss = EpipolarLine { a: 0.0, b: 1.0, c: 20.0 };
        assert!(clip_line(&miss, 5.0, 5.0).is_none());
    }
}
