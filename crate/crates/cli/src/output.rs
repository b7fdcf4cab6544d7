//! CSV and SVG writers.
//!
//! Reals are written as `{:.16e}`, seventeen significant digits, which
//! re-parses to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Key {
    Int(i64),
    Real(f64),
}

impl Key {
    fn as_f64(self) -> f64 {
        match self {
            Key::Int(i) => i as f64,
            Key::Real(x) => x,
        }
    }
}

/// Two named columns of one plotted series.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub columns: [&'static str; 2],
    pub keys: Vec<Key>,
    pub values: Vec<f64>,
}

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn key_text(k: Key) -> String {
    match k {
        Key::Int(i) => i.to_string(),
        Key::Real(x) => real(x),
    }
}

fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
        }
        _ => Ok(()),
    }
}

pub fn write_csv(path: &Path, series: &Series) -> Result<(), CliError> {
    ensure_parent(path)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    w.write_record(series.columns)
        .map_err(|e| CliError::io(path, e))?;
    for (k, v) in series.keys.iter().zip(&series.values) {
        w.write_record([key_text(*k), real(*v)])
            .map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartStyle {
    Line,
    Stem,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;

fn bounds(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// A minimal self-contained chart: frame, extreme tick labels and the data.
pub fn svg_chart(title: &str, series: &Series, style: ChartStyle) -> String {
    let (x0, x1) = bounds(series.keys.iter().map(|k| k.as_f64()));
    let (mut y0, y1) = bounds(series.values.iter().copied());
    if style == ChartStyle::Stem {
        y0 = y0.min(0.0);
    }
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        title
    );
    let [xl, yl] = series.columns;
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{xl}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {})">{yl}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (x, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="{anchor}" font-size="10">{x:.4}</text>"#,
            px(x),
            HEIGHT - MARGIN + 14.0
        );
    }
    for y in [y0, y1] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="10">{y:.4e}</text>"#,
            MARGIN - 4.0,
            py(y) + 4.0
        );
    }
    match style {
        ChartStyle::Line => {
            let mut pts = String::new();
            for (k, v) in series.keys.iter().zip(&series.values) {
                let _ = write!(pts, "{:.2},{:.2} ", px(k.as_f64()), py(*v));
            }
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="steelblue" stroke-width="1.2" points="{}"/>"#,
                pts.trim_end()
            );
        }
        ChartStyle::Stem => {
            let base = py(0.0);
            for (k, v) in series.keys.iter().zip(&series.values) {
                let (x, y) = (px(k.as_f64()), py(*v));
                let _ = writeln!(
                    s,
                    r#"<line x1="{x:.2}" y1="{base:.2}" x2="{x:.2}" y2="{y:.2}" stroke="steelblue" stroke-width="2"/>"#
                );
                let _ = writeln!(
                    s,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="steelblue"/>"#
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(
    path: &Path,
    title: &str,
    series: &Series,
    style: ChartStyle,
) -> Result<(), CliError> {
    ensure_parent(path)?;
    fs::write(path, svg_chart(title, series, style)).map_err(|e| CliError::io(path, e))
}

/// `<prefix>_<suffix>.<ext>`, keeping any directory part of the prefix.
pub fn output_path(prefix: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = prefix
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    prefix.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for &v in &[
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
            0.0,
        ] {
            assert_eq!(real(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(real(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn paths_keep_directory() {
        assert_eq!(
            output_path(Path::new("out/fig3a"), "comb", "csv"),
            PathBuf::from("out/fig3a_comb.csv")
        );
        assert_eq!(
            output_path(Path::new("x"), "signal", "svg"),
            PathBuf::from("x_signal.svg")
        );
    }

    #[test]
    fn stem_chart_has_one_stem_per_point() {
        let s = Series {
            columns: ["z", "f_normalized"],
            keys: vec![Key::Int(-1), Key::Int(0), Key::Int(1)],
            values: vec![0.2, 0.6, 0.2],
        };
        let svg = svg_chart("comb", &s, ChartStyle::Stem);
        assert_eq!(svg.matches("<line").count(), 3);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn flat_series_does_not_divide_by_zero() {
        let s = Series {
            columns: ["x", "y"],
            keys: vec![Key::Real(1.0)],
            values: vec![2.0],
        };
        assert!(!svg_chart("t", &s, ChartStyle::Line).contains("NaN"));
    }
}
