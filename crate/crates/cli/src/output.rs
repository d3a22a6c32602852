//! CSV, JSON and SVG writers. All output is deterministic for identical input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

pub fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Writes a header row and records; fields are written with `Display`.
pub fn write_csv<R: AsRef<[String]>>(path: &Path, header: &[&str], rows: &[R]) -> Result<(), CliError> {
    let csv_err = |e: csv::Error| CliError::Io {
        path: path.display().to_string(),
        source: std::io::Error::other(e.to_string()),
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.as_ref()).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Coordinates in SVG are printed with this many decimals.
pub const SVG_DECIMALS: usize = 6;

/// Flat SVG document: scatter points and polylines in data coordinates,
/// y flipped, viewBox fitted to the data and padded by 5%.
#[derive(Default)]
pub struct Svg {
    points: Vec<(f64, f64)>,
    lines: Vec<(Vec<(f64, f64)>, &'static str)>,
    title: String,
}

impl Svg {
    pub fn new(title: &str) -> Svg {
        Svg { title: title.to_string(), ..Default::default() }
    }

    pub fn scatter(&mut self, pts: impl IntoIterator<Item = (f64, f64)>) {
        self.points.extend(pts.into_iter().filter(|p| p.0.is_finite() && p.1.is_finite()));
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], colour: &'static str) {
        let pts: Vec<(f64, f64)> = pts.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
        if pts.len() >= 2 {
            self.lines.push((pts, colour));
        }
    }

    fn extent(&self) -> (f64, f64, f64, f64) {
        let all = self.points.iter().chain(self.lines.iter().flat_map(|l| l.0.iter()));
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return (-1.0, 1.0, -1.0, 1.0);
        }
        // A flat extent (e.g. real eigenvalues) borrows 5% of the other side.
        let w = (x1 - x0).max(1e-3 * (1.0 + x0.abs().max(x1.abs())));
        let h = (y1 - y0).max(0.05 * w);
        let w = w.max(0.05 * h);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        (cx - 0.55 * w, cx + 0.55 * w, cy - 0.55 * h, cy + 0.55 * h)
    }

    pub fn render(&self) -> String {
        let d = SVG_DECIMALS;
        let (x0, x1, y0, y1) = self.extent();
        let (w, h) = (x1 - x0, y1 - y0);
        let unit = w.max(h);
        let radius = unit / 400.0;
        let stroke = unit / 800.0;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.d$} {:.d$} {w:.d$} {h:.d$}" preserveAspectRatio="xMidYMid meet">"#,
            -y1
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        // Axes through the origin when it is in view.
        if x0 < 0.0 && x1 > 0.0 {
            let _ = writeln!(
                s,
                r##"<line x1="0" y1="{:.d$}" x2="0" y2="{:.d$}" stroke="#bbbbbb" stroke-width="{stroke:.d$}"/>"##,
                -y1, -y0
            );
        }
        if y0 < 0.0 && y1 > 0.0 {
            let _ = writeln!(
                s,
                r##"<line x1="{x0:.d$}" y1="0" x2="{x1:.d$}" y2="0" stroke="#bbbbbb" stroke-width="{stroke:.d$}"/>"##
            );
        }
        for (pts, colour) in &self.lines {
            let mut coords = String::new();
            for (i, (x, y)) in pts.iter().enumerate() {
                if i > 0 {
                    coords.push(' ');
                }
                let _ = write!(coords, "{x:.d$},{:.d$}", -y);
            }
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="{stroke:.d$}" points="{coords}"/>"#
            );
        }
        for (x, y) in &self.points {
            let _ = writeln!(s, r##"<circle cx="{x:.d$}" cy="{:.d$}" r="{radius:.d$}" fill="#1f4e9c"/>"##, -y);
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.render()).map_err(io_err(path))
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Float for CSV cells: shortest round-trip representation.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viewbox_is_padded_and_flipped() {
        let mut svg = Svg::new("t");
        svg.scatter([(0.0, 0.0), (10.0, 2.0)]);
        let text = svg.render();
        assert!(text.contains(r#"viewBox="-0.500000 -2.100000 11.000000 2.200000""#), "{text}");
        assert!(text.contains(r#"cx="10.000000" cy="-2.000000""#));
    }

    #[test]
    fn single_point_has_nonzero_view() {
        let mut svg = Svg::new("t");
        svg.scatter([(3.0, 0.0)]);
        assert!(!svg.render().contains(r#" 0.000000 0.000000""#));
    }
}
