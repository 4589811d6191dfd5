use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// One curve of a log-log plot.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];
const W: f64 = 640.0;
const H: f64 = 480.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 20.0;
const MB: f64 = 55.0;

/// Hand-emitted log-log SVG plot: axes with decade ticks, one polyline per
/// series and a text legend. Non-finite or nonpositive points are dropped.
pub fn write_loglog_svg(
    path: &Path,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<()> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .collect();
    let (x0, x1, y0, y1) = if pts.is_empty() {
        (0.1, 10.0, 0.1, 10.0)
    } else {
        let xmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let xmax = pts.iter().map(|p| p.0).fold(0.0f64, f64::max);
        let ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let ymax = pts.iter().map(|p| p.1).fold(0.0f64, f64::max);
        (
            10f64.powf(xmin.log10().floor()),
            10f64.powf(xmax.log10().ceil().max(xmin.log10().floor() + 1.0)),
            10f64.powf(ymin.log10().floor()),
            10f64.powf(ymax.log10().ceil().max(ymin.log10().floor() + 1.0)),
        )
    };
    let sx = |x: f64| ML + (x.log10() - x0.log10()) / (x1.log10() - x0.log10()) * (W - ML - MR);
    let sy = |y: f64| H - MB - (y.log10() - y0.log10()) / (y1.log10() - y0.log10()) * (H - MT - MB);

    let mut out = std::fs::File::create(path)?;
    writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )?;
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#)?;
    // frame
    writeln!(
        out,
        r#"<rect x="{ML}" y="{MT}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - ML - MR,
        H - MT - MB
    )?;
    // decade ticks
    let mut d = x0;
    while d <= x1 * 1.0001 {
        let px = sx(d);
        writeln!(
            out,
            r##"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="#ccc"/>"##,
            MT,
            H - MB
        )?;
        writeln!(
            out,
            r#"<text x="{px}" y="{}" font-size="11" text-anchor="middle">{:e}</text>"#,
            H - MB + 16.0,
            d
        )?;
        d *= 10.0;
    }
    let mut d = y0;
    while d <= y1 * 1.0001 {
        let py = sy(d);
        writeln!(
            out,
            r##"<line x1="{ML}" y1="{py}" x2="{}" y2="{py}" stroke="#ccc"/>"##,
            W - MR
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{:e}</text>"#,
            ML - 6.0,
            py + 4.0,
            d
        )?;
        d *= 10.0;
    }
    // axis labels
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
        (ML + W - MR) / 2.0,
        H - 12.0,
        xml_escape(x_label)
    )?;
    writeln!(
        out,
        r#"<text x="16" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        xml_escape(y_label)
    )?;
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let path_pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        if path_pts.len() > 1 {
            writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path_pts.join(" ")
            )?;
        }
        for p in &path_pts {
            let (px, py) = p.split_once(',').unwrap();
            writeln!(
                out,
                r#"<circle cx="{px}" cy="{py}" r="2.5" fill="{color}"/>"#
            )?;
        }
        let ly = MT + 16.0 + 16.0 * k as f64;
        writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            W - MR - 150.0,
            W - MR - 125.0
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12">{}</text>"#,
            W - MR - 120.0,
            ly + 4.0,
            xml_escape(&s.name)
        )?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
