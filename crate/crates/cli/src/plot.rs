//! Deterministic SVG scatter plots of root sets.

use std::fmt::Write as _;
use std::io::Read;

use anyhow::{bail, Context, Result};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Axis and modulus filters; every bound is optional.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Window {
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub ymin: Option<f64>,
    pub ymax: Option<f64>,
    pub rmin: Option<f64>,
    pub rmax: Option<f64>,
}

impl Window {
    fn contains(&self, (x, y): (f64, f64)) -> bool {
        let r = x.hypot(y);
        self.xmin.is_none_or(|v| x >= v)
            && self.xmax.is_none_or(|v| x <= v)
            && self.ymin.is_none_or(|v| y >= v)
            && self.ymax.is_none_or(|v| y <= v)
            && self.rmin.is_none_or(|v| r >= v)
            && self.rmax.is_none_or(|v| r <= v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub points: Vec<(f64, f64)>,
    pub window: Window,
    pub marker_radius: f64,
    pub title: String,
    pub unit_circle: bool,
}

/// Reads `re,im` columns from a roots CSV, skipping `#` metadata lines.
pub fn read_roots_csv<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("missing column {name:?}"))
    };
    let (ire, iim) = (col("re")?, col("im")?);
    let mut pts = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let re: f64 = rec[ire]
            .parse()
            .with_context(|| format!("bad re {:?}", &rec[ire]))?;
        let im: f64 = rec[iim]
            .parse()
            .with_context(|| format!("bad im {:?}", &rec[iim]))?;
        pts.push((re, im));
    }
    Ok(pts)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the plot; the flag is set when the window filtered out every point.
pub fn render_svg(spec: &PlotSpec) -> Result<(String, bool)> {
    if !(spec.marker_radius.is_finite() && spec.marker_radius > 0.0) {
        bail!("marker radius must be positive");
    }
    if spec
        .points
        .iter()
        .any(|(x, y)| !x.is_finite() || !y.is_finite())
    {
        bail!("plot points must be finite");
    }
    let shown: Vec<(f64, f64)> = spec
        .points
        .iter()
        .copied()
        .filter(|&p| spec.window.contains(p))
        .collect();

    // Data extent: window bounds where given, otherwise the shown points.
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &shown {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    if spec.unit_circle {
        lo = (lo.0.min(-1.0), lo.1.min(-1.0));
        hi = (hi.0.max(1.0), hi.1.max(1.0));
    }
    if !lo.0.is_finite() {
        lo = (-1.0, -1.0);
        hi = (1.0, 1.0);
    }
    let w = &spec.window;
    let (mut x0, mut x1) = (w.xmin.unwrap_or(lo.0), w.xmax.unwrap_or(hi.0));
    let (mut y0, mut y1) = (w.ymin.unwrap_or(lo.1), w.ymax.unwrap_or(hi.1));
    // Equal aspect: widen the narrower axis about its centre.
    let span = (x1 - x0).max(y1 - y0).max(1e-12) * 1.1;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    (x0, x1, y0, y1) = (
        cx - span / 2.0,
        cx + span / 2.0,
        cy - span / 2.0,
        cy + span / 2.0,
    );
    let inner = SIZE - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * inner;
    let sy = |y: f64| MARGIN + (y1 - y) / (y1 - y0) * inner;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        escape(&spec.title)
    )?;
    writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="#888"/>"##
    )?;
    if (x0..=x1).contains(&0.0) {
        writeln!(
            s,
            r##"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="#888" stroke-width="0.5"/>"##,
            sx(0.0),
            MARGIN,
            MARGIN + inner
        )?;
    }
    if (y0..=y1).contains(&0.0) {
        writeln!(
            s,
            r##"<line x1="{1:.2}" y1="{0:.2}" x2="{2:.2}" y2="{0:.2}" stroke="#888" stroke-width="0.5"/>"##,
            sy(0.0),
            MARGIN,
            MARGIN + inner
        )?;
    }
    for (v, x, y, anchor) in [
        (x0, MARGIN, SIZE - MARGIN + 16.0, "start"),
        (x1, SIZE - MARGIN, SIZE - MARGIN + 16.0, "end"),
    ] {
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{v:.4}</text>"#
        )?;
    }
    for (v, y) in [(y1, MARGIN + 10.0), (y0, SIZE - MARGIN)] {
        writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{v:.4}</text>"#,
            MARGIN - 4.0
        )?;
    }
    if spec.unit_circle {
        let r = inner / (x1 - x0);
        writeln!(
            s,
            r##"<circle class="guide" cx="{:.2}" cy="{:.2}" r="{r:.2}" fill="none" stroke="#bbb" stroke-dasharray="4 3"/>"##,
            sx(0.0),
            sy(0.0)
        )?;
    }
    writeln!(s, r#"<g class="roots" fill="steelblue">"#)?;
    for &(x, y) in &shown {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}"/>"#,
            sx(x),
            sy(y),
            spec.marker_radius
        )?;
    }
    writeln!(s, "</g>")?;
    writeln!(s, "</svg>")?;
    Ok((s, shown.is_empty()))
}
