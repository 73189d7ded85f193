//! Minimal SVG renderings: polyline plots and cell heatmaps.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// A straight line between two points in data coordinates.
pub type Segment = ((f64, f64), (f64, f64));

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> Self {
        let mut f = Frame { x: (f64::INFINITY, f64::NEG_INFINITY), y: (f64::INFINITY, f64::NEG_INFINITY) };
        for &(x, y) in points.filter(|p| p.0.is_finite() && p.1.is_finite()) {
            f.x = (f.x.0.min(x), f.x.1.max(x));
            f.y = (f.y.0.min(y), f.y.1.max(y));
        }
        for r in [&mut f.x, &mut f.y] {
            if !(r.1 > r.0) {
                *r = if r.0.is_finite() { (r.0 - 0.5, r.0 + 0.5) } else { (0.0, 1.0) };
            }
        }
        f
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn open(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(out, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, r - l, b - t);
    let _ = writeln!(out, r#"<text x="{l}" y="{}">{:.4}</text>"#, b + 16.0, frame.x.0);
    let _ = writeln!(out, r#"<text x="{r}" y="{}" text-anchor="end">{:.4}</text>"#, b + 16.0, frame.x.1);
    let _ = writeln!(out, r#"<text x="{}" y="{b}" text-anchor="end">{:.4}</text>"#, l - 4.0, frame.y.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.4}</text>"#, l - 4.0, t + 12.0, frame.y.1);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, 0.5 * WIDTH, HEIGHT - 16.0);
    let _ = writeln!(out, r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">{y_label}</text>"#, 0.5 * HEIGHT, 0.5 * HEIGHT);
}

/// Polylines broken at non-finite values.
pub fn line_plot(series: &[Series], x_label: &str, y_label: &str) -> String {
    let frame = Frame::fit(series.iter().flat_map(|s| s.points.iter()));
    let mut out = String::new();
    open(&mut out, &frame, x_label, y_label);
    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        for run in s.points.split(|p| !(p.0.is_finite() && p.1.is_finite())).filter(|r| r.len() > 1) {
            let path: Vec<String> = run.iter().map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y))).collect();
            let _ = writeln!(out, r#"<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{}"/>"#, path.join(" "));
        }
        let _ = writeln!(out, r#"<text x="{}" y="{}" fill="{colour}">{}</text>"#, WIDTH - MARGIN + 6.0, MARGIN + 14.0 * (i + 1) as f64, s.label);
    }
    out.push_str("</svg>\n");
    out
}

fn colour(t: f64) -> String {
    // dark blue through teal to yellow
    let stops = [(0.0, [68.0, 1.0, 84.0]), (0.5, [33.0, 145.0, 140.0]), (1.0, [253.0, 231.0, 37.0])];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let (a, b) = if t < 0.5 { (stops[0], stops[1]) } else { (stops[1], stops[2]) };
    let s = (t - a.0) / (b.0 - a.0);
    let c: Vec<u8> = (0..3).map(|i| (a.1[i] + s * (b.1[i] - a.1[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Each grid cell is filled with the bilinear value at its centre;
/// `rows[j][i]` is the value at `(x[i], y[j])`. `guides` are straight lines
/// given by two end points in data coordinates.
pub fn heatmap(x: &[f64], y: &[f64], rows: &[Vec<f64>], guides: &[Segment], x_label: &str, y_label: &str) -> String {
    let frame = Frame { x: (x[0], x[x.len() - 1]), y: (y[0], y[y.len() - 1]) };
    let finite = rows.iter().flatten().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = String::new();
    open(&mut out, &frame, x_label, y_label);
    for j in 0..y.len() - 1 {
        for i in 0..x.len() - 1 {
            let v = 0.25 * (rows[j][i] + rows[j][i + 1] + rows[j + 1][i] + rows[j + 1][i + 1]);
            let (x0, x1) = (frame.px(x[i]), frame.px(x[i + 1]));
            let (y0, y1) = (frame.py(y[j + 1]), frame.py(y[j]));
            let _ = writeln!(
                out,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x1 - x0 + 0.05,
                y1 - y0 + 0.05,
                colour((v - lo) / span)
            );
        }
    }
    for &((xa, ya), (xb, yb)) in guides {
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="white" stroke-dasharray="4 3"/>"#,
            frame.px(xa),
            frame.py(ya),
            frame.px(xb),
            frame.py(yb)
        );
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}">min {lo:.4}, max {hi:.4}</text>"#, MARGIN, MARGIN - 8.0);
    out.push_str("</svg>\n");
    out
}
