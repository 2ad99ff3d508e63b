//! Minimal SVG writer. Output depends only on the drawn data.

use std::fmt::Write;

pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// Linear map from a data rectangle to a pixel rectangle (y grows down).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl Frame {
    pub fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x_range.0) / (self.x_range.1 - self.x_range.0) * self.width
    }

    pub fn py(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y_range.0) / (self.y_range.1 - self.y_range.0) * self.height
    }

    /// `points` attribute value for data coordinates.
    pub fn points_attr(&self, pts: &[(f64, f64)]) -> String {
        let mut s = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.3},{:.3}", self.px(*x), self.py(*y));
        }
        s
    }
}

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            body: String::new(),
        }
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64, dash: Option<&str>) {
        let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        let _ = writeln!(
            self.body,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}/>",
            a.0, a.1, b.0, b.1
        );
    }

    pub fn polyline(&mut self, points: &str, stroke: &str, width: f64, series: &str) {
        let _ = writeln!(
            self.body,
            "<polyline data-series=\"{}\" points=\"{points}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>",
            escape(series)
        );
    }

    pub fn circle(&mut self, c: (f64, f64), r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{r}\" fill=\"{fill}\" fill-opacity=\"0.7\"/>",
            c.0, c.1
        );
    }

    pub fn rect(&mut self, corner: (f64, f64), size: (f64, f64), stroke: &str) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" stroke=\"{stroke}\"/>",
            corner.0, corner.1, size.0, size.1
        );
    }

    pub fn text(&mut self, at: (f64, f64), s: &str, size: f64, anchor: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"{size}\" font-family=\"sans-serif\" text-anchor=\"{anchor}\">{}</text>",
            at.0,
            at.1,
            escape(s)
        );
    }

    /// Box, ticks and tick labels of a frame.
    pub fn axes(&mut self, f: &Frame, x_ticks: &[f64], y_ticks: &[f64], x_label: &str, y_label: &str) {
        self.rect((f.left, f.top), (f.width, f.height), "#000");
        let bottom = f.top + f.height;
        for x in x_ticks {
            let px = f.px(*x);
            self.line((px, bottom), (px, bottom + 4.0), "#000", 1.0, None);
            self.text((px, bottom + 16.0), &format!("{x}"), 11.0, "middle");
        }
        for y in y_ticks {
            let py = f.py(*y);
            self.line((f.left - 4.0, py), (f.left, py), "#000", 1.0, None);
            self.text((f.left - 6.0, py + 4.0), &format!("{y}"), 11.0, "end");
        }
        self.text((f.left + f.width / 2.0, bottom + 34.0), x_label, 12.0, "middle");
        let _ = writeln!(
            self.body,
            "<text x=\"0\" y=\"0\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"translate({:.3},{:.3}) rotate(-90)\">{}</text>",
            f.left - 36.0,
            f.top + f.height / 2.0,
            escape(y_label)
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"#fff\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}
