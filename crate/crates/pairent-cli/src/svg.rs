//! Minimal SVG emission for scatter and line figures. A thin renderer over
//! the CSV data; nothing downstream depends on it.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 56.0;

pub struct Figure {
    body: String,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Figure {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            body: String::new(),
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) / (self.x_max - self.x_min).max(1e-300) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y_min) / (self.y_max - self.y_min).max(1e-300) * (H - 2.0 * MARGIN)
    }

    pub fn scatter(&mut self, points: impl Iterator<Item = (f64, f64)>, color: &str) {
        for (x, y) in points {
            let _ = write!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{color}" fill-opacity="0.55"/>"#,
                self.px(x),
                self.py(y)
            );
        }
        self.body.push('\n');
    }

    pub fn line(&mut self, points: impl Iterator<Item = (f64, f64)>, color: &str) {
        let mut path = String::new();
        for (i, (x, y)) in points.enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(path, "{cmd}{:.2} {:.2} ", self.px(x), self.py(y));
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
        );
    }

    pub fn finish(self, x_label: &str, y_label: &str) -> String {
        let x0 = MARGIN;
        let x1 = W - MARGIN;
        let y0 = H - MARGIN;
        let y1 = MARGIN;
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" "#,
                r#"viewBox="0 0 {w} {h}">"#,
                r#"<rect width="{w}" height="{h}" fill="white"/>"#,
                "\n{body}",
                r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#,
                r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#,
                r#"<text x="{xc}" y="{h2}" text-anchor="middle" font-size="13">{xl}</text>"#,
                r#"<text x="14" y="{yc}" text-anchor="middle" font-size="13" "#,
                r#"transform="rotate(-90 14 {yc})">{yl}</text>"#,
                "</svg>\n"
            ),
            w = W,
            h = H,
            body = self.body,
            x0 = x0,
            x1 = x1,
            y0 = y0,
            y1 = y1,
            xc = (x0 + x1) / 2.0,
            h2 = H - 14.0,
            yc = (y0 + y1) / 2.0,
            xl = xml_escape(x_label),
            yl = xml_escape(y_label),
        )
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
