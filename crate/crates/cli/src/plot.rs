//! Minimal SVG line plots arranged as a grid of panels.

use std::fmt::Write;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 220.0;
const MARGIN: f64 = 40.0;
const LEGEND_H: f64 = 24.0;

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Drawn as a horizontal reference line at its first `y`.
    pub reference: bool,
}

pub struct Panel {
    pub title: String,
    pub series: Vec<Series>,
}

pub struct Figure {
    pub x_label: String,
    pub y_label: String,
    pub panels: Vec<Panel>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 4.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(t);
        t += step;
    }
    out
}

fn tick_label(t: f64) -> String {
    let r = (t * 1e6).round() / 1e6;
    format!("{}", if r == 0.0 { 0.0 } else { r })
}

impl Figure {
    /// Legend labels in first-seen order across panels.
    fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.panels {
            for s in &p.series {
                if !out.contains(&s.label) {
                    out.push(s.label.clone());
                }
            }
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let cols = self.panels.len().clamp(1, 3);
        let rows = self.panels.len().div_ceil(cols).max(1);
        let width = cols as f64 * (PANEL_W + MARGIN) + MARGIN;
        let labels = self.labels();
        let mut legend = Vec::with_capacity(labels.len());
        let (mut lx, mut ly) = (MARGIN, 14.0);
        for label in &labels {
            let w = 30.0 + 6.0 * label.chars().count() as f64;
            if lx + w > width - MARGIN && lx > MARGIN {
                lx = MARGIN;
                ly += 16.0;
            }
            legend.push((lx, ly));
            lx += w;
        }
        let legend_h = ly + LEGEND_H - 14.0;
        let height = rows as f64 * (PANEL_H + MARGIN) + MARGIN + legend_h;
        let color = |l: &str| PALETTE[labels.iter().position(|x| x == l).unwrap_or(0) % PALETTE.len()];
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for (label, (x, y)) in labels.iter().zip(&legend) {
            let _ = writeln!(
                s,
                r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                x + 20.0,
                color(label),
                x + 24.0,
                y + 4.0,
                esc(label)
            );
        }
        for (k, panel) in self.panels.iter().enumerate() {
            let ox = MARGIN + (k % cols) as f64 * (PANEL_W + MARGIN);
            let oy = legend_h + MARGIN + (k / cols) as f64 * (PANEL_H + MARGIN);
            self.panel(&mut s, panel, ox, oy, &color);
        }
        s.push_str("</svg>\n");
        s
    }

    fn panel(&self, s: &mut String, panel: &Panel, ox: f64, oy: f64, color: &dyn Fn(&str) -> &'static str) {
        let finite = |p: &&(f64, f64)| p.0.is_finite() && p.1.is_finite();
        let pts: Vec<(f64, f64)> = panel.series.iter().flat_map(|x| x.points.iter().filter(finite).copied()).collect();
        let _ = writeln!(s, r#"<rect x="{ox}" y="{oy}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="black"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, ox + PANEL_W / 2.0, oy - 6.0, esc(&panel.title));
        if pts.is_empty() {
            return;
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in &pts {
            x0 = x0.min(*x);
            x1 = x1.max(*x);
            y0 = y0.min(*y);
            y1 = y1.max(*y);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let sx = |x: f64| ox + (x - x0) / (x1 - x0) * PANEL_W;
        let sy = |y: f64| oy + PANEL_H - (y - y0) / (y1 - y0) * PANEL_H;
        for t in ticks(x0, x1) {
            let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, sx(t), oy + PANEL_H + 12.0, tick_label(t));
        }
        for t in ticks(y0, y1) {
            let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, ox - 3.0, sy(t) + 3.0, tick_label(t));
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            ox + PANEL_W / 2.0,
            oy + PANEL_H + 26.0,
            esc(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
            ox - 28.0,
            oy + PANEL_H / 2.0,
            ox - 28.0,
            oy + PANEL_H / 2.0,
            esc(&self.y_label)
        );
        for series in &panel.series {
            let c = color(&series.label);
            if series.reference {
                if let Some((_, y)) = series.points.iter().find(|p| p.1.is_finite()) {
                    let _ = writeln!(
                        s,
                        r#"<line x1="{ox}" y1="{0}" x2="{1}" y2="{0}" stroke="{c}" stroke-dasharray="4 3"/>"#,
                        sy(*y),
                        ox + PANEL_W
                    );
                }
                continue;
            }
            let path: Vec<String> =
                series.points.iter().filter(finite).map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        }
    }
}
