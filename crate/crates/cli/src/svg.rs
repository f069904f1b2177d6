//! Minimal self-contained SVG histograms with overlaid reference curves.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;
const TICKS: usize = 5;

#[derive(Clone, Debug)]
pub struct Curve {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    /// `f` sampled at `count` evenly spaced points of [lo, hi].
    pub fn sampled(label: &str, color: &'static str, lo: f64, hi: f64, count: usize, f: impl Fn(f64) -> f64) -> Self {
        let points = (0..count)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (count - 1) as f64;
                (x, f(x))
            })
            .collect();
        Curve { label: label.to_string(), color, points }
    }
}

#[derive(Clone, Debug)]
pub struct HistogramPlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Bin edges, one more than `densities`.
    pub edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub curves: Vec<Curve>,
}

/// Normalized histogram of the values inside [lo, hi]. Values outside the
/// range are dropped; the densities integrate to the retained fraction.
pub fn density_histogram(data: &[f64], lo: f64, hi: f64, bins: usize) -> (Vec<f64>, Vec<f64>) {
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0usize; bins];
    for &x in data {
        if x >= lo && x <= hi {
            let b = (((x - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
    }
    let total = data.len().max(1) as f64;
    let densities = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    (edges, densities)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl HistogramPlot {
    pub fn render(&self) -> String {
        let x0 = self.edges.first().copied().unwrap_or(0.0);
        let x1 = self.edges.last().copied().unwrap_or(1.0);
        let curve_max = self.curves.iter().flat_map(|c| c.points.iter().map(|p| p.1)).fold(0.0, f64::max);
        let bar_max = self.densities.iter().copied().fold(0.0, f64::max);
        let y1 = (bar_max.max(curve_max) * 1.1).max(1e-12);
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| TOP + plot_h - (y.clamp(0.0, y1) / y1) * plot_h;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        for (i, &d) in self.densities.iter().enumerate() {
            let (a, b) = (sx(self.edges[i]), sx(self.edges[i + 1]));
            let top = sy(d);
            let _ = writeln!(
                s,
                r##"<rect x="{a:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
                (b - a).max(0.0),
                (TOP + plot_h - top).max(0.0)
            );
        }
        for c in &self.curves {
            let pts: Vec<String> = c.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
                pts.join(" "),
                c.color
            );
        }
        // Axes and ticks.
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + plot_h,
            LEFT + plot_w,
            TOP + plot_h
        );
        let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#, TOP + plot_h);
        for i in 0..=TICKS {
            let xv = x0 + (x1 - x0) * i as f64 / TICKS as f64;
            let yv = y1 * i as f64 / TICKS as f64;
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.2}</text>"#,
                TOP + plot_h,
                TOP + plot_h + 5.0,
                TOP + plot_h + 18.0
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.2}</text>"#,
                LEFT - 5.0,
                LEFT - 8.0,
                py + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        );
        for (i, c) in self.curves.iter().enumerate() {
            let y = TOP + 14.0 + 18.0 * i as f64;
            let x = LEFT + plot_w - 150.0;
            let _ = writeln!(
                s,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
                x + 24.0,
                c.color,
                x + 30.0,
                y + 4.0,
                escape(&c.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
