//! Minimal standalone SVG line/band/scatter plots.

use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    Line { name: String, x: Vec<f64>, y: Vec<f64> },
    Points { name: String, x: Vec<f64>, y: Vec<f64> },
    /// Filled region between `lo` and `hi`, with both edges drawn.
    Band { name: String, x: Vec<f64>, lo: Vec<f64>, hi: Vec<f64> },
    /// Closed outline, e.g. a credible ellipse.
    Closed { name: String, x: Vec<f64>, y: Vec<f64> },
    /// Histogram with `counts.len() + 1` bin edges.
    Bars { name: String, edges: Vec<f64>, counts: Vec<f64> },
}

impl Series {
    fn name(&self) -> &str {
        match self {
            Series::Line { name, .. }
            | Series::Points { name, .. }
            | Series::Band { name, .. }
            | Series::Closed { name, .. }
            | Series::Bars { name, .. } => name,
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Series::Line { x, .. } | Series::Points { x, .. } | Series::Band { x, .. } | Series::Closed { x, .. } => x.is_empty(),
            Series::Bars { counts, .. } => counts.is_empty(),
        }
    }

    fn extent(&self) -> Option<(f64, f64, f64, f64)> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = match self {
            Series::Line { x, y, .. } | Series::Points { x, y, .. } | Series::Closed { x, y, .. } => (x.clone(), y.clone()),
            Series::Band { x, lo, hi, .. } => (x.clone(), lo.iter().chain(hi).cloned().collect()),
            Series::Bars { edges, counts, .. } => (edges.clone(), counts.iter().cloned().chain([0.0]).collect()),
        };
        let fin = |v: &[f64]| {
            v.iter()
                .filter(|a| a.is_finite())
                .fold(None, |acc: Option<(f64, f64)>, &a| Some(acc.map_or((a, a), |(l, h)| (l.min(a), h.max(a)))))
        };
        let (x0, x1) = fin(&xs)?;
        let (y0, y1) = fin(&ys)?;
        Some((x0, x1, y0, y1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const W: f64 = 640.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#555555"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)
    }

    fn path(&self, x: &[f64], y: &[f64]) -> String {
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(i, (&a, &b))| format!("{}{:.2},{:.2}", if i == 0 { "M" } else { " L" }, self.px(a), self.py(b)))
            .collect()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step).floor() as i64;
    (start..=end).map(|k| k as f64 * step).collect()
}

/// Renders the plot; empty series are skipped and left out of the legend.
pub fn emit_svg(plot: &Plot) -> String {
    let live: Vec<&Series> = plot.series.iter().filter(|s| !s.is_empty()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = live
        .iter()
        .filter_map(|s| s.extent())
        .fold((f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY), |a, b| {
            (a.0.min(b.0), a.1.max(b.1), a.2.min(b.2), a.3.max(b.3))
        });
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let pad = 0.04 * (y1 - y0);
    let f = Frame { x0, x1, y0: y0 - pad, y1: y1 + pad };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(&plot.title));

    let (bx, by) = (H - BOTTOM, LEFT);
    let _ = writeln!(
        out,
        r#"<g stroke="black" fill="none"><path d="M{LEFT},{TOP} L{LEFT},{bx} L{},{bx}"/></g>"#,
        W - RIGHT
    );
    for t in ticks(f.x0, f.x1) {
        let x = f.px(t);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{bx}" x2="{x:.2}" y2="{}" stroke="black"/>"#, bx + 5.0);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, bx + 18.0, fmt_tick(t));
    }
    for t in ticks(f.y0, f.y1) {
        let y = f.py(t);
        let _ = writeln!(out, r#"<line x1="{}" y1="{y:.2}" x2="{by}" y2="{y:.2}" stroke="black"/>"#, by - 5.0);
        let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, by - 8.0, y + 4.0, fmt_tick(t));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (LEFT + W - RIGHT) / 2.0, H - 12.0, escape(&plot.x_label));
    let _ = writeln!(
        out,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        escape(&plot.y_label)
    );

    for (k, s) in live.iter().enumerate() {
        let c = PALETTE[k % PALETTE.len()];
        match s {
            Series::Line { x, y, .. } => {
                let _ = writeln!(out, r#"<path class="line" d="{}" stroke="{c}" fill="none" stroke-width="1.5"/>"#, f.path(x, y));
            }
            Series::Points { x, y, .. } => {
                for (a, b) in x.iter().zip(y) {
                    let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{c}"/>"#, f.px(*a), f.py(*b));
                }
            }
            Series::Band { x, lo, hi, .. } => {
                let rx: Vec<f64> = x.iter().rev().cloned().collect();
                let rh: Vec<f64> = hi.iter().rev().cloned().collect();
                let xs: Vec<f64> = x.iter().cloned().chain(rx).collect();
                let ys: Vec<f64> = lo.iter().cloned().chain(rh).collect();
                let _ = writeln!(out, r#"<path class="band" d="{} Z" fill="{c}" fill-opacity="0.25" stroke="none"/>"#, f.path(&xs, &ys));
                let _ = writeln!(out, r#"<path class="edge" d="{}" stroke="{c}" fill="none"/>"#, f.path(x, lo));
                let _ = writeln!(out, r#"<path class="edge" d="{}" stroke="{c}" fill="none"/>"#, f.path(x, hi));
            }
            Series::Closed { x, y, .. } => {
                let _ = writeln!(out, r#"<path class="closed" d="{} Z" stroke="{c}" fill="none" stroke-width="1.5"/>"#, f.path(x, y));
            }
            Series::Bars { edges, counts, .. } => {
                for (i, &n) in counts.iter().enumerate() {
                    let (l, r) = (f.px(edges[i]), f.px(edges[i + 1]));
                    let (t, b) = (f.py(n), f.py(0.0));
                    let _ = writeln!(
                        out,
                        r#"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="{c}" fill-opacity="0.5"/>"#,
                        (r - l).max(0.0),
                        (b - t).max(0.0)
                    );
                }
            }
        }
    }

    let _ = writeln!(out, r#"<g class="legend">"#);
    for (k, s) in live.iter().enumerate() {
        let y = TOP + 8.0 + 16.0 * k as f64;
        let x = W - RIGHT - 170.0;
        let c = PALETTE[k % PALETTE.len()];
        let _ = writeln!(out, r#"<rect x="{x}" y="{}" width="12" height="8" fill="{c}"/>"#, y - 8.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 18.0, escape(s.name()));
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

fn fmt_tick(t: f64) -> String {
    let s = format!("{t:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Equal-width histogram of `values` with `bins` bins.
pub fn histogram(values: &[f64], bins: usize) -> (Vec<f64>, Vec<f64>) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0.0; bins];
    for &v in values {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1.0;
    }
    (edges, counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_series_left_out_of_legend() {
        let plot = Plot {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![
                Series::Line { name: "kept".into(), x: vec![0.0, 1.0], y: vec![0.0, 1.0] },
                Series::Points { name: "dropped".into(), x: vec![], y: vec![] },
            ],
        };
        let svg = emit_svg(&plot);
        assert!(svg.contains(">kept<"));
        assert!(!svg.contains("dropped"));
    }

    #[test]
    fn band_is_one_polygon_plus_two_edges() {
        let x: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let lo: Vec<f64> = x.iter().map(|v| v - 1.0).collect();
        let hi: Vec<f64> = x.iter().map(|v| v + 1.0).collect();
        let svg = emit_svg(&Plot {
            title: "band".into(),
            x_label: "up".into(),
            y_label: "us".into(),
            series: vec![Series::Band { name: "95%".into(), x, lo, hi }],
        });
        assert_eq!(svg.matches(r#"class="band""#).count(), 1);
        assert_eq!(svg.matches(r#"class="edge""#).count(), 2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn histogram_counts_everything() {
        let v: Vec<f64> = (0..100).map(|i| i as f64 / 10.0).collect();
        let (edges, counts) = histogram(&v, 7);
        assert_eq!(edges.len(), 8);
        assert_eq!(counts.iter().sum::<f64>(), 100.0);
    }
}
