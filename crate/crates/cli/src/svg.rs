//! Minimal SVG charts: line plots, interval plots and box plots.

use std::fmt::Write as _;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dotted,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: Option<String>,
    pub color: String,
    pub stroke: Stroke,
    pub points: Vec<(f64, f64)>,
}

/// A vertical bar from `lo` to `hi` with a marker at `center`.
#[derive(Debug, Clone, Copy)]
pub struct Interval {
    pub x: f64,
    pub lo: f64,
    pub center: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BoxStats {
    pub x: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone)]
pub struct Group<T> {
    pub label: String,
    pub color: String,
    pub items: Vec<T>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Roughly five round tick values covering `[lo, hi]`.
pub fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{:.4}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Shared axes, scales and legend for every chart.
pub struct Canvas {
    title: String,
    x_label: String,
    y_label: String,
    x_range: (f64, f64),
    y_range: (f64, f64),
    x_ticks: Vec<f64>,
    body: String,
    legend: Vec<(String, String, Stroke)>,
}

impl Canvas {
    pub fn new(
        title: &str,
        x_label: &str,
        y_label: &str,
        x_range: (f64, f64),
        y_values: &[f64],
    ) -> Self {
        let finite: Vec<f64> = y_values.iter().copied().filter(|v| v.is_finite()).collect();
        let (mut lo, mut hi) = finite
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-9 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        let x_ticks = nice_ticks(x_range.0, x_range.1);
        Canvas {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            x_range: (x_range.0 - 0.5, x_range.1 + 0.5),
            y_range: (lo - pad, hi + pad),
            x_ticks,
            body: String::new(),
            legend: Vec::new(),
        }
    }

    /// Uses integer ticks at exactly these x positions.
    pub fn with_x_ticks(mut self, ticks: Vec<f64>) -> Self {
        self.x_ticks = ticks;
        self
    }

    pub fn sx(&self, x: f64) -> f64 {
        let (a, b) = self.x_range;
        LEFT + (x - a) / (b - a) * (WIDTH - LEFT - RIGHT)
    }

    pub fn sy(&self, y: f64) -> f64 {
        let (a, b) = self.y_range;
        HEIGHT - BOTTOM - (y - a) / (b - a) * (HEIGHT - TOP - BOTTOM)
    }

    fn dash(stroke: Stroke) -> &'static str {
        match stroke {
            Stroke::Solid => "",
            Stroke::Dotted => " stroke-dasharray=\"2,3\"",
        }
    }

    pub fn polyline(&mut self, s: &Series) {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", self.sx(x), self.sy(y)))
            .collect();
        let _ = writeln!(
            self.body,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"{} points=\"{}\"/>",
            s.color,
            Self::dash(s.stroke),
            pts.join(" ")
        );
        if let Some(label) = &s.label {
            self.legend.push((label.clone(), s.color.clone(), s.stroke));
        }
    }

    /// Horizontal line across the plot area.
    pub fn hline(&mut self, y: f64, color: &str, label: Option<&str>) {
        let (x0, x1) = (self.sx(self.x_range.0), self.sx(self.x_range.1));
        let yy = self.sy(y);
        let _ = writeln!(
            self.body,
            "<line x1=\"{x0:.2}\" y1=\"{yy:.2}\" x2=\"{x1:.2}\" y2=\"{yy:.2}\" stroke=\"{color}\" stroke-width=\"1\"/>"
        );
        if let Some(l) = label {
            self.legend
                .push((l.to_string(), color.to_string(), Stroke::Solid));
        }
    }

    pub fn interval(&mut self, iv: &Interval, color: &str) {
        let x = self.sx(iv.x);
        let (lo, hi, c) = (self.sy(iv.lo), self.sy(iv.hi), self.sy(iv.center));
        let _ = writeln!(
            self.body,
            "<line x1=\"{x:.2}\" y1=\"{lo:.2}\" x2=\"{x:.2}\" y2=\"{hi:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"/>\
             <line x1=\"{:.2}\" y1=\"{lo:.2}\" x2=\"{:.2}\" y2=\"{lo:.2}\" stroke=\"{color}\"/>\
             <line x1=\"{:.2}\" y1=\"{hi:.2}\" x2=\"{:.2}\" y2=\"{hi:.2}\" stroke=\"{color}\"/>\
             <circle cx=\"{x:.2}\" cy=\"{c:.2}\" r=\"3\" fill=\"{color}\"/>",
            x - 3.0,
            x + 3.0,
            x - 3.0,
            x + 3.0
        );
    }

    pub fn boxplot(&mut self, b: &BoxStats, color: &str, half_width: f64) {
        let x = self.sx(b.x);
        let w = half_width;
        let [min, q1, med, q3, max] = [b.min, b.q1, b.median, b.q3, b.max].map(|v| self.sy(v));
        let _ = writeln!(
            self.body,
            "<line x1=\"{x:.2}\" y1=\"{min:.2}\" x2=\"{x:.2}\" y2=\"{q1:.2}\" stroke=\"{color}\"/>\
             <line x1=\"{x:.2}\" y1=\"{q3:.2}\" x2=\"{x:.2}\" y2=\"{max:.2}\" stroke=\"{color}\"/>\
             <rect x=\"{:.2}\" y=\"{q3:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{color}\" fill-opacity=\"0.25\" stroke=\"{color}\"/>\
             <line x1=\"{:.2}\" y1=\"{med:.2}\" x2=\"{:.2}\" y2=\"{med:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            x - w,
            2.0 * w,
            (q1 - q3).max(0.5),
            x - w,
            x + w
        );
    }

    pub fn legend_entry(&mut self, label: &str, color: &str, stroke: Stroke) {
        self.legend
            .push((label.to_string(), color.to_string(), stroke));
    }

    /// Horizontal pixel width of one x unit.
    pub fn x_unit(&self) -> f64 {
        self.sx(1.0) - self.sx(0.0)
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
        );
        let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>",
            (LEFT + WIDTH - RIGHT) / 2.0,
            escape(&self.title)
        );
        let (px0, px1) = (LEFT, WIDTH - RIGHT);
        let (py0, py1) = (TOP, HEIGHT - BOTTOM);
        for t in nice_ticks(self.y_range.0, self.y_range.1) {
            let y = self.sy(t);
            let _ = writeln!(
                out,
                "<line x1=\"{px0}\" y1=\"{y:.2}\" x2=\"{px1}\" y2=\"{y:.2}\" stroke=\"#e5e5e5\"/>\
                 <text x=\"{:.1}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
                px0 - 6.0,
                y + 4.0,
                fmt_tick(t)
            );
        }
        for &t in &self.x_ticks {
            let x = self.sx(t);
            let _ = writeln!(
                out,
                "<line x1=\"{x:.2}\" y1=\"{py1}\" x2=\"{x:.2}\" y2=\"{:.1}\" stroke=\"black\"/>\
                 <text x=\"{x:.2}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
                py1 + 5.0,
                py1 + 19.0,
                fmt_tick(t)
            );
        }
        let _ = writeln!(
            out,
            "<rect x=\"{px0}\" y=\"{py0}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            px1 - px0,
            py1 - py0
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            (px0 + px1) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text transform=\"translate(18,{:.1}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
            (py0 + py1) / 2.0,
            escape(&self.y_label)
        );
        out.push_str(&self.body);
        for (i, (label, color, stroke)) in self.legend.iter().enumerate() {
            let y = TOP + 12.0 + 18.0 * i as f64;
            let x = WIDTH - RIGHT + 14.0;
            let _ = writeln!(
                out,
                "<line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2\"{}/>\
                 <text x=\"{}\" y=\"{}\">{}</text>",
                x + 22.0,
                Self::dash(*stroke),
                x + 28.0,
                y + 4.0,
                escape(label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Series plot with an optional horizontal reference line.
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    reference: Option<(f64, &str)>,
) -> String {
    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let mut ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .collect();
    if let Some((r, _)) = reference {
        ys.push(r);
    }
    let x_range = bounds(&xs);
    let mut c =
        Canvas::new(title, x_label, y_label, x_range, &ys).with_x_ticks(integer_ticks(x_range));
    if let Some((r, label)) = reference {
        c.hline(r, "black", Some(label));
    }
    for s in series {
        c.polyline(s);
    }
    c.finish()
}

/// One interval per group at each x, with groups side by side.
pub fn interval_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    groups: &[Group<Interval>],
) -> String {
    let xs: Vec<f64> = groups
        .iter()
        .flat_map(|g| g.items.iter().map(|i| i.x))
        .collect();
    let ys: Vec<f64> = groups
        .iter()
        .flat_map(|g| g.items.iter().flat_map(|i| [i.lo, i.hi]))
        .collect();
    let x_range = bounds(&xs);
    let mut c =
        Canvas::new(title, x_label, y_label, x_range, &ys).with_x_ticks(integer_ticks(x_range));
    let k = groups.len().max(1) as f64;
    for (gi, g) in groups.iter().enumerate() {
        let offset = (gi as f64 - (k - 1.0) / 2.0) * 0.7 / k;
        for iv in &g.items {
            c.interval(
                &Interval {
                    x: iv.x + offset,
                    ..*iv
                },
                &g.color,
            );
        }
        c.legend_entry(&g.label, &g.color, Stroke::Solid);
    }
    c.finish()
}

/// One box per group at each x, with groups side by side.
pub fn box_chart(title: &str, x_label: &str, y_label: &str, groups: &[Group<BoxStats>]) -> String {
    let xs: Vec<f64> = groups
        .iter()
        .flat_map(|g| g.items.iter().map(|b| b.x))
        .collect();
    let ys: Vec<f64> = groups
        .iter()
        .flat_map(|g| g.items.iter().flat_map(|b| [b.min, b.max]))
        .collect();
    let x_range = bounds(&xs);
    let mut c =
        Canvas::new(title, x_label, y_label, x_range, &ys).with_x_ticks(integer_ticks(x_range));
    let k = groups.len().max(1) as f64;
    let half = 0.35 / k * c.x_unit();
    for (gi, g) in groups.iter().enumerate() {
        let offset = (gi as f64 - (k - 1.0) / 2.0) * 0.8 / k;
        for b in &g.items {
            c.boxplot(
                &BoxStats {
                    x: b.x + offset,
                    ..*b
                },
                &g.color,
                half,
            );
        }
        c.legend_entry(&g.label, &g.color, Stroke::Solid);
    }
    c.finish()
}

fn bounds(xs: &[f64]) -> (f64, f64) {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn integer_ticks((lo, hi): (f64, f64)) -> Vec<f64> {
    let (lo, hi) = (lo.ceil() as i64, hi.floor() as i64);
    let step = ((hi - lo) / 12 + 1).max(1);
    (lo..=hi).step_by(step as usize).map(|v| v as f64).collect()
}
