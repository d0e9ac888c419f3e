//! Minimal SVG line plots for reports.

use std::fmt::Write;

use crate::signal::EnvelopeSpectrum;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 50.0;

/// Vertical marker line at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub x: f64,
    pub label: String,
    /// Solid red when true, dashed grey otherwise.
    pub emphasized: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinePlot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub markers: Vec<Marker>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Tick positions at a 1-2-5 step covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return vec![lo];
    }
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 {
        "0".into()
    } else if !(1e-3..1e5).contains(&a) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn range(v: &[f64]) -> (f64, f64) {
    let (lo, hi) = v
        .iter()
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

impl LinePlot<'_> {
    /// Renders the plot. Long series are reduced to per-pixel min/max pairs.
    pub fn to_svg(&self) -> String {
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let (x0, x1) = range(self.xs);
        let (mut y0, mut y1) = range(self.ys);
        let pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            escape(self.title)
        );
        for t in ticks(x0, x1, 8) {
            let x = sx(t);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#e5e5e5"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                TOP + ph,
                TOP + ph + 16.0,
                tick_label(t)
            );
        }
        for t in ticks(y0, y1, 5) {
            let y = sy(t);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e5e5e5"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 10.0,
            escape(self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(self.y_label)
        );

        for m in &self.markers {
            if !(m.x >= x0 && m.x <= x1) {
                continue;
            }
            let x = sx(m.x);
            let (stroke, dash) = if m.emphasized {
                ("#d62728", "")
            } else {
                ("#999999", r#" stroke-dasharray="4 3""#)
            };
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="{stroke}"{dash}/><text x="{:.2}" y="{:.2}" fill="{stroke}" font-size="10">{}</text>"#,
                TOP + ph,
                x + 2.0,
                TOP + 12.0,
                escape(&m.label)
            );
        }

        let mut points = String::new();
        for (x, y) in decimate(self.xs, self.ys, pw as usize) {
            let _ = write!(points, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(
            s,
            r##"<polyline fill="none" stroke="#1f77b4" stroke-width="1" points="{}"/>"##,
            points.trim_end()
        );
        s.push_str("</svg>\n");
        s
    }
}

/// Time-domain waveform plot.
pub fn waveform_svg(title: &str, samples: &[f64], fs: f64) -> String {
    let t: Vec<f64> = (0..samples.len()).map(|i| i as f64 / fs).collect();
    LinePlot {
        title,
        x_label: "time [s]",
        y_label: "amplitude",
        xs: &t,
        ys: samples,
        markers: Vec::new(),
    }
    .to_svg()
}

/// Squared envelope spectrum up to `(orders + 1) * fault_freq_hz`, with a
/// marker at each harmonic order; orders listed in `detected` are emphasized.
pub fn ses_svg(title: &str, ses: &EnvelopeSpectrum, fault_freq_hz: f64, orders: usize, detected: &[usize]) -> String {
    let limit = ((orders + 1) as f64 * fault_freq_hz).min(ses.max_frequency_hz());
    let end = ses.frequencies_hz.partition_point(|f| *f <= limit).max(2);
    let markers = (1..=orders)
        .map(|k| Marker {
            x: k as f64 * fault_freq_hz,
            label: format!("{k}x"),
            emphasized: detected.contains(&k),
        })
        .collect();
    LinePlot {
        title,
        x_label: "frequency [Hz]",
        y_label: "squared envelope magnitude",
        xs: &ses.frequencies_hz[..end],
        ys: &ses.magnitudes[..end],
        markers,
    }
    .to_svg()
}

/// Keeps the extremes of each pixel column, in their original order.
fn decimate(xs: &[f64], ys: &[f64], columns: usize) -> Vec<(f64, f64)> {
    let n = xs.len().min(ys.len());
    let pts = || (0..n).map(|i| (xs[i], ys[i])).filter(|(x, y)| x.is_finite() && y.is_finite());
    if n <= 2 * columns || columns == 0 {
        return pts().collect();
    }
    let per = n.div_ceil(columns);
    let mut out = Vec::with_capacity(2 * columns);
    for c in 0..n.div_ceil(per) {
        let lo = c * per;
        let hi = (lo + per).min(n);
        let (mut imin, mut imax) = (lo, lo);
        for i in lo..hi {
            if ys[i] < ys[imin] {
                imin = i;
            }
            if ys[i] > ys[imax] {
                imax = i;
            }
        }
        let (a, b) = if imin <= imax { (imin, imax) } else { (imax, imin) };
        out.push((xs[a], ys[a]));
        if b != a {
            out.push((xs[b], ys[b]));
        }
    }
    out
}
