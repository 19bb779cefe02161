//! Self-contained SVG figures: screen histogram, angular density, impacts.

use std::fmt::Write as _;

use crate::experiment::ScreenHistogram;
use crate::rng::RngStream;
use crate::trajectory::DetectionEvent;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 64.0;
const TICKS: usize = 5;
/// Stream key for the display-only transverse jitter of the impact panel.
const DISPLAY_STREAM_SALT: u64 = 0x6a09_e667_f3bc_c908;

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        Frame {
            x: widen(x),
            y: widen(y),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(out: &mut String, frame: &Frame, title: &str, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
        let xp = frame.px(xv);
        let _ = writeln!(
            out,
            r#"<line x1="{xp:.2}" y1="{y0:.2}" x2="{xp:.2}" y2="{:.2}" stroke="black"/><text x="{xp:.2}" y="{:.2}" text-anchor="middle">{xv:.3e}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
        let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
        let yp = frame.py(yv);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{yp:.2}" x2="{x0:.2}" y2="{yp:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3e}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            yp + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn polyline(out: &mut String, frame: &Frame, points: impl IntoIterator<Item = (f64, f64)>, colour: &str) {
    out.push_str(r#"<polyline fill="none" stroke=""#);
    out.push_str(colour);
    out.push_str(r#"" stroke-width="1.5" points=""#);
    for (i, (x, y)) in points.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.2},{:.2}", frame.px(x), frame.py(y));
    }
    out.push_str("\"/>\n");
}

/// Cross section of the pattern: counts per bin with the expected counts
/// overlaid.
pub fn histogram_svg(hist: &ScreenHistogram, title: &str) -> String {
    let lo = hist.edges[0];
    let hi = *hist.edges.last().unwrap_or(&lo);
    let top = hist
        .counts
        .iter()
        .map(|&c| c as f64)
        .chain(hist.expected.iter().copied())
        .fold(0.0, f64::max)
        * 1.05;
    let frame = Frame::new((lo, hi), (0.0, top.max(1.0)));
    let mut out = String::new();
    open(&mut out, &frame, title, "screen position y (m)", "counts per bin");
    for (i, &c) in hist.counts.iter().enumerate() {
        let (x0, x1) = (frame.px(hist.edges[i]), frame.px(hist.edges[i + 1]));
        let (y0, y1) = (frame.py(0.0), frame.py(c as f64));
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="#7aa6d8" stroke="#2d5c8a" stroke-width="0.5"/>"##,
            x1 - x0,
            y0 - y1
        );
    }
    let centers = hist.centers();
    polyline(
        &mut out,
        &frame,
        centers.iter().copied().zip(hist.expected.iter().copied()),
        "#c0392b",
    );
    out.push_str("</svg>\n");
    out
}

/// Angular probability density over the scattering angle.
pub fn density_svg(thetas: &[f64], density: &[f64], title: &str) -> String {
    let lo = thetas.first().copied().unwrap_or(0.0);
    let hi = thetas.last().copied().unwrap_or(0.0);
    let top = density.iter().copied().fold(0.0, f64::max) * 1.05;
    let frame = Frame::new((lo, hi), (0.0, top));
    let mut out = String::new();
    open(
        &mut out,
        &frame,
        title,
        "scattering angle theta (rad)",
        "probability density (1/rad)",
    );
    polyline(
        &mut out,
        &frame,
        thetas.iter().copied().zip(density.iter().copied()),
        "#2d5c8a",
    );
    out.push_str("</svg>\n");
    out
}

/// Impacts on the screen. The vertical coordinate is a uniform display
/// jitter (the physical z is fixed); it is drawn from its own stream so the
/// figure is reproducible.
pub fn impacts_svg(events: &[DetectionEvent], range: (f64, f64), seed: u64, title: &str) -> String {
    let frame = Frame::new(range, (0.0, 1.0));
    let mut out = String::new();
    open(
        &mut out,
        &frame,
        title,
        "screen position y (m)",
        "display jitter (arbitrary)",
    );
    let mut rng = RngStream::new(seed ^ DISPLAY_STREAM_SALT, u64::MAX);
    for e in events {
        let jitter = rng.next_f64();
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="0.8" fill="black"/>"#,
            frame.px(e.y_det),
            frame.py(jitter)
        );
    }
    out.push_str("</svg>\n");
    out
}
