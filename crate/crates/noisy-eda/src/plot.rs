//! Deterministic SVG rendering of anytime curves with standard-error
//! bands. The output is a pure function of the input curves, so plots can
//! be compared byte for byte across runs.

use std::fmt::Write as _;

use crate::csvio::CurveData;
use crate::error::{Error, Result};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;

/// Matplotlib's default categorical palette; colours repeat past ten
/// curves.
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Renders the curves into one chart: a shaded mean±stderr band and a mean
/// line per curve, with a legend keyed by curve label.
pub fn render_curves(curves: &[CurveData]) -> Result<String> {
    if curves.is_empty() || curves.iter().all(|c| c.points.is_empty()) {
        return Err(Error::EmptyPlot("no curve data supplied".into()));
    }

    let mut x_max = f64::MIN;
    let mut y_min = f64::MAX;
    let mut y_max = f64::MIN;
    for curve in curves {
        for p in &curve.points {
            x_max = x_max.max(p.evals as f64);
            y_min = y_min.min(p.mean - p.stderr);
            y_max = y_max.max(p.mean + p.stderr);
        }
    }
    let x_min = 0.0;
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let pad = (y_max - y_min) * 0.04;
    y_min -= pad;
    y_max += pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let to_y = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::with_capacity(16 * 1024);
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(
        svg,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    )
    .unwrap();

    // Grid and tick labels.
    let (x_ticks, x_step) = nice_ticks(x_min, x_max, 8);
    let (y_ticks, y_step) = nice_ticks(y_min, y_max, 6);
    for tick in &x_ticks {
        let x = to_x(*tick);
        writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{top:.2}" x2="{x:.2}" y2="{bottom:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            top = MARGIN_TOP,
            bottom = MARGIN_TOP + plot_h,
        )
        .unwrap();
        writeln!(
            svg,
            r##"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" fill="#333333" text-anchor="middle">{label}</text>"##,
            y = MARGIN_TOP + plot_h + 18.0,
            label = tick_label(*tick, x_step),
        )
        .unwrap();
    }
    for tick in &y_ticks {
        let y = to_y(*tick);
        writeln!(
            svg,
            r##"<line x1="{left:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            left = MARGIN_LEFT,
            right = MARGIN_LEFT + plot_w,
        )
        .unwrap();
        writeln!(
            svg,
            r##"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" fill="#333333" text-anchor="end" dominant-baseline="middle">{label}</text>"##,
            x = MARGIN_LEFT - 8.0,
            label = tick_label(*tick, y_step),
        )
        .unwrap();
    }

    // Frame and axis titles.
    writeln!(
        svg,
        r##"<rect x="{MARGIN_LEFT:.2}" y="{MARGIN_TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="#333333" stroke-width="1"/>"##
    )
    .unwrap();
    writeln!(
        svg,
        r##"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14" fill="#111111" text-anchor="middle">fitness evaluations</text>"##,
        x = MARGIN_LEFT + plot_w / 2.0,
        y = HEIGHT - 14.0,
    )
    .unwrap();
    writeln!(
        svg,
        r##"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14" fill="#111111" text-anchor="middle" transform="rotate(-90 {x:.2} {y:.2})">mean true fitness</text>"##,
        x = 20.0,
        y = MARGIN_TOP + plot_h / 2.0,
    )
    .unwrap();

    // Bands first so every mean line stays visible.
    for (i, curve) in curves.iter().enumerate() {
        if curve.points.is_empty() {
            continue;
        }
        let colour = PALETTE[i % PALETTE.len()];
        let mut band = String::new();
        for p in &curve.points {
            write!(
                band,
                "{:.2},{:.2} ",
                to_x(p.evals as f64),
                to_y(p.mean + p.stderr)
            )
            .unwrap();
        }
        for p in curve.points.iter().rev() {
            write!(
                band,
                "{:.2},{:.2} ",
                to_x(p.evals as f64),
                to_y(p.mean - p.stderr)
            )
            .unwrap();
        }
        writeln!(
            svg,
            r#"<polygon points="{}" fill="{colour}" fill-opacity="0.18" stroke="none"/>"#,
            band.trim_end(),
        )
        .unwrap();
    }
    for (i, curve) in curves.iter().enumerate() {
        if curve.points.is_empty() {
            continue;
        }
        let colour = PALETTE[i % PALETTE.len()];
        let mut line = String::new();
        for p in &curve.points {
            write!(line, "{:.2},{:.2} ", to_x(p.evals as f64), to_y(p.mean)).unwrap();
        }
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            line.trim_end(),
        )
        .unwrap();
    }

    // Legend, top left inside the frame.
    for (i, curve) in curves.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 16.0 + i as f64 * 18.0;
        writeln!(
            svg,
            r#"<line x1="{x1:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="{colour}" stroke-width="2.5"/>"#,
            x1 = MARGIN_LEFT + 12.0,
            x2 = MARGIN_LEFT + 34.0,
        )
        .unwrap();
        writeln!(
            svg,
            r##"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" fill="#111111" dominant-baseline="middle">{label}</text>"##,
            x = MARGIN_LEFT + 40.0,
            label = escape_text(&curve.label),
        )
        .unwrap();
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Evenly spaced ticks at a "nice" step (1, 2 or 5 times a power of ten),
/// covering `[min, max]` with roughly `target` intervals.
fn nice_ticks(min: f64, max: f64, target: usize) -> (Vec<f64>, f64) {
    let raw_step = (max - min) / target as f64;
    let magnitude = 10f64.powf(raw_step.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| *s >= raw_step)
        .expect("10 * magnitude always covers raw_step");
    let mut ticks = Vec::new();
    let mut tick = (min / step).ceil() * step;
    while tick <= max + step * 1e-9 {
        ticks.push(tick);
        tick += step;
    }
    (ticks, step)
}

fn tick_label(value: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    format!("{value:.decimals$}")
}
