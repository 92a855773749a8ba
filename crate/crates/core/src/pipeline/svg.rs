//! Hand-written SVG 1.1 charts. All coordinates are printed with fixed
//! precision so output is byte-stable.

use std::fmt::Write as _;

use super::CorpusReport;
use crate::centrality::Metric;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const SERIES_COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && c != '\t' && c != '\n' && c != '\r' => out.push('?'),
            c => out.push(c),
        }
    }
    out
}

struct Frame {
    slots: usize,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn plot_w() -> f64 {
        WIDTH - LEFT - RIGHT
    }

    fn plot_h() -> f64 {
        HEIGHT - TOP - BOTTOM
    }

    fn x(&self, slot: usize) -> f64 {
        LEFT + (slot as f64 + 0.5) * Self::plot_w() / self.slots.max(1) as f64
    }

    fn y(&self, v: f64) -> f64 {
        let t = (v.clamp(self.y_min, self.y_max) - self.y_min) / (self.y_max - self.y_min);
        TOP + (1.0 - t) * Self::plot_h()
    }

    fn open(&self, out: &mut String, title: &str, y_label: &str, ticks: &[f64]) {
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}">"#
        );
        let _ = writeln!(
            out,
            r#"<rect x="0" y="0" width="{WIDTH:.0}" height="{HEIGHT:.0}" fill="white"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (TOP, HEIGHT - BOTTOM);
        let _ = writeln!(out, r#"<g class="axes" stroke="black" stroke-width="1">"#);
        let _ = writeln!(
            out,
            r#"<line x1="{x0:.2}" y1="{y1:.2}" x2="{x1:.2}" y2="{y1:.2}"/>"#
        );
        let _ = writeln!(
            out,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#
        );
        for &t in ticks {
            let y = self.y(t);
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}"/>"#,
                x0 - 5.0
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<g class="tick-labels" font-family="sans-serif" font-size="11" text-anchor="end">"#
        );
        for &t in ticks {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}">{t:.2}</text>"#,
                x0 - 8.0,
                self.y(t) + 4.0
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">Network # (sorted by decreasing CCC)</text>"#,
            LEFT + Self::plot_w() / 2.0,
            HEIGHT - 20.0
        );
        let _ = writeln!(
            out,
            r#"<text x="18" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + Self::plot_h() / 2.0,
            TOP + Self::plot_h() / 2.0,
            escape(y_label)
        );
    }

    fn slot_labels(&self, out: &mut String) {
        // Label every slot when few, otherwise roughly ten evenly spaced.
        let step = (self.slots / 10).max(1);
        let _ = writeln!(
            out,
            r#"<g class="slot-labels" font-family="sans-serif" font-size="10" text-anchor="middle">"#
        );
        for s in (0..self.slots).step_by(step) {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                self.x(s),
                HEIGHT - BOTTOM + 15.0,
                s + 1
            );
        }
        let _ = writeln!(out, "</g>");
    }
}

/// Sorted CCC distribution with dashed guides at ±`strong_threshold`.
pub fn plot_ccc_distribution(r: &CorpusReport) -> String {
    let order = r.plot_order();
    let frame = Frame {
        slots: order.len(),
        y_min: -1.0,
        y_max: 1.0,
    };
    let mut out = String::new();
    frame.open(
        &mut out,
        "Canonical correlation (DEG, EVC) vs (BWC, CLC)",
        "CCC",
        &[-1.0, -0.5, 0.0, 0.5, 1.0],
    );

    let thr = r.config.strong_threshold;
    let _ = writeln!(
        out,
        r##"<g class="guides" stroke="#888888" stroke-dasharray="6,4" stroke-width="1">"##
    );
    for v in [thr, -thr] {
        let y = frame.y(v);
        let _ = writeln!(
            out,
            r#"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
            WIDTH - RIGHT
        );
    }
    let zero = frame.y(0.0);
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT:.2}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke-dasharray="2,2"/>"#,
        WIDTH - RIGHT
    );
    let _ = writeln!(out, "</g>");

    let points: Vec<(f64, f64)> = order
        .iter()
        .enumerate()
        .filter_map(|(slot, &i)| r.networks[i].ccc().map(|c| (frame.x(slot), frame.y(c))))
        .collect();
    if points.len() > 1 {
        let path: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="ccc-line" fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
            SERIES_COLORS[0],
            path.join(" ")
        );
    }
    let _ = writeln!(
        out,
        r#"<g class="ccc-markers" fill="{}">"#,
        SERIES_COLORS[0]
    );
    for (slot, &i) in order.iter().enumerate() {
        let net = &r.networks[i];
        if let Some(c) = net.ccc() {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3"><title>{}: {c:.4}</title></circle>"#,
                frame.x(slot),
                frame.y(c),
                escape(&net.name)
            );
        }
    }
    let _ = writeln!(out, "</g>");
    frame.slot_labels(&mut out);
    out.push_str("</svg>\n");
    out
}

/// One chart per metric: |final loading| on each factor for every network,
/// in the same network order as the CCC chart. Networks without a factor
/// model get a gap marker.
pub fn plot_factor_loadings(r: &CorpusReport) -> Vec<(Metric, String)> {
    let order = r.plot_order();
    Metric::ALL
        .iter()
        .map(|&metric| {
            let frame = Frame { slots: order.len(), y_min: 0.0, y_max: 1.0 };
            let mut out = String::new();
            frame.open(
                &mut out,
                &format!("Final factor loadings for {metric}"),
                "|loading|",
                &[0.0, 0.25, 0.5, 0.75, 1.0],
            );
            for (f, color) in SERIES_COLORS.iter().enumerate() {
                let _ = writeln!(out, r#"<g class="factor-{}" fill="{}">"#, f + 1, color);
                for (slot, &i) in order.iter().enumerate() {
                    let net = &r.networks[i];
                    let Some(model) = &net.factor_model else { continue };
                    let Some(&v) = model.loadings[metric.index()].get(f) else { continue };
                    let (x, y) = (frame.x(slot), frame.y(v.abs()));
                    let t = format!("{}: Factor-{} = {:.4}", escape(&net.name), f + 1, v.abs());
                    let _ = match f {
                        0 => writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3"><title>{t}</title></circle>"#),
                        1 => writeln!(
                            out,
                            r#"<rect x="{:.2}" y="{:.2}" width="6" height="6"><title>{t}</title></rect>"#,
                            x - 3.0,
                            y - 3.0
                        ),
                        _ => writeln!(
                            out,
                            r#"<polygon points="{x:.2},{:.2} {:.2},{:.2} {:.2},{:.2}"><title>{t}</title></polygon>"#,
                            y - 4.0,
                            x - 4.0,
                            y + 3.0,
                            x + 4.0,
                            y + 3.0
                        ),
                    };
                }
                let _ = writeln!(out, "</g>");
            }
            let _ = writeln!(out, r##"<g class="gaps" stroke="#999999" stroke-width="1">"##);
            for (slot, &i) in order.iter().enumerate() {
                let net = &r.networks[i];
                if net.factor_model.is_none() {
                    let (x, y) = (frame.x(slot), HEIGHT - BOTTOM - 4.0);
                    let _ = writeln!(
                        out,
                        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"><title>{}: no factor model</title></line>"#,
                        x - 3.0,
                        y - 3.0,
                        x + 3.0,
                        y + 3.0,
                        escape(&net.name)
                    );
                }
            }
            let _ = writeln!(out, "</g>");
            let _ = writeln!(out, r#"<g class="legend" font-family="sans-serif" font-size="11">"#);
            for (f, color) in SERIES_COLORS.iter().enumerate() {
                let x = WIDTH - RIGHT - 260.0 + 85.0 * f as f64;
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{:.2}" r="4" fill="{color}"/>"#, TOP - 8.0);
                let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">Factor-{}</text>"#, x + 8.0, TOP - 4.0, f + 1);
            }
            let _ = writeln!(out, "</g>");
            frame.slot_labels(&mut out);
            out.push_str("</svg>\n");
            (metric, out)
        })
        .collect()
}
