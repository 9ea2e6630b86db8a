//! Deterministic SVG figures. Coordinates are the only place rationals are
//! turned into decimals.

use std::fmt::Write;

use interval_pam::intervals::Parity;
use interval_pam::labeled::LabeledConfig;
use interval_pam::pam::FinitePam;
use interval_pam::rational::{fmt_q, to_f64, Q};
use interval_pam::scanning::MooreLoop;

const UNIT: f64 = 80.0;
const MARGIN: f64 = 40.0;
const ROW: f64 = 28.0;
const CAP: f64 = 5.0;

/// Fixed 12-digit decimalization with trailing zeros trimmed.
fn num(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// Bars over a number line: round cap for an open end, square cap for a
/// closed end, label above each bar. Overlapping pieces go to separate rows.
pub fn render_config(xi: &LabeledConfig, pam: &FinitePam) -> String {
    let xi = xi.sorted();
    let ends = xi.endpoints();
    let (lo, hi) = match (ends.first(), ends.last()) {
        (Some(&a), Some(&b)) => (to_f64(&a).floor() - 1.0, to_f64(&b).ceil() + 1.0),
        _ => (-1.0, 1.0),
    };
    // greedy row assignment on the sorted pieces
    let mut row_end: Vec<Q> = Vec::new();
    let mut rows = Vec::with_capacity(xi.len());
    for x in xi.pieces() {
        let r = row_end.iter().position(|&e| e < x.j.u).unwrap_or(row_end.len());
        if r == row_end.len() {
            row_end.push(x.j.v);
        } else {
            row_end[r] = x.j.v;
        }
        rows.push(r);
    }
    let w = 2.0 * MARGIN + (hi - lo) * UNIT;
    let axis_y = MARGIN + ROW * (row_end.len() as f64 + 1.0);
    let h = axis_y + MARGIN;
    let px = |x: f64| MARGIN + (x - lo) * UNIT;

    let mut out = String::new();
    header(&mut out, w, h);
    let _ = writeln!(
        out,
        r#"<line id="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        num(px(lo)),
        num(axis_y),
        num(px(hi)),
        num(axis_y)
    );
    let mut tick = lo;
    while tick <= hi {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{}</text>"#,
            num(px(tick)),
            num(axis_y + 14.0),
            num(tick)
        );
        tick += 1.0;
    }
    for (i, (x, r)) in xi.pieces().iter().zip(&rows).enumerate() {
        let y = axis_y - ROW * (*r as f64 + 1.0);
        let (x1, x2) = (px(to_f64(&x.j.u)), px(to_f64(&x.j.v)));
        let _ = writeln!(out, r#"<g id="piece{i}">"#);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="steelblue" stroke-width="4"/>"#,
            num(x1),
            num(y),
            num(x2),
            num(y)
        );
        for (cx, parity, side) in [(x1, x.j.p, "left"), (x2, x.j.q, "right")] {
            match parity {
                Parity::Open => {
                    let _ = writeln!(
                        out,
                        r#"<circle class="open {side}" cx="{}" cy="{}" r="{}" fill="steelblue"/>"#,
                        num(cx),
                        num(y),
                        num(CAP)
                    );
                }
                Parity::Closed => {
                    let _ = writeln!(
                        out,
                        r#"<rect class="closed {side}" x="{}" y="{}" width="{}" height="{}" fill="steelblue"/>"#,
                        num(cx - CAP),
                        num(y - CAP),
                        num(2.0 * CAP),
                        num(2.0 * CAP)
                    );
                }
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            num((x1 + x2) / 2.0),
            num(y - 8.0),
            escape(&x.display(pam))
        );
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// Strands in the `(u, circle coordinate)` plane; the frame's top and
/// bottom edges are the basepoint `±1`.
pub fn render_loop(lp: &MooreLoop, pam: &FinitePam) -> String {
    let s = to_f64(&lp.s).max(1.0);
    let height = 2.0 * UNIT;
    let w = 2.0 * MARGIN + s * UNIT;
    let h = 2.0 * MARGIN + height;
    let px = |u: &Q| MARGIN + to_f64(u) * UNIT;
    let py = |c: &Q| MARGIN + (1.0 - to_f64(c)) * UNIT;

    let mut out = String::new();
    header(&mut out, w, h);
    let _ = writeln!(
        out,
        r#"<rect id="frame" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        num(MARGIN),
        num(MARGIN),
        num(s * UNIT),
        num(height)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="10">moore {}</text>"#,
        num(MARGIN),
        num(MARGIN - 8.0),
        escape(&fmt_q(&lp.s))
    );
    for (i, seg) in lp.segments.iter().enumerate() {
        let (b0, b1) = (&lp.breakpoints[i], &lp.breakpoints[i + 1]);
        for (k, tr) in seg.iter().enumerate() {
            let (c0, c1) = (tr.at(*b0), tr.at(*b1));
            let _ = writeln!(
                out,
                r#"<polyline id="s{i}t{k}" points="{},{} {},{}" fill="none" stroke="darkred" stroke-width="2"><title>{}</title></polyline>"#,
                num(px(b0)),
                num(py(&c0)),
                num(px(b1)),
                num(py(&c1)),
                escape(pam.name_of(tr.label))
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
