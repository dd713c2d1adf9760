//! Standalone SVG scatter of a stored set.

use std::fmt::Write as _;
use std::path::Path;

use ndtree::ParetoElement;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

pub fn render_svg(set: &[ParetoElement]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for e in set {
        x0 = x0.min(e.x1());
        x1 = x1.max(e.x2());
        y0 = y0.min(e.y2());
        y1 = y1.max(e.y1());
    }
    if set.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    // avoid a zero span for a single point
    let pad = |lo: f64, hi: f64| {
        let span = (hi - lo).max(1e-9);
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g id="axes" stroke="black" stroke-width="1"><line x1="{m}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{m}" y1="{b}" x2="{m}" y2="{m}"/></g>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="11"><text x="{m}" y="{ty}">{x0:.3}</text><text x="{r}" y="{ty}" text-anchor="end">{x1:.3}</text><text x="4" y="{b}">{y0:.3}</text><text x="4" y="{mt}">{y1:.3}</text></g>"#,
        m = MARGIN,
        r = WIDTH - MARGIN,
        b = HEIGHT - MARGIN,
        ty = HEIGHT - MARGIN + 16.0,
        mt = MARGIN + 4.0
    );
    let _ = writeln!(s, r#"<g id="set" stroke="crimson" fill="crimson">"#);
    for e in set {
        if e.is_point() {
            let _ = writeln!(s, r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="2.5"/>"#, sx(e.x1()), sy(e.y1()));
        } else {
            let _ = writeln!(
                s,
                r#"<line class="segment" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke-width="1.5"/>"#,
                sx(e.x1()),
                sy(e.y1()),
                sx(e.x2()),
                sy(e.y2())
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

pub fn emit_plot(set: &[ParetoElement], path: &Path) -> std::io::Result<()> {
    std::fs::write(path, render_svg(set))
}
