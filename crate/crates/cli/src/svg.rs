//! Static phase-portrait drawings.

use std::fmt::Write;

use convex_trig_core::pendulum::PortraitCurve;
use convex_trig_core::Regime;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 30.0;

/// One polyline per branch of every level; separatrix levels drawn thick and red.
/// `overlay` is an extra `(θ°, θ̇°)` path, e.g. a simulated trajectory.
pub fn portrait(curves: &[PortraitCurve], overlay: Option<&[(f64, f64)]>) -> String {
    let points = curves
        .iter()
        .flat_map(|c| c.branches.iter().flatten())
        .chain(overlay.into_iter().flatten())
        .filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        (x0, x1) = (x0.min(0.0) - 1.0, x1.max(0.0) + 1.0);
    }
    if !(y1 > y0) {
        (y0, y1) = (y0.min(0.0) - 1.0, y1.max(0.0) + 1.0);
    }
    let sx = (WIDTH - 2.0 * MARGIN) / (x1 - x0);
    let sy = (HEIGHT - 2.0 * MARGIN) / (y1 - y0);
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * sx, HEIGHT - MARGIN - (y - y0) * sy);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if y0 < 0.0 && y1 > 0.0 {
        let (a, b) = (map((x0, 0.0)), map((x1, 0.0)));
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbbbbb" stroke-width="0.5"/>"##,
            a.0, a.1, b.0, b.1
        );
    }
    let mut path = |pts: &[(f64, f64)], style: &str, title: &str| {
        let coords: Vec<String> = pts
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&p| {
                let (x, y) = map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        if coords.len() == 1 {
            let (x, y) = coords[0].split_once(',').unwrap();
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2.5" {style}><title>{title}</title></circle>"#);
        } else if !coords.is_empty() {
            let _ = writeln!(
                s,
                r#"<polyline fill="none" points="{}" {style}><title>{title}</title></polyline>"#,
                coords.join(" ")
            );
        }
    };
    for c in curves {
        let style = match c.regime {
            Regime::Separatrix => r##"stroke="#c0392b" stroke-width="2" fill="#c0392b""##,
            _ => r##"stroke="#34495e" stroke-width="1" fill="#34495e""##,
        };
        let title = format!("H = {} ({})", c.h, c.regime.as_str());
        for b in &c.branches {
            path(b, style, &title);
        }
    }
    if let Some(o) = overlay {
        path(o, r##"stroke="#2980b9" stroke-width="1.5" fill="#2980b9""##, "trajectory");
    }
    s.push_str("</svg>\n");
    s
}
