//! Static SVG scatter plots of point clouds.

use std::fmt::Write;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// Projects a point to the plane: 1D points sit on a line, 3D points use a
/// fixed oblique projection.
fn project(p: &[f64]) -> (f64, f64) {
    match p.len() {
        0 => (0.0, 0.0),
        1 => (p[0], 0.0),
        2 => (p[0], p[1]),
        _ => (p[0] + 0.35 * p[2], p[1] + 0.35 * p[2]),
    }
}

pub fn scatter(points: &[Vec<f64>]) -> String {
    let projected: Vec<(f64, f64)> = points.iter().map(|p| project(p)).collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &projected {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y);
    let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
    let radius = if points.len() > 2000 { 1.0 } else { 2.5 };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (x, y) in projected {
        // SVG y grows downwards.
        let cx = MARGIN + (x - lo_x) * scale;
        let cy = SIZE - MARGIN - (y - lo_y) * scale;
        let _ = writeln!(out, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{radius}" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
