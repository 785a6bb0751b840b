//! Single-polygon SVG plots. Coordinates are rounded for drawing only.

use std::fmt::Write as _;

use okounkov_core::polygon::ConvexPolygon;

const W: f64 = 480.0;
const H: f64 = 360.0;
const MARGIN: f64 = 48.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn polygon_svg(poly: &ConvexPolygon, caption: &str) -> String {
    let pts: Vec<(f64, f64)> = poly.vertices().iter().map(|(x, y)| (x.to_f64(), y.to_f64())).collect();
    let max_x = pts.iter().map(|p| p.0).fold(0.0, f64::max).max(1e-9);
    let max_y = pts.iter().map(|p| p.1).fold(0.0, f64::max).max(1e-9);
    let sx = (W - 2.0 * MARGIN) / max_x;
    let sy = (H - 2.0 * MARGIN) / max_y;
    let map = |(x, y): (f64, f64)| (MARGIN + x * sx, H - MARGIN - y * sy);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"  <title>{}</title>"#, escape(caption));
    let (ox, oy) = map((0.0, 0.0));
    let _ = writeln!(s, r#"  <line x1="{ox}" y1="{oy}" x2="{}" y2="{oy}" stroke="black"/>"#, W - MARGIN / 2.0);
    let _ = writeln!(s, r#"  <line x1="{ox}" y1="{oy}" x2="{ox}" y2="{}" stroke="black"/>"#, MARGIN / 2.0);
    let _ = writeln!(s, r#"  <text x="{}" y="{}" font-size="14">t</text>"#, W - MARGIN / 2.0 + 4.0, oy + 4.0);
    let _ = writeln!(s, r#"  <text x="{}" y="{}" font-size="14">y</text>"#, ox - 4.0, MARGIN / 2.0 - 6.0);
    let _ =
        writeln!(s, r#"  <text x="{}" y="{}" font-size="12">{max_x:.6}</text>"#, map((max_x, 0.0)).0 - 16.0, oy + 16.0);
    let _ = writeln!(s, r#"  <text x="4" y="{}" font-size="12">{max_y:.6}</text>"#, map((0.0, max_y)).1 + 4.0);

    let path: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"  <polygon points="{}" fill="steelblue" fill-opacity="0.35" stroke="steelblue" stroke-width="2"/>"#,
        path.join(" ")
    );
    for ((x, y), &(fx, fy)) in poly.vertices().iter().zip(&pts) {
        let (cx, cy) = map((fx, fy));
        let _ = writeln!(
            s,
            r#"  <circle cx="{cx:.3}" cy="{cy:.3}" r="4" fill="black"><title>({x}, {y}) = ({fx:.6}, {fy:.6})</title></circle>"#
        );
    }
    s.push_str("</svg>\n");
    s
}
