//! Static SVG of a polygonal chain in the Poincaré disc.

use std::fmt::Write;

use siegel_arc::hexagon::PolygonalChain;
use siegel_arc::scan::ScanRow;
use siegel_arc::tube::H2Point;

const SIZE: f64 = 520.0;
const RADIUS: f64 = 240.0;
const SAMPLES: usize = 64;

fn to_screen(p: &H2Point) -> (f64, f64) {
    let (u, v) = p.to_disc();
    (SIZE / 2.0 + RADIUS * u, SIZE / 2.0 - RADIUS * v)
}

/// Points along the geodesic `p → q` of the upper half-plane.
fn geodesic(p: &H2Point, q: &H2Point) -> Vec<H2Point> {
    if (p.x - q.x).abs() < 1e-12 * p.x.abs().max(q.x.abs()).max(1.0) {
        let (a, b) = (p.y.ln(), q.y.ln());
        return (0..=SAMPLES)
            .map(|k| {
                let t = k as f64 / SAMPLES as f64;
                H2Point { x: p.x, y: (a + t * (b - a)).exp() }
            })
            .collect();
    }
    let x0 = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
    let r = (p.x - x0).hypot(p.y);
    let (a, b) = (p.y.atan2(p.x - x0), q.y.atan2(q.x - x0));
    (0..=SAMPLES)
        .map(|k| {
            let phi = a + (b - a) * k as f64 / SAMPLES as f64;
            H2Point {
                x: x0 + r * phi.cos(),
                y: r * phi.sin(),
            }
        })
        .collect()
}

/// Chain segments as geodesic polylines, labelled vertices and the surviving
/// interior angles.
pub fn chain_svg(chain: &PolygonalChain) -> String {
    let mut s = String::new();
    let c = SIZE / 2.0;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="black" stroke-width="1"/>"#);
    let pts: Vec<H2Point> = chain.vertices.iter().map(|v| v.point).collect();
    for w in pts.windows(2) {
        let path: Vec<String> = geodesic(&w[0], &w[1])
            .iter()
            .map(|p| {
                let (x, y) = to_screen(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, path.join(" "));
    }
    let names = ["iA", "iId", "iC", "iD"];
    for (k, p) in pts.iter().enumerate() {
        let (x, y) = to_screen(p);
        let label = if pts.len() == 4 { names[k].to_string() } else { format!("v{k}") };
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="crimson"/>"#);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{label}</text>"#, x + 6.0, y - 6.0);
    }
    for (k, a) in chain.angles.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="12" y="{}" font-family="sans-serif" font-size="13">α{} = {a:.6}</text>"#,
            20 + 18 * k,
            k + 1
        );
    }
    let lens = chain.segment_lengths;
    let _ = writeln!(
        s,
        r#"<text x="12" y="{}" font-family="sans-serif" font-size="13">h = ({:.6}, {:.6}, {:.6})</text>"#,
        SIZE - 12.0,
        lens[0],
        lens[1],
        lens[2]
    );
    s.push_str("</svg>\n");
    s
}

/// Scatter plot of the image points `(F₁, F₂)` of a scan, with the diagonal
/// and the probed window highlighted.
pub fn scatter_svg(rows: &[ScanRow], window: (f64, f64)) -> String {
    let finite: Vec<&ScanRow> = rows.iter().filter(|r| r.f1.is_finite() && r.f2.is_finite()).collect();
    let (mut lo, mut hi) = (window.0.min(0.0), window.1);
    for r in &finite {
        lo = lo.min(r.f1).min(r.f2);
        hi = hi.max(r.f1).max(r.f2);
    }
    let pad = 40.0;
    let span = (hi - lo).max(1e-12);
    let sx = |v: f64| pad + (v - lo) / span * (SIZE - 2.0 * pad);
    let sy = |v: f64| SIZE - pad - (v - lo) / span * (SIZE - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{w}" height="{w}" fill="none" stroke="black"/>"#,
        w = SIZE - 2.0 * pad
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="gray" stroke-dasharray="4 4"/>"#,
        sx(lo),
        sy(lo),
        sx(hi),
        sy(hi)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="crimson" stroke-width="3"/>"#,
        sx(window.0),
        sy(window.0),
        sx(window.1),
        sy(window.1)
    );
    for r in &finite {
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="1.2" fill="steelblue"/>"#, sx(r.f1), sy(r.f2));
    }
    let _ = writeln!(
        s,
        r#"<text x="{pad}" y="{}" font-family="sans-serif" font-size="13">F1 ∈ [{lo:.3}, {hi:.3}] (horizontal), F2 (vertical), {} points</text>"#,
        pad - 12.0,
        finite.len()
    );
    s.push_str("</svg>\n");
    s
}
