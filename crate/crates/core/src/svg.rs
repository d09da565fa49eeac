//! Static SVG pictures of curves and subdivisions.

use std::fmt::Write;

use crate::subdivision::DualSubdivision;
use crate::tropical::PlaneTropicalCurve;

const SCALE: f64 = 40.0;
const PAD: f64 = 2.0;

struct Frame {
    min: (f64, f64),
    max: (f64, f64),
}

impl Frame {
    fn around(points: impl IntoIterator<Item = (f64, f64)>, pad: f64) -> Self {
        let (mut min, mut max) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for (x, y) in points {
            min = (min.0.min(x), min.1.min(y));
            max = (max.0.max(x), max.1.max(y));
        }
        if !min.0.is_finite() {
            min = (0.0, 0.0);
            max = (0.0, 0.0);
        }
        Self { min: (min.0 - pad, min.1 - pad), max: (max.0 + pad, max.1 + pad) }
    }

    /// Screen coordinates, y pointing down.
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.min.0) * SCALE, (self.max.1 - y) * SCALE)
    }

    fn size(&self) -> (f64, f64) {
        ((self.max.0 - self.min.0) * SCALE, (self.max.1 - self.min.1) * SCALE)
    }

    /// Largest `t` keeping `p + t·d` inside the frame.
    fn exit(&self, p: (f64, f64), d: (f64, f64)) -> f64 {
        let along = |p: f64, d: f64, lo: f64, hi: f64| {
            if d > 0.0 {
                (hi - p) / d
            } else if d < 0.0 {
                (lo - p) / d
            } else {
                f64::INFINITY
            }
        };
        along(p.0, d.0, self.min.0, self.max.0).min(along(p.1, d.1, self.min.1, self.max.1))
    }

    fn header(&self, out: &mut String) {
        let (w, h) = self.size();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    }
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), width: f64) {
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="{width:.1}"/>"#,
        a.0, a.1, b.0, b.1
    );
}

fn label(out: &mut String, at: (f64, f64), text: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="crimson">{text}</text>"#,
        at.0 + 3.0,
        at.1 - 3.0
    );
}

/// Bounded edges, rays clipped to the frame, and weight labels for weights above one.
pub fn curve_svg(curve: &PlaneTropicalCurve) -> String {
    let pts: Vec<(f64, f64)> = curve.vertices.iter().map(|v| v.point.to_f64()).collect();
    let frame = Frame::around(pts.iter().copied(), PAD);
    let mut out = String::new();
    frame.header(&mut out);
    for e in &curve.edges {
        let (a, b) = (frame.map(pts[e.from]), frame.map(pts[e.to]));
        line(&mut out, a, b, 1.0 + e.weight as f64 * 0.5);
        if e.weight > 1 {
            label(&mut out, ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0), &e.weight.to_string());
        }
    }
    for r in &curve.rays {
        let p = pts[r.from];
        let d = (r.direction.x as f64, r.direction.y as f64);
        let t = frame.exit(p, d);
        let (a, b) = (frame.map(p), frame.map((p.0 + t * d.0, p.1 + t * d.1)));
        line(&mut out, a, b, 1.0 + r.weight as f64 * 0.5);
        if r.weight > 1 {
            label(&mut out, ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0), &r.weight.to_string());
        }
    }
    for (v, &p) in curve.vertices.iter().zip(&pts) {
        if !v.crossing {
            let (x, y) = frame.map(p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Cells outlined, parallelograms shaded, nodes dotted.
pub fn subdivision_svg(sub: &DualSubdivision) -> String {
    let frame = Frame::around(sub.ambient.vertices().iter().map(|v| (v.x as f64, v.y as f64)), 0.5);
    let mut out = String::new();
    frame.header(&mut out);
    for cell in &sub.cells {
        let pts: Vec<String> = cell
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = frame.map((v.x as f64, v.y as f64));
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let fill = if cell.kind() == crate::subdivision::CellKind::Parallelogram { "lightgray" } else { "none" };
        let _ = writeln!(out, r#"<polygon points="{}" fill="{fill}" stroke="black"/>"#, pts.join(" "));
    }
    for n in &sub.nodes {
        let (x, y) = frame.map((n.x as f64, n.y as f64));
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
