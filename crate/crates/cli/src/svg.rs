//! Static timeline of a planar toric running: one panel per interval
//! between transitions.

use std::fmt::Write;

use mmpfloer::mmp::{MmpRunning, RegularLagrangian, TransitionKind};
use mmpfloer::rational::{format_q, to_f64};
use mmpfloer::{Polytope, Shrunk, Q};

use crate::Failure;

const PANEL: f64 = 220.0;
const MARGIN: f64 = 20.0;
const CAPTION: f64 = 46.0;

struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn new(p: &Polytope) -> Self {
        let xs: Vec<f64> = p.vertices().iter().map(|v| to_f64(&v.point[0])).collect();
        let ys: Vec<f64> = p.vertices().iter().map(|v| to_f64(&v.point[1])).collect();
        let lo = (xs.iter().cloned().fold(f64::INFINITY, f64::min), ys.iter().cloned().fold(f64::INFINITY, f64::min));
        let hi = (xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max), ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        Frame { min: lo, scale: (PANEL - 2.0 * MARGIN) / span }
    }

    /// Panel-local coordinates, y pointing up.
    fn map(&self, x: f64, y: f64, panel: usize) -> (f64, f64) {
        let px = panel as f64 * PANEL + MARGIN + (x - self.min.0) * self.scale;
        let py = PANEL - MARGIN - (y - self.min.1) * self.scale;
        (px, py)
    }
}

/// Boundary order of a convex vertex set.
fn hull_order(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = points.len() as f64;
    let c = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let mut out = points.to_vec();
    out.sort_by(|a, b| {
        let ta = (a.1 - c.1).atan2(a.0 - c.0);
        let tb = (b.1 - c.1).atan2(b.0 - c.0);
        ta.total_cmp(&tb)
    });
    out
}

fn kind_label(k: TransitionKind) -> &'static str {
    match k {
        TransitionKind::Flip => "flip",
        TransitionKind::DivisorialContraction => "blow-down",
        TransitionKind::MoriFibration => "Mori fibration",
        TransitionKind::Empty => "empty",
    }
}

fn shape_at(p: &Polytope, t: Q) -> Vec<(f64, f64)> {
    let vs = match p.shrink(t) {
        Shrunk::Polytope(s) => s.vertices().to_vec(),
        Shrunk::LowerDimensional(vs) => vs,
        Shrunk::Empty => Vec::new(),
    };
    vs.iter().map(|v| (to_f64(&v.point[0]), to_f64(&v.point[1]))).collect()
}

pub fn render(p: &Polytope, running: &MmpRunning) -> Result<String, Failure> {
    if p.dim() != 2 {
        return Err(Failure::Spec(format!("svg needs a 2-dimensional polytope, got dimension {}", p.dim())));
    }
    let frame = Frame::new(p);
    let panels = running.stages.len().max(1);
    let width = panels as f64 * PANEL;
    let height = PANEL + CAPTION;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    for (i, stage) in running.stages.iter().enumerate() {
        let x0 = i as f64 * PANEL;
        let _ = writeln!(s, r##"<rect x="{x0:.2}" y="0" width="{PANEL:.2}" height="{height:.2}" fill="none" stroke="#ccc"/>"##);
        // the original outline, then the moment polytope at the start of the interval
        let outline = hull_order(&shape_at(p, Q::from_integer(0)));
        let shrunk = hull_order(&shape_at(p, stage.from));
        for (pts, style) in [(&outline, r##"fill="none" stroke="#bbb" stroke-dasharray="3,3""##), (&shrunk, r##"fill="#dde8f4" stroke="#24527a""##)] {
            if pts.len() < 2 {
                continue;
            }
            let coords: Vec<String> = pts
                .iter()
                .map(|&(x, y)| {
                    let (a, b) = frame.map(x, y, i);
                    format!("{a:.2},{b:.2}")
                })
                .collect();
            let _ = writeln!(s, r#"<polygon points="{}" {style}/>"#, coords.join(" "));
        }
        let Some(to) = stage.to else { continue };
        let Some(tr) = running.transitions.iter().find(|t| t.time == to) else { continue };
        if let Some(RegularLagrangian::Fiber(f)) = &tr.regular_lagrangian {
            let (a, b) = frame.map(to_f64(&f.point[0]), to_f64(&f.point[1]), i);
            let _ = writeln!(s, r##"<circle cx="{a:.2}" cy="{b:.2}" r="4" fill="#c0392b"/>"##);
        }
        let terminal = std::ptr::eq(tr, running.transitions.last().expect("nonempty"));
        if terminal {
            let c = shape_at(p, to);
            let n = c.len().max(1) as f64;
            let m = c.iter().fold((0.0, 0.0), |acc, v| (acc.0 + v.0 / n, acc.1 + v.1 / n));
            let (a, b) = frame.map(m.0, m.1, i);
            let _ = writeln!(s, r##"<path d="M{:.2},{:.2} l6,6 m-6,0 l6,-6" stroke="#000" transform="translate(-3,-3)"/>"##, a, b);
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t = {} : {}</text>"#,
            x0 + PANEL / 2.0,
            PANEL + 16.0,
            format_q(&tr.time),
            kind_label(tr.kind)
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="#555">from t = {}</text>"##,
            x0 + PANEL / 2.0,
            PANEL + 32.0,
            format_q(&stage.from)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
