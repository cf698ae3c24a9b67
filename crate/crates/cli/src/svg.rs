//! Minimal SVG rendering: instance points, ledger edges (forced-in solid,
//! forced-out omitted), fractional edges with opacity proportional to their
//! weight, and the blanket/chord/transposal panels for the rounding lab.

use mwt_core::geom::{EdgeId, Instance, PointId};
use mwt_core::heuristics::{EdgeStatus, EdgeStatusLedger};
use mwt_core::lp::FractionalTriangulation;
use mwt_core::rounding::{ConvexPartition, RoundingOutcome, TransposalImage};

pub struct Svg {
    body: String,
    min: (f64, f64),
    max: (f64, f64),
}

impl Svg {
    pub fn new(inst: &Instance) -> Svg {
        let mut min = (f64::MAX, f64::MAX);
        let mut max = (f64::MIN, f64::MIN);
        for p in inst.points() {
            min.0 = min.0.min(p.fx);
            min.1 = min.1.min(p.fy);
            max.0 = max.0.max(p.fx);
            max.1 = max.1.max(p.fy);
        }
        let pad = 0.05 * ((max.0 - min.0).max(max.1 - min.1)).max(1.0);
        Svg {
            body: String::new(),
            min: (min.0 - pad, min.1 - pad),
            max: (max.0 + pad, max.1 + pad),
        }
    }

    fn stroke_width(&self) -> f64 {
        0.003 * (self.max.0 - self.min.0).max(self.max.1 - self.min.1)
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), color: &str, opacity: f64, dx: f64) {
        let w = self.stroke_width();
        self.body.push_str(&format!(
            "<line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"{color}\" \
             stroke-width=\"{w:.4}\" stroke-opacity=\"{opacity:.3}\"/>\n",
            a.0 + dx,
            -a.1,
            b.0 + dx,
            -b.1,
        ));
    }

    pub fn point(&mut self, p: (f64, f64), dx: f64) {
        let r = 1.6 * self.stroke_width();
        self.body.push_str(&format!(
            "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{r:.4}\" fill=\"#222\"/>\n",
            p.0 + dx,
            -p.1
        ));
    }

    pub fn finish(self, panels: usize) -> String {
        let w = self.max.0 - self.min.0;
        let h = self.max.1 - self.min.1;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.4} {:.4} {:.4} {:.4}\">\n\
             <rect x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\" fill=\"white\"/>\n{}</svg>\n",
            self.min.0,
            -self.max.1,
            w * panels as f64 + w * 0.1 * (panels.saturating_sub(1)) as f64,
            h,
            self.min.0,
            -self.max.1,
            w * panels as f64 + w * 0.1 * (panels.saturating_sub(1)) as f64,
            h,
            self.body
        )
    }
}

fn edge_pts(inst: &Instance, e: EdgeId) -> ((f64, f64), (f64, f64)) {
    let edge = inst.edge(e);
    (inst.fcoord(edge.u), inst.fcoord(edge.v))
}

/// Ledger edges plus (optionally) fractional edge weights.
pub fn render_solution(
    inst: &Instance,
    ledger: Option<&EdgeStatusLedger>,
    x: Option<&FractionalTriangulation>,
    triangulation: Option<&[u32]>,
) -> String {
    let mut svg = Svg::new(inst);
    if let Some(x) = x {
        for e in 0..inst.edges().len() as EdgeId {
            let w = x.edge_weight(inst, e);
            if w > 1e-7 {
                let (a, b) = edge_pts(inst, e);
                svg.line(a, b, "#d62728", w.clamp(0.05, 1.0), 0.0);
            }
        }
    }
    if let Some(tris) = triangulation {
        let mut edges: Vec<EdgeId> = tris
            .iter()
            .flat_map(|&t| inst.tri(t).edges.iter().copied())
            .collect();
        edges.sort_unstable();
        edges.dedup();
        for e in edges {
            let (a, b) = edge_pts(inst, e);
            svg.line(a, b, "#1f77b4", 0.9, 0.0);
        }
    }
    if let Some(ledger) = ledger {
        for e in 0..inst.edges().len() as EdgeId {
            if ledger.status_of(e) == EdgeStatus::ForcedIn {
                let (a, b) = edge_pts(inst, e);
                svg.line(a, b, "#000000", 1.0, 0.0);
            }
        }
    }
    for p in 0..inst.n() as PointId {
        svg.point(inst.fcoord(p), 0.0);
    }
    svg.finish(1)
}

/// Three panels in the figure style of the rounding lab: the largest
/// blanket over its face, the chords clipped into the face, and the
/// transposed partition.
pub fn render_rounding(
    inst: &Instance,
    partition: &ConvexPartition,
    outcome: &RoundingOutcome,
) -> String {
    let mut svg = Svg::new(inst);
    let width = {
        let mut min = f64::MAX;
        let mut max = f64::MIN;
        for p in inst.points() {
            min = min.min(p.fx);
            max = max.max(p.fx);
        }
        (max - min) * 1.15
    };
    // Pick the face with the largest blanket.
    let pick = outcome
        .faces
        .iter()
        .max_by_key(|f| f.blankets.iter().map(|b| b.triangles.len()).max().unwrap_or(0))
        .expect("at least one face");
    let face = &partition.faces[pick.face_idx];
    let blanket = pick
        .blankets
        .iter()
        .max_by_key(|b| b.triangles.len())
        .expect("at least one blanket");

    for panel in 0..3 {
        let dx = width * panel as f64;
        for i in 0..face.boundary.len() {
            let a = inst.fcoord(face.boundary[i]);
            let b = inst.fcoord(face.boundary[(i + 1) % face.boundary.len()]);
            svg.line(a, b, "#888888", 1.0, dx);
        }
    }
    // Panel 1: blanket triangles.
    for &t in &blanket.triangles {
        let v = inst.tri(t).verts;
        for k in 0..3 {
            svg.line(
                inst.fcoord(v[k]),
                inst.fcoord(v[(k + 1) % 3]),
                "#2ca02c",
                0.8,
                0.0,
            );
        }
    }
    // Panels 2 and 3: chords and their transposals.
    if let Ok(records) = mwt_core::rounding::transpose_blanket(inst, face, blanket) {
        for rec in &records {
            for ei in &rec.edge_images {
                // crude chord visualization: the source edge clipped by eye
                svg.line(
                    inst.fcoord(ei.source.0),
                    inst.fcoord(ei.source.1),
                    "#9467bd",
                    0.7,
                    width,
                );
                svg.line(
                    inst.fcoord(ei.image.0),
                    inst.fcoord(ei.image.1),
                    "#d62728",
                    0.9,
                    2.0 * width,
                );
            }
            if let TransposalImage::Polygon(p) = &rec.image {
                for i in 0..p.len() {
                    svg.line(
                        inst.fcoord(p[i]),
                        inst.fcoord(p[(i + 1) % p.len()]),
                        "#1f77b4",
                        0.6,
                        2.0 * width,
                    );
                }
            }
        }
    }
    for p in 0..inst.n() as PointId {
        svg.point(inst.fcoord(p), 0.0);
    }
    svg.finish(3)
}
