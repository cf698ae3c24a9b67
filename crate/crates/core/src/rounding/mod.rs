//! Rounding lab: convert a fractional triangulation into per-face
//! fractional triangulations of a convex partition, then round each face by
//! the polygon dynamic program, tracking every cost-bound component.

pub mod transposal;

pub use transposal::{
    decompose_into_blankets, edge_crosses_face_interior, transpose_blanket, transpose_edge,
    transpose_triangle, triangle_crosses_face, triangulated_transposal, transposal_cost,
    validate_blanket, Blanket, EdgeImage, TransposalImage, TransposalRecord, TransposalSource,
};

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geom::{extract_faces, orient, EdgeId, Face, Instance, PointId, TriId};
use crate::heuristics::{run_closure, skeleton_faces, HeuristicConfig};
use crate::lp::FractionalTriangulation;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionStrategy {
    /// Triangulate (heuristics plus per-face DP, greedy fallback), then
    /// merge triangle pairs into convex faces, longest removable edge first.
    HullMerge,
    /// Incremental fan triangulation in lexicographic point order, no
    /// merging: every face is a triangle.
    Fan,
}

impl PartitionStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            PartitionStrategy::HullMerge => "hm",
            PartitionStrategy::Fan => "fan",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "hm" => Some(PartitionStrategy::HullMerge),
            "fan" => Some(PartitionStrategy::Fan),
            _ => None,
        }
    }
}

/// A convex partition: a non-crossing edge set containing the hull whose
/// bounded faces are all empty and strictly convex.
#[derive(Debug, Clone)]
pub struct ConvexPartition {
    pub edges: Vec<EdgeId>,
    pub faces: Vec<Face>,
    pub total_length: f64,
}

impl ConvexPartition {
    /// Build from an edge set and validate every invariant.
    pub fn from_edges(inst: &Instance, mut edges: Vec<EdgeId>) -> Result<ConvexPartition> {
        edges.sort_unstable();
        edges.dedup();
        let faces = extract_faces(inst, &edges)?;
        for f in &faces {
            if !f.is_simple() || !f.is_convex {
                return Err(Error::Internal(format!(
                    "partition face {:?} is not strictly convex",
                    f.boundary
                )));
            }
            if !f.is_empty {
                return Err(Error::Internal(format!(
                    "partition face {:?} is not empty",
                    f.boundary
                )));
            }
        }
        let covered: i128 = faces.iter().map(|f| f.double_area(inst)).sum();
        if covered != inst.hull_double_area() {
            return Err(Error::Internal(
                "partition faces do not tile the hull".into(),
            ));
        }
        let total_length = edges.iter().map(|&e| inst.edge(e).len).sum();
        Ok(ConvexPartition { edges, faces, total_length })
    }

    pub fn face(&self, idx: usize) -> &Face {
        &self.faces[idx]
    }
}

pub fn build_convex_partition(
    inst: &Instance,
    strategy: PartitionStrategy,
) -> Result<ConvexPartition> {
    match strategy {
        PartitionStrategy::Fan => {
            let tris = incremental_fan_triangulation(inst)?;
            ConvexPartition::from_edges(inst, tri_edges(inst, &tris))
        }
        PartitionStrategy::HullMerge => {
            let tris = pipeline_triangulation(inst)?;
            let cycles = merge_convex(inst, &tris);
            let mut edges = Vec::new();
            for cyc in &cycles {
                for i in 0..cyc.len() {
                    let e = inst
                        .edge_between(cyc[i], cyc[(i + 1) % cyc.len()])
                        .expect("face boundary is made of potential edges");
                    edges.push(e);
                }
            }
            ConvexPartition::from_edges(inst, edges)
        }
    }
}

fn tri_edges(inst: &Instance, tris: &[TriId]) -> Vec<EdgeId> {
    let mut edges: Vec<EdgeId> = tris
        .iter()
        .flat_map(|&t| inst.tri(t).edges.iter().copied())
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Heuristics-then-DP triangulation; greedy completion when the skeleton
/// leaves non-simple or non-empty faces.
fn pipeline_triangulation(inst: &Instance) -> Result<Vec<TriId>> {
    let ledger = run_closure(inst, &HeuristicConfig::default())?;
    let (faces, solvable) = skeleton_faces(inst, &ledger)?;
    if solvable {
        let mut tris = Vec::new();
        for f in &faces {
            tris.extend(crate::dp::mwt_polygon(inst, &f.boundary)?.triangles);
        }
        tris.sort_unstable();
        return Ok(tris);
    }
    crate::lp::greedy_triangulation(inst, Some(&ledger))
        .ok_or_else(|| Error::Internal("greedy triangulation failed".into()))
}

/// Insert points in lexicographic order, fanning each new point to every
/// hull edge it sees.
fn incremental_fan_triangulation(inst: &Instance) -> Result<Vec<TriId>> {
    let n = inst.n();
    let mut order: Vec<PointId> = (0..n as PointId).collect();
    order.sort_by_key(|&p| inst.coord(p));

    // Collinear prefix.
    let mut chain = vec![order[0], order[1]];
    let mut idx = 2;
    while idx < n && inst.orient_ids(chain[0], chain[1], order[idx]) == 0 {
        chain.push(order[idx]);
        idx += 1;
    }
    if idx == n {
        return Err(Error::InvalidInput("all points collinear".into()));
    }
    let p = order[idx];
    idx += 1;
    let mut tris: Vec<TriId> = Vec::new();
    for i in 0..chain.len() - 1 {
        tris.push(
            inst.tri_by_verts(chain[i], chain[i + 1], p)
                .ok_or_else(|| Error::Internal("fan triangle missing from catalog".into()))?,
        );
    }
    let mut hull: Vec<PointId> = if inst.orient_ids(chain[0], *chain.last().unwrap(), p) > 0 {
        let mut h = chain.clone();
        h.push(p);
        h
    } else {
        let mut h: Vec<PointId> = chain.iter().rev().copied().collect();
        h.push(p);
        h
    };

    while idx < n {
        let q = order[idx];
        idx += 1;
        let k = hull.len();
        let vis: Vec<bool> = (0..k)
            .map(|i| inst.orient_ids(hull[i], hull[(i + 1) % k], q) < 0)
            .collect();
        let first_vis = vis
            .iter()
            .position(|&v| v)
            .ok_or_else(|| Error::Internal("new point sees no hull edge".into()))?;
        // Walk back to the start of the visible arc.
        let mut s = first_vis;
        while vis[(s + k - 1) % k] {
            s = (s + k - 1) % k;
        }
        let mut e = s;
        while vis[(e + 1) % k] {
            e = (e + 1) % k;
        }
        let mut i = s;
        loop {
            let a = hull[i];
            let b = hull[(i + 1) % k];
            tris.push(
                inst.tri_by_verts(a, b, q)
                    .ok_or_else(|| Error::Internal("fan triangle missing from catalog".into()))?,
            );
            if i == e {
                break;
            }
            i = (i + 1) % k;
        }
        // New hull: everything from the arc end around to the arc start,
        // then the new point.
        let mut new_hull = Vec::with_capacity(k + 1);
        let mut i = (e + 1) % k;
        loop {
            new_hull.push(hull[i]);
            if i == s {
                break;
            }
            i = (i + 1) % k;
        }
        new_hull.push(q);
        hull = new_hull;
    }
    tris.sort_unstable();
    tris.dedup();
    Ok(tris)
}

/// Hertel–Mehlhorn-style merging: repeatedly delete the longest interior
/// edge whose two faces union to a strictly convex polygon.
fn merge_convex(inst: &Instance, tris: &[TriId]) -> Vec<Vec<PointId>> {
    let mut faces: Vec<Option<Vec<PointId>>> = tris
        .iter()
        .map(|&t| Some(inst.tri(t).verts.to_vec()))
        .collect();
    loop {
        // dart -> face index
        let mut dart_face: BTreeMap<(PointId, PointId), usize> = BTreeMap::new();
        for (fi, f) in faces.iter().enumerate() {
            if let Some(cyc) = f {
                for i in 0..cyc.len() {
                    dart_face.insert((cyc[i], cyc[(i + 1) % cyc.len()]), fi);
                }
            }
        }
        let mut best: Option<(f64, EdgeId, usize, usize, Vec<PointId>)> = None;
        for (&(u, v), &fi) in &dart_face {
            if u > v {
                continue; // handle each undirected edge once
            }
            let fj = match dart_face.get(&(v, u)) {
                Some(&fj) => fj,
                None => continue,
            };
            let union = splice(faces[fi].as_ref().unwrap(), faces[fj].as_ref().unwrap(), u, v);
            if !strictly_convex(inst, &union) {
                continue;
            }
            let e = inst.edge_between(u, v).unwrap();
            let len = inst.edge(e).len;
            let better = match &best {
                Some((bl, be, ..)) => len > *bl + 1e-12 || ((len - bl).abs() <= 1e-12 && e < *be),
                None => true,
            };
            if better {
                best = Some((len, e, fi, fj, union));
            }
        }
        match best {
            Some((_, _, fi, fj, union)) => {
                faces[fi] = Some(union);
                faces[fj] = None;
            }
            None => break,
        }
    }
    faces.into_iter().flatten().collect()
}

/// Union of two counterclockwise faces sharing the edge (u, v), where `a`
/// contains the dart u->v and `b` contains v->u.
fn splice(a: &[PointId], b: &[PointId], u: PointId, v: PointId) -> Vec<PointId> {
    let rot = |cyc: &[PointId], start: PointId| -> Vec<PointId> {
        let pos = cyc.iter().position(|&x| x == start).unwrap();
        let mut out = cyc.to_vec();
        out.rotate_left(pos);
        out
    };
    let ra = rot(a, v); // v ... u
    debug_assert_eq!(*ra.last().unwrap(), u);
    let rb = rot(b, u); // u ... v
    debug_assert_eq!(*rb.last().unwrap(), v);
    let mut out = ra;
    out.extend_from_slice(&rb[1..rb.len() - 1]);
    out
}

fn strictly_convex(inst: &Instance, cyc: &[PointId]) -> bool {
    let m = cyc.len();
    (0..m).all(|i| {
        orient(
            inst.coord(cyc[i]),
            inst.coord(cyc[(i + 1) % m]),
            inst.coord(cyc[(i + 2) % m]),
        ) > 0
    })
}

// ---------------------------------------------------------------------------
// sensitivity

/// The smallest σ for which every partition edge is σ-sensitive: for each
/// potential edge crossing a partition edge, each of its endpoints lies
/// within σ times its own length of a partition-edge endpoint.
pub fn measure_sensitivity(inst: &Instance, partition: &ConvexPartition) -> f64 {
    let mut sigma = 0.0f64;
    for &pe in &partition.edges {
        let pu = inst.edge(pe).u;
        let pv = inst.edge(pe).v;
        for other in 0..inst.edges().len() as EdgeId {
            if other == pe || !inst.edges_cross(pe, other) {
                continue;
            }
            let len = inst.edge(other).len;
            for x in [inst.edge(other).u, inst.edge(other).v] {
                let d = inst.euclid(x, pu).min(inst.euclid(x, pv));
                sigma = sigma.max(d / len);
            }
        }
    }
    sigma
}

// ---------------------------------------------------------------------------
// full pipeline

/// Per-face transposed fractional triangulation and its rounding.
#[derive(Debug, Clone)]
pub struct FaceTransposal {
    pub face_idx: usize,
    /// The transposal of the input weights into this face.
    pub weights: BTreeMap<TriId, f64>,
    /// Cost of the transposed fractional triangulation of this face.
    pub objective: f64,
    pub blankets: Vec<Blanket>,
    /// (source length, image length) of every edge transposal performed.
    pub edge_stretch: Vec<(f64, f64)>,
    /// Largest per-triangle disagreement between the blanket route and the
    /// direct weight-transfer route.
    pub transfer_gap: f64,
    /// Exact minimum-weight triangulation of the face itself.
    pub dp_triangles: Vec<TriId>,
    pub dp_cost: f64,
}

/// Every component of the rounding cost bound.
///
/// `sigma` is the measured sensitivity of the partition. The length bound
/// on edge transposals also covers edges that are already chords of their
/// face, whose transposal is the edge itself; those force the constant
/// entering the bounds to be at least 1/2, which is `sigma_bound`.
#[derive(Debug, Clone, Serialize)]
pub struct CostLedger {
    pub sum_transposed: f64,
    pub partition_length: f64,
    pub sigma: f64,
    pub sigma_bound: f64,
    pub fractional_cost: f64,
    pub bound: f64,
    pub rounded_cost: f64,
}

#[derive(Debug)]
pub struct RoundingOutcome {
    pub faces: Vec<FaceTransposal>,
    pub ledger: CostLedger,
}

impl RoundingOutcome {
    /// The rounded integer triangulation: per-face DP results unioned.
    pub fn rounded_triangulation(&self) -> Vec<TriId> {
        let mut tris: Vec<TriId> = self
            .faces
            .iter()
            .flat_map(|f| f.dp_triangles.iter().copied())
            .collect();
        tris.sort_unstable();
        tris
    }
}

/// Transpose a feasible solution into every face of the partition and round
/// each face. Validates the order-preservation, tiling, hexagon and global
/// cost bounds as it goes; violations are internal errors.
pub fn transpose_solution(
    inst: &Instance,
    x: &FractionalTriangulation,
    partition: &ConvexPartition,
) -> Result<RoundingOutcome> {
    let sigma = measure_sensitivity(inst, partition);
    let mut faces = Vec::new();
    for (face_idx, face) in partition.faces.iter().enumerate() {
        let blankets = decompose_into_blankets(inst, x, face)?;
        let mut weights: BTreeMap<TriId, f64> = BTreeMap::new();
        let mut edge_stretch = Vec::new();
        for b in &blankets {
            let records = transpose_blanket(inst, face, b)?;
            let mut union: BTreeSet<TriId> = BTreeSet::new();
            for rec in &records {
                edge_stretch
                    .extend(rec.edge_images.iter().map(|ei| (ei.source_len, ei.image_len)));
                let tt = triangulated_transposal(inst, rec)?;
                let tt_cost: f64 = tt.iter().map(|&t| inst.tri(t).cost).sum();
                let img_cost = transposal_cost(inst, rec);
                if tt_cost > 3.0 * img_cost + 1e-9 {
                    return Err(Error::Internal(format!(
                        "triangulated transposal cost {tt_cost} exceeds 3x image cost {img_cost}"
                    )));
                }
                for t in tt {
                    if !union.insert(t) {
                        return Err(Error::Internal(
                            "triangulated transposals of one blanket collide".into(),
                        ));
                    }
                }
            }
            for t in union {
                *weights.entry(t).or_insert(0.0) += b.weight;
            }
        }

        // Direct weight-transfer route: move each crossing triangle's
        // weight onto its own triangulated transposal.
        let mut alt: BTreeMap<TriId, f64> = BTreeMap::new();
        for (t, w) in x.support() {
            if w <= 1e-12 || !triangle_crosses_face(inst, face, t) {
                continue;
            }
            let rec = transpose_triangle(inst, face, t)?;
            for t2 in triangulated_transposal(inst, &rec)? {
                *alt.entry(t2).or_insert(0.0) += w;
            }
        }
        let mut transfer_gap = 0.0f64;
        for key in weights.keys().chain(alt.keys()) {
            let a = weights.get(key).copied().unwrap_or(0.0);
            let b = alt.get(key).copied().unwrap_or(0.0);
            transfer_gap = transfer_gap.max((a - b).abs());
        }

        let dp = crate::dp::mwt_polygon(inst, &face.boundary)?;
        let objective = weights.iter().map(|(&t, &w)| inst.tri(t).cost * w).sum();
        faces.push(FaceTransposal {
            face_idx,
            weights,
            objective,
            blankets,
            edge_stretch,
            transfer_gap,
            dp_triangles: dp.triangles,
            dp_cost: dp.total_cost,
        });
    }

    let sum_transposed: f64 = faces.iter().map(|f| f.objective).sum();
    let bound = 3.0 * partition.total_length + 12.0 * sigma * x.objective;
    if sum_transposed > bound + 1e-6 {
        return Err(Error::Internal(format!(
            "transposed cost {sum_transposed} exceeds bound {bound}"
        )));
    }
    let rounded_cost: f64 = faces.iter().map(|f| f.dp_cost).sum();
    if rounded_cost > sum_transposed + 1e-6 {
        return Err(Error::Internal(format!(
            "rounded cost {rounded_cost} exceeds transposed cost {sum_transposed}"
        )));
    }
    let ledger = CostLedger {
        sum_transposed,
        partition_length: partition.total_length,
        sigma,
        fractional_cost: x.objective,
        bound,
        rounded_cost,
    };
    Ok(RoundingOutcome { faces, ledger })
}

/// Coverage of `weights` at `count` sample points strictly inside the face,
/// kept away from every chord between face vertices so float point-in-
/// triangle tests are unambiguous. Returns one total per sample.
pub fn face_coverage_at_samples(
    inst: &Instance,
    face: &Face,
    weights: &BTreeMap<TriId, f64>,
    count: usize,
    seed: u64,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = face.boundary.iter().map(|&p| inst.fcoord(p)).collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (x0, x1) = (
        xs.iter().fold(f64::MAX, |a, &b| a.min(b)),
        xs.iter().fold(f64::MIN, |a, &b| a.max(b)),
    );
    let (y0, y1) = (
        ys.iter().fold(f64::MAX, |a, &b| a.min(b)),
        ys.iter().fold(f64::MIN, |a, &b| a.max(b)),
    );
    let diam = (x1 - x0).hypot(y1 - y0);
    let margin = 1e-7 * diam;
    let m = pts.len();
    let mut out = Vec::with_capacity(count);
    let mut guard = 0usize;
    while out.len() < count {
        guard += 1;
        if guard > 100_000 {
            break; // face too thin to sample robustly
        }
        let q = (rng.gen_range(x0..=x1), rng.gen_range(y0..=y1));
        let inside = (0..m).all(|i| fcross(pts[i], pts[(i + 1) % m], q) > margin * diam);
        if !inside {
            continue;
        }
        let clear = (0..m).all(|i| {
            ((i + 1)..m).all(|j| seg_dist(pts[i], pts[j], q) > margin)
        });
        if !clear {
            continue;
        }
        let mut total = 0.0;
        for (&t, &w) in weights {
            let tri = inst.tri(t);
            let a = inst.fcoord(tri.verts[0]);
            let b = inst.fcoord(tri.verts[1]);
            let c = inst.fcoord(tri.verts[2]);
            if fcross(a, b, q) > 0.0 && fcross(b, c, q) > 0.0 && fcross(c, a, q) > 0.0 {
                total += w;
            }
        }
        out.push(total);
    }
    out
}

fn fcross(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn seg_dist(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let l2 = dx * dx + dy * dy;
    if l2 == 0.0 {
        return (p.0 - a.0).hypot(p.1 - a.1);
    }
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / l2).clamp(0.0, 1.0);
    (p.0 - (a.0 + t * dx)).hypot(p.1 - (a.1 + t * dy))
}
