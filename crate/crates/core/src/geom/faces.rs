//! Face extraction for a planar straight-line graph on the instance points.
//!
//! Given a non-crossing edge subset that contains the hull boundary, walks
//! the rotation system to produce every bounded face, tagged convex/empty.

use std::collections::{HashMap, HashSet};

use super::{orient, EdgeId, ICoord, Instance, PointId};
use crate::{Error, Result};

/// A bounded face of a PSLG. The boundary walk is counterclockwise; it may
/// repeat vertices when the edge set contains bridges.
#[derive(Debug, Clone)]
pub struct Face {
    pub boundary: Vec<PointId>,
    pub is_convex: bool,
    pub is_empty: bool,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.boundary.iter().all(|v| seen.insert(*v))
    }

    pub fn coords(&self, inst: &Instance) -> Vec<ICoord> {
        self.boundary.iter().map(|&p| inst.coord(p)).collect()
    }

    pub fn double_area(&self, inst: &Instance) -> i128 {
        super::double_area(&self.coords(inst))
    }

    /// Exact strict interior test by ray-casting parity. The query must not
    /// lie on the boundary walk (instance points never lie on edge
    /// interiors, so checking walk membership suffices for them).
    pub fn contains_strictly(&self, inst: &Instance, q: ICoord) -> bool {
        let mut inside = false;
        for i in 0..self.boundary.len() {
            let a = inst.coord(self.boundary[i]);
            let b = inst.coord(self.boundary[(i + 1) % self.boundary.len()]);
            if a.1 <= q.1 && q.1 < b.1 && orient(a, b, q) > 0 {
                inside = !inside;
            } else if b.1 <= q.1 && q.1 < a.1 && orient(a, b, q) < 0 {
                inside = !inside;
            }
        }
        inside
    }

    /// Total boundary length; each walk step counted once.
    pub fn perimeter(&self, inst: &Instance) -> f64 {
        (0..self.boundary.len())
            .map(|i| {
                inst.euclid(
                    self.boundary[i],
                    self.boundary[(i + 1) % self.boundary.len()],
                )
            })
            .sum()
    }
}

/// Extract the bounded faces of the PSLG `(V, edge_subset)`.
///
/// Preconditions: the subset is non-crossing and contains the hull boundary;
/// violations are reported as errors. Isolated vertices strictly inside a
/// face mark it non-empty.
pub fn extract_faces(inst: &Instance, edge_subset: &[EdgeId]) -> Result<Vec<Face>> {
    let edges: Vec<EdgeId> = {
        let mut e = edge_subset.to_vec();
        e.sort_unstable();
        e.dedup();
        e
    };
    for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            if inst.edges_cross(a, b) {
                let (ea, eb) = (inst.edge(a), inst.edge(b));
                return Err(Error::InvalidInput(format!(
                    "edge subset crosses: ({},{}) x ({},{})",
                    ea.u, ea.v, eb.u, eb.v
                )));
            }
        }
    }
    let present: HashSet<EdgeId> = edges.iter().copied().collect();
    for i in 0..inst.hull().len() {
        let u = inst.hull()[i];
        let v = inst.hull()[(i + 1) % inst.hull().len()];
        let id = inst
            .edge_between(u, v)
            .expect("hull boundary edges are always potential");
        if !present.contains(&id) {
            return Err(Error::InvalidInput(format!(
                "edge subset is missing hull boundary edge ({u},{v})"
            )));
        }
    }

    // Rotation system: outgoing darts at each vertex, sorted by exact angle.
    let mut out: HashMap<PointId, Vec<PointId>> = HashMap::new();
    for &e in &edges {
        let edge = inst.edge(e);
        out.entry(edge.u).or_default().push(edge.v);
        out.entry(edge.v).or_default().push(edge.u);
    }
    for (&v, targets) in out.iter_mut() {
        let origin = inst.coord(v);
        targets.sort_by(|&a, &b| angular_cmp(origin, inst.coord(a), inst.coord(b)).then(a.cmp(&b)));
    }

    // Walk faces: successor of dart (u -> v) is the clockwise-next outgoing
    // dart at v after (v -> u).
    let mut visited: HashSet<(PointId, PointId)> = HashSet::new();
    let mut darts: Vec<(PointId, PointId)> = Vec::new();
    for &e in &edges {
        let edge = inst.edge(e);
        darts.push((edge.u, edge.v));
        darts.push((edge.v, edge.u));
    }
    darts.sort_unstable();

    let mut faces = Vec::new();
    for &start in &darts {
        if visited.contains(&start) {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = start;
        loop {
            visited.insert(cur);
            walk.push(cur.0);
            let ring = &out[&cur.1];
            let pos = ring
                .iter()
                .position(|&w| w == cur.0)
                .expect("reverse dart present in rotation ring");
            let next = ring[(pos + ring.len() - 1) % ring.len()];
            cur = (cur.1, next);
            if cur == start {
                break;
            }
        }
        let coords: Vec<ICoord> = walk.iter().map(|&p| inst.coord(p)).collect();
        if super::double_area(&coords) <= 0 {
            continue; // outer face or degenerate hole boundary
        }
        faces.push(build_face(inst, normalize_cycle(walk)));
    }
    faces.sort_by(|a, b| a.boundary.cmp(&b.boundary));
    Ok(faces)
}

fn build_face(inst: &Instance, boundary: Vec<PointId>) -> Face {
    let on_walk: HashSet<PointId> = boundary.iter().copied().collect();
    let simple = on_walk.len() == boundary.len();
    let mut convex = simple;
    if convex {
        let m = boundary.len();
        for i in 0..m {
            let a = inst.coord(boundary[i]);
            let b = inst.coord(boundary[(i + 1) % m]);
            let c = inst.coord(boundary[(i + 2) % m]);
            if orient(a, b, c) <= 0 {
                convex = false;
                break;
            }
        }
    }
    let face = Face {
        boundary,
        is_convex: convex,
        is_empty: true,
    };
    let empty = !(0..inst.n() as PointId).any(|p| {
        !on_walk.contains(&p) && face.contains_strictly(inst, inst.coord(p))
    });
    Face { is_empty: empty, ..face }
}

/// Rotate a cyclic vertex list so the smallest id comes first.
fn normalize_cycle(mut cycle: Vec<PointId>) -> Vec<PointId> {
    let pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(i, &v)| (v, i))
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle.rotate_left(pos);
    cycle
}

/// Exact counterclockwise angular order of directions `a - origin` and
/// `b - origin`, starting from the positive x-axis.
fn angular_cmp(origin: ICoord, a: ICoord, b: ICoord) -> std::cmp::Ordering {
    let da = (a.0 - origin.0, a.1 - origin.1);
    let db = (b.0 - origin.0, b.1 - origin.1);
    let ha = half(da);
    let hb = half(db);
    if ha != hb {
        return ha.cmp(&hb);
    }
    let cross = da.0 as i128 * db.1 as i128 - da.1 as i128 * db.0 as i128;
    match cross.cmp(&0) {
        std::cmp::Ordering::Greater => std::cmp::Ordering::Less,
        std::cmp::Ordering::Less => std::cmp::Ordering::Greater,
        std::cmp::Ordering::Equal => std::cmp::Ordering::Equal,
    }
}

/// 0 for the upper half-plane (including the positive x-axis), 1 for the
/// lower half (including the negative x-axis).
fn half(d: ICoord) -> u8 {
    if d.1 > 0 || (d.1 == 0 && d.0 > 0) {
        0
    } else {
        1
    }
}
