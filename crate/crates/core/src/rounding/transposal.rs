//! Blanket decomposition and the transposal operation.
//!
//! A blanket is a set of triangles that covers a convex face uniformly
//! without overlapping inside it (overlap outside is allowed). A feasible
//! weight vector restricted to the triangles crossing a face decomposes
//! into weighted blankets; each blanket is then slid ("transposed") into
//! the face: every triangle edge crossing the face is clipped to its chord
//! and the chord endpoints slide along the face boundary to the vertex
//! destinations minimizing the resulting diagonal, with one global tie
//! rule so that neighboring chords stay consistent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::geom::{
    convex_overlap, double_area, segments_cross, Face, Instance, PointId, TriId,
};
use crate::lp::FractionalTriangulation;
use crate::{Error, Result};

/// Residual weights below this are treated as zero during extraction.
const RESIDUAL_TOL: f64 = 1e-10;
/// Extraction stops once this little coverage remains.
const COVER_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Blanket {
    pub triangles: Vec<TriId>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransposalSource {
    Edge(PointId, PointId),
    Triangle(TriId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransposalImage {
    /// A diagonal or boundary chord of the face; both ids equal means the
    /// image degenerated to a single vertex.
    Diagonal(PointId, PointId),
    /// Convex polygon spanned by face vertices, counterclockwise.
    Polygon(Vec<PointId>),
}

#[derive(Debug, Clone)]
pub struct TransposalRecord {
    pub source: TransposalSource,
    pub image: TransposalImage,
    pub positive_area: bool,
    /// For triangle records: the diagonals of the crossing edges, paired
    /// with the source edge length.
    pub edge_images: Vec<EdgeImage>,
}

#[derive(Debug, Clone)]
pub struct EdgeImage {
    pub source: (PointId, PointId),
    pub image: (PointId, PointId),
    pub source_len: f64,
    pub image_len: f64,
}

// ---------------------------------------------------------------------------
// exact helpers

fn rat(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

fn rat_point(c: (i64, i64)) -> (BigRational, BigRational) {
    (rat(c.0), rat(c.1))
}

/// True iff the open segment (a,b) meets the open interior of the convex
/// face. Exact.
pub fn edge_crosses_face_interior(inst: &Instance, face: &Face, a: PointId, b: PointId) -> bool {
    match clip_to_face(inst, face, a, b) {
        Some((lo, hi)) => {
            if lo >= hi {
                return false;
            }
            // Midpoint of the chord must be strictly inside; a chord lying
            // along the boundary has its midpoint on an edge.
            let mid = param_point(inst, a, b, &((&lo + &hi) / rat(2)));
            face_contains_rat_strictly(inst, face, &mid)
        }
        None => false,
    }
}

/// Clip segment a->b (parameter t in [0,1]) to the convex face; returns the
/// parameter interval, or None when the intersection is empty.
fn clip_to_face(
    inst: &Instance,
    face: &Face,
    a: PointId,
    b: PointId,
) -> Option<(BigRational, BigRational)> {
    let pa = inst.coord(a);
    let pb = inst.coord(b);
    let mut lo = BigRational::zero();
    let mut hi = rat(1);
    let m = face.boundary.len();
    for i in 0..m {
        let u = inst.coord(face.boundary[i]);
        let w = inst.coord(face.boundary[(i + 1) % m]);
        // orientation(u, w, p(t)) = c0 + t*c1 must stay >= 0
        let c0 = (w.0 - u.0) as i128 * (pa.1 - u.1) as i128
            - (w.1 - u.1) as i128 * (pa.0 - u.0) as i128;
        let c1 = (w.0 - u.0) as i128 * (pb.1 - pa.1) as i128
            - (w.1 - u.1) as i128 * (pb.0 - pa.0) as i128;
        if c1 == 0 {
            if c0 < 0 {
                return None;
            }
            continue;
        }
        let bound = BigRational::new(BigInt::from(-c0), BigInt::from(c1));
        if c1 > 0 {
            if bound > lo {
                lo = bound;
            }
        } else if bound < hi {
            hi = bound;
        }
    }
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

fn param_point(
    inst: &Instance,
    a: PointId,
    b: PointId,
    t: &BigRational,
) -> (BigRational, BigRational) {
    let pa = rat_point(inst.coord(a));
    let pb = rat_point(inst.coord(b));
    (
        &pa.0 + t * (&pb.0 - &pa.0),
        &pa.1 + t * (&pb.1 - &pa.1),
    )
}

fn face_contains_rat_strictly(
    inst: &Instance,
    face: &Face,
    p: &(BigRational, BigRational),
) -> bool {
    let m = face.boundary.len();
    (0..m).all(|i| {
        let u = rat_point(inst.coord(face.boundary[i]));
        let w = rat_point(inst.coord(face.boundary[(i + 1) % m]));
        let cross = (&w.0 - &u.0) * (&p.1 - &u.1) - (&w.1 - &u.1) * (&p.0 - &u.0);
        cross.is_positive()
    })
}

// ---------------------------------------------------------------------------
// edge transposal

/// Transpose an edge into a convex face. The edge must cross the face,
/// meaning its chord has positive length (it meets the boundary in two
/// points or runs along an edge).
pub fn transpose_edge(
    inst: &Instance,
    face: &Face,
    a: PointId,
    b: PointId,
) -> Result<TransposalRecord> {
    let (lo, hi) = clip_to_face(inst, face, a, b).ok_or_else(|| {
        Error::InvalidInput(format!("edge ({a},{b}) does not cross the face"))
    })?;
    if lo == hi {
        // Single-point touch; by convention a degenerate diagonal at the
        // touched vertex.
        let p = param_point(inst, a, b, &lo);
        let v = face_vertex_at(inst, face, &p).ok_or_else(|| {
            Error::Internal("degenerate chord endpoint is not a face vertex".into())
        })?;
        return Ok(TransposalRecord {
            source: TransposalSource::Edge(a, b),
            image: TransposalImage::Diagonal(v, v),
            positive_area: false,
            edge_images: Vec::new(),
        });
    }
    let p_lo = param_point(inst, a, b, &lo);
    let p_hi = param_point(inst, a, b, &hi);
    let cand_lo = destinations(inst, face, &p_lo)?;
    let cand_hi = destinations(inst, face, &p_hi)?;
    let mut best: Option<((i128, (i64, i64), (i64, i64)), (PointId, PointId))> = None;
    for &d0 in &cand_lo {
        for &d1 in &cand_hi {
            let key = (
                crate::geom::sq_dist(inst.coord(d0), inst.coord(d1)),
                inst.coord(d0),
                inst.coord(d1),
            );
            if best.as_ref().map_or(true, |(bk, _)| key < *bk) {
                best = Some((key, (d0, d1)));
            }
        }
    }
    let (_, (d0, d1)) = best.expect("destination candidates are never empty");
    let image_len = inst.euclid(d0, d1);
    Ok(TransposalRecord {
        source: TransposalSource::Edge(a, b),
        image: TransposalImage::Diagonal(d0, d1),
        positive_area: false,
        edge_images: vec![EdgeImage {
            source: (a, b),
            image: (d0, d1),
            source_len: inst.euclid(a, b),
            image_len,
        }],
    })
}

fn face_vertex_at(
    inst: &Instance,
    face: &Face,
    p: &(BigRational, BigRational),
) -> Option<PointId> {
    face.boundary.iter().copied().find(|&v| {
        let c = rat_point(inst.coord(v));
        c.0 == p.0 && c.1 == p.1
    })
}

/// Destination candidates of a clipped endpoint: the vertex itself when the
/// endpoint is a face vertex, else both endpoints of the boundary edge
/// containing it.
fn destinations(
    inst: &Instance,
    face: &Face,
    p: &(BigRational, BigRational),
) -> Result<Vec<PointId>> {
    if let Some(v) = face_vertex_at(inst, face, p) {
        return Ok(vec![v]);
    }
    let m = face.boundary.len();
    for i in 0..m {
        let u = face.boundary[i];
        let w = face.boundary[(i + 1) % m];
        let cu = rat_point(inst.coord(u));
        let cw = rat_point(inst.coord(w));
        let cross = (&cw.0 - &cu.0) * (&p.1 - &cu.1) - (&cw.1 - &cu.1) * (&p.0 - &cu.0);
        if !cross.is_zero() {
            continue;
        }
        let dot = (&p.0 - &cu.0) * (&cw.0 - &cu.0) + (&p.1 - &cu.1) * (&cw.1 - &cu.1);
        let len2 = (&cw.0 - &cu.0) * (&cw.0 - &cu.0) + (&cw.1 - &cu.1) * (&cw.1 - &cu.1);
        if dot.is_positive() && dot < len2 {
            return Ok(vec![u, w]);
        }
    }
    Err(Error::Internal(
        "chord endpoint lies on no boundary edge of the face".into(),
    ))
}

// ---------------------------------------------------------------------------
// triangle and blanket transposal

/// True iff the triangle's open interior meets the face's open interior.
pub fn triangle_crosses_face(inst: &Instance, face: &Face, t: TriId) -> bool {
    let tri: Vec<(i64, i64)> = inst.tri(t).verts.iter().map(|&v| inst.coord(v)).collect();
    let poly: Vec<(i64, i64)> = face.boundary.iter().map(|&v| inst.coord(v)).collect();
    convex_overlap(&tri, &poly)
}

/// Transpose a triangle into a face it crosses: the convex hull of the
/// destinations of its crossing edges, or the face itself when no edge
/// crosses (the triangle covers the whole face).
pub fn transpose_triangle(inst: &Instance, face: &Face, t: TriId) -> Result<TransposalRecord> {
    if !triangle_crosses_face(inst, face, t) {
        return Err(Error::InvalidInput(format!(
            "triangle {t} does not cross the face"
        )));
    }
    let tri = inst.tri(t);
    let mut edge_images = Vec::new();
    let mut hull_pts: Vec<PointId> = Vec::new();
    for k in 0..3 {
        let a = tri.verts[k];
        let b = tri.verts[(k + 1) % 3];
        match clip_to_face(inst, face, a, b) {
            Some((lo, hi)) if lo < hi => {
                let rec = transpose_edge(inst, face, a, b)?;
                if let TransposalImage::Diagonal(d0, d1) = rec.image {
                    hull_pts.push(d0);
                    hull_pts.push(d1);
                }
                edge_images.extend(rec.edge_images);
            }
            _ => {}
        }
    }
    if hull_pts.is_empty() {
        // No edge crosses a face the triangle overlaps: it covers the face.
        return Ok(TransposalRecord {
            source: TransposalSource::Triangle(t),
            image: TransposalImage::Polygon(face.boundary.clone()),
            positive_area: true,
            edge_images,
        });
    }
    hull_pts.sort_unstable();
    hull_pts.dedup();
    let hull = convex_hull_of_face_vertices(inst, face, &hull_pts);
    if hull.len() >= 3 {
        Ok(TransposalRecord {
            source: TransposalSource::Triangle(t),
            image: TransposalImage::Polygon(hull),
            positive_area: true,
            edge_images,
        })
    } else {
        let (d0, d1) = match *hull.as_slice() {
            [a] => (a, a),
            [a, b] => (a, b),
            _ => unreachable!(),
        };
        Ok(TransposalRecord {
            source: TransposalSource::Triangle(t),
            image: TransposalImage::Diagonal(d0, d1),
            positive_area: false,
            edge_images,
        })
    }
}

/// Hull of a subset of the vertices of a strictly convex face: just keep
/// the face's cyclic order.
fn convex_hull_of_face_vertices(
    _inst: &Instance,
    face: &Face,
    pts: &[PointId],
) -> Vec<PointId> {
    let mut out: Vec<PointId> = face
        .boundary
        .iter()
        .copied()
        .filter(|v| pts.contains(v))
        .collect();
    debug_assert_eq!(out.len(), pts.len());
    // Rotate so the smallest id leads, for deterministic output.
    if let Some(pos) = out
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
    {
        out.rotate_left(pos);
    }
    out
}

/// Transpose every triangle of a blanket and validate that the positive-area
/// images tile the face with mutually non-crossing edge images.
pub fn transpose_blanket(
    inst: &Instance,
    face: &Face,
    blanket: &Blanket,
) -> Result<Vec<TransposalRecord>> {
    let records: Vec<TransposalRecord> = blanket
        .triangles
        .iter()
        .map(|&t| transpose_triangle(inst, face, t))
        .collect::<Result<_>>()?;

    // Order preservation: no two edge images may properly cross. Distinct
    // chords collapsing onto one diagonal (or onto a single vertex) is the
    // legitimate zero-area case, not a crossing.
    let images: Vec<(PointId, PointId)> = records
        .iter()
        .flat_map(|r| r.edge_images.iter().map(|ei| ei.image))
        .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
        .filter(|&(a, b)| a != b)
        .collect();
    for (i, &(a0, b0)) in images.iter().enumerate() {
        for &(a1, b1) in &images[i + 1..] {
            if (a0, b0) == (a1, b1) {
                continue;
            }
            if segments_cross(
                inst.coord(a0),
                inst.coord(b0),
                inst.coord(a1),
                inst.coord(b1),
            ) {
                return Err(Error::Internal(format!(
                    "transposed chords cross: ({a0},{b0}) x ({a1},{b1})"
                )));
            }
        }
    }

    // Tiling: exact area identity and pairwise interior-disjointness.
    let polys: Vec<Vec<(i64, i64)>> = records
        .iter()
        .filter(|r| r.positive_area)
        .map(|r| match &r.image {
            TransposalImage::Polygon(p) => p.iter().map(|&v| inst.coord(v)).collect(),
            TransposalImage::Diagonal(_, _) => unreachable!("positive area implies polygon"),
        })
        .collect();
    let total: i128 = polys.iter().map(|p| double_area(p)).sum();
    let face_area = face.double_area(inst);
    if total != face_area {
        return Err(Error::Internal(format!(
            "blanket transposal covers doubled area {total} of {face_area}"
        )));
    }
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            if convex_overlap(&polys[i], &polys[j]) {
                return Err(Error::Internal(
                    "blanket transposal has overlapping regions".into(),
                ));
            }
        }
    }
    Ok(records)
}

/// Minimum-weight triangulation of a transposal image: empty for degenerate
/// images, the polygon DP otherwise.
pub fn triangulated_transposal(inst: &Instance, record: &TransposalRecord) -> Result<Vec<TriId>> {
    match &record.image {
        TransposalImage::Diagonal(_, _) => Ok(Vec::new()),
        TransposalImage::Polygon(p) => {
            if !record.positive_area {
                return Ok(Vec::new());
            }
            Ok(crate::dp::mwt_polygon(inst, p)?.triangles)
        }
    }
}

/// Cost of a transposal image: the summed catalog edge costs of its
/// boundary (zero for degenerate images).
pub fn transposal_cost(inst: &Instance, record: &TransposalRecord) -> f64 {
    match &record.image {
        TransposalImage::Diagonal(_, _) => 0.0,
        TransposalImage::Polygon(p) => {
            if !record.positive_area {
                return 0.0;
            }
            (0..p.len())
                .map(|i| {
                    let e = inst
                        .edge_between(p[i], p[(i + 1) % p.len()])
                        .expect("transposal boundary is made of potential edges");
                    inst.edge(e).cost()
                })
                .sum()
        }
    }
}

// ---------------------------------------------------------------------------
// blanket extraction

/// Decompose a feasible weight vector, restricted to the triangles crossing
/// `face`, into weighted blankets: grow a region from any positive triangle
/// by gluing across boundary edges that still cross the face, peel off the
/// minimum weight, and repeat until the face's coverage is exhausted.
pub fn decompose_into_blankets(
    inst: &Instance,
    x: &FractionalTriangulation,
    face: &Face,
) -> Result<Vec<Blanket>> {
    let mut residual: BTreeMap<TriId, f64> = x
        .support()
        .filter(|&(t, w)| w > RESIDUAL_TOL && triangle_crosses_face(inst, face, t))
        .collect();
    let mut out: Vec<Blanket> = Vec::new();
    let mut remaining = 1.0f64;
    let cap = residual.len() + 8;
    while remaining > COVER_TOL {
        if out.len() >= cap {
            return Err(Error::Internal(format!(
                "blanket extraction did not converge; {remaining:.3e} coverage left"
            )));
        }
        let start = *residual.keys().next().ok_or_else(|| {
            Error::Infeasible(format!(
                "face coverage exhausted with {remaining:.3e} still uncovered"
            ))
        })?;
        let blanket = grow_blanket(inst, face, &residual, start)?;
        let mut eps = blanket
            .iter()
            .map(|t| residual[t])
            .fold(f64::INFINITY, f64::min);
        eps = eps.min(remaining);
        for t in &blanket {
            let w = residual.get_mut(t).unwrap();
            *w -= eps;
            if *w < RESIDUAL_TOL {
                residual.remove(t);
            }
        }
        remaining -= eps;
        out.push(Blanket { triangles: blanket, weight: eps });
    }
    Ok(out)
}

type Dart = (PointId, PointId);

fn grow_blanket(
    inst: &Instance,
    face: &Face,
    residual: &BTreeMap<TriId, f64>,
    start: TriId,
) -> Result<Vec<TriId>> {
    let mut members: Vec<TriId> = vec![start];
    let mut boundary: BTreeMap<Dart, u32> = BTreeMap::new();
    let add_darts = |boundary: &mut BTreeMap<Dart, u32>, t: TriId| {
        let v = inst.tri(t).verts;
        for k in 0..3 {
            let d = (v[k], v[(k + 1) % 3]);
            let rev = (d.1, d.0);
            if let Some(c) = boundary.get_mut(&rev) {
                *c -= 1;
                if *c == 0 {
                    boundary.remove(&rev);
                }
            } else {
                *boundary.entry(d).or_insert(0) += 1;
            }
        }
    };
    add_darts(&mut boundary, start);
    loop {
        let crossing_dart = boundary
            .keys()
            .copied()
            .find(|&(a, b)| edge_crosses_face_interior(inst, face, a, b));
        let (a, b) = match crossing_dart {
            Some(d) => d,
            None => break,
        };
        // The gluing triangle lies on the other side: it contains the
        // reversed dart (b, a).
        let key = if b < a { (b, a) } else { (a, b) };
        let e = inst
            .edge_between(key.0, key.1)
            .expect("blanket boundary darts are catalog edges");
        let candidates = if b < a {
            inst.left_tris(e)
        } else {
            inst.right_tris(e)
        };
        let next = candidates
            .iter()
            .copied()
            .filter(|t| residual.contains_key(t) && !members.contains(t))
            .min();
        let next = match next {
            Some(t) => t,
            None => {
                return Err(Error::Infeasible(format!(
                    "no positive-weight triangle glues across edge ({a},{b}); \
                     the weight vector is not feasible"
                )))
            }
        };
        members.push(next);
        add_darts(&mut boundary, next);
        if members.len() > residual.len() {
            return Err(Error::Internal("blanket growth exceeded the support".into()));
        }
    }
    members.sort_unstable();
    Ok(members)
}

/// Exact check that a blanket's triangles cover the face without interior
/// overlap: the clipped areas sum to the face area and are pairwise
/// interior-disjoint inside the face.
pub fn validate_blanket(inst: &Instance, face: &Face, blanket: &Blanket) -> Result<()> {
    let clips: Vec<Vec<(BigRational, BigRational)>> = blanket
        .triangles
        .iter()
        .map(|&t| clip_triangle_to_face(inst, face, t))
        .collect();
    let mut total = BigRational::zero();
    for c in &clips {
        total += rat_polygon_double_area(c);
    }
    let face_poly: Vec<(BigRational, BigRational)> = face
        .boundary
        .iter()
        .map(|&v| rat_point(inst.coord(v)))
        .collect();
    let expect = rat_polygon_double_area(&face_poly);
    if total != expect {
        return Err(Error::Internal(format!(
            "blanket covers area ratio {} of the face",
            total / expect
        )));
    }
    for i in 0..clips.len() {
        for j in (i + 1)..clips.len() {
            if rat_convex_overlap(&clips[i], &clips[j]) {
                return Err(Error::Internal(format!(
                    "blanket triangles {} and {} overlap inside the face",
                    blanket.triangles[i], blanket.triangles[j]
                )));
            }
        }
    }
    Ok(())
}

fn clip_triangle_to_face(
    inst: &Instance,
    face: &Face,
    t: TriId,
) -> Vec<(BigRational, BigRational)> {
    let mut poly: Vec<(BigRational, BigRational)> = inst
        .tri(t)
        .verts
        .iter()
        .map(|&v| rat_point(inst.coord(v)))
        .collect();
    let m = face.boundary.len();
    for i in 0..m {
        let u = rat_point(inst.coord(face.boundary[i]));
        let w = rat_point(inst.coord(face.boundary[(i + 1) % m]));
        poly = clip_halfplane(&poly, &u, &w);
        if poly.is_empty() {
            break;
        }
    }
    poly
}

fn clip_halfplane(
    poly: &[(BigRational, BigRational)],
    u: &(BigRational, BigRational),
    w: &(BigRational, BigRational),
) -> Vec<(BigRational, BigRational)> {
    let side = |p: &(BigRational, BigRational)| -> BigRational {
        (&w.0 - &u.0) * (&p.1 - &u.1) - (&w.1 - &u.1) * (&p.0 - &u.0)
    };
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let cur = &poly[i];
        let nxt = &poly[(i + 1) % n];
        let sc = side(cur);
        let sn = side(nxt);
        if !sc.is_negative() {
            out.push(cur.clone());
        }
        if (sc.is_negative() && sn.is_positive()) || (sc.is_positive() && sn.is_negative()) {
            let denom = &sc - &sn;
            let t = &sc / &denom;
            out.push((
                &cur.0 + &t * (&nxt.0 - &cur.0),
                &cur.1 + &t * (&nxt.1 - &cur.1),
            ));
        }
    }
    out
}

fn rat_polygon_double_area(poly: &[(BigRational, BigRational)]) -> BigRational {
    let mut s = BigRational::zero();
    let n = poly.len();
    if n < 3 {
        return s;
    }
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        s += &a.0 * &b.1 - &b.0 * &a.1;
    }
    s
}

fn rat_convex_overlap(
    p: &[(BigRational, BigRational)],
    q: &[(BigRational, BigRational)],
) -> bool {
    if rat_polygon_double_area(p).is_zero() || rat_polygon_double_area(q).is_zero() {
        return false;
    }
    !rat_separating_edge(p, q) && !rat_separating_edge(q, p)
}

fn rat_separating_edge(
    p: &[(BigRational, BigRational)],
    q: &[(BigRational, BigRational)],
) -> bool {
    let n = p.len();
    for i in 0..n {
        let u = &p[i];
        let w = &p[(i + 1) % n];
        let all_out = q.iter().all(|v| {
            let cross = (&w.0 - &u.0) * (&v.1 - &u.1) - (&w.1 - &u.1) * (&v.0 - &u.0);
            !cross.is_positive()
        });
        if all_out {
            return true;
        }
    }
    false
}
