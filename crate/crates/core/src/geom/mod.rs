//! Exact planar primitives and the instance model.
//!
//! Coordinates are exact rationals. All incidence and crossing decisions are
//! made in integer arithmetic on a uniformly scaled copy of the coordinates
//! (the common denominator is cleared at load time), so no predicate ever
//! depends on a tolerance. Lengths and costs are `f64`, since Euclidean
//! lengths are irrational in general.

mod faces;

pub use faces::{extract_faces, Face};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::str::FromStr;

use crate::{Error, Result};

pub type Rat = BigRational;
pub type PointId = u32;
pub type EdgeId = u32;
pub type TriId = u32;

/// Scaled integer coordinates must stay below this bound so that every
/// predicate (orientations, squared distances, shoelace sums, doubled
/// midpoints) fits comfortably in `i128`.
const COORD_LIMIT: i64 = 1 << 40;

/// An input vertex. `sx`/`sy` are the exact coordinates scaled by the
/// instance-wide common denominator; `fx`/`fy` are `f64` conversions of the
/// original rationals, used only for lengths.
#[derive(Debug, Clone)]
pub struct Point {
    pub id: PointId,
    pub x: Rat,
    pub y: Rat,
    pub sx: i64,
    pub sy: i64,
    pub fx: f64,
    pub fy: f64,
}

/// A potential edge: a vertex pair whose open segment contains no other
/// instance point. `u < v` always.
#[derive(Debug, Clone)]
pub struct Edge {
    pub u: PointId,
    pub v: PointId,
    pub len: f64,
    pub is_boundary: bool,
}

impl Edge {
    /// Edge cost: boundary edges count in one triangle of any triangulation,
    /// interior edges in two, hence the 1/2 discount.
    pub fn cost(&self) -> f64 {
        if self.is_boundary {
            self.len
        } else {
            self.len / 2.0
        }
    }

    pub fn key(&self) -> (PointId, PointId) {
        (self.u, self.v)
    }
}

/// A triangle on three instance points whose closed interior contains no
/// other instance point. Vertices are stored counterclockwise with the
/// smallest id first.
#[derive(Debug, Clone)]
pub struct EmptyTriangle {
    pub verts: [PointId; 3],
    pub edges: [EdgeId; 3],
    pub cost: f64,
}

impl EmptyTriangle {
    pub fn contains_vert(&self, p: PointId) -> bool {
        self.verts.contains(&p)
    }

    pub fn opposite_vert(&self, u: PointId, v: PointId) -> PointId {
        *self
            .verts
            .iter()
            .find(|&&w| w != u && w != v)
            .expect("edge endpoints must be triangle vertices")
    }
}

/// A planar point set together with everything derived from it: the hull
/// cycle (including collinear boundary points), the potential-edge catalog
/// and the empty-triangle catalog with precomputed costs.
#[derive(Debug)]
pub struct Instance {
    points: Vec<Point>,
    hull: Vec<PointId>,
    edges: Vec<Edge>,
    edge_ids: HashMap<(PointId, PointId), EdgeId>,
    tris: Vec<EmptyTriangle>,
    tri_ids: HashMap<[PointId; 3], TriId>,
    /// Per edge, triangles on the left / right of the u→v direction.
    left_tris: Vec<Vec<TriId>>,
    right_tris: Vec<Vec<TriId>>,
    /// Point ids sorted by (sx, sy); used for bounding-box candidate scans.
    by_x: Vec<PointId>,
}

// ---------------------------------------------------------------------------
// exact predicates on scaled integer coordinates

pub type ICoord = (i64, i64);

/// Sign of the cross product (b-a)×(c-a): +1 for counterclockwise, 0 for
/// collinear, -1 for clockwise. Exact.
pub fn orient(a: ICoord, b: ICoord, c: ICoord) -> i32 {
    let d = (b.0 - a.0) as i128 * (c.1 - a.1) as i128
        - (b.1 - a.1) as i128 * (c.0 - a.0) as i128;
    match d.cmp(&0) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

pub fn sq_dist(a: ICoord, b: ICoord) -> i128 {
    let dx = (b.0 - a.0) as i128;
    let dy = (b.1 - a.1) as i128;
    dx * dx + dy * dy
}

/// True iff `p` lies strictly between `a` and `b` on the open segment.
pub fn on_open_segment(p: ICoord, a: ICoord, b: ICoord) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let dot = (p.0 - a.0) as i128 * (b.0 - a.0) as i128
        + (p.1 - a.1) as i128 * (b.1 - a.1) as i128;
    dot > 0 && dot < sq_dist(a, b)
}

/// True iff the open segments (a,b) and (c,d) intersect. Shared endpoints do
/// not cross; collinear overlap of the interiors does.
pub fn segments_cross(a: ICoord, b: ICoord, c: ICoord, d: ICoord) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    // Collinear: the interiors overlap iff some endpoint is strictly inside
    // the other segment, or the segments are identical.
    if d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0 {
        if on_open_segment(a, c, d)
            || on_open_segment(b, c, d)
            || on_open_segment(c, a, b)
            || on_open_segment(d, a, b)
        {
            return true;
        }
        // Identical or reversed segments share their whole interior.
        return (a == c && b == d) || (a == d && b == c);
    }
    false
}

/// Point in the closed triangle (a,b,c), which must be counterclockwise.
pub fn in_closed_triangle(p: ICoord, a: ICoord, b: ICoord, c: ICoord) -> bool {
    orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
}

/// Point strictly inside the counterclockwise triangle (a,b,c).
pub fn in_open_triangle(p: ICoord, a: ICoord, b: ICoord, c: ICoord) -> bool {
    orient(a, b, p) > 0 && orient(b, c, p) > 0 && orient(c, a, p) > 0
}

/// Proper overlap of two convex counterclockwise polygons: true iff their
/// open interiors intersect. Separating-axis test, exact.
pub fn convex_overlap(p: &[ICoord], q: &[ICoord]) -> bool {
    if double_area(p) == 0 || double_area(q) == 0 {
        return false;
    }
    !has_separating_edge(p, q) && !has_separating_edge(q, p)
}

fn has_separating_edge(p: &[ICoord], q: &[ICoord]) -> bool {
    for i in 0..p.len() {
        let a = p[i];
        let b = p[(i + 1) % p.len()];
        if q.iter().all(|&v| orient(a, b, v) <= 0) {
            return true;
        }
    }
    false
}

/// Twice the signed area of a polygon (counterclockwise positive). Exact.
pub fn double_area(poly: &[ICoord]) -> i128 {
    let mut s: i128 = 0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        s += a.0 as i128 * b.1 as i128 - b.0 as i128 * a.1 as i128;
    }
    s
}

// ---------------------------------------------------------------------------
// coordinate parsing

/// Parse one coordinate token: a decimal (`-2`, `0.125`) or a rational `p/q`.
pub fn parse_coord(tok: &str) -> std::result::Result<Rat, String> {
    if let Some((ps, qs)) = tok.split_once('/') {
        let p = BigInt::from_str(ps.trim()).map_err(|_| format!("bad numerator in `{tok}`"))?;
        let q = BigInt::from_str(qs.trim()).map_err(|_| format!("bad denominator in `{tok}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{tok}`"));
        }
        return Ok(Rat::new(p, q));
    }
    let (sign, body) = match tok.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("empty number `{tok}`"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(format!("`{tok}` is not a decimal or p/q rational"));
    }
    let digits = format!("{}{}", int_part, frac_part);
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|_| format!("bad number `{tok}`"))?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(Rat::new(num * sign, den))
}

// ---------------------------------------------------------------------------
// instance construction

impl Instance {
    /// Build an instance from exact coordinates. Rejects fewer than 3 points,
    /// duplicates, and fully collinear inputs.
    pub fn new(coords: Vec<(Rat, Rat)>) -> Result<Instance> {
        if coords.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "need at least 3 points, got {}",
                coords.len()
            )));
        }
        // Clear denominators: one uniform scale keeps every sign exact.
        let mut denom_lcm = BigInt::one();
        for (x, y) in &coords {
            denom_lcm = denom_lcm.lcm(x.denom());
            denom_lcm = denom_lcm.lcm(y.denom());
        }
        let mut points = Vec::with_capacity(coords.len());
        for (id, (x, y)) in coords.into_iter().enumerate() {
            let sx = scale_to_i64(&x, &denom_lcm)?;
            let sy = scale_to_i64(&y, &denom_lcm)?;
            let fx = x.to_f64().ok_or_else(|| {
                Error::InvalidInput("coordinate not representable as f64".into())
            })?;
            let fy = y.to_f64().ok_or_else(|| {
                Error::InvalidInput("coordinate not representable as f64".into())
            })?;
            points.push(Point {
                id: id as PointId,
                x,
                y,
                sx,
                sy,
                fx,
                fy,
            });
        }
        // Duplicate check on the exact scaled coordinates.
        let mut seen = HashMap::new();
        for p in &points {
            if let Some(prev) = seen.insert((p.sx, p.sy), p.id) {
                return Err(Error::InvalidInput(format!(
                    "duplicate point: ids {prev} and {} coincide",
                    p.id
                )));
            }
        }
        let hull = convex_hull_with_collinear(&points)?;
        let mut by_x: Vec<PointId> = (0..points.len() as PointId).collect();
        by_x.sort_by_key(|&i| (points[i as usize].sx, points[i as usize].sy));

        let mut inst = Instance {
            points,
            hull,
            edges: Vec::new(),
            edge_ids: HashMap::new(),
            tris: Vec::new(),
            tri_ids: HashMap::new(),
            left_tris: Vec::new(),
            right_tris: Vec::new(),
            by_x,
        };
        inst.enumerate_potential_edges();
        inst.enumerate_empty_triangles();
        Ok(inst)
    }

    /// Parse the text instance format: one `x y` pair per line, `#` comments.
    pub fn parse(text: &str) -> Result<Instance> {
        let mut coords = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected `x y`, got {} tokens", toks.len()),
                });
            }
            let x = parse_coord(toks[0]).map_err(|msg| Error::Parse { line, msg })?;
            let y = parse_coord(toks[1]).map_err(|msg| Error::Parse { line, msg })?;
            coords.push((x, y));
        }
        Instance::new(coords)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, id: PointId) -> &Point {
        &self.points[id as usize]
    }

    pub fn coord(&self, id: PointId) -> ICoord {
        let p = &self.points[id as usize];
        (p.sx, p.sy)
    }

    pub fn fcoord(&self, id: PointId) -> (f64, f64) {
        let p = &self.points[id as usize];
        (p.fx, p.fy)
    }

    /// Hull cycle, counterclockwise, including collinear boundary points.
    pub fn hull(&self) -> &[PointId] {
        &self.hull
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id as usize]
    }

    pub fn edge_between(&self, u: PointId, v: PointId) -> Option<EdgeId> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_ids.get(&key).copied()
    }

    pub fn triangles(&self) -> &[EmptyTriangle] {
        &self.tris
    }

    pub fn tri(&self, id: TriId) -> &EmptyTriangle {
        &self.tris[id as usize]
    }

    /// Look up a triangle by any permutation of its vertices.
    pub fn tri_by_verts(&self, a: PointId, b: PointId, c: PointId) -> Option<TriId> {
        let mut v = [a, b, c];
        v.sort_unstable();
        let key = canonical_ccw(self, v);
        self.tri_ids.get(&key).copied()
    }

    /// Triangles containing edge `e` on the left of the u→v direction (u < v).
    pub fn left_tris(&self, e: EdgeId) -> &[TriId] {
        &self.left_tris[e as usize]
    }

    pub fn right_tris(&self, e: EdgeId) -> &[TriId] {
        &self.right_tris[e as usize]
    }

    /// All triangles having `e` as an edge.
    pub fn tris_on_edge(&self, e: EdgeId) -> impl Iterator<Item = TriId> + '_ {
        self.left_tris[e as usize]
            .iter()
            .chain(self.right_tris[e as usize].iter())
            .copied()
    }

    pub fn is_hull_vertex(&self, p: PointId) -> bool {
        self.hull.contains(&p)
    }

    pub fn euclid(&self, u: PointId, v: PointId) -> f64 {
        let (ux, uy) = self.fcoord(u);
        let (vx, vy) = self.fcoord(v);
        ((ux - vx).powi(2) + (uy - vy).powi(2)).sqrt()
    }

    pub fn orient_ids(&self, a: PointId, b: PointId, c: PointId) -> i32 {
        orient(self.coord(a), self.coord(b), self.coord(c))
    }

    pub fn edges_cross(&self, e1: EdgeId, e2: EdgeId) -> bool {
        let a = self.edge(e1);
        let b = self.edge(e2);
        segments_cross(
            self.coord(a.u),
            self.coord(a.v),
            self.coord(b.u),
            self.coord(b.v),
        )
    }

    /// Twice the area of the convex hull. Exact.
    pub fn hull_double_area(&self) -> i128 {
        let poly: Vec<ICoord> = self.hull.iter().map(|&p| self.coord(p)).collect();
        double_area(&poly)
    }

    /// Ids of points whose x-coordinate falls in [lo, hi], by scan over the
    /// x-sorted order.
    fn points_in_x_range(&self, lo: i64, hi: i64) -> &[PointId] {
        let start = self.by_x.partition_point(|&i| self.points[i as usize].sx < lo);
        let end = self.by_x.partition_point(|&i| self.points[i as usize].sx <= hi);
        &self.by_x[start..end]
    }

    fn enumerate_potential_edges(&mut self) {
        let n = self.points.len();
        let mut hull_pairs = HashMap::new();
        for i in 0..self.hull.len() {
            let u = self.hull[i];
            let v = self.hull[(i + 1) % self.hull.len()];
            let key = if u < v { (u, v) } else { (v, u) };
            hull_pairs.insert(key, ());
        }
        for u in 0..n as PointId {
            for v in (u + 1)..n as PointId {
                let a = self.coord(u);
                let b = self.coord(v);
                let (lo, hi) = (a.0.min(b.0), a.0.max(b.0));
                let mut blocked = false;
                for &w in self.points_in_x_range(lo, hi) {
                    if w == u || w == v {
                        continue;
                    }
                    if on_open_segment(self.coord(w), a, b) {
                        blocked = true;
                        break;
                    }
                }
                if blocked {
                    continue;
                }
                let id = self.edges.len() as EdgeId;
                self.edges.push(Edge {
                    u,
                    v,
                    len: self.euclid(u, v),
                    is_boundary: hull_pairs.contains_key(&(u, v)),
                });
                self.edge_ids.insert((u, v), id);
            }
        }
    }

    fn enumerate_empty_triangles(&mut self) {
        // Naive triple loop over the x-sorted order; the x-range of a
        // triangle bounds its blockers, and most non-empty triples die on
        // the first candidate.
        let order = self.by_x.clone();
        let n = order.len();
        let mut found: Vec<[PointId; 3]> = Vec::new();
        for ia in 0..n {
            let pa = order[ia];
            let ca = self.coord(pa);
            for ib in (ia + 1)..n {
                let pb = order[ib];
                let cb = self.coord(pb);
                for ic in (ib + 1)..n {
                    let pc = order[ic];
                    let cc = self.coord(pc);
                    let o = orient(ca, cb, cc);
                    if o == 0 {
                        continue;
                    }
                    // Counterclockwise ordering of the three coordinates.
                    let (t0, t1, t2) = if o > 0 { (ca, cb, cc) } else { (ca, cc, cb) };
                    let ylo = ca.1.min(cb.1).min(cc.1);
                    let yhi = ca.1.max(cb.1).max(cc.1);
                    let mut empty = true;
                    for &w in self.points_in_x_range(ca.0, cc.0) {
                        if w == pa || w == pb || w == pc {
                            continue;
                        }
                        let cw = self.coord(w);
                        if cw.1 < ylo || cw.1 > yhi {
                            continue;
                        }
                        if in_closed_triangle(cw, t0, t1, t2) {
                            empty = false;
                            break;
                        }
                    }
                    if empty {
                        let mut v = [pa, pb, pc];
                        v.sort_unstable();
                        found.push(v);
                    }
                }
            }
        }
        found.sort_unstable();
        self.left_tris = vec![Vec::new(); self.edges.len()];
        self.right_tris = vec![Vec::new(); self.edges.len()];
        for v in found {
            let verts = canonical_ccw(self, v);
            let e01 = self.edge_between(verts[0], verts[1]).expect("triangle edge in catalog");
            let e12 = self.edge_between(verts[1], verts[2]).expect("triangle edge in catalog");
            let e20 = self.edge_between(verts[2], verts[0]).expect("triangle edge in catalog");
            let edges = [e01, e12, e20];
            let cost = edges.iter().map(|&e| self.edge(e).cost()).sum();
            let id = self.tris.len() as TriId;
            self.tris.push(EmptyTriangle { verts, edges, cost });
            self.tri_ids.insert(verts, id);
            for &e in &edges {
                let edge = &self.edges[e as usize];
                let w = self.tris[id as usize].opposite_vert(edge.u, edge.v);
                if self.orient_ids(edge.u, edge.v, w) > 0 {
                    self.left_tris[e as usize].push(id);
                } else {
                    self.right_tris[e as usize].push(id);
                }
            }
        }
    }
}

fn scale_to_i64(x: &Rat, denom_lcm: &BigInt) -> Result<i64> {
    let scaled = x.numer() * (denom_lcm / x.denom());
    let val = scaled.to_i64().ok_or_else(|| {
        Error::InvalidInput("coordinate too large after exact scaling".into())
    })?;
    if val.abs() >= COORD_LIMIT {
        return Err(Error::InvalidInput(format!(
            "scaled coordinate magnitude {} exceeds supported range 2^40",
            val.abs()
        )));
    }
    Ok(val)
}

/// Sorted vertex triple -> counterclockwise triple with the smallest id first.
fn canonical_ccw(inst: &Instance, v: [PointId; 3]) -> [PointId; 3] {
    if inst.orient_ids(v[0], v[1], v[2]) > 0 {
        v
    } else {
        [v[0], v[2], v[1]]
    }
}

/// Convex hull, counterclockwise, keeping points that lie on the boundary
/// between corners. Errors if all points are collinear.
fn convex_hull_with_collinear(points: &[Point]) -> Result<Vec<PointId>> {
    let mut ids: Vec<PointId> = (0..points.len() as PointId).collect();
    ids.sort_by_key(|&i| (points[i as usize].sx, points[i as usize].sy));
    let coord = |i: PointId| (points[i as usize].sx, points[i as usize].sy);

    // Strict hull (corners only) by monotone chain.
    let build = |iter: &mut dyn Iterator<Item = PointId>| {
        let mut chain: Vec<PointId> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && orient(coord(chain[chain.len() - 2]), coord(chain[chain.len() - 1]), coord(p))
                    <= 0
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain
    };
    let lower = build(&mut ids.iter().copied());
    let upper = build(&mut ids.iter().rev().copied());
    let mut corners = lower;
    corners.pop();
    corners.extend_from_slice(&upper[..upper.len().saturating_sub(1)]);
    if corners.len() < 3 {
        return Err(Error::InvalidInput("all points are collinear".into()));
    }

    // Splice collinear boundary points into their hull edges, ordered along
    // the edge.
    let mut full = Vec::new();
    for i in 0..corners.len() {
        let a = corners[i];
        let b = corners[(i + 1) % corners.len()];
        full.push(a);
        let mut mid: Vec<PointId> = (0..points.len() as PointId)
            .filter(|&w| w != a && w != b && on_open_segment(coord(w), coord(a), coord(b)))
            .collect();
        mid.sort_by_key(|&w| sq_dist(coord(a), coord(w)));
        full.extend(mid);
    }
    Ok(full)
}
