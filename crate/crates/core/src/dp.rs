//! Exact minimum-weight triangulation of a simple empty polygon by the
//! classical cubic dynamic program.
//!
//! Chord validity is decided with exact predicates: a chord is usable iff it
//! crosses no boundary edge, passes through no vertex, and its midpoint lies
//! strictly inside the polygon. The DP then minimizes the total length of
//! added diagonals, which for a fixed boundary is the same as minimizing the
//! summed triangle costs.

use std::collections::HashMap;

use crate::geom::{
    double_area, on_open_segment, orient, segments_cross, Instance, PointId, TriId,
};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct PolygonTriangulation {
    /// The face boundary, counterclockwise.
    pub boundary: Vec<PointId>,
    pub triangles: Vec<TriId>,
    /// Added diagonals as (min_id, max_id) pairs, sorted.
    pub diagonals: Vec<(PointId, PointId)>,
    /// Sum of catalog triangle costs (instance-wide boundary convention).
    pub total_cost: f64,
    /// Total length of the added diagonals alone.
    pub diagonal_length: f64,
}

/// Chord validity table over boundary indices. `valid[i][j]` is true iff the
/// segment between boundary vertices `i` and `j` is a boundary edge or a
/// diagonal lying inside the polygon.
pub fn chord_valid_table(inst: &Instance, boundary: &[PointId]) -> Vec<Vec<bool>> {
    let m = boundary.len();
    let coords: Vec<(i64, i64)> = boundary.iter().map(|&p| inst.coord(p)).collect();
    let adjacent = |i: usize, j: usize| (i + 1) % m == j || (j + 1) % m == i;
    let mut valid = vec![vec![false; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            if adjacent(i, j) {
                valid[i][j] = true;
                valid[j][i] = true;
                continue;
            }
            let a = coords[i];
            let b = coords[j];
            let mut ok = true;
            for k in 0..m {
                let c = coords[k];
                let d = coords[(k + 1) % m];
                if segments_cross(a, b, c, d) {
                    ok = false;
                    break;
                }
            }
            if ok {
                ok = !coords.iter().any(|&p| p != a && p != b && on_open_segment(p, a, b));
            }
            if ok {
                // Midpoint test in doubled coordinates keeps it exact.
                let mid = (a.0 + b.0, a.1 + b.1);
                ok = strictly_inside_doubled(&coords, mid);
            }
            valid[i][j] = ok;
            valid[j][i] = ok;
        }
    }
    valid
}

/// Ray-casting parity for a query point given in doubled coordinates against
/// a polygon in ordinary coordinates. The query must not lie on the boundary.
fn strictly_inside_doubled(poly: &[(i64, i64)], q2: (i64, i64)) -> bool {
    let mut inside = false;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let a2 = (2 * a.0, 2 * a.1);
        let b2 = (2 * b.0, 2 * b.1);
        if a2.1 <= q2.1 && q2.1 < b2.1 && orient(a2, b2, q2) > 0 {
            inside = !inside;
        } else if b2.1 <= q2.1 && q2.1 < a2.1 && orient(a2, b2, q2) < 0 {
            inside = !inside;
        }
    }
    inside
}

/// Minimum-weight triangulation of a simple empty polygon on instance
/// points. Accepts either orientation of the boundary; ties in cost are
/// broken toward the lexicographically smallest diagonal list.
pub fn mwt_polygon(inst: &Instance, boundary_in: &[PointId]) -> Result<PolygonTriangulation> {
    let mut boundary = boundary_in.to_vec();
    if boundary.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "polygon needs at least 3 vertices, got {}",
            boundary.len()
        )));
    }
    let coords_of = |b: &[PointId]| -> Vec<(i64, i64)> { b.iter().map(|&p| inst.coord(p)).collect() };
    if double_area(&coords_of(&boundary)) < 0 {
        boundary.reverse();
    }
    let coords = coords_of(&boundary);
    let m = boundary.len();
    if double_area(&coords) <= 0 {
        return Err(Error::InvalidInput("polygon boundary is degenerate".into()));
    }
    // Simplicity: distinct vertices, non-crossing boundary edges, and every
    // boundary edge must be a potential edge of the instance.
    {
        let mut sorted = boundary.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != m {
            return Err(Error::InvalidInput("polygon boundary repeats a vertex".into()));
        }
    }
    for i in 0..m {
        if inst.edge_between(boundary[i], boundary[(i + 1) % m]).is_none() {
            return Err(Error::InvalidInput(format!(
                "boundary segment ({},{}) is not a potential edge",
                boundary[i],
                boundary[(i + 1) % m]
            )));
        }
        for j in (i + 1)..m {
            if segments_cross(coords[i], coords[(i + 1) % m], coords[j], coords[(j + 1) % m]) {
                return Err(Error::InvalidInput("polygon boundary self-intersects".into()));
            }
        }
    }
    // Emptiness: no instance point strictly inside.
    for p in 0..inst.n() as PointId {
        if boundary.contains(&p) {
            continue;
        }
        let q = inst.coord(p);
        let q2 = (2 * q.0, 2 * q.1);
        if strictly_inside_doubled(&coords, q2) {
            return Err(Error::InvalidInput(format!(
                "polygon face is not empty: point {p} lies inside"
            )));
        }
    }

    let valid = chord_valid_table(inst, &boundary);
    let adjacent = |i: usize, j: usize| (i + 1) % m == j || (j + 1) % m == i;
    let dlen = |i: usize, j: usize| {
        if adjacent(i, j) {
            0.0
        } else {
            inst.euclid(boundary[i], boundary[j])
        }
    };

    // cost[i][j]: cheapest added-diagonal length triangulating the region
    // bounded by chord (i, j) and the boundary path i..j.
    let mut cost = vec![vec![f64::INFINITY; m]; m];
    for i in 0..m - 1 {
        cost[i][i + 1] = 0.0;
    }
    for span in 2..m {
        for i in 0..m - span {
            let j = i + span;
            for k in (i + 1)..j {
                if !valid[i][k] || !valid[k][j] {
                    continue;
                }
                if orient(coords[i], coords[k], coords[j]) <= 0 {
                    continue;
                }
                let c = cost[i][k] + cost[k][j] + dlen(i, k) + dlen(k, j);
                if c < cost[i][j] {
                    cost[i][j] = c;
                }
            }
        }
    }
    if !cost[0][m - 1].is_finite() {
        return Err(Error::Internal("polygon admits no triangulation".into()));
    }

    // Reconstruct, breaking cost ties toward the lexicographically smallest
    // sorted diagonal list (pairs of point ids).
    let mut memo: HashMap<(usize, usize), (Vec<(PointId, PointId)>, Vec<(usize, usize, usize)>)> =
        HashMap::new();
    let tri_list = rebuild(
        inst, &boundary, &coords, &valid, &cost, 0, m - 1, &mut memo,
    )
    .1;

    let mut triangles = Vec::new();
    let mut diag_set: Vec<(PointId, PointId)> = Vec::new();
    for &(i, k, j) in &tri_list {
        let (a, b, c) = (boundary[i], boundary[k], boundary[j]);
        let t = inst.tri_by_verts(a, b, c).ok_or_else(|| {
            Error::Internal(format!("triangle ({a},{b},{c}) missing from catalog"))
        })?;
        triangles.push(t);
        for (x, y) in [(i, k), (k, j), (i, j)] {
            if !adjacent(x, y) {
                let pair = ordered(boundary[x], boundary[y]);
                if !diag_set.contains(&pair) {
                    diag_set.push(pair);
                }
            }
        }
    }
    triangles.sort_unstable();
    diag_set.sort_unstable();
    let diagonal_length: f64 = diag_set.iter().map(|&(u, v)| inst.euclid(u, v)).sum();
    let total_cost = triangles.iter().map(|&t| inst.tri(t).cost).sum();
    Ok(PolygonTriangulation {
        boundary,
        triangles,
        diagonals: diag_set,
        total_cost,
        diagonal_length,
    })
}

fn ordered(u: PointId, v: PointId) -> (PointId, PointId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Returns the lex-smallest sorted diagonal list among optimal decompositions
/// of the subproblem, together with its triangle index triples.
#[allow(clippy::too_many_arguments)]
fn rebuild(
    inst: &Instance,
    boundary: &[PointId],
    coords: &[(i64, i64)],
    valid: &[Vec<bool>],
    cost: &[Vec<f64>],
    i: usize,
    j: usize,
    memo: &mut HashMap<(usize, usize), (Vec<(PointId, PointId)>, Vec<(usize, usize, usize)>)>,
) -> (Vec<(PointId, PointId)>, Vec<(usize, usize, usize)>) {
    if j <= i + 1 {
        return (Vec::new(), Vec::new());
    }
    if let Some(hit) = memo.get(&(i, j)) {
        return hit.clone();
    }
    let m = boundary.len();
    let adjacent = |a: usize, b: usize| (a + 1) % m == b || (b + 1) % m == a;
    let dlen = |a: usize, b: usize| {
        if adjacent(a, b) {
            0.0
        } else {
            inst.euclid(boundary[a], boundary[b])
        }
    };
    let mut best: Option<(Vec<(PointId, PointId)>, Vec<(usize, usize, usize)>)> = None;
    for k in (i + 1)..j {
        if !valid[i][k] || !valid[k][j] || orient(coords[i], coords[k], coords[j]) <= 0 {
            continue;
        }
        let c = cost[i][k] + cost[k][j] + dlen(i, k) + dlen(k, j);
        if c > cost[i][j] + 1e-12 {
            continue;
        }
        let (dl, tl) = rebuild(inst, boundary, coords, valid, cost, i, k, memo);
        let (dr, tr) = rebuild(inst, boundary, coords, valid, cost, k, j, memo);
        let mut diags = dl;
        diags.extend(dr);
        if !adjacent(i, k) {
            diags.push(ordered(boundary[i], boundary[k]));
        }
        if !adjacent(k, j) {
            diags.push(ordered(boundary[k], boundary[j]));
        }
        diags.sort_unstable();
        diags.dedup();
        let mut tris = tl;
        tris.extend(tr);
        tris.push((i, k, j));
        match &best {
            Some((bd, _)) if *bd <= diags => {}
            _ => best = Some((diags, tris)),
        }
    }
    let result = best.expect("finite dp cost implies a valid apex");
    memo.insert((i, j), result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rat;
    use num_bigint::BigInt;

    fn inst(pts: &[(i64, i64)]) -> Instance {
        let coords = pts
            .iter()
            .map(|&(x, y)| (Rat::from(BigInt::from(x)), Rat::from(BigInt::from(y))))
            .collect();
        Instance::new(coords).unwrap()
    }

    #[test]
    fn long_quad_tie_breaks_lexicographically() {
        let q = inst(&[(0, 0), (3, 0), (3, 1), (0, 1)]);
        let tri = mwt_polygon(&q, &[0, 1, 2, 3]).unwrap();
        // Both diagonals have length sqrt(10); the (0,2) one sorts first.
        assert_eq!(tri.diagonals, vec![(0, 2)]);
        assert!((tri.diagonal_length - 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unit_square_cost() {
        let q = inst(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let tri = mwt_polygon(&q, &[0, 1, 2, 3]).unwrap();
        assert!((tri.diagonal_length - 2f64.sqrt()).abs() < 1e-12);
        assert!((tri.total_cost - (4.0 + 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(tri.triangles.len(), 2);
    }

    #[test]
    fn reflex_quad_uses_the_interior_diagonal() {
        let q = inst(&[(0, 0), (4, 0), (1, 1), (0, 4)]);
        let tri = mwt_polygon(&q, &[0, 1, 2, 3]).unwrap();
        // Only (0,0)-(1,1) lies inside; (4,0)-(0,4) is outside the dent.
        assert_eq!(tri.diagonals, vec![(0, 2)]);
    }

    #[test]
    fn rejects_non_empty_face() {
        let tc = inst(&[(0, 0), (4, 0), (2, 3), (2, 1)]);
        assert!(mwt_polygon(&tc, &[0, 1, 2]).is_err());
    }

    #[test]
    fn rejects_self_intersecting_boundary() {
        let q = inst(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert!(mwt_polygon(&q, &[0, 1, 3, 2]).is_err());
    }

    #[test]
    fn invariant_under_rotation_and_reflection() {
        let (instn, cycle) = crate::corpus::random_simple_polygon(9, 5, 50).unwrap();
        let base = mwt_polygon(&instn, &cycle).unwrap();
        for r in 1..cycle.len() {
            let mut rot = cycle.clone();
            rot.rotate_left(r);
            let t = mwt_polygon(&instn, &rot).unwrap();
            assert!((t.total_cost - base.total_cost).abs() < 1e-9);
        }
        let mut rev = cycle.clone();
        rev.reverse();
        let t = mwt_polygon(&instn, &rev).unwrap();
        assert!((t.total_cost - base.total_cost).abs() < 1e-9);
    }

    /// Test-only exhaustive enumeration of polygon triangulations, with its
    /// own f64 midpoint-in-polygon validity check.
    fn enumerate_min(inst: &Instance, boundary: &[PointId]) -> f64 {
        let m = boundary.len();
        let pts: Vec<(f64, f64)> = boundary.iter().map(|&p| inst.fcoord(p)).collect();
        let coords: Vec<(i64, i64)> = boundary.iter().map(|&p| inst.coord(p)).collect();
        let inside = |q: (f64, f64)| {
            let mut inside = false;
            for i in 0..m {
                let a = pts[i];
                let b = pts[(i + 1) % m];
                if (a.1 <= q.1) != (b.1 <= q.1) {
                    let x = a.0 + (q.1 - a.1) / (b.1 - a.1) * (b.0 - a.0);
                    if x > q.0 {
                        inside = !inside;
                    }
                }
            }
            inside
        };
        let ok_chord = |i: usize, j: usize| {
            if (i + 1) % m == j || (j + 1) % m == i {
                return true;
            }
            for k in 0..m {
                if segments_cross(coords[i], coords[j], coords[k], coords[(k + 1) % m]) {
                    return false;
                }
            }
            for (k, &c) in coords.iter().enumerate() {
                if k != i && k != j && on_open_segment(c, coords[i], coords[j]) {
                    return false;
                }
            }
            inside(((pts[i].0 + pts[j].0) / 2.0, (pts[i].1 + pts[j].1) / 2.0))
        };
        fn go(
            i: usize,
            j: usize,
            pts: &[(f64, f64)],
            coords: &[(i64, i64)],
            ok: &dyn Fn(usize, usize) -> bool,
        ) -> f64 {
            if j <= i + 1 {
                return 0.0;
            }
            let dist = |a: usize, b: usize| {
                ((pts[a].0 - pts[b].0).powi(2) + (pts[a].1 - pts[b].1).powi(2)).sqrt()
            };
            let m = pts.len();
            let adjacent = |a: usize, b: usize| (a + 1) % m == b || (b + 1) % m == a;
            let mut best = f64::INFINITY;
            for k in (i + 1)..j {
                if !ok(i, k) || !ok(k, j) || orient(coords[i], coords[k], coords[j]) <= 0 {
                    continue;
                }
                let sub = go(i, k, pts, coords, ok) + go(k, j, pts, coords, ok);
                let add = if adjacent(i, k) { 0.0 } else { dist(i, k) }
                    + if adjacent(k, j) { 0.0 } else { dist(k, j) };
                best = best.min(sub + add);
            }
            best
        }
        go(0, m - 1, &pts, &coords, &ok_chord)
    }

    #[test]
    fn dp_matches_exhaustive_enumeration() {
        for seed in 0..25u64 {
            let n = 5 + (seed as usize % 8);
            let (instn, cycle) = crate::corpus::random_simple_polygon(n, seed, 40).unwrap();
            let dp = mwt_polygon(&instn, &cycle).unwrap();
            let brute = enumerate_min(&instn, &dp.boundary);
            assert!(
                (dp.diagonal_length - brute).abs() < 1e-9,
                "seed {seed}: dp {} vs brute {brute}",
                dp.diagonal_length
            );
        }
    }
}
