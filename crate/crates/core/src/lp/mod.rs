//! The triangle-weight linear program in edge-constraint form.
//!
//! One nonnegative variable per empty triangle; per potential edge, either
//! a coverage row (boundary, sum = 1) or a balance row (interior, left sum
//! minus right sum = 0). A heuristic ledger, when supplied, deletes the
//! variables of triangles touching a forced-out edge and replaces the
//! balance row of each forced-in interior edge by the pair of forcing rows
//! left = 1 and right = 1.
//!
//! The same machinery builds the LP of a simple polygon region, where the
//! variable universe is the empty triangles inside the polygon and the
//! boundary rows are the polygon's own edges.

mod simplex;
pub mod io;

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::dp::chord_valid_table;
use crate::geom::{convex_overlap, double_area, EdgeId, Instance, PointId, TriId};
use crate::heuristics::{EdgeStatus, EdgeStatusLedger};
use crate::{Error, Result};

pub const FEAS_TOL: f64 = 1e-9;
pub const INT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Triangles on the region side of a boundary edge sum to 1.
    Boundary(EdgeId),
    /// Left triangles minus right triangles of an interior edge sum to 0.
    Balance(EdgeId),
    /// Forcing rows of a ledger-proven interior edge: each side sums to 1.
    ForcedLeft(EdgeId),
    ForcedRight(EdgeId),
}

#[derive(Debug)]
pub struct TriangulationLP {
    /// Variable -> catalog triangle.
    pub cols: Vec<TriId>,
    pub col_of: HashMap<TriId, usize>,
    pub rows: Vec<RowKind>,
    pub row_entries: Vec<Vec<(usize, f64)>>,
    pub rhs: Vec<f64>,
    pub costs: Vec<f64>,
    /// Column indices of a feasible integer triangulation, when one was
    /// found greedily; used as the simplex crash basis.
    pub warm_start: Option<Vec<usize>>,
    /// Catalog size before ledger reduction, for elimination reporting.
    pub total_triangles: usize,
    /// Twice the area of the region covered by a feasible solution.
    pub region_double_area: i128,
}

/// A feasible (usually optimal) weight vector over the triangle catalog.
#[derive(Debug, Clone)]
pub struct FractionalTriangulation {
    pub weights: BTreeMap<TriId, f64>,
    pub objective: f64,
}

impl FractionalTriangulation {
    pub fn weight(&self, t: TriId) -> f64 {
        self.weights.get(&t).copied().unwrap_or(0.0)
    }

    /// Edge weight: total weight of triangles containing the edge, halved
    /// for interior edges.
    pub fn edge_weight(&self, inst: &Instance, e: EdgeId) -> f64 {
        let sum: f64 = inst.tris_on_edge(e).map(|t| self.weight(t)).sum();
        if inst.edge(e).is_boundary {
            sum
        } else {
            sum / 2.0
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (TriId, f64)> + '_ {
        self.weights.iter().map(|(&t, &w)| (t, w))
    }
}

#[derive(Debug, Clone)]
pub enum SolutionClass {
    Integral { triangles: Vec<TriId>, cost: f64 },
    Fractional { witnesses: Vec<TriId> },
}

// ---------------------------------------------------------------------------
// builders

/// Build the LP of a full instance, optionally reduced by a ledger.
pub fn build_lp(inst: &Instance, ledger: Option<&EdgeStatusLedger>) -> Result<TriangulationLP> {
    let status = |e: EdgeId| ledger.map_or(EdgeStatus::Unknown, |l| l.status_of(e));

    let keep_tri = |t: TriId| {
        inst.tri(t)
            .edges
            .iter()
            .all(|&e| status(e) != EdgeStatus::ForcedOut)
    };
    let cols: Vec<TriId> =
        (0..inst.triangles().len() as TriId).filter(|&t| keep_tri(t)).collect();
    let col_of: HashMap<TriId, usize> = cols.iter().enumerate().map(|(i, &t)| (t, i)).collect();

    let mut rows = Vec::new();
    let mut row_entries = Vec::new();
    let mut rhs = Vec::new();
    for e in 0..inst.edges().len() as EdgeId {
        let st = status(e);
        if st == EdgeStatus::ForcedOut {
            continue; // all of its triangles are gone
        }
        let left: Vec<usize> = inst
            .left_tris(e)
            .iter()
            .filter_map(|t| col_of.get(t).copied())
            .collect();
        let right: Vec<usize> = inst
            .right_tris(e)
            .iter()
            .filter_map(|t| col_of.get(t).copied())
            .collect();
        if inst.edge(e).is_boundary {
            if left.is_empty() && right.is_empty() {
                return Err(Error::Infeasible(format!(
                    "boundary edge ({},{}) has no empty triangle",
                    inst.edge(e).u,
                    inst.edge(e).v
                )));
            }
            rows.push(RowKind::Boundary(e));
            row_entries.push(
                left.iter().chain(right.iter()).map(|&c| (c, 1.0)).collect(),
            );
            rhs.push(1.0);
        } else if st == EdgeStatus::ForcedIn {
            if left.is_empty() || right.is_empty() {
                return Err(Error::Infeasible(format!(
                    "forced-in edge ({},{}) lost all triangles on one side",
                    inst.edge(e).u,
                    inst.edge(e).v
                )));
            }
            rows.push(RowKind::ForcedLeft(e));
            row_entries.push(left.iter().map(|&c| (c, 1.0)).collect());
            rhs.push(1.0);
            rows.push(RowKind::ForcedRight(e));
            row_entries.push(right.iter().map(|&c| (c, 1.0)).collect());
            rhs.push(1.0);
        } else {
            rows.push(RowKind::Balance(e));
            let mut entries: Vec<(usize, f64)> =
                left.iter().map(|&c| (c, 1.0)).collect();
            entries.extend(right.iter().map(|&c| (c, -1.0)));
            row_entries.push(entries);
            rhs.push(0.0);
        }
    }

    let costs: Vec<f64> = cols.iter().map(|&t| inst.tri(t).cost).collect();
    let warm_start = greedy_triangulation(inst, ledger)
        .map(|tris| {
            tris.iter()
                .map(|t| col_of.get(t).copied())
                .collect::<Option<Vec<usize>>>()
        })
        .unwrap_or(None);

    Ok(TriangulationLP {
        cols,
        col_of,
        rows,
        row_entries,
        rhs,
        costs,
        warm_start,
        total_triangles: inst.triangles().len(),
        region_double_area: inst.hull_double_area(),
    })
}

/// Build the LP of a simple empty polygon region on instance points. The
/// costs come from the instance-wide catalog so values are directly
/// comparable with the polygon dynamic program.
pub fn build_polygon_lp(inst: &Instance, boundary: &[PointId]) -> Result<TriangulationLP> {
    let m = boundary.len();
    if m < 3 {
        return Err(Error::InvalidInput("polygon needs at least 3 vertices".into()));
    }
    let mut cycle = boundary.to_vec();
    let coords: Vec<(i64, i64)> = cycle.iter().map(|&p| inst.coord(p)).collect();
    if double_area(&coords) < 0 {
        cycle.reverse();
    }
    for i in 0..m {
        if inst.edge_between(cycle[i], cycle[(i + 1) % m]).is_none() {
            return Err(Error::InvalidInput(format!(
                "polygon boundary segment ({},{}) is not a potential edge",
                cycle[i],
                cycle[(i + 1) % m]
            )));
        }
    }
    let valid = chord_valid_table(inst, &cycle);
    let index_of: HashMap<PointId, usize> =
        cycle.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let boundary_pairs: HashSet<(PointId, PointId)> = (0..m)
        .map(|i| ordered_pair(cycle[i], cycle[(i + 1) % m]))
        .collect();

    // Region edges: polygon boundary plus valid interior chords.
    let mut region_edges: Vec<EdgeId> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            if valid[i][j] {
                if let Some(e) = inst.edge_between(cycle[i], cycle[j]) {
                    region_edges.push(e);
                }
            }
        }
    }
    region_edges.sort_unstable();
    let region_edge_set: HashSet<EdgeId> = region_edges.iter().copied().collect();

    // Region triangles: catalog triangles all of whose vertices are polygon
    // vertices and all of whose edges are region edges.
    let mut cols: Vec<TriId> = (0..inst.triangles().len() as TriId)
        .filter(|&t| {
            let tri = inst.tri(t);
            tri.verts.iter().all(|v| index_of.contains_key(v))
                && tri.edges.iter().all(|e| region_edge_set.contains(e))
        })
        .collect();
    cols.sort_unstable();
    let col_of: HashMap<TriId, usize> = cols.iter().enumerate().map(|(i, &t)| (t, i)).collect();

    let mut rows = Vec::new();
    let mut row_entries = Vec::new();
    let mut rhs = Vec::new();
    for &e in &region_edges {
        let edge = inst.edge(e);
        let left: Vec<usize> = inst
            .left_tris(e)
            .iter()
            .filter_map(|t| col_of.get(t).copied())
            .collect();
        let right: Vec<usize> = inst
            .right_tris(e)
            .iter()
            .filter_map(|t| col_of.get(t).copied())
            .collect();
        if boundary_pairs.contains(&(edge.u, edge.v)) {
            if left.is_empty() && right.is_empty() {
                return Err(Error::Infeasible(format!(
                    "polygon edge ({},{}) has no triangle inside the region",
                    edge.u, edge.v
                )));
            }
            rows.push(RowKind::Boundary(e));
            row_entries.push(left.iter().chain(right.iter()).map(|&c| (c, 1.0)).collect());
            rhs.push(1.0);
        } else {
            rows.push(RowKind::Balance(e));
            let mut entries: Vec<(usize, f64)> = left.iter().map(|&c| (c, 1.0)).collect();
            entries.extend(right.iter().map(|&c| (c, -1.0)));
            row_entries.push(entries);
            rhs.push(0.0);
        }
    }

    let costs: Vec<f64> = cols.iter().map(|&t| inst.tri(t).cost).collect();
    let warm_start = greedy_polygon_triangulation(inst, &cycle, &valid)
        .map(|tris| {
            tris.iter()
                .map(|t| col_of.get(t).copied())
                .collect::<Option<Vec<usize>>>()
        })
        .unwrap_or(None);
    let region_double_area = double_area(&cycle.iter().map(|&p| inst.coord(p)).collect::<Vec<_>>());

    Ok(TriangulationLP {
        cols,
        col_of,
        rows,
        row_entries,
        rhs,
        costs,
        warm_start,
        total_triangles: inst.triangles().len(),
        region_double_area,
    })
}

fn ordered_pair(u: PointId, v: PointId) -> (PointId, PointId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

// ---------------------------------------------------------------------------
// solving and classification

/// Solve the LP to an optimal basic feasible solution (a vertex of the
/// polytope). Deterministic under the fixed pivot rules; a numerical stall
/// is retried once with a lexicographically perturbed objective.
pub fn solve_to_extreme_point(lp: &TriangulationLP, feas_tol: f64) -> Result<FractionalTriangulation> {
    let attempt = |costs: &[f64]| {
        simplex::solve(
            &lp.row_entries,
            &lp.rhs,
            costs,
            lp.warm_start.as_deref(),
            feas_tol,
        )
    };
    let outcome = match attempt(&lp.costs) {
        Ok(o) => o,
        Err(Error::Internal(msg)) => {
            log::warn!("simplex stalled ({msg}); retrying with perturbed objective");
            let scale: f64 = lp.costs.iter().fold(1.0f64, |a, &c| a.max(c.abs()));
            let perturbed: Vec<f64> = lp
                .costs
                .iter()
                .enumerate()
                .map(|(j, &c)| c + scale * 1e-10 * (j + 1) as f64)
                .collect();
            attempt(&perturbed)?
        }
        Err(e) => return Err(e),
    };

    // Residuals are checked against the original sparse rows, not the
    // drifted tableau.
    let mut max_resid = 0.0f64;
    for (row, &b) in lp.row_entries.iter().zip(&lp.rhs) {
        let lhs: f64 = row.iter().map(|&(c, a)| a * outcome.x[c]).sum();
        max_resid = max_resid.max((lhs - b).abs());
    }
    if max_resid > 100.0 * feas_tol {
        return Err(Error::Internal(format!(
            "solution residual {max_resid:.3e} exceeds tolerance"
        )));
    }

    let mut weights = BTreeMap::new();
    let mut objective = 0.0;
    for (j, &x) in outcome.x.iter().enumerate() {
        objective += lp.costs[j] * x;
        if x > 1e-12 {
            weights.insert(lp.cols[j], x);
        }
    }
    log::debug!(
        "simplex: {} iterations, bland={}, objective {objective:.6}",
        outcome.iterations,
        outcome.used_bland
    );
    Ok(FractionalTriangulation { weights, objective })
}

/// Classify a basic optimal solution: integral within `tol` (returning the
/// validated tiling) or fractional (returning the strictly fractional
/// triangles).
pub fn classify_solution(
    inst: &Instance,
    lp: &TriangulationLP,
    x: &FractionalTriangulation,
    tol: f64,
) -> Result<SolutionClass> {
    let mut witnesses: Vec<TriId> = Vec::new();
    let mut chosen: Vec<TriId> = Vec::new();
    for &t in &lp.cols {
        let w = x.weight(t);
        if w > tol && w < 1.0 - tol {
            witnesses.push(t);
        } else if w >= 1.0 - tol {
            chosen.push(t);
        }
    }
    if !witnesses.is_empty() {
        return Ok(SolutionClass::Fractional { witnesses });
    }
    // Validate the tiling: pairwise interior-disjoint and exact area cover.
    let polys: Vec<Vec<(i64, i64)>> = chosen
        .iter()
        .map(|&t| inst.tri(t).verts.iter().map(|&v| inst.coord(v)).collect())
        .collect();
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            if convex_overlap(&polys[i], &polys[j]) {
                return Err(Error::Internal(format!(
                    "integral solution has overlapping triangles {} and {}",
                    chosen[i], chosen[j]
                )));
            }
        }
    }
    let area: i128 = polys.iter().map(|p| double_area(p)).sum();
    if area != lp.region_double_area {
        return Err(Error::Internal(format!(
            "integral solution covers doubled area {area} of {}",
            lp.region_double_area
        )));
    }
    let cost = chosen.iter().map(|&t| inst.tri(t).cost).sum();
    Ok(SolutionClass::Integral { triangles: chosen, cost })
}

// ---------------------------------------------------------------------------
// greedy warm starts

/// Shortest-first greedy triangulation of the instance, seeded with the
/// ledger's forced-in edges and avoiding forced-out ones. Falls back to the
/// unconstrained greedy if the constrained edge set cannot complete.
pub fn greedy_triangulation(
    inst: &Instance,
    ledger: Option<&EdgeStatusLedger>,
) -> Option<Vec<TriId>> {
    if let Some(l) = ledger {
        if let Some(t) = greedy_attempt(inst, Some(l)) {
            return Some(t);
        }
    }
    greedy_attempt(inst, None)
}

fn greedy_attempt(inst: &Instance, ledger: Option<&EdgeStatusLedger>) -> Option<Vec<TriId>> {
    let mut accepted: Vec<EdgeId> = Vec::new();
    let mut order: Vec<EdgeId> = (0..inst.edges().len() as EdgeId).collect();
    order.sort_by(|&a, &b| {
        inst.edge(a)
            .len
            .partial_cmp(&inst.edge(b).len)
            .unwrap()
            .then(a.cmp(&b))
    });
    if let Some(l) = ledger {
        for e in l.forced_in_edges() {
            accepted.push(e);
        }
    }
    for e in order {
        if accepted.contains(&e) {
            continue;
        }
        if let Some(l) = ledger {
            if l.status_of(e) == EdgeStatus::ForcedOut {
                continue;
            }
        }
        if accepted.iter().all(|&f| !inst.edges_cross(e, f)) {
            accepted.push(e);
        }
    }
    let faces = crate::geom::extract_faces(inst, &accepted).ok()?;
    let mut tris = Vec::new();
    for f in &faces {
        if f.len() != 3 {
            return None;
        }
        tris.push(inst.tri_by_verts(f.boundary[0], f.boundary[1], f.boundary[2])?);
    }
    tris.sort_unstable();
    Some(tris)
}

/// Shortest-first greedy triangulation of a simple polygon over its valid
/// chords.
fn greedy_polygon_triangulation(
    inst: &Instance,
    cycle: &[PointId],
    valid: &[Vec<bool>],
) -> Option<Vec<TriId>> {
    let m = cycle.len();
    let mut segs: Vec<((i64, i64), (i64, i64))> = (0..m)
        .map(|i| (inst.coord(cycle[i]), inst.coord(cycle[(i + 1) % m])))
        .collect();
    let mut chords: Vec<(usize, usize)> = Vec::new();
    let mut cand: Vec<(usize, usize)> = Vec::new();
    for i in 0..m {
        for j in (i + 2)..m {
            if valid[i][j] && !(i == 0 && j == m - 1) {
                cand.push((i, j));
            }
        }
    }
    cand.sort_by(|&(a, b), &(c, d)| {
        inst.euclid(cycle[a], cycle[b])
            .partial_cmp(&inst.euclid(cycle[c], cycle[d]))
            .unwrap()
            .then((a, b).cmp(&(c, d)))
    });
    for (i, j) in cand {
        let a = inst.coord(cycle[i]);
        let b = inst.coord(cycle[j]);
        if segs
            .iter()
            .all(|&(c, d)| !crate::geom::segments_cross(a, b, c, d))
        {
            segs.push((a, b));
            chords.push((i, j));
        }
    }
    // Recover triangles by ear search over the chord structure: build the
    // edge adjacency and take every vertex triple forming a face.
    let mut adj = vec![HashSet::new(); m];
    for i in 0..m {
        adj[i].insert((i + 1) % m);
        adj[(i + 1) % m].insert(i);
    }
    for &(i, j) in &chords {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    // Interval sweep: triangle fan discovery via the dp-style recursion.
    let mut tris = Vec::new();
    let mut stack = vec![(0usize, m - 1)];
    while let Some((i, j)) = stack.pop() {
        if j <= i + 1 {
            continue;
        }
        let k = (i + 1..j).find(|&k| adj[i].contains(&k) && adj[k].contains(&j))?;
        tris.push(inst.tri_by_verts(cycle[i], cycle[k], cycle[j])?);
        stack.push((i, k));
        stack.push((k, j));
    }
    tris.sort_unstable();
    Some(tris)
}
