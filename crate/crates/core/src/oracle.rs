//! Desk-scale ground truth: exhaustive enumeration of all triangulations of
//! the point set, brute-force minimum-weight search, and minimum-cost stars.
//!
//! Enumeration walks a canonical completion tree: at each step the
//! lexicographically smallest unfilled directed edge is filled with every
//! compatible empty triangle, so each triangulation is produced exactly once.

use std::collections::{BTreeSet, HashSet};

use crate::geom::{EdgeId, Instance, PointId, TriId};
use crate::{Error, Result};

/// Default size guard for the exponential searches.
pub const DEFAULT_GUARD: usize = 13;

/// Cost ties within this tolerance are all retained as optima.
pub const TIE_TOL: f64 = 1e-9;

type Dart = (PointId, PointId);

/// Every triangulation of the instance, as sorted triangle-id lists, plus
/// the subset attaining the minimum cost within [`TIE_TOL`].
#[derive(Debug, Clone)]
pub struct TriangulationSet {
    pub all: Vec<Vec<TriId>>,
    pub optima: Vec<Vec<TriId>>,
    pub min_cost: f64,
}

/// A star at a vertex: a set of incident edges with no angular gap of 180
/// degrees or more (interior vertices), or the two hull edges (boundary).
#[derive(Debug, Clone)]
pub struct Star {
    pub center: PointId,
    pub edges: Vec<EdgeId>,
    pub cost: f64,
}

pub fn triangulation_cost(inst: &Instance, tris: &[TriId]) -> f64 {
    tris.iter().map(|&t| inst.tri(t).cost).sum()
}

/// Enumerate every triangulation. Guarded by `max_n` (default
/// [`DEFAULT_GUARD`]) because the count is exponential.
pub fn enumerate_triangulations(inst: &Instance, max_n: usize) -> Result<TriangulationSet> {
    if inst.n() > max_n {
        return Err(Error::SizeGuard { n: inst.n(), max: max_n });
    }
    let mut all = search(inst, false)?;
    all.sort();
    all.dedup();
    let costs: Vec<f64> = all.iter().map(|t| triangulation_cost(inst, t)).collect();
    let min_cost = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let optima = all
        .iter()
        .zip(&costs)
        .filter(|(_, &c)| c <= min_cost + TIE_TOL)
        .map(|(t, _)| t.clone())
        .collect();
    Ok(TriangulationSet { all, optima, min_cost })
}

/// Brute-force minimum-weight triangulation with cost pruning; returns the
/// minimum cost and every optimal triangulation (ties within [`TIE_TOL`]).
pub fn brute_force_mwt(inst: &Instance, max_n: usize) -> Result<(f64, Vec<Vec<TriId>>)> {
    if inst.n() > max_n {
        return Err(Error::SizeGuard { n: inst.n(), max: max_n });
    }
    let mut all = search(inst, true)?;
    all.sort();
    all.dedup();
    let costs: Vec<f64> = all.iter().map(|t| triangulation_cost(inst, t)).collect();
    let min_cost = costs.iter().copied().fold(f64::INFINITY, f64::min);
    if !min_cost.is_finite() {
        return Err(Error::Internal("no triangulation found".into()));
    }
    let optima: Vec<Vec<TriId>> = all
        .into_iter()
        .zip(&costs)
        .filter(|(_, &c)| c <= min_cost + TIE_TOL)
        .map(|(t, _)| t)
        .collect();
    Ok((min_cost, optima))
}

struct SearchState<'a> {
    inst: &'a Instance,
    pending: BTreeSet<Dart>,
    satisfied: HashSet<Dart>,
    edges: Vec<EdgeId>,
    edge_set: HashSet<EdgeId>,
    chosen: Vec<TriId>,
    cost: f64,
    best: f64,
    prune: bool,
    out: Vec<Vec<TriId>>,
}

/// With `prune` set, branches whose partial cost already exceeds the best
/// completed cost plus [`TIE_TOL`] are cut; every optimum survives since
/// triangle costs are positive.
fn search(inst: &Instance, prune: bool) -> Result<Vec<Vec<TriId>>> {
    let mut st = SearchState {
        inst,
        pending: BTreeSet::new(),
        satisfied: HashSet::new(),
        edges: Vec::new(),
        edge_set: HashSet::new(),
        chosen: Vec::new(),
        cost: 0.0,
        best: f64::INFINITY,
        prune,
        out: Vec::new(),
    };
    let h = inst.hull().len();
    for i in 0..h {
        let u = inst.hull()[i];
        let v = inst.hull()[(i + 1) % h];
        st.pending.insert((u, v));
        st.satisfied.insert((v, u));
        let e = inst.edge_between(u, v).expect("hull edge");
        st.edges.push(e);
        st.edge_set.insert(e);
    }
    recurse(&mut st);
    Ok(st.out)
}

fn recurse(st: &mut SearchState) {
    let dart = match st.pending.iter().next() {
        None => {
            let mut tris = st.chosen.clone();
            tris.sort_unstable();
            if st.cost < st.best {
                st.best = st.cost;
            }
            st.out.push(tris);
            return;
        }
        Some(&d) => d,
    };
    let (u, v) = dart;
    let key = if u < v { (u, v) } else { (v, u) };
    let eid = st
        .inst
        .edge_between(key.0, key.1)
        .expect("pending darts are catalog edges");
    let candidates: Vec<TriId> = if u < v {
        st.inst.left_tris(eid).to_vec()
    } else {
        st.inst.right_tris(eid).to_vec()
    };
    for t in candidates {
        let tri = st.inst.tri(t);
        if st.prune && st.cost + tri.cost > st.best + TIE_TOL {
            continue;
        }
        let tri_darts: [Dart; 3] = [
            (tri.verts[0], tri.verts[1]),
            (tri.verts[1], tri.verts[2]),
            (tri.verts[2], tri.verts[0]),
        ];
        if tri_darts.iter().any(|d| st.satisfied.contains(d)) {
            continue;
        }
        let new_edges: Vec<EdgeId> = tri
            .edges
            .iter()
            .copied()
            .filter(|e| !st.edge_set.contains(e))
            .collect();
        if new_edges
            .iter()
            .any(|&e| st.edges.iter().any(|&f| st.inst.edges_cross(e, f)))
        {
            continue;
        }

        // place
        let mut removed_pending = Vec::new();
        let mut added_pending = Vec::new();
        for &d in &tri_darts {
            st.satisfied.insert(d);
            if st.pending.remove(&d) {
                removed_pending.push(d);
            }
        }
        for &d in &tri_darts {
            let rev = (d.1, d.0);
            if !st.satisfied.contains(&rev) && st.pending.insert(rev) {
                added_pending.push(rev);
            }
        }
        for &e in &new_edges {
            st.edges.push(e);
            st.edge_set.insert(e);
        }
        st.chosen.push(t);
        st.cost += tri.cost;

        recurse(st);

        // unplace
        st.cost -= tri.cost;
        st.chosen.pop();
        for &e in &new_edges {
            st.edges.pop();
            st.edge_set.remove(&e);
        }
        for d in added_pending {
            st.pending.remove(&d);
        }
        for &d in &tri_darts {
            st.satisfied.remove(&d);
        }
        for d in removed_pending {
            st.pending.insert(d);
        }
    }
}

/// Minimum-cost star at `v`. Boundary vertices get exactly their two hull
/// edges; interior vertices are solved by a shortest-circular-cover dynamic
/// program over the incident edges sorted by angle.
pub fn min_cost_star(inst: &Instance, v: PointId) -> Result<Star> {
    if inst.is_hull_vertex(v) {
        let h = inst.hull();
        let pos = h.iter().position(|&p| p == v).unwrap();
        let prev = h[(pos + h.len() - 1) % h.len()];
        let next = h[(pos + 1) % h.len()];
        let edges = vec![
            inst.edge_between(prev, v).expect("hull edge"),
            inst.edge_between(v, next).expect("hull edge"),
        ];
        let cost = edges.iter().map(|&e| inst.edge(e).len).sum();
        return Ok(Star { center: v, edges, cost });
    }

    let origin = inst.coord(v);
    let mut incident: Vec<(EdgeId, PointId)> = inst
        .edges()
        .iter()
        .enumerate()
        .filter_map(|(i, e)| {
            if e.u == v {
                Some((i as EdgeId, e.v))
            } else if e.v == v {
                Some((i as EdgeId, e.u))
            } else {
                None
            }
        })
        .collect();
    incident.sort_by(|&(_, a), &(_, b)| {
        angular(origin, inst.coord(a)).cmp(&angular(origin, inst.coord(b)))
    });
    let k = incident.len();
    let dir = |i: usize| {
        let c = inst.coord(incident[i].1);
        (c.0 - origin.0, c.1 - origin.1)
    };
    // Counterclockwise gap from edge i to edge j is under 180 degrees iff
    // the cross product of their directions is strictly positive.
    let gap_ok = |i: usize, j: usize| {
        let a = dir(i);
        let b = dir(j);
        a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128 > 0
    };
    let len = |i: usize| inst.edge(incident[i].0).len;

    let mut best_cost = f64::INFINITY;
    let mut best: Vec<usize> = Vec::new();
    for s in 0..k {
        // dp[j] = cheapest chain s -> ... -> j with all gaps < 180 degrees
        let mut dp = vec![f64::INFINITY; k];
        let mut from = vec![usize::MAX; k];
        dp[s] = len(s);
        for step in 1..k {
            let j = (s + step) % k;
            for back in 0..step {
                let i = (s + back) % k;
                if dp[i].is_finite() && gap_ok(i, j) && dp[i] + len(j) < dp[j] {
                    dp[j] = dp[i] + len(j);
                    from[j] = i;
                }
            }
        }
        for j in 0..k {
            if j == s || !dp[j].is_finite() || !gap_ok(j, s) {
                continue;
            }
            if dp[j] < best_cost {
                best_cost = dp[j];
                let mut chain = vec![j];
                let mut cur = j;
                while from[cur] != usize::MAX {
                    cur = from[cur];
                    chain.push(cur);
                }
                best = chain;
            }
        }
    }
    if !best_cost.is_finite() {
        return Err(Error::Internal(format!(
            "interior vertex {v} has all incident edges within a half-plane"
        )));
    }
    let mut edges: Vec<EdgeId> = best.iter().map(|&i| incident[i].0).collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(Star { center: v, edges, cost: best_cost })
}

/// Exact angular sort key around one origin: half-plane index, then
/// direction within the half-plane by cross product.
pub(crate) fn angular(origin: (i64, i64), p: (i64, i64)) -> AngKey {
    AngKey { d: (p.0 - origin.0, p.1 - origin.1) }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) struct AngKey {
    d: (i64, i64),
}

impl AngKey {
    fn half(&self) -> u8 {
        if self.d.1 > 0 || (self.d.1 == 0 && self.d.0 > 0) {
            0
        } else {
            1
        }
    }
}

impl Ord for AngKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.half().cmp(&other.half()).then_with(|| {
            let cross =
                self.d.0 as i128 * other.d.1 as i128 - self.d.1 as i128 * other.d.0 as i128;
            cross.cmp(&0).reverse()
        })
    }
}

impl PartialOrd for AngKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
