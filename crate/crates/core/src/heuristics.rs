//! Edge inclusion/exclusion heuristics and their logical closure.
//!
//! Three conditions can prove a potential edge belongs to every
//! minimum-weight triangulation (β-skeleton, YXY, maximality) and three can
//! prove it belongs to none (independence, diamond, LMT). Maximality,
//! independence and LMT depend on already-known statuses, so the whole set
//! is iterated to a fixed point. Rounds are evaluated against the previous
//! round's ledger, which makes the result independent of edge order.
//!
//! Distance comparisons are exact. The two angle-threshold tests (β-skeleton
//! and diamond) involve irrational thresholds and therefore run in floating
//! point with a conservative margin: a test must pass by the margin to fire,
//! so borderline cases abstain rather than fire unsoundly.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::Serialize;

use crate::geom::{sq_dist, EdgeId, Face, Instance, TriId};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeStatus {
    Unknown,
    ForcedIn,
    ForcedOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Rule {
    Boundary,
    BetaSkeleton,
    Yxy,
    Diamond,
    Maximality,
    Independence,
    LmtSkeleton,
}

impl Rule {
    pub const ALL: [Rule; 6] = [
        Rule::BetaSkeleton,
        Rule::Yxy,
        Rule::Diamond,
        Rule::Maximality,
        Rule::Independence,
        Rule::LmtSkeleton,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Boundary => "boundary",
            Rule::BetaSkeleton => "beta-skeleton",
            Rule::Yxy => "yxy",
            Rule::Diamond => "diamond",
            Rule::Maximality => "maximality",
            Rule::Independence => "independence",
            Rule::LmtSkeleton => "lmt",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.iter().copied().find(|r| r.name() == s)
    }
}

#[derive(Debug, Clone)]
pub struct HeuristicConfig {
    /// Disk-diameter factor for the β-skeleton inclusion test.
    pub beta: f64,
    /// Base angle of the two exclusion triangles of the diamond test.
    pub diamond_angle: f64,
    /// Angle tests must clear their threshold by this margin to fire.
    pub margin: f64,
    pub rules: BTreeSet<Rule>,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            beta: 1.0 / (PI / 3.1).sin(),
            diamond_angle: PI / 4.6,
            margin: 1e-9,
            rules: Rule::ALL.iter().copied().collect(),
        }
    }
}

impl HeuristicConfig {
    /// The smallest β for which the β-skeleton inclusion is sound.
    pub fn min_beta() -> f64 {
        1.0 / (PI / 3.1).sin()
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta < Self::min_beta() - 1e-12 {
            return Err(Error::InvalidInput(format!(
                "beta {} below the sound threshold {}",
                self.beta,
                Self::min_beta()
            )));
        }
        if !(self.diamond_angle > 0.0 && self.diamond_angle < PI / 2.0) {
            return Err(Error::InvalidInput("diamond angle must be in (0, pi/2)".into()));
        }
        Ok(())
    }
}

/// Per-edge status plus which rule fired on which closure round.
#[derive(Debug, Clone)]
pub struct EdgeStatusLedger {
    pub status: Vec<EdgeStatus>,
    pub provenance: Vec<Option<(Rule, u32)>>,
}

impl EdgeStatusLedger {
    pub fn status_of(&self, e: EdgeId) -> EdgeStatus {
        self.status[e as usize]
    }

    pub fn forced_in_edges(&self) -> Vec<EdgeId> {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == EdgeStatus::ForcedIn)
            .map(|(i, _)| i as EdgeId)
            .collect()
    }

    pub fn forced_out_edges(&self) -> Vec<EdgeId> {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == EdgeStatus::ForcedOut)
            .map(|(i, _)| i as EdgeId)
            .collect()
    }

    pub fn count(&self, s: EdgeStatus) -> usize {
        self.status.iter().filter(|&&x| x == s).count()
    }

    pub fn export(&self, inst: &Instance) -> LedgerExport {
        let edges = (0..self.status.len())
            .map(|i| {
                let e = inst.edge(i as EdgeId);
                let (rule, iter) = match self.provenance[i] {
                    Some((r, it)) => (Some(r.name().to_string()), Some(it)),
                    None => (None, None),
                };
                LedgerEdge {
                    u: e.u,
                    v: e.v,
                    status: match self.status[i] {
                        EdgeStatus::Unknown => "unknown",
                        EdgeStatus::ForcedIn => "forced-in",
                        EdgeStatus::ForcedOut => "forced-out",
                    },
                    rule,
                    iter,
                }
            })
            .collect();
        LedgerExport { edges }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerExport {
    pub edges: Vec<LedgerEdge>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerEdge {
    pub u: u32,
    pub v: u32,
    pub status: &'static str,
    pub rule: Option<String>,
    pub iter: Option<u32>,
}

// ---------------------------------------------------------------------------
// individual tests

/// β-skeleton inclusion: true iff no third point sees the edge under an
/// angle of arcsin(1/β) or more; equivalently the two open disks of diameter
/// β|e| through the endpoints are point-free.
pub fn beta_skeleton_test(inst: &Instance, e: EdgeId, beta: f64, margin: f64) -> bool {
    let edge = inst.edge(e);
    let threshold = (1.0 / beta).asin();
    let (ux, uy) = inst.fcoord(edge.u);
    let (vx, vy) = inst.fcoord(edge.v);
    for p in inst.points() {
        if p.id == edge.u || p.id == edge.v {
            continue;
        }
        let ax = ux - p.fx;
        let ay = uy - p.fy;
        let bx = vx - p.fx;
        let by = vy - p.fy;
        let cosv = (ax * bx + ay * by) / (ax.hypot(ay) * bx.hypot(by));
        let angle = cosv.clamp(-1.0, 1.0).acos();
        if angle >= threshold - margin {
            return false;
        }
    }
    true
}

/// YXY inclusion: for every potential edge pq crossing e = xy,
/// |e| <= min(|px|, |py|, |qx|, |qy|). Exact.
pub fn yxy_test(inst: &Instance, e: EdgeId) -> bool {
    let edge = inst.edge(e);
    let (x, y) = (inst.coord(edge.u), inst.coord(edge.v));
    let d_e = sq_dist(x, y);
    for (i, other) in inst.edges().iter().enumerate() {
        if i as EdgeId == e {
            continue;
        }
        if !inst.edges_cross(e, i as EdgeId) {
            continue;
        }
        let p = inst.coord(other.u);
        let q = inst.coord(other.v);
        let m = sq_dist(p, x)
            .min(sq_dist(p, y))
            .min(sq_dist(q, x))
            .min(sq_dist(q, y));
        if d_e > m {
            return false;
        }
    }
    true
}

/// Diamond exclusion: true iff both open isosceles triangles with base `e`
/// and the given base angle contain at least one instance point (by the
/// conservative margin).
pub fn diamond_test(inst: &Instance, e: EdgeId, angle: f64, margin: f64) -> bool {
    let edge = inst.edge(e);
    let (ux, uy) = inst.fcoord(edge.u);
    let (vx, vy) = inst.fcoord(edge.v);
    let (dx, dy) = (vx - ux, vy - uy);
    let len = dx.hypot(dy);
    let (mx, my) = ((ux + vx) / 2.0, (uy + vy) / 2.0);
    let h = len / 2.0 * angle.tan();
    // unit normal to the left of u -> v
    let (nx, ny) = (-dy / len, dx / len);
    let apex_left = (mx + nx * h, my + ny * h);
    let apex_right = (mx - nx * h, my - ny * h);

    let blocked = |apex: (f64, f64), flip: bool| {
        // CCW triangle (u, v, apex) on the left side, (v, u, apex) on the right.
        let (a, b) = if flip { ((vx, vy), (ux, uy)) } else { ((ux, uy), (vx, vy)) };
        inst.points().iter().any(|p| {
            if p.id == edge.u || p.id == edge.v {
                return false;
            }
            let q = (p.fx, p.fy);
            inside_margin(a, b, q, len, margin)
                && inside_margin(b, apex, q, len, margin)
                && inside_margin(apex, a, q, len, margin)
        })
    };
    blocked(apex_left, false) && blocked(apex_right, true)
}

/// Strictly left of a->b by a margin relative to the base length.
fn inside_margin(a: (f64, f64), b: (f64, f64), q: (f64, f64), scale: f64, margin: f64) -> bool {
    let cross = (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
    let side = (b.0 - a.0).hypot(b.1 - a.1);
    cross / side > margin * scale
}

/// All locally minimal triangle pairs for a non-boundary edge: pairs
/// (t, t') on opposite sides of e whose union quadrilateral is non-convex,
/// or convex with e no longer than the opposite diagonal. Exact.
pub fn locally_minimal_pairs(inst: &Instance, e: EdgeId) -> Vec<(TriId, TriId)> {
    let edge = inst.edge(e);
    let (u, v) = (edge.u, edge.v);
    let mut out = Vec::new();
    for &tl in inst.left_tris(e) {
        let w = inst.tri(tl).opposite_vert(u, v);
        for &tr in inst.right_tris(e) {
            let w2 = inst.tri(tr).opposite_vert(u, v);
            let convex = inst.orient_ids(w2, v, w) > 0 && inst.orient_ids(w, u, w2) > 0;
            let minimal = if convex {
                sq_dist(inst.coord(u), inst.coord(v)) <= sq_dist(inst.coord(w), inst.coord(w2))
            } else {
                true
            };
            if minimal {
                out.push((tl, tr));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// closure

pub fn run_closure(inst: &Instance, config: &HeuristicConfig) -> Result<EdgeStatusLedger> {
    let order: Vec<EdgeId> = (0..inst.edges().len() as EdgeId).collect();
    run_closure_in_order(inst, config, &order)
}

/// Closure with an explicit edge-evaluation order; the fixed point (and the
/// provenance) must not depend on it. Exposed for order-independence tests.
pub fn run_closure_in_order(
    inst: &Instance,
    config: &HeuristicConfig,
    order: &[EdgeId],
) -> Result<EdgeStatusLedger> {
    config.validate()?;
    let m = inst.edges().len();
    let mut status = vec![EdgeStatus::Unknown; m];
    let mut provenance: Vec<Option<(Rule, u32)>> = vec![None; m];
    let enabled = |r: Rule| config.rules.contains(&r);

    // Bounding boxes for the crossing scans.
    let bbox: Vec<(i64, i64, i64, i64)> = inst
        .edges()
        .iter()
        .map(|e| {
            let a = inst.coord(e.u);
            let b = inst.coord(e.v);
            (a.0.min(b.0), a.0.max(b.0), a.1.min(b.1), a.1.max(b.1))
        })
        .collect();

    // Round 0: boundary seeding plus the status-independent tests.
    for &e in order {
        let i = e as usize;
        if inst.edge(e).is_boundary {
            status[i] = EdgeStatus::ForcedIn;
            provenance[i] = Some((Rule::Boundary, 0));
            continue;
        }
        let mut forced_in: Option<Rule> = None;
        let mut forced_out: Option<Rule> = None;
        if enabled(Rule::BetaSkeleton) && beta_skeleton_test(inst, e, config.beta, config.margin) {
            forced_in = Some(Rule::BetaSkeleton);
        }
        if forced_in.is_none() && enabled(Rule::Yxy) && yxy_test(inst, e) {
            forced_in = Some(Rule::Yxy);
        }
        if enabled(Rule::Diamond) && diamond_test(inst, e, config.diamond_angle, config.margin) {
            forced_out = Some(Rule::Diamond);
        }
        match (forced_in, forced_out) {
            (Some(ri), Some(ro)) => {
                let edge = inst.edge(e);
                return Err(Error::Contradiction {
                    u: edge.u,
                    v: edge.v,
                    detail: format!("{} forces in, {} forces out", ri.name(), ro.name()),
                });
            }
            (Some(r), None) => {
                status[i] = EdgeStatus::ForcedIn;
                provenance[i] = Some((r, 0));
            }
            (None, Some(r)) => {
                status[i] = EdgeStatus::ForcedOut;
                provenance[i] = Some((r, 0));
            }
            (None, None) => {}
        }
    }

    // Locally minimal pairs are static geometry; compute lazily per edge.
    let mut lm_cache: Vec<Option<Vec<(TriId, TriId)>>> = vec![None; m];

    // Fixed-point rounds. Each round evaluates every still-unknown edge
    // against the previous round's ledger and applies all changes at once.
    let mut iter = 0u32;
    loop {
        iter += 1;
        let mut changes: Vec<(EdgeId, EdgeStatus, Rule)> = Vec::new();
        for &e in order {
            if status[e as usize] != EdgeStatus::Unknown {
                continue;
            }
            let mut forced_in: Option<Rule> = None;
            let mut forced_out: Option<Rule> = None;

            if enabled(Rule::Maximality) || enabled(Rule::Independence) {
                let mut any_not_out = false;
                let mut any_in = false;
                let eb = bbox[e as usize];
                for (j, _) in inst.edges().iter().enumerate() {
                    if j == e as usize {
                        continue;
                    }
                    let fb = bbox[j];
                    if fb.1 < eb.0 || eb.1 < fb.0 || fb.3 < eb.2 || eb.3 < fb.2 {
                        continue;
                    }
                    if !inst.edges_cross(e, j as EdgeId) {
                        continue;
                    }
                    match status[j] {
                        EdgeStatus::ForcedIn => {
                            any_in = true;
                            break;
                        }
                        EdgeStatus::Unknown => any_not_out = true,
                        EdgeStatus::ForcedOut => {}
                    }
                }
                if any_in && enabled(Rule::Independence) {
                    forced_out = Some(Rule::Independence);
                } else if !any_in && !any_not_out && enabled(Rule::Maximality) {
                    forced_in = Some(Rule::Maximality);
                }
            }

            if forced_out.is_none() && enabled(Rule::LmtSkeleton) {
                let pairs = lm_cache[e as usize]
                    .get_or_insert_with(|| locally_minimal_pairs(inst, e));
                let all_dead = pairs.iter().all(|&(tl, tr)| {
                    let dead = |t: TriId| {
                        inst.tri(t)
                            .edges
                            .iter()
                            .any(|&se| se != e && status[se as usize] == EdgeStatus::ForcedOut)
                    };
                    dead(tl) || dead(tr)
                });
                if all_dead {
                    forced_out = Some(Rule::LmtSkeleton);
                }
            }

            match (forced_in, forced_out) {
                (Some(ri), Some(ro)) => {
                    let edge = inst.edge(e);
                    return Err(Error::Contradiction {
                        u: edge.u,
                        v: edge.v,
                        detail: format!("{} forces in, {} forces out", ri.name(), ro.name()),
                    });
                }
                (Some(r), None) => changes.push((e, EdgeStatus::ForcedIn, r)),
                (None, Some(r)) => changes.push((e, EdgeStatus::ForcedOut, r)),
                (None, None) => {}
            }
        }
        if changes.is_empty() {
            break;
        }
        for (e, s, r) in changes {
            status[e as usize] = s;
            provenance[e as usize] = Some((r, iter));
        }
    }

    let ledger = EdgeStatusLedger { status, provenance };
    // Forced-in edges must be pairwise non-crossing; a violation means an
    // unsound rule, not bad input.
    let forced_in = ledger.forced_in_edges();
    for (i, &a) in forced_in.iter().enumerate() {
        for &b in &forced_in[i + 1..] {
            if inst.edges_cross(a, b) {
                let (ea, eb) = (inst.edge(a), inst.edge(b));
                return Err(Error::Internal(format!(
                    "forced-in edges cross: ({},{}) x ({},{})",
                    ea.u, ea.v, eb.u, eb.v
                )));
            }
        }
    }
    Ok(ledger)
}

/// Faces of the forced-in edge set, plus whether every face is an empty
/// simple polygon (in which case per-face dynamic programming finishes the
/// instance exactly). A face walk that traverses a bridge twice is empty but
/// not a simple polygon, so it does not count as solvable.
pub fn skeleton_faces(inst: &Instance, ledger: &EdgeStatusLedger) -> Result<(Vec<Face>, bool)> {
    let faces = crate::geom::extract_faces(inst, &ledger.forced_in_edges())?;
    let solvable = faces.iter().all(|f| f.is_empty && f.is_simple());
    Ok((faces, solvable))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::geom::Rat;
    use crate::oracle;
    use num_bigint::BigInt;
    use std::collections::HashSet;

    fn inst(pts: &[(i64, i64)]) -> Instance {
        let coords = pts
            .iter()
            .map(|&(x, y)| (Rat::from(BigInt::from(x)), Rat::from(BigInt::from(y))))
            .collect();
        Instance::new(coords).unwrap()
    }

    fn cfg() -> HeuristicConfig {
        HeuristicConfig::default()
    }

    #[test]
    fn beta_default_matches_formula() {
        let c = cfg();
        assert!((c.beta - 1.0 / (PI / 3.1).sin()).abs() < 1e-15);
        assert!((c.diamond_angle - PI / 4.6).abs() < 1e-15);
        c.validate().unwrap();
    }

    #[test]
    fn beta_skeleton_examples() {
        // Square diagonal: the two free corners see it at a right angle.
        let sq = inst(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let d = sq.edge_between(0, 2).unwrap();
        assert!(!beta_skeleton_test(&sq, d, cfg().beta, 1e-9));

        // Independent angle evaluation: max angle over the corners.
        let corners = [(1.0, 0.0), (0.0, 1.0)];
        let max_angle = corners
            .iter()
            .map(|&(px, py): &(f64, f64)| {
                let a: (f64, f64) = (0.0 - px, 0.0 - py);
                let b: (f64, f64) = (1.0 - px, 1.0 - py);
                let cosv =
                    (a.0 * b.0 + a.1 * b.1) / (a.0.hypot(a.1) * b.0.hypot(b.1));
                cosv.clamp(-1.0, 1.0).acos()
            })
            .fold(0.0f64, f64::max);
        assert!(max_angle >= (1.0 / cfg().beta).asin());

        // Short isolated edge with everything else far away passes.
        let iso = inst(&[(0, 0), (1, 0), (100, 100), (-100, 100)]);
        let e = iso.edge_between(0, 1).unwrap();
        assert!(beta_skeleton_test(&iso, e, cfg().beta, 1e-9));

        // Near-equilateral apex sees the base at about 60 degrees, above
        // the pi/3.1 threshold.
        let eq = Instance::new(vec![
            (crate::geom::parse_coord("0").unwrap(), crate::geom::parse_coord("0").unwrap()),
            (crate::geom::parse_coord("2").unwrap(), crate::geom::parse_coord("0").unwrap()),
            (crate::geom::parse_coord("1").unwrap(), crate::geom::parse_coord("1.732").unwrap()),
        ])
        .unwrap();
        let base = eq.edge_between(0, 1).unwrap();
        assert!(!beta_skeleton_test(&eq, base, cfg().beta, 1e-9));
    }

    #[test]
    fn yxy_examples() {
        // Spokes of the triangle-with-center cross nothing: vacuous pass.
        let tc = inst(&[(0, 0), (4, 0), (2, 3), (2, 1)]);
        let spoke = tc.edge_between(0, 3).unwrap();
        assert!(yxy_test(&tc, spoke));

        // Unit square diagonal fails: crossing diagonal endpoints at
        // distance 1 < sqrt(2).
        let sq = inst(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let d = sq.edge_between(0, 2).unwrap();
        assert!(!yxy_test(&sq, d));

        // Edge between mutual nearest neighbors in a spread-out set passes;
        // verified against a direct scan of every crossing edge.
        let mn = inst(&[(0, 0), (3, 1), (20, 0), (20, 20), (0, 20), (10, 40)]);
        let e = mn.edge_between(0, 1).unwrap();
        let d_e = sq_dist(mn.coord(0), mn.coord(1));
        assert!(mn
            .points()
            .iter()
            .all(|p| p.id <= 1 || sq_dist(mn.coord(0), mn.coord(p.id)) > d_e));
        assert!(mn
            .points()
            .iter()
            .all(|p| p.id <= 1 || sq_dist(mn.coord(1), mn.coord(p.id)) > d_e));
        let direct = mn.edges().iter().enumerate().all(|(j, o)| {
            j as EdgeId == e
                || !mn.edges_cross(e, j as EdgeId)
                || sq_dist(mn.coord(0), mn.coord(1))
                    <= sq_dist(mn.coord(o.u), mn.coord(0))
                        .min(sq_dist(mn.coord(o.u), mn.coord(1)))
                        .min(sq_dist(mn.coord(o.v), mn.coord(0)))
                        .min(sq_dist(mn.coord(o.v), mn.coord(1)))
        });
        assert!(direct);
        assert!(yxy_test(&mn, e));
    }

    #[test]
    fn diamond_examples() {
        // Square diagonal: free corners sit outside the pi/4.6 diamonds.
        let sq = inst(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let d = sq.edge_between(0, 2).unwrap();
        assert!(!diamond_test(&sq, d, cfg().diamond_angle, 1e-9));

        // Long edge through a cluster blocked on both sides.
        let cl = inst(&[
            (0, 0),
            (100, 0),
            (50, 3),
            (50, -3),
            (47, 5),
            (53, -5),
            (0, -50),
        ]);
        let e = cl.edge_between(0, 1).unwrap();
        assert!(diamond_test(&cl, e, cfg().diamond_angle, 1e-9));

        // Hull-adjacent edge: outer half-diamond is empty.
        let e_hull = cl.edge_between(0, 6).unwrap();
        assert!(!diamond_test(&cl, e_hull, cfg().diamond_angle, 1e-9));
    }

    #[test]
    fn locally_minimal_pair_cases() {
        // Square diagonal: the opposite diagonal ties, and ties count as
        // locally minimal.
        let sq = inst(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let d = sq.edge_between(0, 2).unwrap();
        assert_eq!(locally_minimal_pairs(&sq, d).len(), 1);

        // Non-convex quad around the edge (reflex at (10,0)): included even
        // though the opposite diagonal is much shorter.
        let nc = inst(&[(0, 0), (10, 0), (9, 1), (19, -1)]);
        let e = nc.edge_between(0, 1).unwrap();
        assert!(!nc.edge(e).is_boundary);
        let pairs = locally_minimal_pairs(&nc, e);
        assert_eq!(pairs.len(), 1);

        // Long diagonal of an uneven convex quad: the flip is strictly
        // shorter, so no pair is locally minimal.
        let q = inst(&[(0, 0), (10, -1), (20, 0), (10, 1)]);
        let e = q.edge_between(0, 2).unwrap();
        assert!(locally_minimal_pairs(&q, e).is_empty());
    }

    #[test]
    fn closure_triangle_with_center_fully_determined() {
        let tc = inst(&[(0, 0), (4, 0), (2, 3), (2, 1)]);
        let ledger = run_closure(&tc, &cfg()).unwrap();
        assert_eq!(ledger.count(EdgeStatus::Unknown), 0);
        assert_eq!(ledger.count(EdgeStatus::ForcedIn), 6);
        let (faces, solvable) = skeleton_faces(&tc, &ledger).unwrap();
        assert!(solvable);
        assert_eq!(faces.len(), 3);
        assert!(faces.iter().all(|f| f.len() == 3 && f.is_empty));
    }

    #[test]
    fn closure_unit_square_leaves_diagonals_unknown() {
        let sq = inst(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let ledger = run_closure(&sq, &cfg()).unwrap();
        assert_eq!(ledger.count(EdgeStatus::ForcedIn), 4);
        assert_eq!(ledger.count(EdgeStatus::Unknown), 2);
        let (faces, solvable) = skeleton_faces(&sq, &ledger).unwrap();
        assert!(solvable);
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 4);
    }

    #[test]
    fn closure_is_order_independent() {
        for seed in [3u64, 11, 29] {
            let instn = corpus::random_instance(12, seed, 100).unwrap();
            let base = run_closure(&instn, &cfg()).unwrap();
            let mut order: Vec<EdgeId> = (0..instn.edges().len() as EdgeId).collect();
            order.reverse();
            let rev = run_closure_in_order(&instn, &cfg(), &order).unwrap();
            assert_eq!(base.status, rev.status);
            assert_eq!(base.provenance, rev.provenance);
            // interleave low/high ids
            let mut weird = Vec::new();
            let mut lo = 0usize;
            let mut hi = instn.edges().len();
            while lo < hi {
                weird.push(lo as EdgeId);
                lo += 1;
                if lo < hi {
                    hi -= 1;
                    weird.push(hi as EdgeId);
                }
            }
            let w = run_closure_in_order(&instn, &cfg(), &weird).unwrap();
            assert_eq!(base.status, w.status);
            assert_eq!(base.provenance, w.provenance);
        }
    }

    #[test]
    fn closure_soundness_against_oracle() {
        for seed in 0..15u64 {
            let n = 5 + (seed % 6) as usize;
            let instn = corpus::random_instance(n, seed + 500, 100).unwrap();
            let ledger = run_closure(&instn, &cfg()).unwrap();
            let (_, optima) = oracle::brute_force_mwt(&instn, 13).unwrap();
            for (i, s) in ledger.status.iter().enumerate() {
                let in_all = optima.iter().all(|t| {
                    t.iter().any(|&tid| {
                        instn.tri(tid).edges.contains(&(i as EdgeId))
                    })
                });
                let in_none = optima.iter().all(|t| {
                    t.iter().all(|&tid| {
                        !instn.tri(tid).edges.contains(&(i as EdgeId))
                    })
                });
                match s {
                    EdgeStatus::ForcedIn => assert!(in_all, "seed {seed} edge {i} not in all optima"),
                    EdgeStatus::ForcedOut => assert!(in_none, "seed {seed} edge {i} in some optimum"),
                    EdgeStatus::Unknown => {}
                }
            }
        }
    }

    #[test]
    fn disabling_rules_is_monotone() {
        for seed in [1u64, 7, 13] {
            let instn = corpus::random_instance(10, seed, 100).unwrap();
            let full = run_closure(&instn, &cfg()).unwrap();
            for drop in Rule::ALL {
                let mut config = cfg();
                config.rules.remove(&drop);
                let partial = run_closure(&instn, &config).unwrap();
                let fin: HashSet<_> = full.forced_in_edges().into_iter().collect();
                let fout: HashSet<_> = full.forced_out_edges().into_iter().collect();
                for e in partial.forced_in_edges() {
                    assert!(fin.contains(&e), "seed {seed} rule {drop:?}");
                }
                for e in partial.forced_out_edges() {
                    assert!(fout.contains(&e), "seed {seed} rule {drop:?}");
                }
            }
        }
    }

    #[test]
    fn gilbert_shortest_edge_when_wide_disks_empty() {
        // Whenever the shortest potential edge passes the beta test at
        // sqrt(2)(1+eps), the closure must have forced it in.
        for seed in 0..20u64 {
            let instn = corpus::random_instance(9, seed + 900, 100).unwrap();
            let shortest = instn
                .edges()
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a.len.partial_cmp(&b.len).unwrap())
                .map(|(i, _)| i as EdgeId)
                .unwrap();
            if beta_skeleton_test(&instn, shortest, 2f64.sqrt() * 1.0001, 1e-9) {
                let ledger = run_closure(&instn, &cfg()).unwrap();
                assert_eq!(ledger.status_of(shortest), EdgeStatus::ForcedIn, "seed {seed}");
            }
        }
    }

    #[test]
    fn forced_in_extractable_on_larger_instance() {
        let instn = corpus::random_instance(20, 77, 100).unwrap();
        let ledger = run_closure(&instn, &cfg()).unwrap();
        let forced = ledger.forced_in_edges();
        for (i, &a) in forced.iter().enumerate() {
            for &b in &forced[i + 1..] {
                assert!(!instn.edges_cross(a, b));
            }
        }
        let (faces, _) = skeleton_faces(&instn, &ledger).unwrap();
        assert!(!faces.is_empty());
    }

    #[test]
    fn circle_instance_typically_unsolvable() {
        // Center plus points on a circle defeats the heuristics once the
        // circle is dense enough; the skeleton leaves bridge spokes whose
        // face walk is not a simple polygon.
        let instn = corpus::circle_instance(24, 4).unwrap();
        let ledger = run_closure(&instn, &cfg()).unwrap();
        let (_, solvable) = skeleton_faces(&instn, &ledger).unwrap();
        assert!(!solvable);
    }
}
