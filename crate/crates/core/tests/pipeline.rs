//! Cross-module checks: the heuristics-DP pipeline against the oracle, the
//! LP against both, and the star bound of the rounding analysis.

use mwt_core::corpus;
use mwt_core::dp::mwt_polygon;
use mwt_core::heuristics::{run_closure, skeleton_faces, HeuristicConfig};
use mwt_core::lp::{build_lp, solve_to_extreme_point, FractionalTriangulation, FEAS_TOL};
use mwt_core::oracle::{brute_force_mwt, min_cost_star};

#[test]
fn solvable_pipeline_reproduces_oracle_mwt() {
    let mut solvable_seen = 0;
    for seed in 0..20u64 {
        let inst = corpus::random_instance(6 + (seed % 5) as usize, seed * 13 + 1, 100).unwrap();
        let ledger = run_closure(&inst, &HeuristicConfig::default()).unwrap();
        let (faces, solvable) = skeleton_faces(&inst, &ledger).unwrap();
        if !solvable {
            continue;
        }
        solvable_seen += 1;
        let mut cost = 0.0;
        for f in &faces {
            cost += mwt_polygon(&inst, &f.boundary).unwrap().total_cost;
        }
        let (oracle_cost, _) = brute_force_mwt(&inst, 13).unwrap();
        assert!(
            (cost - oracle_cost).abs() < 1e-9,
            "seed {seed}: pipeline {cost} vs oracle {oracle_cost}"
        );
    }
    assert!(solvable_seen >= 10, "corpus unexpectedly hostile to the heuristics");
}

#[test]
fn forcing_rows_do_not_change_the_optimum() {
    for seed in 0..6u64 {
        let inst = corpus::random_instance(9, seed * 7 + 3, 100).unwrap();
        let ledger = run_closure(&inst, &HeuristicConfig::default()).unwrap();
        let pure = solve_to_extreme_point(&build_lp(&inst, None).unwrap(), FEAS_TOL).unwrap();
        let forced =
            solve_to_extreme_point(&build_lp(&inst, Some(&ledger)).unwrap(), FEAS_TOL).unwrap();
        assert!(
            (pure.objective - forced.objective).abs() < 1e-6,
            "seed {seed}: {} vs {}",
            pure.objective,
            forced.objective
        );
    }
}

fn star_bound_holds(inst: &mwt_core::geom::Instance, x: &FractionalTriangulation) {
    for v in 0..inst.n() as u32 {
        let star = min_cost_star(inst, v).unwrap();
        let weighted: f64 = (0..inst.edges().len() as u32)
            .filter(|&e| {
                let edge = inst.edge(e);
                edge.u == v || edge.v == v
            })
            .map(|e| x.edge_weight(inst, e) * inst.edge(e).len)
            .sum();
        let factor = if inst.is_hull_vertex(v) { 1.0 } else { 1.5 };
        assert!(
            star.cost <= factor * weighted + 1e-7,
            "vertex {v}: star {} vs {factor} * {weighted}",
            star.cost
        );
    }
}

#[test]
fn min_star_bounded_by_weighted_edges() {
    for seed in 0..10u64 {
        let inst = corpus::random_instance(9, seed * 3 + 11, 100).unwrap();
        let lp = build_lp(&inst, None).unwrap();
        let x = solve_to_extreme_point(&lp, FEAS_TOL).unwrap();
        star_bound_holds(&inst, &x);
    }
    // Also at a fractional optimum.
    let inst = corpus::regular_polygon_with_center(13).unwrap();
    let lp = build_lp(&inst, None).unwrap();
    let x = solve_to_extreme_point(&lp, FEAS_TOL).unwrap();
    star_bound_holds(&inst, &x);
}

#[test]
fn lp_export_is_consistent_on_fixture() {
    let inst = corpus::random_instance(8, 5, 50).unwrap();
    let lp = build_lp(&inst, None).unwrap();
    let text = mwt_core::lp::io::write_lp_format(&lp, &inst);
    // Every variable must appear in the objective and the file must carry
    // the four fixed-form sections in order.
    let mi = text.find("Minimize").unwrap();
    let st = text.find("Subject To").unwrap();
    let bo = text.find("Bounds").unwrap();
    let en = text.rfind("End").unwrap();
    assert!(mi < st && st < bo && bo < en);
    for j in 0..lp.cols.len() {
        assert!(text.contains(&format!("x{j}")), "x{j} missing");
    }
}
