//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (run with `--nocapture` to see them).
//!
//! The shared corpus is 200 seeded random instances with 5..=11 points on
//! the [0,100]^2 integer grid, solved three ways: heuristic closure, the
//! pure LP relaxation, and the brute-force oracle.

use std::collections::HashSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use mwt_core::corpus;
use mwt_core::geom::{EdgeId, Instance, TriId};
use mwt_core::heuristics::{run_closure, skeleton_faces, EdgeStatus, EdgeStatusLedger, HeuristicConfig};
use mwt_core::lp::{
    build_lp, build_polygon_lp, classify_solution, solve_to_extreme_point,
    FractionalTriangulation, SolutionClass, FEAS_TOL, INT_TOL,
};
use mwt_core::oracle;
use mwt_core::rounding::{
    build_convex_partition, face_coverage_at_samples, transpose_blanket, transpose_solution,
    transpose_triangle, triangle_crosses_face, triangulated_transposal, transposal_cost,
    PartitionStrategy,
};

const CORPUS_SIZE: usize = 200;

struct CorpusEntry {
    inst: Instance,
    ledger: EdgeStatusLedger,
    solvable: bool,
    lp_objective: f64,
    lp_solution: FractionalTriangulation,
    classification: SolutionClass,
    oracle_cost: f64,
    optima: Vec<Vec<TriId>>,
}

struct Corpus {
    entries: Vec<CorpusEntry>,
    build_time: Duration,
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let t0 = Instant::now();
        let mut entries = Vec::with_capacity(CORPUS_SIZE);
        for i in 0..CORPUS_SIZE {
            let n = 5 + (i % 7);
            let seed = 1000 + i as u64;
            let inst = corpus::random_instance(n, seed, 100).expect("corpus instance");
            let ledger = run_closure(&inst, &HeuristicConfig::default()).expect("closure");
            let (_, solvable) = skeleton_faces(&inst, &ledger).expect("faces");
            let lp = build_lp(&inst, None).expect("lp");
            let x = solve_to_extreme_point(&lp, FEAS_TOL).expect("solve");
            let classification = classify_solution(&inst, &lp, &x, INT_TOL).expect("classify");
            let (oracle_cost, optima) = oracle::brute_force_mwt(&inst, 13).expect("oracle");
            entries.push(CorpusEntry {
                inst,
                ledger,
                solvable,
                lp_objective: x.objective,
                lp_solution: x,
                classification,
                oracle_cost,
                optima,
            });
        }
        Corpus { entries, build_time: t0.elapsed() }
    })
}

fn edges_of(inst: &Instance, tris: &[TriId]) -> HashSet<EdgeId> {
    tris.iter()
        .flat_map(|&t| inst.tri(t).edges.iter().copied())
        .collect()
}

#[test]
fn criterion_1_oracle_equivalence() {
    let t0 = Instant::now();
    let corpus = corpus();
    let mut integral = 0;
    for (i, e) in corpus.entries.iter().enumerate() {
        assert!(
            e.lp_objective <= e.oracle_cost + 1e-6,
            "instance {i}: LP {} above oracle {}",
            e.lp_objective,
            e.oracle_cost
        );
        if let SolutionClass::Integral { cost, .. } = &e.classification {
            integral += 1;
            assert!(
                (cost - e.oracle_cost).abs() <= 1e-6,
                "instance {i}: integral cost {cost} vs oracle {}",
                e.oracle_cost
            );
        }
    }
    let total = corpus.build_time + t0.elapsed();
    assert!(
        total < Duration::from_secs(300),
        "criterion 1 runtime {total:?} exceeds 5 minutes"
    );
    println!(
        "criterion 1 PASS: oracle equivalence on {CORPUS_SIZE} instances \
         ({integral} integral) in {total:?}"
    );
}

#[test]
fn criterion_2_heuristic_soundness() {
    let corpus = corpus();
    let mut forced_in_total = 0usize;
    let mut forced_out_total = 0usize;
    for (i, e) in corpus.entries.iter().enumerate() {
        let optima_edges: Vec<HashSet<EdgeId>> = e
            .optima
            .iter()
            .map(|t| edges_of(&e.inst, t))
            .collect();
        for edge in 0..e.inst.edges().len() as EdgeId {
            match e.ledger.status_of(edge) {
                EdgeStatus::ForcedIn => {
                    forced_in_total += 1;
                    assert!(
                        optima_edges.iter().all(|s| s.contains(&edge)),
                        "instance {i}: forced-in edge {edge} missing from an optimum"
                    );
                }
                EdgeStatus::ForcedOut => {
                    forced_out_total += 1;
                    assert!(
                        optima_edges.iter().all(|s| !s.contains(&edge)),
                        "instance {i}: forced-out edge {edge} used by an optimum"
                    );
                }
                EdgeStatus::Unknown => {}
            }
        }
    }
    println!(
        "criterion 2 PASS: heuristic soundness, {forced_in_total} forced-in and \
         {forced_out_total} forced-out edges verified against every optimum"
    );
}

#[test]
fn criterion_3_solvable_implies_integral() {
    let corpus = corpus();
    let mut solvable = 0;
    for (i, e) in corpus.entries.iter().enumerate() {
        if !e.solvable {
            continue;
        }
        solvable += 1;
        match &e.classification {
            SolutionClass::Integral { cost, .. } => {
                assert!(
                    (cost - e.oracle_cost).abs() <= 1e-6,
                    "instance {i}: integral LP cost {cost} vs oracle {}",
                    e.oracle_cost
                );
            }
            SolutionClass::Fractional { witnesses } => panic!(
                "instance {i}: heuristically solvable but LP fractional ({} witnesses)",
                witnesses.len()
            ),
        }
        // every weight within the integrality tolerance of {0, 1}
        for (_, w) in e.lp_solution.support() {
            assert!(
                w <= INT_TOL || (w - 1.0).abs() <= INT_TOL,
                "instance {i}: weight {w} not within 1e-7 of {{0,1}}"
            );
        }
    }
    assert!(solvable > 0, "no solvable instance in the corpus");
    println!(
        "criterion 3 PASS: LP integral on all {solvable} heuristically solvable instances"
    );
}

#[test]
fn criterion_4_simple_polygon_integrality() {
    for i in 0..50u64 {
        let n = 6 + (i as usize % 10); // up to 15 vertices
        let (inst, cycle) = corpus::random_simple_polygon(n, 3000 + i, 100).expect("polygon");
        let lp = build_polygon_lp(&inst, &cycle).expect("polygon lp");
        let x = solve_to_extreme_point(&lp, FEAS_TOL).expect("solve");
        let dp = mwt_core::dp::mwt_polygon(&inst, &cycle).expect("dp");
        assert!(
            (x.objective - dp.total_cost).abs() <= 1e-6,
            "polygon {i}: LP {} vs DP {}",
            x.objective,
            dp.total_cost
        );
        match classify_solution(&inst, &lp, &x, INT_TOL).expect("classify") {
            SolutionClass::Integral { cost, .. } => {
                assert!((cost - dp.total_cost).abs() <= 1e-6, "polygon {i}")
            }
            SolutionClass::Fractional { .. } => panic!("polygon {i}: LP vertex fractional"),
        }
    }
    println!("criterion 4 PASS: integral LP vertices on 50 random simple polygons");
}

#[test]
fn criterion_5_gap_witness() {
    let inst = corpus::regular_polygon_with_center(13).expect("13-gon");
    let lp = build_lp(&inst, None).expect("lp");
    let x = solve_to_extreme_point(&lp, FEAS_TOL).expect("solve");
    assert!(matches!(
        classify_solution(&inst, &lp, &x, INT_TOL).expect("classify"),
        SolutionClass::Fractional { .. }
    ));
    let (ip, _) = oracle::brute_force_mwt(&inst, 14).expect("oracle");
    let rel = (ip - x.objective) / x.objective;
    assert!(
        rel > 0.0 && rel < 0.05,
        "relative gap {rel} outside (0, 0.05): LP {} IP {ip}",
        x.objective
    );
    println!(
        "criterion 5 PASS: 13-gon plus center has LP {:.9} < IP {ip:.9}, relative gap {rel:.6}",
        x.objective
    );
}

#[test]
fn criterion_6_rounding_invariants() {
    let mut faces_checked = 0usize;
    for i in 0..50u64 {
        let n = 5 + (i as usize % 7);
        let inst = corpus::random_instance(n, 2000 + i, 100).expect("instance");
        let lp = build_lp(&inst, None).expect("lp");
        let x = solve_to_extreme_point(&lp, FEAS_TOL).expect("solve");
        for strat in [PartitionStrategy::HullMerge, PartitionStrategy::Fan] {
            let partition = build_convex_partition(&inst, strat).expect("partition");
            let out = transpose_solution(&inst, &x, &partition).expect("transpose");
            let sigma = out.ledger.sigma;

            // Global bound.
            assert!(
                out.ledger.sum_transposed <= out.ledger.bound + 1e-6,
                "instance {i} {strat:?}: bound violated"
            );

            for f in &out.faces {
                faces_checked += 1;
                let face = partition.face(f.face_idx);

                // Blanket identity.
                let total: f64 = f.blankets.iter().map(|b| b.weight).sum();
                assert!((total - 1.0).abs() <= 1e-7, "instance {i} {strat:?}: blanket sum {total}");
                for (t, w) in x.support() {
                    if !triangle_crosses_face(&inst, face, t) {
                        continue;
                    }
                    let got: f64 = f
                        .blankets
                        .iter()
                        .filter(|b| b.triangles.contains(&t))
                        .map(|b| b.weight)
                        .sum();
                    assert!(
                        (got - w).abs() <= 1e-7,
                        "instance {i} {strat:?}: blanket reconstruction of {t}"
                    );
                }

                // Edge-image crossings and hexagon bound, re-derived.
                for b in &f.blankets {
                    let records = transpose_blanket(&inst, face, b).expect("records");
                    let images: Vec<_> = records
                        .iter()
                        .flat_map(|r| r.edge_images.iter().map(|ei| ei.image))
                        .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
                        .filter(|&(a, b)| a != b)
                        .collect();
                    for (k, &(a0, b0)) in images.iter().enumerate() {
                        for &(a1, b1) in &images[k + 1..] {
                            if (a0, b0) == (a1, b1) {
                                continue;
                            }
                            assert!(
                                !mwt_core::geom::segments_cross(
                                    inst.coord(a0),
                                    inst.coord(b0),
                                    inst.coord(a1),
                                    inst.coord(b1)
                                ),
                                "instance {i} {strat:?}: edge images cross"
                            );
                        }
                    }
                    for rec in &records {
                        let tt = triangulated_transposal(&inst, rec).expect("tt");
                        let tt_cost: f64 = tt.iter().map(|&t| inst.tri(t).cost).sum();
                        assert!(
                            tt_cost <= 3.0 * transposal_cost(&inst, rec) + 1e-9,
                            "instance {i} {strat:?}: hexagon bound"
                        );
                    }
                }

                // Edge-length bound.
                for &(src, img) in &f.edge_stretch {
                    assert!(
                        img <= 2.0 * sigma * src + 1e-9,
                        "instance {i} {strat:?}: |image| {img} > 2 sigma |e| {}",
                        2.0 * sigma * src
                    );
                }

                // Transposed solution covers the face uniformly.
                let cov = face_coverage_at_samples(&inst, face, &f.weights, 20, 7_000 + i);
                assert_eq!(cov.len(), 20, "instance {i} {strat:?}: sampling starved");
                for c in cov {
                    assert!(
                        (c - 1.0).abs() <= 1e-7,
                        "instance {i} {strat:?}: coverage {c}"
                    );
                }
            }

            // Two-face rule over the whole catalog.
            for t in 0..inst.triangles().len() as TriId {
                let mut positive = 0;
                for face in &partition.faces {
                    if triangle_crosses_face(&inst, face, t)
                        && transpose_triangle(&inst, face, t).expect("rec").positive_area
                    {
                        positive += 1;
                    }
                }
                assert!(positive <= 2, "instance {i} {strat:?}: triangle {t} accommodated {positive} times");
            }
        }
    }
    println!(
        "criterion 6 PASS: rounding invariants on 50 instances x 2 strategies \
         ({faces_checked} face transposals)"
    );
}

#[test]
fn criterion_7_star_bound() {
    let corpus = corpus();
    let mut stars = 0usize;
    for (i, e) in corpus.entries.iter().enumerate() {
        for v in 0..e.inst.n() as u32 {
            let star = oracle::min_cost_star(&e.inst, v).expect("star");
            let weighted: f64 = (0..e.inst.edges().len() as EdgeId)
                .filter(|&edge| {
                    let ed = e.inst.edge(edge);
                    ed.u == v || ed.v == v
                })
                .map(|edge| e.lp_solution.edge_weight(&e.inst, edge) * e.inst.edge(edge).len)
                .sum();
            let factor = if e.inst.is_hull_vertex(v) { 1.0 } else { 1.5 };
            assert!(
                star.cost <= factor * weighted + 1e-7,
                "instance {i} vertex {v}: star {} vs {factor} x {weighted}",
                star.cost
            );
            stars += 1;
        }
    }
    println!("criterion 7 PASS: star bound at {stars} vertices across the corpus");
}

#[test]
fn criterion_8_performance_smoke() {
    let t0 = Instant::now();
    let inst = corpus::random_instance(300, 4242, 100_000).expect("instance");
    let ledger = run_closure(&inst, &HeuristicConfig::default()).expect("closure");
    let lp = build_lp(&inst, Some(&ledger)).expect("lp");
    let x = solve_to_extreme_point(&lp, FEAS_TOL).expect("solve");
    let elapsed = t0.elapsed();
    let eliminated = 1.0 - lp.cols.len() as f64 / lp.total_triangles as f64;
    assert!(
        elapsed < Duration::from_secs(60),
        "closure + reduced LP took {elapsed:?}"
    );
    println!(
        "criterion 8 PASS: 300 points in {elapsed:?}; ledger eliminated {:.2}% of {} \
         triangles ({} columns remain), reduced LP objective {:.3}",
        eliminated * 100.0,
        lp.total_triangles,
        lp.cols.len(),
        x.objective
    );
}

/// A compact JSON digest of fresh runs of the criteria-1..7 computations.
fn criteria_digest() -> String {
    let mut doc = serde_json::Map::new();

    // criteria 1/2/3/7 corpus, recomputed from scratch
    let mut per_instance = Vec::new();
    for i in 0..CORPUS_SIZE {
        let n = 5 + (i % 7);
        let seed = 1000 + i as u64;
        let inst = corpus::random_instance(n, seed, 100).unwrap();
        let ledger = run_closure(&inst, &HeuristicConfig::default()).unwrap();
        let (_, solvable) = skeleton_faces(&inst, &ledger).unwrap();
        let lp = build_lp(&inst, None).unwrap();
        let x = solve_to_extreme_point(&lp, FEAS_TOL).unwrap();
        let class = classify_solution(&inst, &lp, &x, INT_TOL).unwrap();
        let (oracle_cost, optima) = oracle::brute_force_mwt(&inst, 13).unwrap();
        let stars: Vec<f64> = (0..inst.n() as u32)
            .map(|v| oracle::min_cost_star(&inst, v).unwrap().cost)
            .collect();
        per_instance.push(serde_json::json!({
            "seed": seed,
            "lp": x.objective,
            "oracle": oracle_cost,
            "optima": optima.len(),
            "solvable": solvable,
            "forced_in": ledger.count(EdgeStatus::ForcedIn),
            "forced_out": ledger.count(EdgeStatus::ForcedOut),
            "integral": matches!(class, SolutionClass::Integral { .. }),
            "stars": stars,
        }));
    }
    doc.insert("corpus".into(), serde_json::Value::Array(per_instance));

    // criterion 4 polygons
    let mut polys = Vec::new();
    for i in 0..50u64 {
        let n = 6 + (i as usize % 10);
        let (inst, cycle) = corpus::random_simple_polygon(n, 3000 + i, 100).unwrap();
        let lp = build_polygon_lp(&inst, &cycle).unwrap();
        let x = solve_to_extreme_point(&lp, FEAS_TOL).unwrap();
        let dp = mwt_core::dp::mwt_polygon(&inst, &cycle).unwrap();
        polys.push(serde_json::json!({"lp": x.objective, "dp": dp.total_cost}));
    }
    doc.insert("polygons".into(), serde_json::Value::Array(polys));

    // criterion 5 witness
    {
        let inst = corpus::regular_polygon_with_center(13).unwrap();
        let lp = build_lp(&inst, None).unwrap();
        let x = solve_to_extreme_point(&lp, FEAS_TOL).unwrap();
        let (ip, _) = oracle::brute_force_mwt(&inst, 14).unwrap();
        doc.insert(
            "gap_witness".into(),
            serde_json::json!({"lp": x.objective, "ip": ip}),
        );
    }

    // criterion 6 rounding ledgers
    let mut ledgers = Vec::new();
    for i in 0..50u64 {
        let n = 5 + (i as usize % 7);
        let inst = corpus::random_instance(n, 2000 + i, 100).unwrap();
        let lp = build_lp(&inst, None).unwrap();
        let x = solve_to_extreme_point(&lp, FEAS_TOL).unwrap();
        for strat in [PartitionStrategy::HullMerge, PartitionStrategy::Fan] {
            let partition = build_convex_partition(&inst, strat).unwrap();
            let out = transpose_solution(&inst, &x, &partition).unwrap();
            ledgers.push(serde_json::json!({
                "strategy": strat.name(),
                "ledger": out.ledger,
                "rounded": out.rounded_triangulation(),
            }));
        }
    }
    doc.insert("rounding".into(), serde_json::Value::Array(ledgers));

    serde_json::to_string_pretty(&serde_json::Value::Object(doc)).unwrap()
}

#[test]
fn criterion_9_determinism() {
    let first = criteria_digest();
    let second = criteria_digest();
    assert!(first == second, "criteria digests differ between executions");
    println!(
        "criterion 9 PASS: criteria 1-7 digests byte-identical across two executions \
         ({} bytes)",
        first.len()
    );
}
