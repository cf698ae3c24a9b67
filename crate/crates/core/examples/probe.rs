use mwt_core::*;
use mwt_core::rounding::*;

fn main() {
    let inst = corpus::random_instance(5, 2007, 100).unwrap();
    for p in inst.points() { println!("point {} = ({}, {})", p.id, p.sx, p.sy); }
    let lp = lp::build_lp(&inst, None).unwrap();
    let x = lp::solve_to_extreme_point(&lp, 1e-9).unwrap();
    println!("support: {:?}", x.weights);
    let part = build_convex_partition(&inst, PartitionStrategy::HullMerge).unwrap();
    let sigma = measure_sensitivity(&inst, &part);
    println!("sigma = {sigma}");
    for f in &part.faces { println!("face {:?}", f.boundary); }
    let out = transpose_solution(&inst, &x, &part).unwrap();
    for f in &out.faces {
        for &(src, img) in &f.edge_stretch {
            let ok = img <= 2.0*sigma*src + 1e-9;
            println!("face {}: src {src:.4} img {img:.4} 2sig*src {:.4} ok={ok}", f.face_idx, 2.0*sigma*src);
        }
    }
}
