//! Seeded instance generators for tests and benchmarks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{orient, segments_cross, Instance, PointId, Rat};
use crate::Result;

fn int_rat(v: i64) -> Rat {
    BigRational::from(BigInt::from(v))
}

/// Uniform random integer points in `[0, coord_max]^2`, distinct, not all
/// collinear. Deterministic in the seed.
pub fn random_instance(n: usize, seed: u64, coord_max: i64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = (
                rng.gen_range(0..=coord_max),
                rng.gen_range(0..=coord_max),
            );
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let collinear = {
            let a = pts[0];
            pts.iter().all(|&p| orient(a, pts[1], p) == 0)
        };
        if collinear {
            continue;
        }
        let coords = pts.iter().map(|&(x, y)| (int_rat(x), int_rat(y))).collect();
        return Instance::new(coords);
    }
}

/// A random simple polygon: distinct points sorted by angle (then radius)
/// around their centroid, which yields a star-shaped and therefore simple
/// boundary. Rejects candidates whose boundary edges pass through a third
/// vertex. Returns the instance plus the polygon as a vertex-id cycle.
pub fn random_simple_polygon(
    n: usize,
    seed: u64,
    coord_max: i64,
) -> Result<(Instance, Vec<PointId>)> {
    let mut attempt = 0u64;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt << 32));
        attempt += 1;
        let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = (
                rng.gen_range(0..=coord_max),
                rng.gen_range(0..=coord_max),
            );
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        // Sort around the (rational) centroid; doubled coordinates keep the
        // comparison in integers: compare angle of n*p - sum.
        let sx: i64 = pts.iter().map(|p| p.0).sum();
        let sy: i64 = pts.iter().map(|p| p.1).sum();
        let nn = n as i64;
        let dir = |p: (i64, i64)| (nn * p.0 - sx, nn * p.1 - sy);
        let mut order: Vec<usize> = (0..n).collect();
        if pts.iter().any(|&p| dir(p) == (0, 0)) {
            continue; // a point sits exactly on the centroid
        }
        let half = |d: (i64, i64)| u8::from(!(d.1 > 0 || (d.1 == 0 && d.0 > 0)));
        order.sort_by(|&i, &j| {
            let a = dir(pts[i]);
            let b = dir(pts[j]);
            half(a)
                .cmp(&half(b))
                .then_with(|| {
                    let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
                    cross.cmp(&0).reverse()
                })
                .then_with(|| {
                    let ra = a.0 as i128 * a.0 as i128 + a.1 as i128 * a.1 as i128;
                    let rb = b.0 as i128 * b.0 as i128 + b.1 as i128 * b.1 as i128;
                    ra.cmp(&rb)
                })
        });
        let cycle: Vec<(i64, i64)> = order.iter().map(|&i| pts[i]).collect();
        if !polygon_is_usable(&cycle) {
            continue;
        }
        let coords = cycle.iter().map(|&(x, y)| (int_rat(x), int_rat(y))).collect();
        let inst = match Instance::new(coords) {
            Ok(i) => i,
            Err(_) => continue,
        };
        let ids: Vec<PointId> = (0..n as PointId).collect();
        return Ok((inst, ids));
    }
}

/// Simple, positively oriented, no vertex on another edge's interior.
fn polygon_is_usable(cycle: &[(i64, i64)]) -> bool {
    let m = cycle.len();
    let mut area: i128 = 0;
    for i in 0..m {
        let a = cycle[i];
        let b = cycle[(i + 1) % m];
        area += a.0 as i128 * b.1 as i128 - b.0 as i128 * a.1 as i128;
    }
    if area <= 0 {
        return false;
    }
    for i in 0..m {
        let a = cycle[i];
        let b = cycle[(i + 1) % m];
        for j in (i + 1)..m {
            let c = cycle[j];
            let d = cycle[(j + 1) % m];
            if segments_cross(a, b, c, d) {
                return false;
            }
        }
        for &p in cycle {
            if p != a && p != b && crate::geom::on_open_segment(p, a, b) {
                return false;
            }
        }
    }
    true
}

/// Regular k-gon of radius 1 with a point at the center. Coordinates are
/// rounded to rationals with denominator 10^6, keeping predicates exact.
pub fn regular_polygon_with_center(k: usize) -> Result<Instance> {
    let scale = 1_000_000i64;
    let mut coords = Vec::with_capacity(k + 1);
    for i in 0..k {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
        let x = (theta.cos() * scale as f64).round() as i64;
        let y = (theta.sin() * scale as f64).round() as i64;
        coords.push((
            Rat::new(BigInt::from(x), BigInt::from(scale)),
            Rat::new(BigInt::from(y), BigInt::from(scale)),
        ));
    }
    coords.push((int_rat(0), int_rat(0)));
    Instance::new(coords)
}

/// Center point plus `n - 1` random points on the unit circle (rounded to
/// denominator 10^6).
pub fn circle_instance(n: usize, seed: u64) -> Result<Instance> {
    let scale = 1_000_000i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut raw: Vec<(i64, i64)> = vec![(0, 0)];
        while raw.len() < n {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let p = (
                (theta.cos() * scale as f64).round() as i64,
                (theta.sin() * scale as f64).round() as i64,
            );
            if !raw.contains(&p) {
                raw.push(p);
            }
        }
        let coords = raw
            .iter()
            .map(|&(x, y)| {
                (
                    Rat::new(BigInt::from(x), BigInt::from(scale)),
                    Rat::new(BigInt::from(y), BigInt::from(scale)),
                )
            })
            .collect();
        if let Ok(inst) = Instance::new(coords) {
            return Ok(inst);
        }
    }
}
