//! LP-format export and two-column solution import, for cross-checking the
//! built-in solver against third-party ones.

use std::collections::BTreeMap;

use super::{RowKind, TriangulationLP};
use crate::geom::Instance;
use crate::{Error, Result};

/// Serialize in the fixed/free LP interchange format (Minimize /
/// Subject To / Bounds / End). Variable `x{j}` is column `j`; the header
/// comments map columns back to triangles.
pub fn write_lp_format(lp: &TriangulationLP, inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str("\\ minimum-weight triangulation relaxation\n");
    for (j, &t) in lp.cols.iter().enumerate() {
        let v = inst.tri(t).verts;
        out.push_str(&format!("\\ x{j} = triangle ({},{},{})\n", v[0], v[1], v[2]));
    }
    out.push_str("Minimize\n obj:");
    let mut line = String::new();
    for (j, &c) in lp.costs.iter().enumerate() {
        let term = format!(" + {:.12} x{}", c, j);
        if line.len() + term.len() > 72 {
            out.push_str(&line);
            out.push('\n');
            line = String::from("     ");
        }
        line.push_str(&term);
    }
    out.push_str(&line);
    out.push_str("\nSubject To\n");
    for (r, kind) in lp.rows.iter().enumerate() {
        let name = match kind {
            RowKind::Boundary(e) => format!("cover_e{e}"),
            RowKind::Balance(e) => format!("balance_e{e}"),
            RowKind::ForcedLeft(e) => format!("force_l_e{e}"),
            RowKind::ForcedRight(e) => format!("force_r_e{e}"),
        };
        let mut line = format!(" {name}:");
        for &(c, a) in &lp.row_entries[r] {
            let term = if a >= 0.0 {
                format!(" + x{c}")
            } else {
                format!(" - x{c}")
            };
            if line.len() + term.len() > 72 {
                out.push_str(&line);
                out.push('\n');
                line = String::from("     ");
            }
            line.push_str(&term);
        }
        line.push_str(&format!(" = {}", lp.rhs[r]));
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("Bounds\n");
    for j in 0..lp.cols.len() {
        out.push_str(&format!(" x{j} >= 0\n"));
    }
    out.push_str("End\n");
    out
}

/// Parse a `var value` two-column solution file. Lines starting with `#` or
/// `\` are comments.
pub fn parse_solution(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('\\') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected `var value`, got {} tokens", toks.len()),
            });
        }
        let v: f64 = toks[1].parse().map_err(|_| Error::Parse {
            line: idx + 1,
            msg: format!("bad value `{}`", toks[1]),
        })?;
        out.insert(toks[0].to_string(), v);
    }
    Ok(out)
}

/// Evaluate an imported solution against the LP: objective value and the
/// maximum constraint residual. Unknown variables default to zero.
pub fn check_imported_solution(
    lp: &TriangulationLP,
    sol: &BTreeMap<String, f64>,
) -> (f64, f64) {
    let x: Vec<f64> = (0..lp.cols.len())
        .map(|j| sol.get(&format!("x{j}")).copied().unwrap_or(0.0))
        .collect();
    let objective = lp.costs.iter().zip(&x).map(|(c, v)| c * v).sum();
    let mut max_resid = 0.0f64;
    for (row, &b) in lp.row_entries.iter().zip(&lp.rhs) {
        let lhs: f64 = row.iter().map(|&(c, a)| a * x[c]).sum();
        max_resid = max_resid.max((lhs - b).abs());
    }
    (objective, max_resid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rat;
    use crate::lp::{build_lp, solve_to_extreme_point, FEAS_TOL};
    use num_bigint::BigInt;

    #[test]
    fn export_and_reimport_round_trip() {
        let coords = [(0i64, 0i64), (1, 0), (1, 1), (0, 1)]
            .iter()
            .map(|&(x, y)| (Rat::from(BigInt::from(x)), Rat::from(BigInt::from(y))))
            .collect();
        let inst = crate::geom::Instance::new(coords).unwrap();
        let lp = build_lp(&inst, None).unwrap();
        let text = write_lp_format(&lp, &inst);
        assert!(text.starts_with("\\ minimum-weight"));
        assert!(text.contains("Minimize"));
        assert!(text.contains("Subject To"));
        assert!(text.contains("Bounds"));
        assert!(text.trim_end().ends_with("End"));

        let x = solve_to_extreme_point(&lp, FEAS_TOL).unwrap();
        let mut sol_text = String::from("# solver output\n");
        for (j, &t) in lp.cols.iter().enumerate() {
            sol_text.push_str(&format!("x{j} {:.12}\n", x.weight(t)));
        }
        let sol = parse_solution(&sol_text).unwrap();
        let (obj, resid) = check_imported_solution(&lp, &sol);
        assert!((obj - x.objective).abs() < 1e-9);
        assert!(resid < 1e-9);
    }
}
