//! Dense-tableau primal simplex for the triangulation LPs.
//!
//! The constraint matrices here are equality systems `Ax = b` with entries
//! in {-1, 0, +1}, `b` in {0, 1}, and heavily redundant rows. The solver
//! keeps an implicit artificial basis (no artificial columns are ever
//! materialized): a row whose basis slot is `None` is owned by an
//! artificial variable whose value is that row's right-hand side.
//!
//! Start order: crash in a caller-supplied feasible integer basis when one
//! is available, run phase 1 only if some artificial still carries value,
//! purge zero-valued artificials by degenerate pivots, then price the real
//! objective. Dantzig pricing with a Bland fallback after a stall keeps the
//! run finite and deterministic.

use crate::{Error, Result};

#[derive(Debug)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub used_bland: bool,
}

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;

pub struct Simplex {
    m: usize,
    k: usize,
    /// m rows of k real columns plus the right-hand side.
    tab: Vec<Vec<f64>>,
    /// `Some(col)` for a real basic column, `None` for an artificial.
    basis: Vec<Option<usize>>,
    costs: Vec<f64>,
}

impl Simplex {
    pub fn new(rows: &[Vec<(usize, f64)>], rhs: &[f64], costs: &[f64]) -> Simplex {
        let m = rows.len();
        let k = costs.len();
        let mut tab = vec![vec![0.0; k + 1]; m];
        for (r, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                tab[r][c] += v;
            }
            tab[r][k] = rhs[r];
        }
        Simplex {
            m,
            k,
            tab,
            basis: vec![None; m],
            costs: costs.to_vec(),
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let inv = 1.0 / self.tab[r][q];
        for v in self.tab[r].iter_mut() {
            *v *= inv;
        }
        self.tab[r][q] = 1.0;
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.tab[i][q];
            if f == 0.0 {
                continue;
            }
            let (head, tail) = self.tab.split_at_mut(r.max(i));
            let (row_i, row_r) = if i < r {
                (&mut head[i], &tail[0])
            } else {
                (&mut tail[0], &head[r])
            };
            for (a, b) in row_i.iter_mut().zip(row_r.iter()) {
                *a -= f * b;
            }
            row_i[q] = 0.0;
        }
        self.basis[r] = Some(q);
    }

    /// Install as much of `cols` into the basis as possible, pivoting only
    /// on rows still held by artificials. Columns of a triangulation are
    /// linearly independent, so normally all of them land.
    fn crash(&mut self, cols: &[usize]) {
        for &q in cols {
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.m {
                if self.basis[r].is_some() {
                    continue;
                }
                let a = self.tab[r][q].abs();
                if a > 1e-7 && best.map_or(true, |(_, b)| a > b) {
                    best = Some((r, a));
                }
            }
            if let Some((r, _)) = best {
                self.pivot(r, q);
            }
        }
    }

    fn artificial_infeasibility(&self) -> f64 {
        (0..self.m)
            .filter(|&r| self.basis[r].is_none())
            .map(|r| self.tab[r][self.k].abs())
            .sum()
    }

    /// Minimize the artificial sum from the current basis.
    fn phase_one(&mut self, feas_tol: f64, budget: usize) -> Result<usize> {
        let mut iters = 0usize;
        loop {
            if self.artificial_infeasibility() <= feas_tol {
                return Ok(iters);
            }
            if iters > budget {
                return Err(Error::Internal("phase 1 exceeded iteration budget".into()));
            }
            // Reduced cost of real column j is -sum of its entries in
            // artificial rows; most positive column sum enters.
            let mut enter: Option<(usize, f64)> = None;
            for j in 0..self.k {
                let mut s = 0.0;
                for r in 0..self.m {
                    if self.basis[r].is_none() {
                        s += self.tab[r][j];
                    }
                }
                if s > COST_TOL && enter.map_or(true, |(_, b)| s > b) {
                    enter = Some((j, s));
                }
            }
            let q = match enter {
                Some((j, _)) => j,
                None => {
                    return Err(Error::Infeasible(format!(
                        "phase 1 stalled with residual {:.3e}",
                        self.artificial_infeasibility()
                    )))
                }
            };
            let r = match self.ratio_row(q) {
                Some(r) => r,
                None => return Err(Error::Internal("phase 1 unbounded".into())),
            };
            self.pivot(r, q);
            iters += 1;
        }
    }

    /// Drive zero-valued artificials out of the basis with degenerate
    /// pivots. Rows with no usable real entry are redundant and stay dead.
    fn purge_artificials(&mut self, feas_tol: f64) -> Result<()> {
        for r in 0..self.m {
            if self.basis[r].is_some() {
                continue;
            }
            if self.tab[r][self.k].abs() > feas_tol {
                return Err(Error::Infeasible(format!(
                    "artificial row carries value {:.3e}",
                    self.tab[r][self.k]
                )));
            }
            let q = (0..self.k)
                .filter(|&j| self.tab[r][j].abs() > 1e-7)
                .max_by(|&a, &b| {
                    self.tab[r][a]
                        .abs()
                        .partial_cmp(&self.tab[r][b].abs())
                        .unwrap()
                        .then(b.cmp(&a))
                });
            if let Some(q) = q {
                // rhs is ~0, so this pivot changes no basic value.
                self.pivot(r, q);
            }
        }
        Ok(())
    }

    fn ratio_row(&self, q: usize) -> Option<usize> {
        let mut best: Option<(f64, usize, usize)> = None; // (ratio, basiskey, row)
        for r in 0..self.m {
            let a = self.tab[r][q];
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = (self.tab[r][self.k].max(0.0)) / a;
            let key = self.basis[r].unwrap_or(usize::MAX);
            match best {
                Some((br, bk, _)) if (ratio, key) >= (br, bk) => {}
                _ => best = Some((ratio, key, r)),
            }
        }
        best.map(|(_, _, r)| r)
    }

    fn phase_two(&mut self, budget: usize) -> Result<(usize, bool)> {
        // Explicit reduced-cost row, updated with each pivot.
        let mut cost_row = vec![0.0; self.k];
        for j in 0..self.k {
            let mut rc = self.costs[j];
            for r in 0..self.m {
                if let Some(b) = self.basis[r] {
                    rc -= self.costs[b] * self.tab[r][j];
                }
            }
            cost_row[j] = rc;
        }
        for r in 0..self.m {
            if let Some(b) = self.basis[r] {
                cost_row[b] = 0.0;
            }
        }

        let mut iters = 0usize;
        let mut bland = false;
        let mut last_obj = f64::INFINITY;
        let mut stall = 0usize;
        loop {
            if iters > budget {
                return Err(Error::Internal("simplex exceeded iteration budget".into()));
            }
            let q = if bland {
                (0..self.k).find(|&j| cost_row[j] < -COST_TOL)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..self.k {
                    let rc = cost_row[j];
                    if rc < -COST_TOL && best.map_or(true, |(_, b)| rc < b) {
                        best = Some((j, rc));
                    }
                }
                best.map(|(j, _)| j)
            };
            let q = match q {
                Some(q) => q,
                None => return Ok((iters, bland)),
            };
            let r = match self.ratio_row(q) {
                Some(r) => r,
                None => {
                    return Err(Error::Internal(
                        "simplex reports an unbounded direction on a bounded objective".into(),
                    ))
                }
            };
            let rc_q = cost_row[q];
            self.pivot(r, q);
            // Reduced costs transform like any other row of the tableau.
            for j in 0..self.k {
                cost_row[j] -= rc_q * self.tab[r][j];
            }
            cost_row[q] = 0.0;

            let obj = self.objective();
            if obj < last_obj - 1e-12 {
                last_obj = obj;
                stall = 0;
            } else {
                stall += 1;
                if !bland && stall > 2 * self.m + 10 {
                    bland = true;
                }
            }
            iters += 1;
        }
    }

    fn objective(&self) -> f64 {
        (0..self.m)
            .filter_map(|r| self.basis[r].map(|b| self.costs[b] * self.tab[r][self.k]))
            .sum()
    }

    fn extract(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.k];
        for r in 0..self.m {
            if let Some(b) = self.basis[r] {
                x[b] = self.tab[r][self.k].max(0.0);
            }
        }
        x
    }
}

/// Solve `min c.x  s.t.  Ax = b, x >= 0` to a basic optimal solution.
pub fn solve(
    rows: &[Vec<(usize, f64)>],
    rhs: &[f64],
    costs: &[f64],
    warm_cols: Option<&[usize]>,
    feas_tol: f64,
) -> Result<SimplexOutcome> {
    let mut sx = Simplex::new(rows, rhs, costs);
    let budget = 200 * (sx.m + sx.k) + 1000;
    let mut iterations = 0usize;
    if let Some(cols) = warm_cols {
        sx.crash(cols);
        // A bad warm start would leave weight on an artificial; phase 1
        // below repairs it either way.
    }
    if sx.artificial_infeasibility() > feas_tol {
        iterations += sx.phase_one(feas_tol, budget)?;
    }
    sx.purge_artificials(feas_tol)?;
    let (p2, used_bland) = sx.phase_two(budget)?;
    iterations += p2;
    Ok(SimplexOutcome { x: sx.extract(), iterations, used_bland })
}
