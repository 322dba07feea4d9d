//! Dense two-phase simplex for `minimize cᵀx subject to Ax = b, x ≥ 0`.
//!
//! Pricing is Dantzig's rule until a run of degenerate pivots is seen, after
//! which the solver switches to Bland's rule for the rest of the phase, which
//! rules out cycling. Duals are read off the artificial columns, which are
//! kept in the tableau for that purpose.

use crate::error::{Error, Result};

const EPS: f64 = 1e-11;
const DEGENERATE_RUN: usize = 32;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: f64,
    /// Primal solution, one entry per column of A.
    pub x: Vec<f64>,
    /// Dual solution π with Aᵀπ ≤ c and bᵀπ = value.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    rows: usize,
    width: usize, // structural + artificial columns
    structural: usize,
    t: Vec<f64>,   // rows × (width + 1), last column is the rhs
    obj: Vec<f64>, // width + 1, reduced costs and -(objective) in the last slot
    basis: Vec<usize>,
    pivots: usize,
    cap: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.width + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width + 1;
        let p = self.t[r * w + c];
        for v in &mut self.t[r * w..(r + 1) * w] {
            *v /= p;
        }
        let prow: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c];
            if f != 0.0 {
                for (v, pv) in self.t[i * w..(i + 1) * w].iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                self.t[i * w + c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn set_objective(&mut self, cost: &[f64]) {
        self.obj = cost.to_vec();
        self.obj.push(0.0);
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let w = self.width + 1;
                for (v, tv) in self.obj.iter_mut().zip(&self.t[r * w..(r + 1) * w]) {
                    *v -= cb * tv;
                }
            }
        }
    }

    /// Runs simplex iterations over columns `< enter_limit`.
    fn optimize(&mut self, enter_limit: usize) -> Result<()> {
        let mut bland = false;
        let mut degenerate = 0;
        loop {
            if self.pivots > self.cap {
                return Err(Error::LpStall(self.pivots));
            }
            let scale = self.obj[..enter_limit].iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let tol = EPS * scale;
            let entering = if bland {
                (0..enter_limit).find(|&j| self.obj[j] < -tol)
            } else {
                let mut best = None;
                let mut best_v = -tol;
                for j in 0..enter_limit {
                    if self.obj[j] < best_v {
                        best_v = self.obj[j];
                        best = Some(j);
                    }
                }
                best
            };
            let Some(c) = entering else { return Ok(()) };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, c);
                if a > EPS {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lv)) => {
                            let better = ratio < lv - EPS * lv.max(1.0)
                                || (ratio <= lv + EPS * lv.max(1.0) && self.basis[r] < self.basis[lr]);
                            if better { Some((r, ratio)) } else { Some((lr, lv)) }
                        }
                    };
                }
            }
            let Some((r, ratio)) = leave else { return Err(Error::LpUnbounded) };
            if ratio <= EPS {
                degenerate += 1;
                if degenerate >= DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(r, c);
        }
    }
}

/// Solves `min cᵀx, Ax = b, x ≥ 0` with A given row-major (`b.len()` rows).
pub fn minimize(a: &[f64], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let rows = b.len();
    let n = c.len();
    if a.len() != rows * n {
        return Err(Error::InvalidParameter(format!(
            "constraint matrix has {} entries, expected {rows}×{n}",
            a.len()
        )));
    }
    let width = n + rows;
    let mut t = vec![0.0; rows * (width + 1)];
    let mut signs = vec![1.0; rows];
    for r in 0..rows {
        let s = if b[r] < 0.0 { -1.0 } else { 1.0 };
        signs[r] = s;
        let row = &mut t[r * (width + 1)..(r + 1) * (width + 1)];
        for j in 0..n {
            row[j] = s * a[r * n + j];
        }
        row[n + r] = 1.0;
        row[width] = s * b[r];
    }
    let mut tab = Tableau {
        rows,
        width,
        structural: n,
        t,
        obj: Vec::new(),
        basis: (n..n + rows).collect(),
        pivots: 0,
        cap: 50 * (width + rows) + 1000,
    };

    let mut phase1 = vec![0.0; width];
    phase1[n..].iter_mut().for_each(|v| *v = 1.0);
    tab.set_objective(&phase1);
    tab.optimize(width)?;
    let infeasibility = -tab.obj[width];
    let bscale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if infeasibility > 1e-9 * bscale {
        return Err(Error::LpInfeasible);
    }
    // drive zero-level artificials out of the basis where possible
    for r in 0..rows {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| tab.at(r, j).abs() > 1e-9) {
                tab.pivot(r, j);
            }
        }
    }

    let mut cost = c.to_vec();
    cost.resize(width, 0.0);
    tab.set_objective(&cost);
    tab.optimize(tab.structural)?;

    let mut x = vec![0.0; n];
    for r in 0..rows {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs(r).max(0.0);
        }
    }
    let duals = (0..rows).map(|r| -signs[r] * tab.obj[n + r]).collect();
    Ok(LpSolution { value: -tab.obj[width], x, duals, pivots: tab.pivots })
}
