//! Small dense linear-program solver.
//!
//! Two-phase primal simplex on a dense tableau with Bland's rule. This is
//! deliberately desk-scale: the basis-pursuit norm evaluations, the Dantzig
//! selector and the 2D total-variation dual norm all produce programs with at
//! most a few hundred variables, where a dense tableau is simple and
//! deterministic.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;

/// Linear program in standard form: minimize `c·x` subject to `A x = b`, `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    n: usize,
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

impl LpProblem {
    pub fn new(n: usize) -> Self {
        LpProblem {
            n,
            objective: vec![0.0; n],
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn set_objective(&mut self, c: &[f64]) {
        assert_eq!(c.len(), self.n);
        self.objective = c.to_vec();
    }

    /// Adds the equality constraint `row · x = rhs`.
    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.n);
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Two-phase simplex. Returns the optimum or `Infeasible`/`Unbounded`.
    pub fn solve(&self) -> Result<LpSolution> {
        let m = self.rows.len();
        let n = self.n;
        // tableau columns: n structural + m artificial + rhs
        let width = n + m + 1;
        let mut t = vec![vec![0.0; width]; m];
        for (i, row) in self.rows.iter().enumerate() {
            let flip = if self.rhs[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                t[i][j] = flip * row[j];
            }
            t[i][n + i] = 1.0;
            t[i][width - 1] = flip * self.rhs[i];
        }
        let mut basis: Vec<usize> = (n..n + m).collect();

        // phase 1: minimize the sum of artificials (their reduced costs are
        // zero while basic, so only structural columns enter the cost row)
        let mut cost = vec![0.0; width];
        for i in 0..m {
            for j in 0..n {
                cost[j] -= t[i][j];
            }
            cost[width - 1] -= t[i][width - 1];
        }
        simplex_iterate(&mut t, &mut basis, &mut cost, n)?;
        let phase1 = -cost[width - 1];
        if phase1 > 1e-7 {
            return Err(Error::Infeasible);
        }
        // drive leftover artificials out of the basis where possible
        for i in 0..m {
            if basis[i] >= n {
                if let Some(j) = (0..n).find(|&j| t[i][j].abs() > PIVOT_TOL) {
                    pivot(&mut t, &mut cost, i, j);
                    basis[i] = j;
                }
            }
        }

        // phase 2: original objective, artificial columns frozen
        let mut cost = vec![0.0; width];
        cost[..n].copy_from_slice(&self.objective);
        for i in 0..m {
            let b = basis[i];
            if b < n && cost[b].abs() > 0.0 {
                let factor = cost[b];
                for j in 0..width {
                    cost[j] -= factor * t[i][j];
                }
            }
        }
        simplex_iterate(&mut t, &mut basis, &mut cost, n)?;

        let mut x = vec![0.0; n];
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] = t[i][width - 1];
            }
        }
        let value = self
            .objective
            .iter()
            .zip(&x)
            .map(|(c, v)| c * v)
            .sum::<f64>();
        Ok(LpSolution { x, value })
    }
}

/// Runs simplex iterations with Bland's rule over the first `active` columns.
fn simplex_iterate(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &mut [f64],
    active: usize,
) -> Result<()> {
    let m = t.len();
    let width = cost.len();
    let max_iter = 50_000 + 200 * (width * m);
    for _ in 0..max_iter {
        // Bland: entering = lowest-index column with negative reduced cost
        let Some(enter) = (0..active).find(|&j| cost[j] < -PIVOT_TOL) else {
            return Ok(());
        };
        // ratio test, ties broken by lowest basis index (Bland)
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > PIVOT_TOL {
                let ratio = t[i][width - 1] / t[i][enter];
                if ratio < best - 1e-12
                    || (ratio < best + 1e-12 && leave.map_or(true, |l| basis[i] < basis[l]))
                {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(Error::Unbounded);
        };
        pivot(t, cost, leave, enter);
        basis[leave] = enter;
    }
    Err(Error::IterationCap(max_iter))
}

fn pivot(t: &mut [Vec<f64>], cost: &mut [f64], row: usize, col: usize) {
    let width = cost.len();
    let p = t[row][col];
    for j in 0..width {
        t[row][j] /= p;
    }
    for i in 0..t.len() {
        if i != row && t[i][col].abs() > 0.0 {
            let f = t[i][col];
            for j in 0..width {
                t[i][j] -= f * t[row][j];
            }
        }
    }
    let f = cost[col];
    if f.abs() > 0.0 {
        for j in 0..width {
            cost[j] -= f * t[row][j];
        }
    }
}

/// Minimizes `‖v‖₁` subject to `A v = b` (basis pursuit). `a` is row-major
/// `rows × cols`. Returns `(v, ‖v‖₁)`.
pub fn min_l1_preimage(a: &[Vec<f64>], b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    // v = p - q with p, q >= 0
    let n = 2 * cols;
    let mut lp = LpProblem::new(n);
    lp.set_objective(&vec![1.0; n]);
    for i in 0..rows {
        let mut row = vec![0.0; n];
        for j in 0..cols {
            row[j] = a[i][j];
            row[cols + j] = -a[i][j];
        }
        lp.add_eq(row, b[i]);
    }
    let sol = lp.solve()?;
    let v: Vec<f64> = (0..cols).map(|j| sol.x[j] - sol.x[cols + j]).collect();
    Ok((v, sol.value))
}

/// Minimizes `‖v‖_∞` subject to `A v = b`. Returns `(v, ‖v‖_∞)`.
pub fn min_linf_preimage(a: &[Vec<f64>], b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    // variables: p, q (v = p - q), t, and one slack per box row p_j + q_j <= t
    let n = 2 * cols + 1 + cols;
    let t_idx = 2 * cols;
    let mut lp = LpProblem::new(n);
    let mut obj = vec![0.0; n];
    obj[t_idx] = 1.0;
    lp.set_objective(&obj);
    for i in 0..rows {
        let mut row = vec![0.0; n];
        for j in 0..cols {
            row[j] = a[i][j];
            row[cols + j] = -a[i][j];
        }
        lp.add_eq(row, b[i]);
    }
    for j in 0..cols {
        let mut row = vec![0.0; n];
        row[j] = 1.0;
        row[cols + j] = 1.0;
        row[t_idx] = -1.0;
        row[2 * cols + 1 + j] = 1.0;
        lp.add_eq(row, 0.0);
    }
    let sol = lp.solve()?;
    let v: Vec<f64> = (0..cols).map(|j| sol.x[j] - sol.x[cols + j]).collect();
    Ok((v, sol.x[t_idx]))
}
