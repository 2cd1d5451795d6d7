//! Dense two-phase primal simplex.
//!
//! Problems are stated as
//!
//! ```text
//! maximize    c . x
//! subject to  G x >= h
//!             A x  = b
//!             x   >= 0
//! ```
//!
//! Bland's rule is used for both the entering and the leaving variable, so
//! the method terminates on degenerate problems. Tolerances are fixed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;
const RATIO_TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub ineq_lhs: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub eq_lhs: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        LpProblem {
            objective,
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `row . x >= rhs`.
    pub fn add_ge(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.ineq_lhs.push(row);
        self.ineq_rhs.push(rhs);
        self
    }

    /// Adds `row . x <= rhs`, stored negated.
    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.add_ge(row.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq_lhs.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::invalid("linear program has no variables"));
        }
        if self.ineq_lhs.len() != self.ineq_rhs.len() || self.eq_lhs.len() != self.eq_rhs.len() {
            return Err(Error::invalid(
                "constraint row and right-hand side counts differ",
            ));
        }
        let rows = self.ineq_lhs.iter().chain(&self.eq_lhs);
        for (i, row) in rows.enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "constraint row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
        }
        let finite = self
            .objective
            .iter()
            .chain(self.ineq_lhs.iter().flatten())
            .chain(self.eq_lhs.iter().flatten())
            .chain(&self.ineq_rhs)
            .chain(&self.eq_rhs)
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("linear program has non-finite coefficients"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point; empty unless `status` is optimal.
    pub x: Vec<f64>,
    pub value: f64,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    /// reduced costs of the current phase objective
    reduced: Vec<f64>,
    pivots: usize,
    pivot_cap: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn price(&mut self, cost: &[f64]) {
        self.reduced = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b];
            if cb != 0.0 {
                for (r, &t) in self.reduced.iter_mut().zip(row) {
                    *r -= cb * t;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let inv = 1.0 / self.rows[r][e];
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        self.rhs[r] *= inv;
        self.rows[r][e] = 1.0;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[e];
            if f != 0.0 {
                for (v, &p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                row[e] = 0.0;
                self.rhs[i] -= f * pivot_rhs;
            }
        }
        let f = self.reduced[e];
        if f != 0.0 {
            for (v, &p) in self.reduced.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.reduced[e] = 0.0;
        }
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Runs Bland's-rule pivots; only columns below `limit` may enter.
    fn run(&mut self, limit: usize) -> Result<Outcome> {
        loop {
            let Some(e) = (0..limit).find(|&j| self.reduced[j] > PIVOT_TOL) else {
                return Ok(Outcome::Optimal);
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[e];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs[i].max(0.0) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= RATIO_TIE * (1.0 + br.abs());
                        if (tie && self.basis[i] < self.basis[bi]) || (!tie && ratio < br) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return Ok(Outcome::Unbounded);
            };
            if self.pivots >= self.pivot_cap {
                return Err(Error::SolverStall {
                    pivots: self.pivots,
                });
            }
            self.pivot(r, e);
        }
    }

    fn objective_value(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, &v)| cost[b] * v)
            .sum()
    }
}

/// Rejects a returned point that drifted off the constraints.
fn check_residuals(problem: &LpProblem, x: &[f64]) -> Result<()> {
    const RESIDUAL_TOL: f64 = 1e-6;
    let dot = |row: &[f64]| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    let scale =
        |row: &[f64], h: f64| 1.0 + h.abs() + row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (row, &h) in problem.ineq_lhs.iter().zip(&problem.ineq_rhs) {
        if dot(row) < h - RESIDUAL_TOL * scale(row, h) {
            return Err(Error::Solver(
                "optimal point violates an inequality row".into(),
            ));
        }
    }
    for (row, &b) in problem.eq_lhs.iter().zip(&problem.eq_rhs) {
        if (dot(row) - b).abs() > RESIDUAL_TOL * scale(row, b) {
            return Err(Error::Solver(
                "optimal point violates an equality row".into(),
            ));
        }
    }
    Ok(())
}

/// Scales a row so its largest coefficient has magnitude one.
fn equilibrate(row: &[f64], rhs: f64) -> (Vec<f64>, f64) {
    let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale > 0.0 {
        (row.iter().map(|v| v / scale).collect(), rhs / scale)
    } else {
        (row.to_vec(), rhs)
    }
}

/// Solves the program. Infeasible and unbounded problems are reported
/// through [`LpStatus`]; an exhausted pivot budget is an error.
pub fn solve(problem: &LpProblem) -> Result<LpSolution> {
    problem.validate()?;
    let n = problem.num_vars();
    let n_ineq = problem.ineq_lhs.len();
    let n_eq = problem.eq_lhs.len();
    let m = n_ineq + n_eq;
    let art_start = n + n_ineq;

    // Rows are sign-normalized so every right-hand side is >= 0. An
    // inequality with h <= 0 flips to -G x + s = -h and its surplus column
    // serves as the initial basic variable; every other row gets an artificial.
    let mut needs_artificial = Vec::with_capacity(m);
    let mut raw_rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, &h)) in problem.ineq_lhs.iter().zip(&problem.ineq_rhs).enumerate() {
        let (row, h) = equilibrate(row, h);
        let row = &row;
        let mut full = vec![0.0; art_start];
        if h <= 0.0 {
            full[..n].iter_mut().zip(row).for_each(|(f, &v)| *f = -v);
            full[n + i] = 1.0;
            rhs.push(-h);
            needs_artificial.push(false);
        } else {
            full[..n].copy_from_slice(row);
            full[n + i] = -1.0;
            rhs.push(h);
            needs_artificial.push(true);
        }
        raw_rows.push(full);
    }
    for (row, &b) in problem.eq_lhs.iter().zip(&problem.eq_rhs) {
        let (row, b) = equilibrate(row, b);
        let mut full = vec![0.0; art_start];
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        full[..n]
            .iter_mut()
            .zip(&row)
            .for_each(|(f, &v)| *f = sign * v);
        rhs.push(sign * b);
        needs_artificial.push(true);
        raw_rows.push(full);
    }

    let n_art = needs_artificial.iter().filter(|&&a| a).count();
    let total = art_start + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = art_start;
    for (i, mut full) in raw_rows.into_iter().enumerate() {
        full.resize(total, 0.0);
        if needs_artificial[i] {
            full[next_art] = 1.0;
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(full);
    }

    let size = m + total;
    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        reduced: Vec::new(),
        pivots: 0,
        pivot_cap: 10 * size * size,
    };

    if n_art > 0 {
        let mut phase1 = vec![0.0; total];
        phase1[art_start..].iter_mut().for_each(|c| *c = -1.0);
        tab.price(&phase1);
        match tab.run(total)? {
            Outcome::Optimal => {}
            Outcome::Unbounded => {
                return Err(Error::Solver(
                    "phase one reported an unbounded auxiliary problem".into(),
                ));
            }
        }
        if tab.objective_value(&phase1) < -FEAS_TOL {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                value: f64::NEG_INFINITY,
            });
        }
        // drive leftover artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_start {
                let col = (0..art_start).find(|&j| tab.rows[i][j].abs() > PIVOT_TOL);
                match col {
                    Some(j) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut phase2 = vec![0.0; total];
    phase2[..n].copy_from_slice(&problem.objective);
    tab.price(&phase2);
    match tab.run(art_start)? {
        Outcome::Optimal => {}
        Outcome::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: Vec::new(),
                value: f64::INFINITY,
            });
        }
    }

    let mut x = vec![0.0; n];
    for (&b, &v) in tab.basis.iter().zip(&tab.rhs) {
        if b < n {
            x[b] = v;
        }
    }
    check_residuals(problem, &x)?;
    let value = problem.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        value,
    })
}
