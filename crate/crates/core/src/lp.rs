//! Dense primal simplex for `maximize c.x  s.t.  A x <= b, x >= 0, b >= 0`.
//!
//! With `b >= 0` the all-slack basis is feasible, so the solver starts there
//! and never needs a phase-one. Pivoting follows Bland's rule.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, QwcError, Result};

pub const PIVOT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    /// Row-major `rows x vars`.
    constraints: Vec<f64>,
    bounds: Vec<f64>,
}

impl LinearProgram {
    /// `constraints` is row-major with `bounds.len()` rows of
    /// `objective.len()` entries each.
    pub fn new(objective: Vec<f64>, constraints: Vec<f64>, bounds: Vec<f64>) -> Result<Self> {
        check_dim(objective.len() * bounds.len(), constraints.len())?;
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !(finite(&objective) && finite(&constraints) && finite(&bounds)) {
            return Err(QwcError::InvalidArgument("LP data must be finite".into()));
        }
        if bounds.iter().any(|&b| b < 0.0) {
            return Err(QwcError::InvalidArgument(
                "LP bounds must be non-negative".into(),
            ));
        }
        Ok(Self {
            objective,
            constraints,
            bounds,
        })
    }

    pub fn from_rows(objective: Vec<f64>, rows: &[Vec<f64>], bounds: Vec<f64>) -> Result<Self> {
        check_dim(bounds.len(), rows.len())?;
        let v = objective.len();
        let mut flat = Vec::with_capacity(v * rows.len());
        for row in rows {
            check_dim(v, row.len())?;
            flat.extend_from_slice(row);
        }
        Self::new(objective, flat, bounds)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.bounds.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn coefficient(&self, row: usize, var: usize) -> f64 {
        self.constraints[row * self.num_vars() + var]
    }

    /// Largest violation of `A x <= b`, zero when feasible.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let v = self.num_vars();
        (0..self.num_constraints())
            .map(|r| {
                let lhs: f64 = (0..v).map(|j| self.constraints[r * v + j] * x[j]).sum();
                (lhs - self.bounds[r]).max(0.0)
            })
            .fold(0.0, f64::max)
    }

    pub fn iteration_cap(&self) -> usize {
        50 * (self.num_vars() + self.num_constraints())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub status: LpStatus,
    pub iterations: usize,
}

/// Solves the program, returning a vertex solution.
///
/// An unbounded program yields `status = Unbounded`; running past
/// `50 (V + R)` pivots is an error.
pub fn solve_simplex(lp: &LinearProgram) -> Result<LpSolution> {
    let vars = lp.num_vars();
    let rows = lp.num_constraints();
    let width = vars + rows + 1; // structural, slack, rhs
    let rhs = width - 1;

    let mut tab = vec![0.0; rows * width];
    for r in 0..rows {
        let row = &mut tab[r * width..(r + 1) * width];
        row[..vars].copy_from_slice(&lp.constraints[r * vars..(r + 1) * vars]);
        row[vars + r] = 1.0;
        row[rhs] = lp.bounds[r];
    }
    // reduced costs c_j - z_j; the last entry tracks -objective
    let mut reduced = vec![0.0; width];
    reduced[..vars].copy_from_slice(&lp.objective);
    let mut basis: Vec<usize> = (vars..vars + rows).collect();

    let cap = lp.iteration_cap();
    let mut iterations = 0;
    loop {
        // Bland: lowest-index improving column
        let Some(enter) = (0..vars + rows).find(|&j| reduced[j] > PIVOT_TOLERANCE) else {
            break;
        };
        // Bland: minimum ratio, ties to the lowest basic variable index
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let a = tab[r * width + enter];
            if a <= PIVOT_TOLERANCE {
                continue;
            }
            let ratio = tab[r * width + rhs] / a;
            leave = match leave {
                None => Some((r, ratio)),
                Some((best, best_ratio)) => {
                    if ratio < best_ratio - PIVOT_TOLERANCE
                        || (ratio <= best_ratio + PIVOT_TOLERANCE && basis[r] < basis[best])
                    {
                        Some((r, ratio))
                    } else {
                        Some((best, best_ratio))
                    }
                }
            };
        }
        let Some((pivot_row, _)) = leave else {
            return Ok(LpSolution {
                x: extract(&tab, &basis, vars, width),
                objective_value: f64::INFINITY,
                status: LpStatus::Unbounded,
                iterations,
            });
        };
        if iterations >= cap {
            return Err(QwcError::IterationLimit { cap });
        }
        iterations += 1;
        pivot(&mut tab, &mut reduced, width, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let x = extract(&tab, &basis, vars, width);
    let objective_value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    Ok(LpSolution {
        x,
        objective_value,
        status: LpStatus::Optimal,
        iterations,
    })
}

fn pivot(tab: &mut [f64], reduced: &mut [f64], width: usize, prow: usize, pcol: usize) {
    let rows = tab.len() / width;
    let inv = 1.0 / tab[prow * width + pcol];
    for v in &mut tab[prow * width..(prow + 1) * width] {
        *v *= inv;
    }
    let pivot_row: Vec<f64> = tab[prow * width..(prow + 1) * width].to_vec();
    for r in (0..rows).filter(|&r| r != prow) {
        let factor = tab[r * width + pcol];
        if factor == 0.0 {
            continue;
        }
        for (v, p) in tab[r * width..(r + 1) * width].iter_mut().zip(&pivot_row) {
            *v -= factor * p;
        }
        tab[r * width + pcol] = 0.0;
    }
    let factor = reduced[pcol];
    for (v, p) in reduced.iter_mut().zip(&pivot_row) {
        *v -= factor * p;
    }
    reduced[pcol] = 0.0;
}

fn extract(tab: &[f64], basis: &[usize], vars: usize, width: usize) -> Vec<f64> {
    let mut x = vec![0.0; vars];
    for (r, &b) in basis.iter().enumerate() {
        if b < vars {
            x[b] = tab[r * width + width - 1].max(0.0);
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bound() {
        let lp = LinearProgram::from_rows(vec![1.0], &[vec![1.0]], vec![1.0]).unwrap();
        let sol = solve_simplex(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-12);
        assert!((sol.objective_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_simplex_vertex() {
        let lp = LinearProgram::from_rows(vec![2.0, 1.0], &[vec![1.0, 1.0]], vec![0.5]).unwrap();
        let sol = solve_simplex(&lp).unwrap();
        assert!((sol.x[0] - 0.5).abs() < 1e-12 && sol.x[1].abs() < 1e-12);
        assert!((sol.objective_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_objective() {
        let lp = LinearProgram::from_rows(vec![0.0, 0.0], &[vec![1.0, 2.0]], vec![3.0]).unwrap();
        let sol = solve_simplex(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective_value, 0.0);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn unbounded_is_flagged() {
        let lp = LinearProgram::from_rows(vec![1.0, 1.0], &[vec![1.0, -1.0]], vec![1.0]).unwrap();
        assert_eq!(solve_simplex(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LinearProgram::from_rows(vec![1.0], &[vec![1.0]], vec![-1.0]).is_err());
        assert!(LinearProgram::from_rows(vec![f64::NAN], &[vec![1.0]], vec![1.0]).is_err());
        assert!(LinearProgram::new(vec![1.0, 2.0], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn degenerate_program_terminates() {
        // Beale-style cycling example; Bland's rule must terminate.
        let lp = LinearProgram::from_rows(
            vec![0.75, -20.0, 0.5, -6.0],
            &[
                vec![0.25, -8.0, -1.0, 9.0],
                vec![0.5, -12.0, -0.5, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![0.0, 0.0, 1.0],
        )
        .unwrap();
        let sol = solve_simplex(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value - 1.25).abs() < 1e-9);
        assert!(lp.max_violation(&sol.x) < 1e-9);
    }
}
