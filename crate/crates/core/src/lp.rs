//! Dense two-phase simplex over exact rationals.
//!
//! Solves `maximize c·x subject to A x = b, x >= 0`. Entering and leaving
//! variables follow Bland's smallest-index rule, so degenerate problems
//! terminate.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum LpFailure {
    Infeasible,
    Unbounded,
}

/// A linear program in equality standard form.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<BigRational>,
    pub rows: Vec<Vec<BigRational>>,
    pub rhs: Vec<BigRational>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: BigRational,
    pub x: Vec<BigRational>,
}

impl LinearProgram {
    pub fn new(objective: Vec<BigRational>) -> Self {
        LinearProgram { objective, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn add_equality(&mut self, row: Vec<BigRational>, rhs: BigRational) {
        debug_assert_eq!(row.len(), self.objective.len());
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn maximize(&self) -> Result<LpSolution, LpFailure> {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    n: usize,
    // constraint rows over n structural + p artificial columns
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.objective.len();
        let p = lp.rows.len();
        let mut a = Vec::with_capacity(p);
        let mut b = Vec::with_capacity(p);
        for (r, (row, rhs)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
            let flip = rhs.is_negative();
            let mut full: Vec<BigRational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
            full.extend((0..p).map(|k| if k == r { one() } else { BigRational::zero() }));
            a.push(full);
            b.push(if flip { -rhs } else { rhs.clone() });
        }
        Tableau { n, a, b, basis: (n..n + p).collect() }
    }

    fn width(&self) -> usize {
        self.a.first().map_or(self.n, |r| r.len())
    }

    fn pivot(&mut self, row: usize, col: usize, cost: &mut [BigRational], value: &mut BigRational) {
        let inv = self.a[row][col].recip();
        for v in self.a[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.b[row] *= &inv;
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.b[row].clone();
        for r in 0..self.a.len() {
            if r == row || self.a[r][col].is_zero() {
                continue;
            }
            let factor = self.a[r][col].clone();
            for (v, pv) in self.a[r].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.b[r] -= &factor * &pivot_rhs;
        }
        if !cost[col].is_zero() {
            let factor = cost[col].clone();
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            *value -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule on reduced costs `cost` (entering columns have
    /// negative reduced cost) restricted to columns `< limit`.
    fn optimize(&mut self, cost: &mut [BigRational], value: &mut BigRational, limit: usize) -> Result<(), LpFailure> {
        loop {
            let Some(col) = (0..limit).find(|&j| cost[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, BigRational)> = None;
            for r in 0..self.a.len() {
                let coef = &self.a[r][col];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.b[r] / coef;
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((row, _)) = best else {
                return Err(LpFailure::Unbounded);
            };
            self.pivot(row, col, cost, value);
        }
    }

    fn solve(mut self, objective: &[BigRational]) -> Result<LpSolution, LpFailure> {
        let n = self.n;
        let width = self.width();

        // Phase 1: maximize -Σ artificials.
        let mut cost = vec![BigRational::zero(); width];
        let mut value = BigRational::zero();
        for (row, rhs) in self.a.iter().zip(&self.b) {
            for j in 0..n {
                cost[j] -= &row[j];
            }
            value -= rhs;
        }
        self.optimize(&mut cost, &mut value, width)?;
        if value.is_negative() {
            return Err(LpFailure::Infeasible);
        }

        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= n {
                match (0..n).find(|&j| !self.a[r][j].is_zero()) {
                    Some(col) => {
                        let mut scratch_cost = vec![BigRational::zero(); width];
                        let mut scratch_value = BigRational::zero();
                        self.pivot(r, col, &mut scratch_cost, &mut scratch_value);
                    }
                    None => {
                        self.a.remove(r);
                        self.b.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }

        // Phase 2 reduced costs: c_B B^{-1} A_j - c_j.
        let mut cost: Vec<BigRational> = (0..width)
            .map(|j| if j < n { -objective[j].clone() } else { BigRational::zero() })
            .collect();
        let mut value = BigRational::zero();
        for (r, &bv) in self.basis.iter().enumerate() {
            let cb = &objective[bv];
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !self.a[r][j].is_zero() {
                    cost[j] += cb * &self.a[r][j];
                }
            }
            value += cb * &self.b[r];
        }
        self.optimize(&mut cost, &mut value, n)?;

        let mut x = vec![BigRational::zero(); n];
        for (r, &bv) in self.basis.iter().enumerate() {
            if bv < n {
                x[bv] = self.b[r].clone();
            }
        }
        Ok(LpSolution { value, x })
    }
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}
