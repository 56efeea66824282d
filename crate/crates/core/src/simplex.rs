//! Dense two-phase simplex over exact rationals.
//!
//! Solves `maximize c·x subject to A x ≤ b, x ≥ 0` for arbitrary signs of `b`.
//! Bland's rule is used for both entering and leaving variables, so the
//! method terminates on the heavily degenerate programs that arise from
//! difference constraints.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    rows: Vec<(Vec<Rational>, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    pub pivots: usize,
}

impl LinearProgram {
    /// A program over `objective.len()` nonnegative variables.
    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self { objective, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `coeffs · x ≤ rhs`.
    pub fn less_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width mismatch");
        self.rows.push((coeffs, rhs));
        self
    }

    /// Adds `coeffs · x ≥ rhs`.
    pub fn greater_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        let neg = coeffs.into_iter().map(|c| -c).collect();
        self.less_eq(neg, -rhs)
    }

    /// Adds `coeffs · x = rhs` as a pair of inequalities.
    pub fn equal(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.less_eq(coeffs.clone(), rhs.clone());
        self.greater_eq(coeffs, rhs)
    }

    pub fn solve(&self) -> Result<LpSolution> {
        let n = self.num_vars();
        let m = self.rows.len();
        let artificial_rows: Vec<usize> = (0..m).filter(|&i| self.rows[i].1.is_negative()).collect();
        let k = artificial_rows.len();
        let cols = n + m + k;
        let rhs = cols;

        let mut t = Tableau {
            rows: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
            obj: vec![rational::zero(); cols + 1],
            pivots: 0,
        };
        let mut next_art = n + m;
        for (i, (coeffs, b)) in self.rows.iter().enumerate() {
            let mut row = vec![rational::zero(); cols + 1];
            let flip = b.is_negative();
            for (j, c) in coeffs.iter().enumerate() {
                row[j] = if flip { -c } else { c.clone() };
            }
            row[n + i] = if flip { -rational::one() } else { rational::one() };
            row[rhs] = if flip { -b } else { b.clone() };
            if flip {
                row[next_art] = rational::one();
                t.basis.push(next_art);
                next_art += 1;
            } else {
                t.basis.push(n + i);
            }
            t.rows.push(row);
        }

        if k > 0 {
            // phase one: maximize -(sum of artificials)
            let mut cost = vec![rational::zero(); cols];
            for c in cost.iter_mut().skip(n + m) {
                *c = -rational::one();
            }
            t.set_objective(&cost);
            t.run(cols)?;
            if t.obj[rhs].is_negative() {
                return Err(Error::Lp("infeasible"));
            }
            t.expel_artificials(n + m);
        }

        let mut cost = vec![rational::zero(); cols];
        cost[..n].clone_from_slice(&self.objective);
        t.set_objective(&cost);
        t.run(n + m)?;

        let mut x = vec![rational::zero(); n];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.rows[i][rhs].clone();
            }
        }
        Ok(LpSolution { value: t.obj[rhs].clone(), x, pivots: t.pivots })
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs `c_B B⁻¹ A_j - c_j`; the last entry is the objective value.
    obj: Vec<Rational>,
    pivots: usize,
}

impl Tableau {
    fn set_objective(&mut self, cost: &[Rational]) {
        let width = self.obj.len();
        let mut obj: Vec<Rational> =
            (0..width).map(|j| if j < cost.len() { -&cost[j] } else { rational::zero() }).collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(row) {
                if !a.is_zero() {
                    *o += cb * a;
                }
            }
        }
        self.obj = obj;
    }

    /// Iterates until optimal, considering only columns `< allowed`.
    fn run(&mut self, allowed: usize) -> Result<()> {
        let rhs = self.obj.len() - 1;
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Lp("unbounded"));
            };
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        self.pivots += 1;
        let p = self.rows[r][e].clone();
        for a in self.rows[r].iter_mut() {
            if !a.is_zero() {
                *a /= &p;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[e].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = pivot_row;
        self.basis[r] = e;
    }

    /// Pivots zero-level artificial variables out of the basis, dropping
    /// rows that turn out to be redundant.
    fn expel_artificials(&mut self, first_artificial: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= first_artificial {
                match (0..first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}
