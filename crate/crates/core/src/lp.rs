//! Dense two-phase simplex method over the rationals.
//!
//! Pivoting follows Bland's rule (smallest eligible index enters, ties in
//! the ratio test leave by smallest basic index), so the method terminates
//! without any perturbation. All arithmetic is exact.

use num_traits::{One, Signed, Zero};

use crate::form::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective . x` subject to the constraints. Variables are
/// nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            free: vec![false; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> LpOutcome {
        // Column layout: one column per nonnegative variable, two per free
        // variable (x = x+ - x-), then slacks/surpluses, then artificials.
        let mut column_of = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for &free in &self.free {
            column_of.push(ncols);
            ncols += if free { 2 } else { 1 };
        }
        let structural = ncols;
        let m = self.constraints.len();

        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut relations = Vec::with_capacity(m);
        for c in &self.constraints {
            let mut row = vec![Rational::zero(); structural];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[column_of[j]] = a.clone();
                if self.free[j] {
                    row[column_of[j] + 1] = -a;
                }
            }
            let mut rhs = c.rhs.clone();
            let mut rel = c.relation;
            if rhs.is_negative() {
                for a in &mut row {
                    *a = -&*a;
                }
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            row.push(rhs);
            rows.push(row);
            relations.push(rel);
        }

        let slack_count = relations.iter().filter(|r| **r != Relation::Eq).count();
        let art_count = relations.iter().filter(|r| **r != Relation::Le).count();
        let width = structural + slack_count + art_count;
        let first_art = structural + slack_count;

        let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (structural, first_art);
        for (row, rel) in rows.into_iter().zip(&relations) {
            let rhs = row[structural].clone();
            let mut t = row;
            t.truncate(structural);
            t.resize(width, Rational::zero());
            match rel {
                Relation::Le => {
                    t[s] = Rational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    t[s] = -Rational::one();
                    s += 1;
                    t[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    t[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
            }
            t.push(rhs);
            tab.push(t);
        }

        let mut tableau = Tableau {
            rows: tab,
            basis,
            width,
        };

        // Phase 1: maximize -(sum of artificials).
        if art_count > 0 {
            let mut cost = vec![Rational::zero(); width];
            for c in cost.iter_mut().skip(first_art) {
                *c = -Rational::one();
            }
            match tableau.optimize(&cost, width) {
                Pivoted::Unbounded => unreachable!("phase 1 is bounded"),
                Pivoted::Optimal => {}
            }
            if !tableau.objective_value(&cost).is_zero() {
                return LpOutcome::Infeasible;
            }
            tableau.drive_out_artificials(first_art);
        }

        // Phase 2 over the structural and slack columns only.
        let mut cost = vec![Rational::zero(); width];
        for (j, c) in self.objective.iter().enumerate() {
            cost[column_of[j]] = c.clone();
            if self.free[j] {
                cost[column_of[j] + 1] = -c;
            }
        }
        if let Pivoted::Unbounded = tableau.optimize(&cost, first_art) {
            return LpOutcome::Unbounded;
        }
        let value = tableau.objective_value(&cost);
        let mut columns = vec![Rational::zero(); width];
        for (i, &b) in tableau.basis.iter().enumerate() {
            columns[b] = tableau.rows[i][width].clone();
        }
        let point = (0..self.num_vars)
            .map(|j| {
                let c = column_of[j];
                if self.free[j] {
                    &columns[c] - &columns[c + 1]
                } else {
                    columns[c].clone()
                }
            })
            .collect();
        LpOutcome::Optimal { point, value }
    }
}

enum Pivoted {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn objective_value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.rows)
            .fold(Rational::zero(), |acc, (&b, row)| {
                acc + &cost[b] * &row[self.width]
            })
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        self.basis
            .iter()
            .zip(&self.rows)
            .fold(cost[j].clone(), |acc, (&b, row)| acc - &cost[b] * &row[j])
    }

    /// Maximizes `cost` using only columns `< allowed` as entering candidates.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Pivoted {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(j) = entering else {
                return Pivoted::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else {
                return Pivoted::Unbounded;
            };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for a in self.rows[r].iter_mut() {
            *a = &*a / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (a, b) in row.iter_mut().zip(&pivot_row) {
                if !b.is_zero() {
                    *a -= &factor * b;
                }
            }
        }
        self.basis[r] = c;
    }

    /// After a zero-cost phase 1, pivots artificial columns out of the basis
    /// or drops the redundant rows that keep them there.
    fn drive_out_artificials(&mut self, first_art: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < first_art {
                i += 1;
                continue;
            }
            match (0..first_art).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
