//! Dense two-phase simplex over exact rationals.
//!
//! Instances in this crate are tiny (a handful of rows and columns), so a
//! dense tableau with Bland's anti-cycling rule is all that is needed.

use crate::exact::Rational;

/// Outcome of `minimize c·x subject to A x = b, x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Each row holds the constraint coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, row: usize) -> &Rational {
        &self.rows[row][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &(&factor * pv);
                }
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes `cost` over the current feasible basis. Columns with
    /// `allowed[j] == false` never enter. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.ncols)
                .find(|&j| allowed[j] && !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative());
            let Some(col) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn reduced_cost(&self, cost: &[Rational], col: usize) -> Rational {
        let mut z = cost[col].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[i][col].is_zero() {
                z = z - &cost[b] * &self.rows[i][col];
            }
        }
        z
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().enumerate().map(|(i, &b)| &cost[b] * self.rhs(i)).sum()
    }
}

/// Solves `minimize cost·x` subject to `a x = b`, `x ≥ 0`.
pub fn minimize(cost: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let n = cost.len();
    let m = a.len();
    assert_eq!(b.len(), m, "row count mismatch");
    assert!(a.iter().all(|row| row.len() == n), "column count mismatch");

    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        r.push(if flip { -&b[i] } else { b[i].clone() });
        rows.push(r);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), ncols };

    // Phase one: drive the artificial variables to zero.
    let mut phase_one = vec![Rational::zero(); ncols];
    for c in phase_one.iter_mut().skip(n) {
        *c = Rational::one();
    }
    let everything = vec![true; ncols];
    t.optimize(&phase_one, &everything);
    if t.objective(&phase_one).is_positive() {
        return LpOutcome::Infeasible;
    }

    // Pivot remaining (zero-valued) artificials out, dropping redundant rows.
    let mut row = 0;
    while row < t.rows.len() {
        if t.basis[row] >= n {
            match (0..n).find(|&j| !t.rows[row][j].is_zero()) {
                Some(col) => t.pivot(row, col),
                None => {
                    t.rows.remove(row);
                    t.basis.remove(row);
                    continue;
                }
            }
        }
        row += 1;
    }

    let mut phase_two = cost.to_vec();
    phase_two.extend((0..m).map(|_| Rational::zero()));
    let allowed: Vec<bool> = (0..ncols).map(|j| j < n).collect();
    if !t.optimize(&phase_two, &allowed) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = t.rhs(i).clone();
        }
    }
    let value = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    LpOutcome::Optimal { x, value }
}
