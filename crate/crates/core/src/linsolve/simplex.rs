//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_traits::{Signed, Zero};

use super::{Direction, LinearSystem, Relation};
use crate::rational::Rational;

pub(super) enum Outcome {
    Optimal { value: Rational, witness: Vec<Rational> },
    Unbounded,
    Infeasible,
}

struct Tableau {
    /// `m` rows of `ncols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, with `-z` in the last entry.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns permitted to enter the basis.
    allowed: Vec<bool>,
    ncols: usize,
    /// Column of `x_j` and, for free variables, of its negative part.
    pos: Vec<usize>,
    neg: Vec<Option<usize>>,
    art_start: usize,
}

enum Run {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(system: &LinearSystem) -> Tableau {
        let n = system.num_vars();
        let mut pos = Vec::with_capacity(n);
        let mut neg = Vec::with_capacity(n);
        let mut col = 0;
        for &nn in system.nonneg_flags() {
            pos.push(col);
            col += 1;
            if nn {
                neg.push(None);
            } else {
                neg.push(Some(col));
                col += 1;
            }
        }
        let slack_start = col;
        let n_slack = system.constraints().iter().filter(|c| c.rel != Relation::Eq).count();
        let art_start = slack_start + n_slack;
        let m = system.constraints().len();
        let ncols = art_start + m;

        let mut rows = Vec::with_capacity(m);
        let mut slack = slack_start;
        for (i, c) in system.constraints().iter().enumerate() {
            let mut row = vec![Rational::zero(); ncols + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                row[pos[j]] = a.clone();
                if let Some(k) = neg[j] {
                    row[k] = -a;
                }
            }
            if c.rel != Relation::Eq {
                row[slack] = Rational::from_integer((-1).into());
                slack += 1;
            }
            row[ncols] = c.rhs.clone();
            if c.rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
            }
            row[art_start + i] = Rational::from_integer(1.into());
            rows.push(row);
        }
        let mut allowed = vec![true; ncols];
        for a in allowed.iter_mut().skip(art_start) {
            *a = false;
        }
        Tableau {
            rows,
            obj: vec![Rational::zero(); ncols + 1],
            basis: (art_start..art_start + m).collect(),
            allowed,
            ncols,
            pos,
            neg,
            art_start,
        }
    }

    /// Installs a cost vector and prices out the current basis.
    fn set_costs(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(row) {
                if !a.is_zero() {
                    *o -= cb * a;
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                self.obj[j] -= &f * &pivot_row[j];
            }
        }
        self.basis[r] = c;
    }

    fn run(&mut self) -> Run {
        loop {
            let entering = (0..self.ncols).find(|&j| self.allowed[j] && self.obj[j].is_negative());
            let Some(c) = entering else { return Run::Optimal };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Run::Unbounded,
            }
        }
    }

    /// Phase one; on success the artificials are out of the basis or stuck
    /// on redundant rows at zero, and may never re-enter.
    fn phase_one(&mut self) -> bool {
        let mut cost = vec![Rational::zero(); self.ncols];
        for c in cost.iter_mut().skip(self.art_start) {
            *c = Rational::from_integer(1.into());
        }
        self.set_costs(&cost);
        if let Run::Unbounded = self.run() {
            unreachable!("phase one objective is bounded below by zero");
        }
        if !self.obj[self.ncols].is_zero() {
            return false;
        }
        for r in 0..self.rows.len() {
            if self.basis[r] < self.art_start {
                continue;
            }
            if let Some(c) = (0..self.art_start).find(|&j| !self.rows[r][j].is_zero()) {
                self.pivot(r, c);
            }
        }
        true
    }

    fn point(&self) -> Vec<Rational> {
        let mut val = vec![Rational::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            val[b] = self.rows[i][self.ncols].clone();
        }
        self.pos
            .iter()
            .zip(&self.neg)
            .map(|(&p, n)| match n {
                Some(k) => &val[p] - &val[*k],
                None => val[p].clone(),
            })
            .collect()
    }
}

/// A basic feasible point, or `None` when the system is infeasible.
pub(super) fn feasible_point(system: &LinearSystem) -> Option<Vec<Rational>> {
    debug_assert!(!system.has_strict());
    let mut t = Tableau::build(system);
    if t.phase_one() {
        Some(t.point())
    } else {
        None
    }
}

pub(super) fn optimize(system: &LinearSystem, objective: &[Rational], direction: Direction) -> Outcome {
    debug_assert!(!system.has_strict());
    let mut t = Tableau::build(system);
    if !t.phase_one() {
        return Outcome::Infeasible;
    }
    let mut cost = vec![Rational::zero(); t.ncols];
    for (j, c) in objective.iter().enumerate() {
        let c = match direction {
            Direction::Min => c.clone(),
            Direction::Max => -c,
        };
        if let Some(k) = t.neg[j] {
            cost[k] = -&c;
        }
        cost[t.pos[j]] = c;
    }
    t.set_costs(&cost);
    match t.run() {
        Run::Unbounded => Outcome::Unbounded,
        Run::Optimal => {
            let witness = t.point();
            let value = objective.iter().zip(&witness).map(|(c, x)| c * x).sum();
            Outcome::Optimal { value, witness }
        }
    }
}
