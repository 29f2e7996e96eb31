//! Fourier–Motzkin elimination with strictness tracking.
//!
//! Independent of the simplex path; used as a cross-check oracle in tests
//! and by `--oracle` runs. Exponential in the number of variables, so only
//! suitable for small systems.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use super::{LinearSystem, Relation};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
    strict: bool,
}

impl Row {
    /// Scales so the first nonzero coefficient has magnitude one.
    fn normalized(mut self) -> Row {
        if let Some(lead) = self.coeffs.iter().find(|a| !a.is_zero()).map(|a| a.abs()) {
            for a in self.coeffs.iter_mut() {
                *a /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }
}

/// True iff the system has a real solution.
pub fn is_feasible(system: &LinearSystem) -> bool {
    let n = system.num_vars();
    let mut rows: Vec<Row> = Vec::new();
    for c in system.constraints() {
        let row = Row { coeffs: c.coeffs.clone(), rhs: c.rhs.clone(), strict: c.rel == Relation::Gt };
        if c.rel == Relation::Eq {
            rows.push(Row {
                coeffs: c.coeffs.iter().map(|a| -a).collect(),
                rhs: -&c.rhs,
                strict: false,
            });
        }
        rows.push(row);
    }
    for (j, &nn) in system.nonneg_flags().iter().enumerate() {
        if nn {
            let mut coeffs = vec![Rational::zero(); n];
            coeffs[j] = Rational::from_integer(1.into());
            rows.push(Row { coeffs, rhs: Rational::zero(), strict: false });
        }
    }

    for var in 0..n {
        let mut keep = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for r in rows {
            let a = &r.coeffs[var];
            if a.is_positive() {
                pos.push(r);
            } else if a.is_negative() {
                neg.push(r);
            } else {
                keep.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                // p/|p_var| + q/|q_var| cancels the variable
                let sp = &p.coeffs[var];
                let sq = -&q.coeffs[var];
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(a, b)| a / sp + b / &sq)
                    .collect();
                keep.push(Row {
                    coeffs,
                    rhs: &p.rhs / sp + &q.rhs / &sq,
                    strict: p.strict || q.strict,
                });
            }
        }
        let mut seen = HashSet::new();
        rows = keep
            .into_iter()
            .map(Row::normalized)
            .filter(|r| seen.insert(r.clone()))
            .collect();
        for r in &rows {
            if r.coeffs.iter().all(Zero::is_zero) && !trivially_true(r) {
                return false;
            }
        }
    }
    rows.iter().all(trivially_true)
}

/// `0 ≥ b` or `0 > b`.
fn trivially_true(r: &Row) -> bool {
    if r.strict {
        r.rhs.is_negative()
    } else {
        !r.rhs.is_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn elimination_examples() {
        let mut s = LinearSystem::new(2);
        s.add(vec![int(1), int(1)], Relation::Eq, int(1)).unwrap();
        s.add(vec![int(1), int(-1)], Relation::Gt, int(0)).unwrap();
        s.set_nonneg(0, true);
        s.set_nonneg(1, true);
        assert!(is_feasible(&s));
        s.add(vec![int(-1), int(0)], Relation::Ge, int(0)).unwrap();
        assert!(!is_feasible(&s));

        let mut t = LinearSystem::new(1);
        t.add(vec![int(1)], Relation::Ge, int(0)).unwrap();
        t.add(vec![int(-1)], Relation::Gt, int(0)).unwrap();
        assert!(!is_feasible(&t));
        let mut u = LinearSystem::new(1);
        u.add(vec![int(0)], Relation::Gt, int(0)).unwrap();
        assert!(!is_feasible(&u));
    }
}
