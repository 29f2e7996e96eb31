//! Exact rational feasibility and optimization for systems of weak and
//! strict linear constraints.
//!
//! Every constraint is written `a·x REL b` with `REL ∈ {≥, >, =}`; variables
//! are free unless flagged nonnegative. [`solve`] returns either a witness
//! that satisfies every row exactly or a [`Certificate`] of infeasibility
//! that [`check_certificate`] can verify without trusting the solver.
//!
//! Strict rows share one slack `δ`: each `a·x > b` becomes `a·x ≥ b + δ`
//! and `δ` is maximized (capped at 1); the system is feasible iff the
//! maximum is positive.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub mod fourier_motzkin;
mod simplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge,
    Gt,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let l = self.lhs(x);
        match self.rel {
            Relation::Ge => l >= self.rhs,
            Relation::Gt => l > self.rhs,
            Relation::Eq => l == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    num_vars: usize,
    constraints: Vec<Constraint>,
    nonneg: Vec<bool>,
}

impl LinearSystem {
    /// An empty system over `num_vars` free variables.
    pub fn new(num_vars: usize) -> Self {
        LinearSystem { num_vars, constraints: Vec::new(), nonneg: vec![false; num_vars] }
    }

    /// An empty system over `num_vars` nonnegative variables.
    pub fn nonnegative(num_vars: usize) -> Self {
        LinearSystem { num_vars, constraints: Vec::new(), nonneg: vec![true; num_vars] }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn nonneg_flags(&self) -> &[bool] {
        &self.nonneg
    }

    pub fn set_nonneg(&mut self, var: usize, flag: bool) {
        self.nonneg[var] = flag;
    }

    pub fn push(&mut self, c: Constraint) -> Result<()> {
        if c.coeffs.len() != self.num_vars {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients for {} variables",
                c.coeffs.len(),
                self.num_vars
            )));
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Convenience for `push(Constraint::new(..))`.
    pub fn add(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Result<()> {
        self.push(Constraint::new(coeffs, rel, rhs))
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.rel == Relation::Gt)
    }

    /// Every row holds and every flagged variable is nonnegative.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().zip(&self.nonneg).all(|(v, &nn)| !nn || !v.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    /// One constraint per line as `c1 c2 ... cn REL rhs`, preceded by a
    /// `#` header naming the nonnegative variables.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nn: Vec<String> = (0..self.num_vars)
            .filter(|&j| self.nonneg[j])
            .map(|j| format!("x{}", j + 1))
            .collect();
        writeln!(f, "# vars {} nonneg [{}]", self.num_vars, nn.join(" "))?;
        for c in &self.constraints {
            for a in &c.coeffs {
                write!(f, "{a} ")?;
            }
            writeln!(f, "{} {}", c.rel, c.rhs)?;
        }
        Ok(())
    }
}

/// Nonnegative combination of the rows of an infeasible system that
/// produces a contradiction (Farkas for weak rows, Motzkin when a strict
/// row carries positive weight).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// One multiplier per constraint; equality rows may be negative.
    pub multipliers: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// `σ·b > 0`.
    Farkas,
    /// `σ·b ≥ 0` with positive weight on a strict row.
    Motzkin,
}

impl Certificate {
    pub fn kind(&self, system: &LinearSystem) -> Option<CertificateKind> {
        classify(system, self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Feasible(Vec<Rational>),
    Infeasible(Certificate),
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Solution::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Solution::Feasible(x) => Some(x),
            Solution::Infeasible(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Optimal { value: Rational, witness: Vec<Rational> },
    Unbounded,
    Infeasible(Certificate),
}

/// Decides feasibility. Weak-only systems yield a basic solution, so at most
/// as many entries are nonzero as there are constraints.
pub fn solve(system: &LinearSystem) -> Solution {
    match find_feasible(system) {
        Some(x) => Solution::Feasible(x),
        None => Solution::Infeasible(certificate_for(system)),
    }
}

/// Feasibility alone: a witness, or `None` without building a certificate.
pub fn find_feasible(system: &LinearSystem) -> Option<Vec<Rational>> {
    if !system.has_strict() {
        return simplex::feasible_point(system);
    }
    let (relaxed, delta) = strict_relaxation(system, true);
    let mut objective = vec![Rational::zero(); relaxed.num_vars];
    objective[delta] = Rational::one();
    match simplex::optimize(&relaxed, &objective, Direction::Max) {
        simplex::Outcome::Optimal { value, mut witness } if value.is_positive() => {
            witness.truncate(system.num_vars);
            Some(witness)
        }
        _ => None,
    }
}

/// The weak system with shared slack `δ` (last variable, nonnegative).
/// With `capped`, also `δ ≤ 1`. Returns the system and the slack's index.
pub fn strict_relaxation(system: &LinearSystem, capped: bool) -> (LinearSystem, usize) {
    let n = system.num_vars;
    let mut out = LinearSystem::new(n + 1);
    out.nonneg[..n].copy_from_slice(&system.nonneg);
    out.nonneg[n] = true;
    for c in &system.constraints {
        let mut coeffs = c.coeffs.clone();
        let (slack, rel) = match c.rel {
            Relation::Gt => (-Rational::one(), Relation::Ge),
            other => (Rational::zero(), other),
        };
        coeffs.push(slack);
        out.constraints.push(Constraint::new(coeffs, rel, c.rhs.clone()));
    }
    if capped {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = -Rational::one();
        out.constraints.push(Constraint::new(coeffs, Relation::Ge, -Rational::one()));
    }
    (out, n)
}

/// Exact optimum of a weak system.
pub fn optimize(system: &LinearSystem, objective: &[Rational], direction: Direction) -> Result<Optimum> {
    if system.has_strict() {
        return Err(Error::StrictInOptimize);
    }
    if objective.len() != system.num_vars {
        return Err(Error::Dimension(format!(
            "objective has {} entries for {} variables",
            objective.len(),
            system.num_vars
        )));
    }
    Ok(match simplex::optimize(system, objective, direction) {
        simplex::Outcome::Optimal { value, witness } => Optimum::Optimal { value, witness },
        simplex::Outcome::Unbounded => Optimum::Unbounded,
        simplex::Outcome::Infeasible => Optimum::Infeasible(certificate_for(system)),
    })
}

/// Checks the certificate conditions exactly:
/// multipliers are nonnegative on `≥`/`>` rows; the combined row `σA` is
/// zero on free variables and nonpositive on nonnegative ones; and either
/// `σ·b > 0`, or `σ·b ≥ 0` with positive weight on some strict row.
pub fn check_certificate(system: &LinearSystem, cert: &Certificate) -> Result<bool> {
    if cert.multipliers.len() != system.constraints.len() {
        return Err(Error::Dimension(format!(
            "certificate has {} multipliers for {} constraints",
            cert.multipliers.len(),
            system.constraints.len()
        )));
    }
    Ok(classify(system, cert).is_some())
}

fn classify(system: &LinearSystem, cert: &Certificate) -> Option<CertificateKind> {
    if cert.multipliers.len() != system.constraints.len() {
        return None;
    }
    for (s, c) in cert.multipliers.iter().zip(&system.constraints) {
        if c.rel != Relation::Eq && s.is_negative() {
            return None;
        }
    }
    for j in 0..system.num_vars {
        let col: Rational = cert
            .multipliers
            .iter()
            .zip(&system.constraints)
            .map(|(s, c)| s * &c.coeffs[j])
            .sum();
        let ok = if system.nonneg[j] { !col.is_positive() } else { col.is_zero() };
        if !ok {
            return None;
        }
    }
    let sb: Rational = cert
        .multipliers
        .iter()
        .zip(&system.constraints)
        .map(|(s, c)| s * &c.rhs)
        .sum();
    if sb.is_positive() {
        return Some(CertificateKind::Farkas);
    }
    let strict_weight = cert
        .multipliers
        .iter()
        .zip(&system.constraints)
        .any(|(s, c)| c.rel == Relation::Gt && s.is_positive());
    if !sb.is_negative() && strict_weight {
        Some(CertificateKind::Motzkin)
    } else {
        None
    }
}

/// Searches the alternative system for multipliers: first a Farkas
/// certificate (`σ·b = 1`), then, if strict rows exist, a Motzkin one
/// (`σ·b ≥ 0`, strict weights summing to 1). Only called on systems known
/// to be infeasible, where one of the two exists.
fn certificate_for(system: &LinearSystem) -> Certificate {
    let m = system.constraints.len();
    let mut alt = LinearSystem::new(m);
    for (i, c) in system.constraints.iter().enumerate() {
        alt.nonneg[i] = c.rel != Relation::Eq;
    }
    for j in 0..system.num_vars {
        let coeffs: Vec<Rational> = system.constraints.iter().map(|c| c.coeffs[j].clone()).collect();
        if system.nonneg[j] {
            // σA_j ≤ 0
            let neg = coeffs.into_iter().map(|a| -a).collect();
            alt.constraints.push(Constraint::new(neg, Relation::Ge, Rational::zero()));
        } else {
            alt.constraints.push(Constraint::new(coeffs, Relation::Eq, Rational::zero()));
        }
    }
    let rhs: Vec<Rational> = system.constraints.iter().map(|c| c.rhs.clone()).collect();

    let mut farkas = alt.clone();
    farkas.constraints.push(Constraint::new(rhs.clone(), Relation::Eq, Rational::one()));
    if let Some(s) = simplex::feasible_point(&farkas) {
        return Certificate { multipliers: s };
    }
    let mut motzkin = alt;
    motzkin.constraints.push(Constraint::new(rhs, Relation::Ge, Rational::zero()));
    let strict: Vec<Rational> = system
        .constraints
        .iter()
        .map(|c| if c.rel == Relation::Gt { Rational::one() } else { Rational::zero() })
        .collect();
    motzkin.constraints.push(Constraint::new(strict, Relation::Eq, Rational::one()));
    let multipliers = simplex::feasible_point(&motzkin).unwrap_or_else(|| vec![Rational::zero(); m]);
    Certificate { multipliers }
}
