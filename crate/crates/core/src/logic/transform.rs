//! Equivalence-preserving rewrites between and within the languages.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;

use super::{ExpFormula, ExpIneq, Ineq, LikelihoodFormula};
use crate::atoms::{realize_gamble, AtomSpace, PropFormula, SyntacticGamble};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Replaces every likelihood term `L(φ)` by `E(φ)`.
pub fn translate_likelihood(f: &LikelihoodFormula) -> ExpFormula {
    f.map_atoms(&mut |a: &Ineq<PropFormula>| a.map_terms(|(c, p)| (c.clone(), SyntacticGamble::formula(p.clone()))))
}

/// The ineq's terms, or `0*E(true)` when none remain.
fn nonempty(terms: Vec<(Rational, SyntacticGamble)>) -> Vec<(Rational, SyntacticGamble)> {
    if terms.is_empty() {
        vec![(Rational::zero(), SyntacticGamble::formula(PropFormula::True))]
    } else {
        terms
    }
}

/// Distributes every `a·E(c₁φ₁ + … + c_kφ_k)` into `Σ a·cᵢ·E(φᵢ)`. Sound
/// over probability structures only (expectation is linear there).
pub fn transform_t1(f: &ExpFormula) -> ExpFormula {
    f.map_atoms(&mut |a: &ExpIneq| {
        let terms = a
            .terms
            .iter()
            .flat_map(|(c, g)| g.terms.iter().map(move |(b, p)| (c * b, SyntacticGamble::formula(p.clone()))))
            .collect();
        Ineq::new(nonempty(terms), a.rel, a.rhs.clone())
    })
}

/// Rewrites every `E(γ)` into its staircase `d₀ + Σ_j (d_j − d_{j−1})·E(ψ_j)`
/// over the atoms of `props`, where `d₀ < … < d_m` are the distinct values
/// of `γ` on the atoms and `ψ_j` is the disjunction of the atoms where `γ`
/// is at least `d_j`. The constant `d₀` moves to the right-hand side.
/// Sound over probability, belief and possibility structures.
pub fn transform_t2(f: &ExpFormula, props: &[String]) -> Result<ExpFormula> {
    let space = Arc::new(AtomSpace::full(props.iter().cloned())?);
    f.try_map_atoms(&mut |a: &ExpIneq| {
        let mut terms = Vec::new();
        let mut rhs = a.rhs.clone();
        for (c, g) in &a.terms {
            let x = realize_gamble(g, &space)?;
            let levels = x.distinct_values();
            rhs -= c * &levels[0];
            for w in levels.windows(2) {
                let above = x.above(&w[0]);
                let psi = PropFormula::or_all(above.iter().map(|j| space.world_formula(j)))
                    .expect("levels above the minimum are attained");
                terms.push((c * (&w[1] - &w[0]), SyntacticGamble::formula(psi)));
            }
        }
        Ok(Ineq::new(nonempty(terms), a.rel, rhs))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeetJoin {
    /// Pointwise maximum, `γ₁ ∨ γ₂`.
    Join,
    /// Pointwise minimum, `γ₁ ∧ γ₂`.
    Meet,
}

/// A syntactic gamble whose realization is the pointwise max (join) or min
/// (meet) of the two realizations on every space: `Σ_A max(b_A, b'_A)·ρ_A`
/// over the atoms `ρ_A` of the propositions of both gambles.
pub fn syntactic_meet_join(g1: &SyntacticGamble, g2: &SyntacticGamble, mode: MeetJoin) -> Result<SyntacticGamble> {
    let mut props = BTreeSet::new();
    g1.collect_props(&mut props);
    g2.collect_props(&mut props);
    let space = Arc::new(AtomSpace::full(props).map_err(|e| match e {
        Error::InvalidSpace(m) => Error::InvalidSpace(format!("meet/join needs the atoms of every proposition: {m}")),
        other => other,
    })?);
    let x = realize_gamble(g1, &space)?;
    let y = realize_gamble(g2, &space)?;
    let mut terms = Vec::new();
    for j in 0..space.len() {
        let (a, b) = (x.value(j), y.value(j));
        let v = match mode {
            MeetJoin::Join => a.max(b),
            MeetJoin::Meet => a.min(b),
        };
        if !v.is_zero() {
            terms.push((v.clone(), space.world_formula(j)));
        }
    }
    Ok(SyntacticGamble::new(terms))
}
