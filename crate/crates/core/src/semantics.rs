//! Truth of formulas in finite structures.
//!
//! An expectation term `E(γ)` denotes the expectation that matches the
//! structure's representation of uncertainty: `E_μ` for a probability
//! measure, the lower expectation `E̲_𝒫` for a credal set, `E_Bel` for a
//! belief function and `E_Poss` for a possibility measure. A likelihood
//! term `L(φ)` likewise denotes `μ`, `𝒫_*`, `Bel` or `Poss` of `[[φ]]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::atoms::{extension, realize_gamble, AtomSpace, Gamble, WorldSet};
use crate::error::{Error, Result};
use crate::expectation::{expect_bounds_credal, expect_poss, expect_prob, mass_expect, Bound};
use crate::logic::{ExpFormula, ExpIneq, FuncIneqFormula, GambleIneqFormula, Ineq, LikelihoodFormula};
use crate::measures::{belief_value, event_bounds, poss_value, UncertaintyModel};
use crate::rational::Rational;

/// The four classes of structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Prob,
    LowerProb,
    Belief,
    Possibility,
}

impl Semantics {
    pub const ALL: [Semantics; 4] = [Semantics::Prob, Semantics::LowerProb, Semantics::Belief, Semantics::Possibility];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Prob => "prob",
            Semantics::LowerProb => "lowerprob",
            Semantics::Belief => "belief",
            Semantics::Possibility => "possibility",
        }
    }

    /// The class a model belongs to.
    pub fn of(model: &UncertaintyModel) -> Semantics {
        match model {
            UncertaintyModel::Probability(_) => Semantics::Prob,
            UncertaintyModel::Credal(_) => Semantics::LowerProb,
            UncertaintyModel::Belief(_) => Semantics::Belief,
            UncertaintyModel::Possibility(_) => Semantics::Possibility,
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Semantics::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Document(format!("unknown semantics `{s}` (expected prob, lowerprob, belief or possibility)")))
    }
}

/// The expectation a model assigns to a gamble.
pub fn expectation(model: &UncertaintyModel, x: &Gamble) -> Result<Rational> {
    match model {
        UncertaintyModel::Probability(mu) => expect_prob(mu, x),
        UncertaintyModel::Credal(set) => Ok(expect_bounds_credal(set, x)?.0),
        UncertaintyModel::Belief(m) => mass_expect(m, x, Bound::Min),
        UncertaintyModel::Possibility(p) => expect_poss(p, x),
    }
}

/// The likelihood a model assigns to an event.
pub fn likelihood(model: &UncertaintyModel, u: WorldSet) -> Rational {
    match model {
        UncertaintyModel::Probability(mu) => mu.prob(u),
        UncertaintyModel::Credal(set) => event_bounds(set, u).0,
        UncertaintyModel::Belief(m) => belief_value(m, u),
        UncertaintyModel::Possibility(p) => poss_value(p, u),
    }
}

/// Value of the left-hand side of an expectation inequality.
pub fn exp_lhs(model: &UncertaintyModel, a: &ExpIneq) -> Result<Rational> {
    let mut total = Rational::from_integer(0.into());
    for (c, g) in &a.terms {
        total += c * expectation(model, &realize_gamble(g, model.space())?)?;
    }
    Ok(total)
}

pub fn satisfies_exp(model: &UncertaintyModel, f: &ExpFormula) -> Result<bool> {
    f.eval(&mut |a| Ok(a.rel.holds(&exp_lhs(model, a)?, &a.rhs)))
}

pub fn satisfies_likelihood(model: &UncertaintyModel, f: &LikelihoodFormula) -> Result<bool> {
    f.eval(&mut |a| {
        let mut total = Rational::from_integer(0.into());
        for (c, phi) in &a.terms {
            total += c * likelihood(model, extension(phi, model.space())?);
        }
        Ok(a.rel.holds(&total, &a.rhs))
    })
}

/// Truth of a gamble formula in the structure whose worlds are those of
/// `space`: `γ ≥ c̃` holds iff `γ(w) ≥ c` at every world.
pub fn satisfies_gamble(space: &Arc<AtomSpace>, f: &GambleIneqFormula) -> Result<bool> {
    f.eval(&mut |a| {
        let x = realize_gamble(&a.gamble(), space)?;
        Ok(a.rel.holds_pointwise(x.values(), &a.rhs))
    })
}

/// An assignment of functions on the domain `{d₁, …, d_n}` to variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncAssignment {
    pub domain_size: usize,
    pub values: BTreeMap<String, Vec<Rational>>,
}

impl FuncAssignment {
    fn lhs(&self, a: &Ineq<crate::logic::FuncVar>) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::from_integer(0.into()); self.domain_size];
        for (c, v) in &a.terms {
            let f = self.values.get(&v.0).ok_or_else(|| Error::UnknownProposition(v.0.clone()))?;
            if f.len() != self.domain_size {
                return Err(Error::LengthMismatch { expected: self.domain_size, found: f.len() });
            }
            for (o, x) in out.iter_mut().zip(f) {
                *o += c * x;
            }
        }
        Ok(out)
    }
}

/// Truth of a function-inequality formula under an assignment, with `≥`
/// read pointwise.
pub fn satisfies_func(assign: &FuncAssignment, f: &FuncIneqFormula) -> Result<bool> {
    if assign.domain_size == 0 {
        return Err(Error::InvalidSpace("function domains must be nonempty".into()));
    }
    f.eval(&mut |a| Ok(a.rel.holds_pointwise(&assign.lhs(a)?, &a.rhs)))
}

/// Truth of a function-inequality formula with every variable read as a
/// real number (a one-point domain, where the order is total).
pub fn satisfies_func_as_reals(values: &BTreeMap<String, Rational>, f: &FuncIneqFormula) -> Result<bool> {
    let assign = FuncAssignment {
        domain_size: 1,
        values: values.iter().map(|(k, v)| (k.clone(), vec![v.clone()])).collect(),
    };
    f.eval(&mut |a| {
        let lhs = assign.lhs(a)?;
        Ok(a.rel.holds(&lhs[0], &a.rhs))
    })
}
