//! Probability measures, credal sets, mass functions (with their belief and
//! plausibility views) and possibility measures.
//!
//! Belief functions are represented only through their mass functions: a
//! set function on a finite space is a belief function exactly when its
//! Möbius transform is nonnegative, so B3 is checked in mass coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::atoms::{AtomSpace, WorldSet};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest space on which a full set function (`2^n` values) is accepted.
pub const MAX_SET_FUNCTION_WORLDS: usize = 20;

/// A monotone set function that can be integrated against (Choquet).
pub trait Capacity {
    fn space(&self) -> &Arc<AtomSpace>;
    fn measure(&self, u: WorldSet) -> Rational;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Length,
    Nonnegative,
    SumToOne,
    NonemptyCredal,
    MassOnEmpty,
    PositiveMass,
    ForeignSet,
    B1,
    B2,
    B3,
    PossRange,
    Poss2,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Length => "length",
            Axiom::Nonnegative => "nonnegativity",
            Axiom::SumToOne => "sum ≠ 1",
            Axiom::NonemptyCredal => "nonempty credal set",
            Axiom::MassOnEmpty => "m(∅) = 0",
            Axiom::PositiveMass => "positive masses",
            Axiom::ForeignSet => "sets within the space",
            Axiom::B1 => "B1: Bel(∅) = 0",
            Axiom::B2 => "B2: Bel(W) = 1",
            Axiom::B3 => "B3",
            Axiom::PossRange => "possibility values in [0,1]",
            Axiom::Poss2 => "Poss2: Poss(W) = 1",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// Sets (or single worlds) witnessing the failure.
    pub witnesses: Vec<WorldSet>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.detail)
    }
}

fn violation(axiom: Axiom, witnesses: Vec<WorldSet>, detail: impl Into<String>) -> Violation {
    Violation { axiom, witnesses, detail: detail.into() }
}

/// Unvalidated model data, as read from a document or built by hand.
#[derive(Clone, Debug, PartialEq)]
pub enum RawModel {
    Probability(Vec<Rational>),
    Credal(Vec<Vec<Rational>>),
    Mass(Vec<(WorldSet, Rational)>),
    Possibility(Vec<Rational>),
    /// Candidate belief function, indexed by world-set bitmask (`2^n` values).
    SetFunction(Vec<Rational>),
}

/// Checks every invariant of the representation; returns all violations.
pub fn validate_model(space: &AtomSpace, raw: &RawModel) -> std::result::Result<(), Vec<Violation>> {
    let n = space.len();
    let mut out = Vec::new();
    match raw {
        RawModel::Probability(p) => check_probability(n, p, &mut out),
        RawModel::Credal(ms) => {
            if ms.is_empty() {
                out.push(violation(Axiom::NonemptyCredal, vec![], "no measures given"));
            }
            for (k, p) in ms.iter().enumerate() {
                let mut inner = Vec::new();
                check_probability(n, p, &mut inner);
                out.extend(inner.into_iter().map(|mut v| {
                    v.detail = format!("measure {}: {}", k + 1, v.detail);
                    v
                }));
            }
        }
        RawModel::Mass(entries) => {
            let all = space.all();
            let mut total = Rational::zero();
            let mut seen = BTreeMap::new();
            for (u, m) in entries {
                if u.is_empty() {
                    out.push(violation(Axiom::MassOnEmpty, vec![*u], format!("mass {m} on ∅")));
                }
                if !u.is_subset_of(all) {
                    out.push(violation(Axiom::ForeignSet, vec![*u], format!("{u} leaves the space")));
                }
                if !m.is_positive() {
                    out.push(violation(Axiom::PositiveMass, vec![*u], format!("mass {m} on {u}")));
                }
                if seen.insert(*u, ()).is_some() {
                    out.push(violation(Axiom::Length, vec![*u], format!("{u} listed twice")));
                }
                total += m;
            }
            if !total.is_one() {
                out.push(violation(Axiom::SumToOne, vec![], format!("masses sum to {total}")));
            }
        }
        RawModel::Possibility(v) => {
            if v.len() != n {
                out.push(violation(Axiom::Length, vec![], format!("{} values for {n} worlds", v.len())));
            } else {
                for (w, x) in v.iter().enumerate() {
                    if x.is_negative() || *x > Rational::one() {
                        out.push(violation(
                            Axiom::PossRange,
                            vec![WorldSet::singleton(w)],
                            format!("world {} has possibility {x}", w + 1),
                        ));
                    }
                }
                if !v.iter().max().is_some_and(|m| m.is_one()) {
                    out.push(violation(Axiom::Poss2, vec![WorldSet::full(n)], "largest value is not 1"));
                }
            }
        }
        RawModel::SetFunction(v) => {
            if n > MAX_SET_FUNCTION_WORLDS || v.len() != 1usize << n {
                out.push(violation(
                    Axiom::Length,
                    vec![],
                    format!("expected a value for each of the 2^{n} subsets, got {}", v.len()),
                ));
            } else {
                if !v[0].is_zero() {
                    out.push(violation(Axiom::B1, vec![WorldSet::EMPTY], format!("value {} on ∅", v[0])));
                }
                let top = (1usize << n) - 1;
                if !v[top].is_one() {
                    out.push(violation(Axiom::B2, vec![WorldSet::full(n)], format!("value {} on W", v[top])));
                }
                for (mask, m) in mobius(v).into_iter().enumerate() {
                    if m.is_negative() {
                        let u = WorldSet::from_bits(mask as u64);
                        out.push(violation(Axiom::B3, vec![u], format!("Möbius mass of {u} is {m}")));
                    }
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn check_probability(n: usize, p: &[Rational], out: &mut Vec<Violation>) {
    if p.len() != n {
        out.push(violation(Axiom::Length, vec![], format!("{} values for {n} worlds", p.len())));
        return;
    }
    for (w, x) in p.iter().enumerate() {
        if x.is_negative() {
            out.push(violation(
                Axiom::Nonnegative,
                vec![WorldSet::singleton(w)],
                format!("world {} has probability {x}", w + 1),
            ));
        }
    }
    let total: Rational = p.iter().sum();
    if !total.is_one() {
        out.push(violation(Axiom::SumToOne, vec![], format!("probabilities sum to {total}")));
    }
}

/// Möbius transform over the subset lattice: `m(U) = Σ_{V⊆U} (-1)^{|U∖V|} v(V)`.
fn mobius(v: &[Rational]) -> Vec<Rational> {
    let mut m = v.to_vec();
    let n = v.len().trailing_zeros();
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..m.len() {
            if mask & bit != 0 {
                let lower = m[mask ^ bit].clone();
                m[mask] -= lower;
            }
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityMeasure {
    space: Arc<AtomSpace>,
    probs: Vec<Rational>,
}

impl ProbabilityMeasure {
    pub fn new(space: &Arc<AtomSpace>, probs: Vec<Rational>) -> Result<Self> {
        let raw = RawModel::Probability(probs);
        validate_model(space, &raw).map_err(Error::InvalidModel)?;
        let RawModel::Probability(probs) = raw else { unreachable!() };
        Ok(ProbabilityMeasure { space: space.clone(), probs })
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, u: WorldSet) -> Rational {
        u.iter().map(|w| &self.probs[w]).sum()
    }

    pub fn support(&self) -> WorldSet {
        WorldSet::from_indices((0..self.probs.len()).filter(|&w| !self.probs[w].is_zero()))
    }
}

impl Capacity for ProbabilityMeasure {
    fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    fn measure(&self, u: WorldSet) -> Rational {
        self.prob(u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CredalSet {
    space: Arc<AtomSpace>,
    measures: Vec<ProbabilityMeasure>,
}

impl CredalSet {
    pub fn new(space: &Arc<AtomSpace>, measures: Vec<ProbabilityMeasure>) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::InvalidModel(vec![violation(
                Axiom::NonemptyCredal,
                vec![],
                "no measures given",
            )]));
        }
        if measures.iter().any(|m| !crate::atoms::same_space(&m.space, space)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(CredalSet { space: space.clone(), measures })
    }

    pub fn from_rows(space: &Arc<AtomSpace>, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let raw = RawModel::Credal(rows);
        validate_model(space, &raw).map_err(Error::InvalidModel)?;
        let RawModel::Credal(rows) = raw else { unreachable!() };
        let measures = rows
            .into_iter()
            .map(|probs| ProbabilityMeasure { space: space.clone(), probs })
            .collect();
        Ok(CredalSet { space: space.clone(), measures })
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn measures(&self) -> &[ProbabilityMeasure] {
        &self.measures
    }
}

/// Lower and upper probability of `u`: min and max over the finite set.
pub fn event_bounds(set: &CredalSet, u: WorldSet) -> (Rational, Rational) {
    let vals: Vec<Rational> = set.measures.iter().map(|m| m.prob(u)).collect();
    let lo = vals.iter().min().cloned().expect("credal sets are nonempty");
    let hi = vals.iter().max().cloned().expect("credal sets are nonempty");
    (lo, hi)
}

/// Lower probability, as a [`Capacity`].
pub struct LowerProbability<'a>(pub &'a CredalSet);

impl Capacity for LowerProbability<'_> {
    fn space(&self) -> &Arc<AtomSpace> {
        &self.0.space
    }

    fn measure(&self, u: WorldSet) -> Rational {
        event_bounds(self.0, u).0
    }
}

/// Nonnegative weights on nonempty sets of worlds, summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassFunction {
    space: Arc<AtomSpace>,
    masses: BTreeMap<WorldSet, Rational>,
}

impl MassFunction {
    /// Builds a mass function; zero-mass entries are dropped before validation.
    pub fn new(space: &Arc<AtomSpace>, entries: Vec<(WorldSet, Rational)>) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        validate_model(space, &RawModel::Mass(entries.clone())).map_err(Error::InvalidModel)?;
        Ok(MassFunction { space: space.clone(), masses: entries.into_iter().collect() })
    }

    /// The vacuous mass function `m(W) = 1`.
    pub fn vacuous(space: &Arc<AtomSpace>) -> Self {
        MassFunction {
            space: space.clone(),
            masses: BTreeMap::from([(space.all(), Rational::one())]),
        }
    }

    /// Singleton masses equal to `mu`.
    pub fn from_probability(mu: &ProbabilityMeasure) -> Self {
        let masses = mu
            .probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(w, p)| (WorldSet::singleton(w), p.clone()))
            .collect();
        MassFunction { space: mu.space.clone(), masses }
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    /// Focal sets with their (positive) masses, ordered by bitmask.
    pub fn masses(&self) -> &BTreeMap<WorldSet, Rational> {
        &self.masses
    }

    pub fn belief(&self) -> Belief<'_> {
        Belief(self)
    }

    pub fn plausibility(&self) -> Plausibility<'_> {
        Plausibility(self)
    }

    /// Focal sets can be linearly ordered by inclusion.
    pub fn is_consonant(&self) -> bool {
        let sets: Vec<WorldSet> = self.masses.keys().copied().collect();
        sets.iter()
            .all(|a| sets.iter().all(|b| a.is_subset_of(*b) || b.is_subset_of(*a)))
    }

    /// The belief function as a full set function (bitmask-indexed).
    pub fn to_set_function(&self) -> Result<SetFunction> {
        let n = self.space.len();
        if n > MAX_SET_FUNCTION_WORLDS {
            return Err(Error::TooManyWorlds(n));
        }
        let values = (0..1u64 << n)
            .map(|mask| belief_value(self, WorldSet::from_bits(mask)))
            .collect();
        Ok(SetFunction { space: self.space.clone(), values })
    }
}

/// `Bel(U) = Σ_{V⊆U} m(V)`.
pub fn belief_value(m: &MassFunction, u: WorldSet) -> Rational {
    m.masses.iter().filter(|(v, _)| v.is_subset_of(u)).map(|(_, x)| x).sum()
}

/// `Plaus(U) = 1 − Bel(U̅) = Σ_{V∩U≠∅} m(V)`.
pub fn plausibility_value(m: &MassFunction, u: WorldSet) -> Rational {
    m.masses
        .iter()
        .filter(|(v, _)| !v.intersection(u).is_empty())
        .map(|(_, x)| x)
        .sum()
}

pub struct Belief<'a>(pub &'a MassFunction);
pub struct Plausibility<'a>(pub &'a MassFunction);

impl Capacity for Belief<'_> {
    fn space(&self) -> &Arc<AtomSpace> {
        &self.0.space
    }

    fn measure(&self, u: WorldSet) -> Rational {
        belief_value(self.0, u)
    }
}

impl Capacity for Plausibility<'_> {
    fn space(&self) -> &Arc<AtomSpace> {
        &self.0.space
    }

    fn measure(&self, u: WorldSet) -> Rational {
        plausibility_value(self.0, u)
    }
}

/// A set function given on every subset, indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    space: Arc<AtomSpace>,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn new(space: &Arc<AtomSpace>, values: Vec<Rational>) -> Result<Self> {
        let n = space.len();
        if n > MAX_SET_FUNCTION_WORLDS {
            return Err(Error::TooManyWorlds(n));
        }
        if values.len() != 1usize << n {
            return Err(Error::LengthMismatch { expected: 1usize << n, found: values.len() });
        }
        Ok(SetFunction { space: space.clone(), values })
    }

    /// Tabulates `f` on every subset of the space.
    pub fn tabulate(space: &Arc<AtomSpace>, f: impl Fn(WorldSet) -> Rational) -> Result<Self> {
        let n = space.len();
        if n > MAX_SET_FUNCTION_WORLDS {
            return Err(Error::TooManyWorlds(n));
        }
        let values = (0..1u64 << n).map(|m| f(WorldSet::from_bits(m))).collect();
        Ok(SetFunction { space: space.clone(), values })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, u: WorldSet) -> &Rational {
        &self.values[u.bits() as usize]
    }
}

impl Capacity for SetFunction {
    fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    fn measure(&self, u: WorldSet) -> Rational {
        self.value(u).clone()
    }
}

/// Möbius inversion of a normalized set function. Fails with the first
/// subset (in bitmask order) whose mass is negative.
pub fn mass_from_belief(v: &SetFunction) -> Result<MassFunction> {
    let n = v.space.len();
    if !v.values[0].is_zero() || !v.values[(1usize << n) - 1].is_one() {
        return Err(Error::NotNormalized);
    }
    let m = mobius(&v.values);
    if let Some((mask, mass)) = m.iter().enumerate().find(|(_, x)| x.is_negative()) {
        return Err(Error::NegativeMass { set: WorldSet::from_bits(mask as u64), mass: mass.clone() });
    }
    let masses = m
        .into_iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(mask, x)| (WorldSet::from_bits(mask as u64), x))
        .collect();
    Ok(MassFunction { space: v.space.clone(), masses })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PossibilityMeasure {
    space: Arc<AtomSpace>,
    values: Vec<Rational>,
}

impl PossibilityMeasure {
    pub fn new(space: &Arc<AtomSpace>, values: Vec<Rational>) -> Result<Self> {
        let raw = RawModel::Possibility(values);
        validate_model(space, &raw).map_err(Error::InvalidModel)?;
        let RawModel::Possibility(values) = raw else { unreachable!() };
        Ok(PossibilityMeasure { space: space.clone(), values })
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// The consonant mass function whose plausibility is this measure:
    /// focal sets are the upper level sets `{w : Poss(w) ≥ t}` for each
    /// distinct positive value `t`, weighted by the gap to the next value.
    pub fn consonant_mass(&self) -> MassFunction {
        let mut levels: Vec<&Rational> = self.values.iter().filter(|v| v.is_positive()).collect();
        levels.sort();
        levels.dedup();
        levels.reverse();
        let mut masses = BTreeMap::new();
        for (k, t) in levels.iter().enumerate() {
            let next = levels.get(k + 1).map(|x| (*x).clone()).unwrap_or_else(Rational::zero);
            let set = WorldSet::from_indices((0..self.values.len()).filter(|&w| &self.values[w] >= *t));
            masses.insert(set, (*t).clone() - next);
        }
        MassFunction { space: self.space.clone(), masses }
    }
}

/// `Poss(U) = max_{w∈U} Poss(w)`, and `0` on the empty set.
pub fn poss_value(poss: &PossibilityMeasure, u: WorldSet) -> Rational {
    u.iter().map(|w| &poss.values[w]).max().cloned().unwrap_or_else(Rational::zero)
}

impl Capacity for PossibilityMeasure {
    fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    fn measure(&self, u: WorldSet) -> Rational {
        poss_value(self, u)
    }
}

/// A validated uncertainty model over some space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UncertaintyModel {
    Probability(ProbabilityMeasure),
    Credal(CredalSet),
    Belief(MassFunction),
    Possibility(PossibilityMeasure),
}

impl UncertaintyModel {
    pub fn space(&self) -> &Arc<AtomSpace> {
        match self {
            UncertaintyModel::Probability(m) => &m.space,
            UncertaintyModel::Credal(c) => &c.space,
            UncertaintyModel::Belief(m) => &m.space,
            UncertaintyModel::Possibility(p) => &p.space,
        }
    }

    /// The raw data this model was built from.
    pub fn to_raw(&self) -> RawModel {
        match self {
            UncertaintyModel::Probability(m) => RawModel::Probability(m.probs.clone()),
            UncertaintyModel::Credal(c) => {
                RawModel::Credal(c.measures.iter().map(|m| m.probs.clone()).collect())
            }
            UncertaintyModel::Belief(m) => {
                RawModel::Mass(m.masses.iter().map(|(u, x)| (*u, x.clone())).collect())
            }
            UncertaintyModel::Possibility(p) => RawModel::Possibility(p.values.clone()),
        }
    }

    /// Builds a model from raw data, reporting every violation.
    pub fn from_raw(space: &Arc<AtomSpace>, raw: RawModel) -> Result<Self> {
        Ok(match raw {
            RawModel::Probability(p) => UncertaintyModel::Probability(ProbabilityMeasure::new(space, p)?),
            RawModel::Credal(rows) => UncertaintyModel::Credal(CredalSet::from_rows(space, rows)?),
            RawModel::Mass(entries) => UncertaintyModel::Belief(MassFunction::new(space, entries)?),
            RawModel::Possibility(v) => UncertaintyModel::Possibility(PossibilityMeasure::new(space, v)?),
            RawModel::SetFunction(v) => {
                validate_model(space, &RawModel::SetFunction(v.clone())).map_err(Error::InvalidModel)?;
                UncertaintyModel::Belief(mass_from_belief(&SetFunction::new(space, v)?)?)
            }
        })
    }
}
