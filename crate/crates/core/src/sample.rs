//! Seeded random generators for models, gambles and formulas.
//!
//! All generators draw from a [`Sampler`] built from an explicit seed, so a
//! failing case can be replayed; [`seed_from_env`] lets `EXPECTA_SEED`
//! override a harness's default seed.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atoms::{AtomSpace, Gamble, PropFormula, SyntacticGamble, WorldSet};
use crate::logic::{ExpFormula, Formula, FuncIneqFormula, FuncVar, GambleIneq, GambleIneqFormula, Indicator, Ineq, LikelihoodFormula, Rel};
use crate::measures::{CredalSet, MassFunction, PossibilityMeasure, ProbabilityMeasure, UncertaintyModel};
use crate::rational::{int, rat, Rational};
use crate::semantics::Semantics;

pub const SEED_ENV: &str = "EXPECTA_SEED";

/// `EXPECTA_SEED` if set and numeric, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

const RELS: [Rel; 5] = [Rel::Ge, Rel::Gt, Rel::Le, Rel::Lt, Rel::Eq];

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A rational `k/d` with `d ∈ {1, 2, 3, 4}` and `|k/d| ≤ bound`.
    pub fn rational(&mut self, bound: i64) -> Rational {
        let d = self.int_in(1, 4);
        rat(self.int_in(-bound * d, bound * d), d)
    }

    /// The full atom space over `n` propositions `p0, p1, …`.
    pub fn atom_space(&mut self, n: usize) -> Arc<AtomSpace> {
        Arc::new(AtomSpace::full(prop_names(n)).expect("small spaces are valid"))
    }

    /// Nonnegative weights summing to one; sparse with some probability so
    /// that extreme points are visited too.
    pub fn weights(&mut self, n: usize) -> Vec<Rational> {
        let sparse = self.chance(0.4);
        let mut w: Vec<i64> = (0..n).map(|_| if sparse && self.chance(0.6) { 0 } else { self.int_in(0, 6) }).collect();
        if w.iter().all(|&x| x == 0) {
            let i = self.rng.gen_range(0..n);
            w[i] = 1;
        }
        let total: i64 = w.iter().sum();
        w.into_iter().map(|x| rat(x, total)).collect()
    }

    pub fn probability(&mut self, space: &Arc<AtomSpace>) -> ProbabilityMeasure {
        let w = self.weights(space.len());
        ProbabilityMeasure::new(space, w).expect("weights are a distribution")
    }

    pub fn credal(&mut self, space: &Arc<AtomSpace>, max_measures: usize) -> CredalSet {
        let k = self.rng.gen_range(1..=max_measures.max(1));
        let ms = (0..k).map(|_| self.probability(space)).collect();
        CredalSet::new(space, ms).expect("measures share the space")
    }

    pub fn mass(&mut self, space: &Arc<AtomSpace>, max_focal: usize) -> MassFunction {
        let n = space.len();
        let k = self.rng.gen_range(1..=max_focal.max(1));
        let weights = self.weights(k);
        let mut merged: BTreeMap<WorldSet, Rational> = BTreeMap::new();
        for w in weights {
            let mut set = WorldSet::EMPTY;
            while set.is_empty() {
                set = WorldSet::from_indices((0..n).filter(|_| self.chance(0.45)));
            }
            *merged.entry(set).or_insert_with(|| int(0)) += w;
        }
        MassFunction::new(space, merged.into_iter().collect()).expect("weights are a distribution")
    }

    pub fn possibility(&mut self, space: &Arc<AtomSpace>) -> PossibilityMeasure {
        let n = space.len();
        let mut values: Vec<Rational> = (0..n).map(|_| rat(self.int_in(0, 4), 4)).collect();
        let top = self.rng.gen_range(0..n);
        values[top] = int(1);
        PossibilityMeasure::new(space, values).expect("maximum is one")
    }

    pub fn model(&mut self, space: &Arc<AtomSpace>, semantics: Semantics) -> UncertaintyModel {
        match semantics {
            Semantics::Prob => UncertaintyModel::Probability(self.probability(space)),
            Semantics::LowerProb => UncertaintyModel::Credal(self.credal(space, 4)),
            Semantics::Belief => UncertaintyModel::Belief(self.mass(space, 4)),
            Semantics::Possibility => UncertaintyModel::Possibility(self.possibility(space)),
        }
    }

    /// Integer-valued gamble with values in `[lo, hi]`.
    pub fn gamble(&mut self, space: &Arc<AtomSpace>, lo: i64, hi: i64) -> Gamble {
        let values = (0..space.len()).map(|_| int(self.int_in(lo, hi))).collect();
        Gamble::new(space, values).expect("length matches")
    }

    pub fn prop_formula(&mut self, props: &[String], depth: usize) -> PropFormula {
        if depth == 0 || self.chance(0.4) {
            return match self.int_in(0, 9) {
                0 => PropFormula::True,
                1 => PropFormula::False,
                _ => PropFormula::prop(props.choose(&mut self.rng).expect("at least one proposition").clone()),
            };
        }
        match self.int_in(0, 3) {
            0 => PropFormula::not(self.prop_formula(props, depth - 1)),
            1 => PropFormula::and(self.prop_formula(props, depth - 1), self.prop_formula(props, depth - 1)),
            2 => PropFormula::or(self.prop_formula(props, depth - 1), self.prop_formula(props, depth - 1)),
            _ => PropFormula::implies(self.prop_formula(props, depth - 1), self.prop_formula(props, depth - 1)),
        }
    }

    pub fn syntactic_gamble(&mut self, props: &[String], max_terms: usize) -> SyntacticGamble {
        let k = self.rng.gen_range(1..=max_terms.max(1));
        SyntacticGamble::new((0..k).map(|_| (int(self.nonzero(3)), self.prop_formula(props, 2))).collect())
    }

    fn nonzero(&mut self, bound: i64) -> i64 {
        let x = self.int_in(1, bound);
        if self.chance(0.5) {
            x
        } else {
            -x
        }
    }

    pub fn rel(&mut self) -> Rel {
        *RELS.choose(&mut self.rng).expect("nonempty")
    }

    fn boolean<A>(&mut self, depth: usize, atom: &mut impl FnMut(&mut Self) -> A) -> Formula<A> {
        if depth == 0 || self.chance(0.35) {
            return Formula::Atom(atom(self));
        }
        match self.int_in(0, 3) {
            0 => Formula::not(self.boolean(depth - 1, atom)),
            1 => {
                let a = self.boolean(depth - 1, atom);
                Formula::and(a, self.boolean(depth - 1, atom))
            }
            2 => {
                let a = self.boolean(depth - 1, atom);
                Formula::or(a, self.boolean(depth - 1, atom))
            }
            _ => {
                let a = self.boolean(depth - 1, atom);
                Formula::implies(a, self.boolean(depth - 1, atom))
            }
        }
    }

    /// An expectation formula with up to `max_terms` terms per inequality.
    pub fn exp_formula(&mut self, props: &[String], depth: usize, max_terms: usize) -> ExpFormula {
        let props = props.to_vec();
        self.boolean(depth, &mut |s: &mut Sampler| {
            let k = s.rng.gen_range(1..=max_terms.max(1));
            let terms = (0..k).map(|_| (int(s.nonzero(2)), s.syntactic_gamble(&props, 2))).collect();
            let rel = s.rel();
            Ineq::new(terms, rel, rat(s.int_in(-8, 8), 4))
        })
    }

    pub fn likelihood_formula(&mut self, props: &[String], depth: usize, max_terms: usize) -> LikelihoodFormula {
        let props = props.to_vec();
        self.boolean(depth, &mut |s: &mut Sampler| {
            let k = s.rng.gen_range(1..=max_terms.max(1));
            let terms = (0..k).map(|_| (int(s.nonzero(2)), s.prop_formula(&props, 2))).collect();
            let rel = s.rel();
            Ineq::new(terms, rel, rat(s.int_in(-4, 4), 4))
        })
    }

    pub fn gamble_formula(&mut self, props: &[String], depth: usize) -> GambleIneqFormula {
        let props = props.to_vec();
        self.boolean(depth, &mut |s: &mut Sampler| {
            let g = s.syntactic_gamble(&props, 3);
            let rel = s.rel();
            GambleIneq::from_gamble(&g, rel, int(s.int_in(-2, 2)))
        })
    }

    pub fn func_formula(&mut self, vars: &[String], depth: usize) -> FuncIneqFormula {
        let vars = vars.to_vec();
        self.boolean(depth, &mut |s: &mut Sampler| {
            let k = s.rng.gen_range(1..=2);
            let terms = (0..k).map(|_| (int(s.nonzero(2)), FuncVar(vars.choose(&mut s.rng).expect("nonempty").clone()))).collect();
            let rel = s.rel();
            Ineq::new(terms, rel, int(s.int_in(-2, 2)))
        })
    }

    /// A comonotonic pair: both gambles are nonnegative combinations of the
    /// indicators of a nested chain `U₁ ⊇ U₂ ⊇ …`, plus constants.
    pub fn comonotonic_pair(&mut self, space: &Arc<AtomSpace>) -> (Gamble, Gamble) {
        let n = space.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        let mut x = vec![int(self.int_in(-3, 3)); n];
        let mut y = vec![int(self.int_in(-3, 3)); n];
        for k in 1..n {
            let (a, b) = (int(self.int_in(0, 3)), int(self.int_in(0, 3)));
            for &w in &order[k..] {
                x[w] += &a;
                y[w] += &b;
            }
        }
        (Gamble::new(space, x).expect("length"), Gamble::new(space, y).expect("length"))
    }

    /// Pairwise-disjoint propositional formulas over `props`: each is a
    /// disjunction of atoms from its own block of a random partition.
    pub fn disjoint_formulas(&mut self, props: &[String], k: usize) -> Vec<PropFormula> {
        let space = AtomSpace::full(props.iter().cloned()).expect("small spaces are valid");
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
        for j in 0..space.len() {
            if self.chance(0.8) {
                let b = self.rng.gen_range(0..k);
                blocks[b].push(j);
            }
        }
        blocks
            .into_iter()
            .map(|b| PropFormula::or_all(b.into_iter().map(|j| space.world_formula(j))).unwrap_or(PropFormula::False))
            .collect()
    }
}

/// `p0, p1, …, p{n−1}`.
pub fn prop_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Indicator of a single formula as a gamble-inequality term.
pub fn indicator_term(c: Rational, phi: PropFormula) -> (Rational, Indicator) {
    (c, Indicator(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::validate_model;

    #[test]
    fn generated_models_validate() {
        let mut s = Sampler::new(7);
        for n in 1..=3 {
            let space = s.atom_space(n);
            for sem in Semantics::ALL {
                for _ in 0..20 {
                    let m = s.model(&space, sem);
                    assert!(validate_model(&space, &m.to_raw()).is_ok());
                }
            }
        }
    }

    #[test]
    fn comonotonic_pairs_are_comonotonic() {
        let mut s = Sampler::new(11);
        let space = s.atom_space(3);
        for _ in 0..50 {
            let (x, y) = s.comonotonic_pair(&space);
            assert!(crate::atoms::is_comonotonic(&x, &y).unwrap());
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let props = prop_names(2);
        let a = Sampler::new(3).exp_formula(&props, 2, 2);
        let b = Sampler::new(3).exp_formula(&props, 2, 2);
        assert_eq!(a, b);
    }
}
