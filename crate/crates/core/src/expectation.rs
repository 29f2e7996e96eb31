//! Expectation operators.
//!
//! Belief expectation is available three ways: the Choquet layer sum over
//! the belief function, the mass-weighted minimum, and an exact LP over the
//! credal set of measures dominating the belief function. The three agree
//! exactly on every valid mass function; the LP route exists as an
//! independent oracle.

use num_traits::{One, Zero};

use crate::atoms::{Gamble, WorldSet};
use crate::error::{Error, Result};
use crate::linsolve::{self, Direction, LinearSystem, Optimum, Relation};
use crate::measures::{Capacity, CredalSet, MassFunction, PossibilityMeasure, ProbabilityMeasure};
use crate::rational::Rational;

/// Cap on the world count for the belief LP oracle (`2^n − 2` rows).
pub const MAX_LP_ORACLE_WORLDS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpectationResult {
    Point(Rational),
    Interval { lower: Rational, upper: Rational },
}

/// `E_μ(X) = Σ_w μ(w) X(w)`.
pub fn expect_prob(mu: &ProbabilityMeasure, x: &Gamble) -> Result<Rational> {
    if !crate::atoms::same_space(mu.space(), x.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(mu.probs().iter().zip(x.values()).map(|(p, v)| p * v).sum())
}

/// Lower and upper expectation over a finite credal set.
pub fn expect_bounds_credal(set: &CredalSet, x: &Gamble) -> Result<(Rational, Rational)> {
    let mut vals = Vec::with_capacity(set.measures().len());
    for mu in set.measures() {
        vals.push(expect_prob(mu, x)?);
    }
    let lo = vals.iter().min().cloned().expect("credal sets are nonempty");
    let hi = vals.iter().max().cloned().expect("credal sets are nonempty");
    Ok((lo, hi))
}

/// Choquet integral `x₁ + Σ_k (x_{k+1} − x_k)·ν(X > x_k)` over the sorted
/// distinct values of `X`.
pub fn choquet<C: Capacity + ?Sized>(nu: &C, x: &Gamble) -> Result<Rational> {
    choquet_with_levels(nu, x, &x.distinct_values())
}

/// Choquet sum evaluated over any ascending list of levels that contains
/// every value of `X`; extra levels add zero-weight layers.
pub fn choquet_with_levels<C: Capacity + ?Sized>(nu: &C, x: &Gamble, levels: &[Rational]) -> Result<Rational> {
    if !crate::atoms::same_space(nu.space(), x.space()) {
        return Err(Error::SpaceMismatch);
    }
    let all = nu.space().all();
    if !nu.measure(WorldSet::EMPTY).is_zero() || !nu.measure(all).is_one() {
        return Err(Error::NotNormalized);
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Internal("Choquet levels must be strictly ascending".into()));
    }
    if x.values().iter().any(|v| levels.binary_search(v).is_err()) {
        return Err(Error::Internal("Choquet levels must cover every value of the gamble".into()));
    }
    let Some(first) = levels.first() else {
        return Ok(Rational::zero());
    };
    let mut total = first.clone();
    for w in levels.windows(2) {
        total += (&w[1] - &w[0]) * nu.measure(x.above(&w[0]));
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Min,
    Max,
}

/// `Σ_U m(U)·min_{w∈U} X(w)` (belief) or the conjugate
/// `−Σ_U m(U)·min_{w∈U} (−X)(w)` (plausibility).
pub fn mass_expect(m: &MassFunction, x: &Gamble, mode: Bound) -> Result<Rational> {
    match mode {
        Bound::Min => mass_min_sum(m, x),
        Bound::Max => Ok(-mass_min_sum(m, &x.neg())?),
    }
}

fn mass_min_sum(m: &MassFunction, x: &Gamble) -> Result<Rational> {
    if !crate::atoms::same_space(m.space(), x.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(m.masses()
        .iter()
        .map(|(u, w)| w * x.min_over(*u).expect("focal sets are nonempty"))
        .sum())
}

/// `Σ_U m(U)·max_{w∈U} X(w)`, computed directly.
pub fn mass_max_sum(m: &MassFunction, x: &Gamble) -> Result<Rational> {
    if !crate::atoms::same_space(m.space(), x.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(m.masses()
        .iter()
        .map(|(u, w)| w * x.max_over(*u).expect("focal sets are nonempty"))
        .sum())
}

/// Minimum of `E_μ(X)` over every `μ` with `μ(U) ≥ Bel(U)` for all `U`.
pub fn lower_expect_bel_lp(m: &MassFunction, x: &Gamble) -> Result<Rational> {
    if !crate::atoms::same_space(m.space(), x.space()) {
        return Err(Error::SpaceMismatch);
    }
    let n = x.len();
    if n > MAX_LP_ORACLE_WORLDS {
        return Err(Error::TooManyWorlds(n));
    }
    let mut sys = LinearSystem::nonnegative(n);
    sys.add(vec![Rational::one(); n], Relation::Eq, Rational::one())?;
    let all = m.space().all();
    for mask in 1..all.bits() {
        let u = WorldSet::from_bits(mask);
        let coeffs = (0..n)
            .map(|w| if u.contains(w) { Rational::one() } else { Rational::zero() })
            .collect();
        sys.add(coeffs, Relation::Ge, crate::measures::belief_value(m, u))?;
    }
    match linsolve::optimize(&sys, x.values(), Direction::Min)? {
        Optimum::Optimal { value, .. } => Ok(value),
        other => Err(Error::Internal(format!("belief LP should be bounded and feasible, got {other:?}"))),
    }
}

/// Possibilistic expectation: Choquet integral against the possibility
/// measure.
pub fn expect_poss(poss: &PossibilityMeasure, x: &Gamble) -> Result<Rational> {
    choquet(poss, x)
}

/// Belief expectation through all three routes; errors on disagreement.
pub fn audited_belief_expectation(m: &MassFunction, x: &Gamble) -> Result<Rational> {
    let by_mass = mass_expect(m, x, Bound::Min)?;
    let by_choquet = choquet(&m.belief(), x)?;
    let by_lp = lower_expect_bel_lp(m, x)?;
    if by_mass != by_choquet || by_mass != by_lp {
        return Err(Error::Internal(format!(
            "belief expectation routes disagree: mass {by_mass}, Choquet {by_choquet}, LP {by_lp}"
        )));
    }
    let upper = mass_expect(m, x, Bound::Max)?;
    let direct = mass_max_sum(m, x)?;
    let by_plaus = choquet(&m.plausibility(), x)?;
    if upper != direct || upper != by_plaus {
        return Err(Error::Internal(format!(
            "plausibility expectation routes disagree: conjugate {upper}, direct {direct}, Choquet {by_plaus}"
        )));
    }
    Ok(by_mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::{combine, indicator, scale_shift, AtomSpace, CombineMode, World};
    use crate::measures::{poss_value, SetFunction};
    use crate::rational::{int, rat};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn space(n: usize) -> Arc<AtomSpace> {
        let worlds = (0..n)
            .map(|i| World { id: format!("w{}", i + 1), assign: (0..4).map(|b| i >> b & 1 == 1).collect() })
            .collect();
        Arc::new(AtomSpace::with_worlds(["a", "b", "c", "d"], worlds).unwrap())
    }

    fn g(s: &Arc<AtomSpace>, v: &[i64]) -> Gamble {
        Gamble::new(s, v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    fn mu(s: &Arc<AtomSpace>, p: &[(i64, i64)]) -> ProbabilityMeasure {
        ProbabilityMeasure::new(s, p.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    #[test]
    fn expect_prob_examples() {
        let s = space(3);
        let m = mu(&s, &[(5, 8), (0, 1), (3, 8)]);
        assert_eq!(expect_prob(&m, &g(&s, &[1, 2, 3])).unwrap(), rat(7, 4));
        assert_eq!(expect_prob(&m, &Gamble::constant(&s, rat(2, 3))).unwrap(), rat(2, 3));
        let u = WorldSet::from_indices([1, 2]);
        assert_eq!(expect_prob(&m, &indicator(u, &s).unwrap()).unwrap(), m.prob(u));
    }

    #[test]
    fn credal_examples() {
        let s = space(3);
        let x = g(&s, &[1, 2, 3]);
        let base = vec![mu(&s, &[(0, 1), (3, 8), (5, 8)]), mu(&s, &[(5, 8), (0, 1), (3, 8)]), mu(&s, &[(3, 8), (5, 8), (0, 1)])];
        let p = CredalSet::new(&s, base.clone()).unwrap();
        assert_eq!(expect_bounds_credal(&p, &x).unwrap().0, rat(13, 8));
        let mut ext = base;
        ext.push(mu(&s, &[(5, 8), (3, 8), (0, 1)]));
        let p2 = CredalSet::new(&s, ext).unwrap();
        assert_eq!(expect_bounds_credal(&p2, &x).unwrap().0, rat(11, 8));
        let p1 = CredalSet::new(&s, vec![mu(&s, &[(1, 3), (2, 3), (0, 1)]), mu(&s, &[(0, 1), (1, 3), (2, 3)]), mu(&s, &[(2, 3), (0, 1), (1, 3)])]).unwrap();
        assert_eq!(expect_bounds_credal(&p1, &g(&s, &[1, 2, 0])).unwrap().0, rat(2, 3));
    }

    #[test]
    fn choquet_examples() {
        let s = space(3);
        let vac = MassFunction::vacuous(&s);
        assert_eq!(choquet(&vac.belief(), &g(&s, &[1, 2, 3])).unwrap(), int(1));
        let m = mu(&s, &[(1, 5), (1, 5), (3, 5)]);
        let x = g(&s, &[4, -2, 7]);
        assert_eq!(choquet(&m, &x).unwrap(), expect_prob(&m, &x).unwrap());
        assert_eq!(choquet(&vac.belief(), &Gamble::constant(&s, int(9))).unwrap(), int(9));
        let bad = SetFunction::tabulate(&s, |_| rat(1, 2)).unwrap();
        assert_eq!(choquet(&bad, &x), Err(Error::NotNormalized));
    }

    #[test]
    fn mass_expect_examples() {
        let s = space(3);
        let vac = MassFunction::vacuous(&s);
        let x = g(&s, &[0, 1, 2]);
        assert_eq!(mass_expect(&vac, &x, Bound::Min).unwrap(), int(0));
        assert_eq!(mass_expect(&vac, &x, Bound::Max).unwrap(), int(2));
        let m = mu(&s, &[(1, 2), (1, 3), (1, 6)]);
        let add = MassFunction::from_probability(&m);
        let e = expect_prob(&m, &x).unwrap();
        assert_eq!(mass_expect(&add, &x, Bound::Min).unwrap(), e);
        assert_eq!(mass_expect(&add, &x, Bound::Max).unwrap(), e);
        let split = MassFunction::new(&s, vec![(WorldSet::from_indices([0, 1]), rat(1, 2)), (WorldSet::singleton(2), rat(1, 2))]).unwrap();
        assert_eq!(mass_expect(&split, &g(&s, &[1, 2, 3]), Bound::Min).unwrap(), int(2));
    }

    #[test]
    fn belief_lp_examples() {
        let s = space(3);
        let vac = MassFunction::vacuous(&s);
        assert_eq!(lower_expect_bel_lp(&vac, &g(&s, &[1, 2, 3])).unwrap(), int(1));
        let m = mu(&s, &[(1, 4), (1, 4), (1, 2)]);
        let x = g(&s, &[3, -1, 5]);
        assert_eq!(lower_expect_bel_lp(&MassFunction::from_probability(&m), &x).unwrap(), expect_prob(&m, &x).unwrap());
        let split = MassFunction::new(&s, vec![(WorldSet::from_indices([0, 1]), rat(1, 2)), (WorldSet::singleton(2), rat(1, 2))]).unwrap();
        for mask in 0..8u64 {
            let u = WorldSet::from_bits(mask);
            assert_eq!(lower_expect_bel_lp(&split, &indicator(u, &s).unwrap()).unwrap(), crate::measures::belief_value(&split, u));
        }
    }

    #[test]
    fn expect_poss_examples() {
        let s = space(3);
        let poss = PossibilityMeasure::new(&s, vec![int(1), rat(1, 2), rat(1, 4)]).unwrap();
        assert_eq!(expect_poss(&poss, &g(&s, &[0, 1, 2])).unwrap(), rat(3, 4));
        let (u, v) = (WorldSet::from_indices([1]), WorldSet::from_indices([2]));
        let joint = expect_poss(&poss, &indicator(u.union(v), &s).unwrap()).unwrap();
        let a = expect_poss(&poss, &indicator(u, &s).unwrap()).unwrap();
        let b = expect_poss(&poss, &indicator(v, &s).unwrap()).unwrap();
        assert_eq!(joint, a.max(b));
        assert_eq!(joint, poss_value(&poss, u.union(v)));
        assert_eq!(expect_poss(&poss, &Gamble::constant(&s, rat(-5, 2))).unwrap(), rat(-5, 2));
    }

    fn arb_mass(n: usize) -> impl Strategy<Value = Vec<(u64, u32)>> {
        proptest::collection::vec((1u64..(1 << n), 1u32..5), 1..5)
    }

    fn build_mass(s: &Arc<AtomSpace>, raw: Vec<(u64, u32)>) -> MassFunction {
        let total: u32 = raw.iter().map(|x| x.1).sum();
        let mut merged = std::collections::BTreeMap::<WorldSet, Rational>::new();
        for (mask, w) in raw {
            *merged.entry(WorldSet::from_bits(mask)).or_insert_with(Rational::zero) += rat(w as i64, total as i64);
        }
        MassFunction::new(s, merged.into_iter().collect()).unwrap()
    }

    proptest! {
        #[test]
        fn belief_routes_agree(raw in arb_mass(4), xs in proptest::collection::vec(-5i64..=5, 4)) {
            let s = space(4);
            let m = build_mass(&s, raw);
            let x = g(&s, &xs);
            prop_assert!(audited_belief_expectation(&m, &x).is_ok());
        }

        #[test]
        fn choquet_level_padding(raw in arb_mass(4), xs in proptest::collection::vec(-5i64..=5, 4), extra in proptest::collection::vec(-8i64..=8, 0..4)) {
            let s = space(4);
            let m = build_mass(&s, raw);
            let x = g(&s, &xs);
            let mut levels = x.distinct_values();
            levels.extend(extra.into_iter().map(int));
            levels.sort();
            levels.dedup();
            prop_assert_eq!(choquet_with_levels(&m.belief(), &x, &levels).unwrap(), choquet(&m.belief(), &x).unwrap());
        }

        #[test]
        fn probability_is_linear(ps in proptest::collection::vec(0i64..5, 4), xs in proptest::collection::vec(-5i64..=5, 4), ys in proptest::collection::vec(-5i64..=5, 4), a in -3i64..3, b in -3i64..3) {
            let s = space(4);
            let t: i64 = ps.iter().sum::<i64>() + 4;
            let m = ProbabilityMeasure::new(&s, ps.iter().map(|&p| rat(p + 1, t)).collect()).unwrap();
            let (x, y) = (g(&s, &xs), g(&s, &ys));
            let sum = combine(CombineMode::Add, &x, &y).unwrap();
            prop_assert_eq!(expect_prob(&m, &sum).unwrap(), expect_prob(&m, &x).unwrap() + expect_prob(&m, &y).unwrap());
            prop_assert_eq!(expect_prob(&m, &scale_shift(&int(a), &x, &int(b))).unwrap(), int(a) * expect_prob(&m, &x).unwrap() + int(b));
        }
    }
}
