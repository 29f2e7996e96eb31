use proptest::prelude::*;

use super::*;
use crate::logic::{parse_exp, parse_func, parse_gamble_formula, parse_likelihood};
use crate::measures::validate_model;
use crate::rational::int;
use crate::sample::{prop_names, Sampler};
use crate::semantics::satisfies_exp;

fn opts() -> DecideOptions {
    DecideOptions { oracle: true, ..DecideOptions::default() }
}

fn decide(text: &str, sem: Semantics) -> Report<UncertaintyModel> {
    let f = parse_exp(text).unwrap();
    let report = sat(&f, sem, &opts()).unwrap();
    if let Some(m) = report.result.witness() {
        assert!(validate_model(m.space(), &m.to_raw()).is_ok(), "{text}: invalid witness");
        assert!(satisfies_exp(m, &f).unwrap(), "{text}: witness does not satisfy the formula");
        assert_eq!(Semantics::of(m), sem);
    }
    report
}

#[test]
fn lower_expectation_separates_from_lower_probability() {
    assert!(decide("2*E(p + q) > 1", Semantics::LowerProb).result.is_sat());
    assert!(decide("2*E(p + q) < 1", Semantics::LowerProb).result.is_sat());
}

#[test]
fn additivity_is_forced_for_probability() {
    assert!(!decide("E(p) >= 1 & E(!p) >= 1", Semantics::Prob).result.is_sat());
    assert!(!decide("E(p) + E(!p) > 1", Semantics::Prob).result.is_sat());
    assert!(!decide("E(p) + E(!p) < 1", Semantics::Prob).result.is_sat());
    // Lower expectations are superadditive, so the sum may fall short of 1.
    assert!(decide("E(p) + E(!p) < 1", Semantics::LowerProb).result.is_sat());
    assert!(decide("E(p) + E(!p) < 1", Semantics::Belief).result.is_sat());
    assert!(!decide("E(p) + E(!p) > 1", Semantics::Belief).result.is_sat());
    // Possibility is the upper side: the sum may exceed 1 but not fall short.
    assert!(decide("E(p) + E(!p) > 1", Semantics::Possibility).result.is_sat());
    assert!(!decide("E(p) + E(!p) < 1", Semantics::Possibility).result.is_sat());
}

#[test]
fn belief_and_possibility_are_distinguished() {
    let text = "E(p|q) >= 1 & E(p) <= 0 & E(q) <= 0";
    let report = decide(text, Semantics::Belief);
    let Some(UncertaintyModel::Belief(m)) = report.result.witness() else { panic!("belief witness expected") };
    assert_eq!(m.masses().len(), 1);
    let (set, mass) = m.masses().iter().next().unwrap();
    // One focal set inside p ∨ q, meeting both ¬p and ¬q.
    assert!(set.len() >= 2);
    assert_eq!(*mass, int(1));
    assert!(!decide(text, Semantics::Possibility).result.is_sat());
    assert!(!decide(text, Semantics::Prob).result.is_sat());
    assert!(decide(text, Semantics::LowerProb).result.is_sat());
}

#[test]
fn validity_examples() {
    let v = |text: &str, sem| valid(&parse_exp(text).unwrap(), sem, &opts()).unwrap();
    for sem in Semantics::ALL {
        assert!(v("E(true) = 1", sem), "{sem}");
        assert!(v("E(false) = 0", sem), "{sem}");
        assert!(v("E(p) >= 0 & E(p) <= 1", sem), "{sem}");
        assert!(v("E(2*p) - 2*E(p) = 0", sem), "{sem}");
        assert!(!v("E(p) >= 1/2", sem), "{sem}");
    }
    assert!(v("E(p + q) - E(p) - E(q) = 0", Semantics::Prob));
    assert!(!v("E(p + q) - E(p) - E(q) = 0", Semantics::LowerProb));
    assert!(v("E(p + q) - E(p) - E(q) >= 0", Semantics::LowerProb));
    assert!(v("E(p + q) - E(p) - E(q) <= 0", Semantics::Possibility));
}

#[test]
fn likelihood_formulas_decide_through_translation() {
    let f = parse_likelihood("L(p) + L(!p) < 1").unwrap();
    assert!(!sat_likelihood(&f, Semantics::Prob, &opts()).unwrap().result.is_sat());
    assert!(sat_likelihood(&f, Semantics::Belief, &opts()).unwrap().result.is_sat());
}

#[test]
fn proposition_caps() {
    let f = parse_exp("E(a + b + c + d + e) >= 1").unwrap();
    assert_eq!(sat(&f, Semantics::Prob, &DecideOptions::default()).unwrap_err(), Error::PropCap { found: 5, cap: 4 });
    let g = parse_exp("E(a + b + c + d) >= 1").unwrap();
    assert_eq!(sat(&g, Semantics::Possibility, &DecideOptions::default()).unwrap_err(), Error::PropCap { found: 4, cap: 3 });
    let allowed = DecideOptions { allow_large_possibility: true, ..DecideOptions::default() };
    assert!(sat(&g, Semantics::Possibility, &allowed).unwrap().result.is_sat());
}

#[test]
fn dumps_record_every_system() {
    let f = parse_exp("E(p) >= 1/2 & E(q) >= 1/2").unwrap();
    let o = DecideOptions { dump_lp: true, ..DecideOptions::default() };
    let report = sat(&f, Semantics::Prob, &o).unwrap();
    assert_eq!(report.systems.len(), report.systems_solved);
    assert!(report.systems_solved >= 1);
}

#[test]
fn gamble_formula_examples() {
    let s = |text: &str| sat_gamble(&parse_gamble_formula(text).unwrap(), &opts()).unwrap().result;
    assert!(s("p + !p >= 1").is_sat());
    assert!(!s("!(p >= 0)").is_sat());
    let SatResult::Sat(w) = s("!(2*p - q >= 0)") else { panic!("sat expected") };
    assert_eq!(w.len(), 1);
    let world = &w.worlds()[0];
    let (pi, qi) = (w.prop_index("p").unwrap(), w.prop_index("q").unwrap());
    assert!(!world.assign[pi] && world.assign[qi]);
    assert!(!s("p - q > 0 & q - p > 0").is_sat());
    assert!(s("!(p - q >= 0) & !(q - p >= 0)").is_sat());
}

#[test]
fn function_formula_examples() {
    let s = |text: &str| sat_funcineq(&parse_func(text).unwrap(), &opts()).unwrap().result;
    assert!(!s("v >= 1 & !(v >= 1)").is_sat());
    let SatResult::Sat(a) = s("!(v <= 0) & !(v >= 0)") else { panic!("sat expected") };
    assert_eq!(a.domain_size, 2);
    let v = &a.values["v"];
    assert!(v.iter().any(|x| x > &int(0)) && v.iter().any(|x| x < &int(0)));
    let SatResult::Sat(a) = s("v1 + v2 >= 1") else { panic!("sat expected") };
    assert_eq!(a.domain_size, 1);
    assert!(!sat_func_as_reals(&parse_func("!(v <= 0) & !(v >= 0)").unwrap(), &opts()).unwrap().result.is_sat());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Every SAT witness satisfies the formula (checked inside `decide`),
    /// every UNSAT survives random refutation, and probability-SAT implies
    /// SAT under the weaker semantics.
    #[test]
    fn decisions_are_sound(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let props = prop_names(2);
        let f = s.exp_formula(&props, 2, 2);
        let text = f.to_string();
        let mut results = Vec::new();
        for sem in Semantics::ALL {
            let report = decide(&text, sem);
            if !report.result.is_sat() {
                let space = s.atom_space(props.len());
                for _ in 0..200 {
                    let m = s.model(&space, sem);
                    prop_assert!(!satisfies_exp(&m, &f).unwrap(), "{} refuted under {}", text, sem);
                }
            }
            results.push(report.result.is_sat());
        }
        if results[0] {
            prop_assert!(results[1] && results[2], "{}", text);
        }
    }

    #[test]
    fn gamble_decisions_are_sound(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let props = prop_names(2);
        let f = s.gamble_formula(&props, 2);
        let report = sat_gamble(&f, &opts()).unwrap();
        if !report.result.is_sat() {
            // Every nonempty set of atoms is a candidate structure.
            let full = std::sync::Arc::new(crate::atoms::AtomSpace::full(props.iter().cloned()).unwrap());
            for bits in 1u64..(1 << full.len()) {
                let w = std::sync::Arc::new(full.restrict(crate::atoms::WorldSet::from_bits(bits)).unwrap());
                prop_assert!(!crate::semantics::satisfies_gamble(&w, &f).unwrap());
            }
        }
    }
}
