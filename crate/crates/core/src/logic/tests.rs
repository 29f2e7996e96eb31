use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::atoms::{realize_gamble, AtomSpace, PropFormula, SyntacticGamble};
use crate::error::Error;
use crate::rational::{int, rat};
use crate::sample::{prop_names, Sampler};
use crate::semantics::{satisfies_exp, satisfies_func, satisfies_gamble, satisfies_likelihood, FuncAssignment, Semantics};

fn p(name: &str) -> PropFormula {
    PropFormula::prop(name)
}

fn gamble(terms: &[(i64, PropFormula)]) -> SyntacticGamble {
    SyntacticGamble::new(terms.iter().map(|(c, f)| (int(*c), f.clone())).collect())
}

#[test]
fn parses_expectation_inequalities() {
    let f = parse_exp("2*E(p + q) > 1").unwrap();
    let expected = Formula::Atom(Ineq::new(vec![(int(2), gamble(&[(1, p("p")), (1, p("q"))]))], Rel::Gt, int(1)));
    assert_eq!(f, expected);

    let f = parse_exp("E(3/2*p - !q) <= -1/2").unwrap();
    let expected = Formula::Atom(Ineq::new(
        vec![(int(1), SyntacticGamble::new(vec![(rat(3, 2), p("p")), (int(-1), PropFormula::not(p("q")))]))],
        Rel::Le,
        rat(-1, 2),
    ));
    assert_eq!(f, expected);
}

#[test]
fn connectives_bind_as_usual() {
    let f = parse_exp("E(p) >= 1 | E(q) >= 1 & E(r) >= 1 => E(s) = 0 => E(t) < 1").unwrap();
    match f {
        Formula::Implies(lhs, rhs) => {
            assert!(matches!(*lhs, Formula::Or(_, ref b) if matches!(**b, Formula::And(_, _))));
            assert!(matches!(*rhs, Formula::Implies(_, _)));
        }
        other => panic!("unexpected shape {other:?}"),
    }
    let g = parse_exp("!E(p) >= 1 & E(q) >= 0").unwrap();
    assert!(matches!(g, Formula::And(ref a, _) if matches!(**a, Formula::Not(_))));
}

#[test]
fn rejects_malformed_input() {
    assert!(matches!(parse_exp("E(p) >= 1/0"), Err(Error::Syntax { .. })));
    assert!(matches!(parse_exp("E(p) >="), Err(Error::Syntax { .. })));
    assert!(matches!(parse_exp("E(p) >= 1 &"), Err(Error::Syntax { .. })));
    assert!(matches!(parse_exp("2 E(p) >= 1"), Err(Error::Syntax { .. })));
    assert!(matches!(parse_exp("E(p) >= 1)"), Err(Error::Syntax { .. })));
    assert!(matches!(parse_exp("E(P) >= 1"), Err(Error::Syntax { .. })));
    assert!(matches!(parse_exp("E(p) # 1"), Err(Error::Syntax { .. })));
}

#[test]
fn language_boundaries_are_enforced() {
    assert!(matches!(parse_exp("L(p) >= 1"), Err(Error::WrongLanguage { .. })));
    assert!(matches!(parse_likelihood("E(p) >= 1"), Err(Error::WrongLanguage { .. })));
    assert!(parse_likelihood("L(p) - L(q & r) >= 0").is_ok());
    assert!(parse_func("E(p) >= 0").is_err());
    assert!(parse_gamble_formula("E(p) >= 0").is_err());
    assert_eq!(parse("f - g >= 0", Language::F).unwrap().language(), Language::F);
    assert_eq!("qu".parse::<Language>().unwrap(), Language::QU);
    assert_eq!("G".parse::<Language>().unwrap(), Language::G);
    assert!("H".parse::<Language>().is_err());
}

#[test]
fn gamble_formulas_parenthesize_either_way() {
    let atom = parse_gamble_formula("(p | q) >= 1").unwrap();
    assert_eq!(atom, Formula::Atom(GambleIneq::from_gamble(&gamble(&[(1, PropFormula::or(p("p"), p("q")))]), Rel::Ge, int(1))));
    let grouped = parse_gamble_formula("(p >= 1) & !(q - p > 0)").unwrap();
    assert!(matches!(grouped, Formula::And(_, ref b) if matches!(**b, Formula::Not(_))));
    let negated_prop = parse_gamble_formula("!p >= 1").unwrap();
    assert_eq!(negated_prop, Formula::Atom(GambleIneq::from_gamble(&gamble(&[(1, PropFormula::not(p("p")))]), Rel::Ge, int(1))));
}

#[test]
fn printing_examples() {
    let f = parse_exp("-E(p) + 2*E(q - r) >= 1/3").unwrap();
    assert_eq!(f.to_string(), "-1*E(1*p) + 2*E(1*q - 1*r) >= 1/3");
    let g = parse_exp("!(E(p => q) < 0)").unwrap();
    assert_eq!(g.to_string(), "!(1*E(1*(p => q)) < 0)");
}

#[test]
fn dnf_examples() {
    let f = parse_exp("E(p) >= 1 & (E(q) >= 1 | E(p) <= 0)").unwrap();
    let clauses = to_dnf(&f, DEFAULT_MAX_CLAUSES).unwrap();
    assert_eq!(clauses.len(), 2);
    assert!(clauses.iter().all(|c| c.len() == 2 && c.iter().all(|l| l.positive && l.ineq.rel == Rel::Ge)));

    let strict = parse_exp("E(p) > 0").unwrap();
    let clauses = to_dnf(&strict, DEFAULT_MAX_CLAUSES).unwrap();
    assert_eq!(clauses, vec![vec![Literal { ineq: Ineq::ge(vec![(int(-1), gamble(&[(1, p("p"))]))], int(0)), positive: false }]]);

    let contradictory = parse_exp("E(p) >= 1 & !(E(p) >= 1)").unwrap();
    let clauses = to_dnf(&contradictory, DEFAULT_MAX_CLAUSES).unwrap();
    assert!(clauses.iter().all(clause_is_contradictory));
}

#[test]
fn pointwise_strict_relations_keep_the_weak_part() {
    let f = parse_gamble_formula("p - q > 0").unwrap();
    let clauses = to_dnf(&f, DEFAULT_MAX_CLAUSES).unwrap();
    assert_eq!(clauses.len(), 1);
    assert_eq!(clauses[0].iter().filter(|l| l.positive).count(), 1);
    assert_eq!(clauses[0].iter().filter(|l| !l.positive).count(), 1);
}

#[test]
fn clause_cap_is_enforced() {
    let text = (0..13).map(|i| format!("(E(p{i}) >= 1 | E(q{i}) >= 1)")).collect::<Vec<_>>().join(" & ");
    let f = parse_exp(&text).unwrap();
    assert_eq!(to_dnf(&f, DEFAULT_MAX_CLAUSES), Err(Error::ClauseCap(DEFAULT_MAX_CLAUSES)));
    assert_eq!(to_dnf(&f, 1 << 13).unwrap().len(), 1 << 13);
}

#[test]
fn t1_distributes_coefficients() {
    let f = parse_exp("2*E(p + 3*q) - E(r) >= 1").unwrap();
    assert_eq!(transform_t1(&f), parse_exp("2*E(p) + 6*E(q) - E(r) >= 1").unwrap());
}

#[test]
fn t2_builds_a_staircase() {
    // Over atoms of p: E(2*p + 1*true) has levels 1 < 3, so it becomes
    // 1 + 2*E(p).
    let f = parse_exp("E(2*p + true) >= 2").unwrap();
    let t = transform_t2(&f, &["p".to_string()]).unwrap();
    let Formula::Atom(a) = &t else { panic!("atom expected") };
    assert_eq!(a.rhs, int(1));
    assert_eq!(a.terms.len(), 1);
    assert_eq!(a.terms[0].0, int(2));
    let space = Arc::new(AtomSpace::full(["p"]).unwrap());
    let psi = realize_gamble(&a.terms[0].1, &space).unwrap();
    assert_eq!(psi, realize_gamble(&gamble(&[(1, p("p"))]), &space).unwrap());
}

#[test]
fn likelihood_translation() {
    let f = parse_likelihood("L(p) - 1/2*L(q & r) >= 0").unwrap();
    assert_eq!(translate_likelihood(&f), parse_exp("E(p) - 1/2*E(q & r) >= 0").unwrap());
}

#[test]
fn meet_and_join_examples() {
    let g1 = gamble(&[(2, p("p"))]);
    let g2 = gamble(&[(1, p("q"))]);
    let space = Arc::new(AtomSpace::full(["p", "q"]).unwrap());
    let join = realize_gamble(&syntactic_meet_join(&g1, &g2, MeetJoin::Join).unwrap(), &space).unwrap();
    let meet = realize_gamble(&syntactic_meet_join(&g1, &g2, MeetJoin::Meet).unwrap(), &space).unwrap();
    let (x, y) = (realize_gamble(&g1, &space).unwrap(), realize_gamble(&g2, &space).unwrap());
    for w in 0..space.len() {
        assert_eq!(join.value(w), x.value(w).max(y.value(w)));
        assert_eq!(meet.value(w), x.value(w).min(y.value(w)));
    }
}

fn dnf_formula<T: Term>(f: &Formula<Ineq<T>>) -> Option<Formula<Ineq<T>>> {
    let clauses = to_dnf(f, DEFAULT_MAX_CLAUSES).ok()?;
    Some(from_dnf(&clauses).unwrap_or_else(|| {
        // The empty disjunction: an unsatisfiable stand-in.
        let atom = f.atoms()[0].clone();
        Formula::and(Formula::Atom(atom.clone()), Formula::not(Formula::Atom(atom)))
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exp_formulas_print_and_parse_back(seed in any::<u64>()) {
        let f = Sampler::new(seed).exp_formula(&prop_names(3), 3, 3);
        prop_assert_eq!(parse_exp(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn other_languages_print_and_parse_back(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let props = prop_names(3);
        let l = s.likelihood_formula(&props, 3, 3);
        prop_assert_eq!(parse_likelihood(&l.to_string()).unwrap(), l);
        let g = s.gamble_formula(&props, 3);
        prop_assert_eq!(parse_gamble_formula(&g.to_string()).unwrap(), g);
        let v = s.func_formula(&["f".to_string(), "g".to_string()], 3);
        prop_assert_eq!(parse_func(&v.to_string()).unwrap(), v);
    }

    #[test]
    fn normal_forms_preserve_truth_in_models(seed in any::<u64>(), sem in 0usize..4) {
        let mut s = Sampler::new(seed);
        let props = prop_names(2);
        let f = s.exp_formula(&props, 3, 2);
        let space = s.atom_space(2);
        let model = s.model(&space, Semantics::ALL[sem]);
        let truth = satisfies_exp(&model, &f).unwrap();
        prop_assert_eq!(satisfies_exp(&model, &desugar(&f)).unwrap(), truth);
        if let Some(d) = dnf_formula(&f) {
            prop_assert_eq!(satisfies_exp(&model, &d).unwrap(), truth);
        }
    }

    #[test]
    fn pointwise_normal_forms_preserve_truth(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let props = prop_names(2);
        let g = s.gamble_formula(&props, 3);
        let space = s.atom_space(2);
        let truth = satisfies_gamble(&space, &g).unwrap();
        prop_assert_eq!(satisfies_gamble(&space, &desugar(&g)).unwrap(), truth);
        if let Some(d) = dnf_formula(&g) {
            prop_assert_eq!(satisfies_gamble(&space, &d).unwrap(), truth);
        }

        let vars = ["f".to_string(), "g".to_string()];
        let v = s.func_formula(&vars, 3);
        let size = s.int_in(1, 3) as usize;
        let values = vars.iter().map(|x| (x.clone(), (0..size).map(|_| int(s.int_in(-2, 2))).collect())).collect();
        let assign = FuncAssignment { domain_size: size, values };
        let truth = satisfies_func(&assign, &v).unwrap();
        prop_assert_eq!(satisfies_func(&assign, &desugar(&v)).unwrap(), truth);
        if let Some(d) = dnf_formula(&v) {
            prop_assert_eq!(satisfies_func(&assign, &d).unwrap(), truth);
        }
    }

    #[test]
    fn t1_is_sound_for_probability(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = s.exp_formula(&prop_names(2), 2, 2);
        let space = s.atom_space(2);
        let model = s.model(&space, Semantics::Prob);
        prop_assert_eq!(satisfies_exp(&model, &transform_t1(&f)).unwrap(), satisfies_exp(&model, &f).unwrap());
    }

    #[test]
    fn t2_is_sound_for_comonotone_additive_semantics(seed in any::<u64>(), sem in prop::sample::select(vec![Semantics::Prob, Semantics::Belief, Semantics::Possibility])) {
        let mut s = Sampler::new(seed);
        let props = prop_names(2);
        let f = s.exp_formula(&props, 2, 2);
        let space = s.atom_space(2);
        let model = s.model(&space, sem);
        let t = transform_t2(&f, &props).unwrap();
        prop_assert_eq!(satisfies_exp(&model, &t).unwrap(), satisfies_exp(&model, &f).unwrap());
        for ineq in t.atoms() {
            for (_, g) in &ineq.terms {
                prop_assert_eq!(g.terms.len(), 1);
            }
        }
    }

    #[test]
    fn likelihood_translation_preserves_truth(seed in any::<u64>(), sem in 0usize..4) {
        let mut s = Sampler::new(seed);
        let f = s.likelihood_formula(&prop_names(2), 2, 2);
        let space = s.atom_space(2);
        let model = s.model(&space, Semantics::ALL[sem]);
        prop_assert_eq!(satisfies_exp(&model, &translate_likelihood(&f)).unwrap(), satisfies_likelihood(&model, &f).unwrap());
    }

    #[test]
    fn meet_join_realize_pointwise(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let props = prop_names(3);
        let (g1, g2) = (s.syntactic_gamble(&props, 3), s.syntactic_gamble(&props, 3));
        let space = s.atom_space(3);
        let (x, y) = (realize_gamble(&g1, &space).unwrap(), realize_gamble(&g2, &space).unwrap());
        let join = realize_gamble(&syntactic_meet_join(&g1, &g2, MeetJoin::Join).unwrap(), &space).unwrap();
        let meet = realize_gamble(&syntactic_meet_join(&g1, &g2, MeetJoin::Meet).unwrap(), &space).unwrap();
        for w in 0..space.len() {
            prop_assert_eq!(join.value(w), x.value(w).max(y.value(w)));
            prop_assert_eq!(meet.value(w), x.value(w).min(y.value(w)));
        }
    }
}
