//! Syntax of the four formula languages, their text form, normal forms and
//! the equivalence-preserving transformations between them.
//!
//! * `E`: Boolean combinations of `a₁·E(γ₁) + … + a_k·E(γ_k) REL b`.
//! * `QU`: the same shape over likelihood terms `L(φ)`.
//! * `G`: Boolean combinations of gamble inequalities `γ REL c`, read
//!   pointwise over every world of a structure.
//! * `F`: Boolean combinations of `a₁·v₁ + … + a_k·v_k REL c` over function
//!   variables, again read pointwise.
//!
//! Every relation other than `≥` is sugar. Expectation and likelihood terms
//! denote reals, so `a > b` is `¬(a ≤ b)`; gambles and functions are only
//! partially ordered, so there `a > b` is `a ≥ b ∧ ¬(a ≤ b)`.

mod parse;
mod transform;

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_traits::{Signed, Zero};

use crate::atoms::{PropFormula, SyntacticGamble};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

pub use parse::{parse, parse_exp, parse_func, parse_gamble_formula, parse_likelihood, parse_prop, parse_syntactic_gamble};
pub use transform::{syntactic_meet_join, transform_t1, transform_t2, translate_likelihood, MeetJoin};

/// Default cap on the number of clauses produced by [`to_dnf`].
pub const DEFAULT_MAX_CLAUSES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    E,
    QU,
    G,
    F,
}

impl std::str::FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e" => Ok(Language::E),
            "qu" => Ok(Language::QU),
            "g" => Ok(Language::G),
            "f" => Ok(Language::F),
            _ => Err(Error::Document(format!("unknown language `{s}` (expected E, QU, G or F)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Ge => ">=",
            Rel::Gt => ">",
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
        }
    }

    /// `lhs REL rhs` over the reals.
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
            Rel::Le => lhs <= rhs,
            Rel::Lt => lhs < rhs,
            Rel::Eq => lhs == rhs,
        }
    }

    /// `f REL c̃` for a function given by its values, under the pointwise
    /// order (where `>` means `≥ ∧ ≠`).
    pub fn holds_pointwise(self, values: &[Rational], rhs: &Rational) -> bool {
        let ge = values.iter().all(|v| v >= rhs);
        let le = values.iter().all(|v| v <= rhs);
        match self {
            Rel::Ge => ge,
            Rel::Le => le,
            Rel::Eq => ge && le,
            Rel::Gt => ge && !le,
            Rel::Lt => le && !ge,
        }
    }
}

/// How the terms of a language are ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// Terms denote reals.
    Total,
    /// Terms denote functions compared pointwise.
    Pointwise,
}

/// Linear inequality `Σ aᵢ·tᵢ REL rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ineq<T> {
    pub terms: Vec<(Rational, T)>,
    pub rel: Rel,
    pub rhs: Rational,
}

impl<T: Clone> Ineq<T> {
    pub fn new(terms: Vec<(Rational, T)>, rel: Rel, rhs: Rational) -> Self {
        Ineq { terms, rel, rhs }
    }

    pub fn ge(terms: Vec<(Rational, T)>, rhs: Rational) -> Self {
        Ineq { terms, rel: Rel::Ge, rhs }
    }

    /// `−Σ aᵢ·tᵢ ≥ −rhs`: the `≤` form read as a `≥` atom.
    fn flipped_ge(&self) -> Self {
        Ineq {
            terms: self.terms.iter().map(|(a, t)| (-a, t.clone())).collect(),
            rel: Rel::Ge,
            rhs: -&self.rhs,
        }
    }

    fn as_ge(&self) -> Self {
        Ineq { terms: self.terms.clone(), rel: Rel::Ge, rhs: self.rhs.clone() }
    }

    /// Rewrites the relation into Boolean combinations of `≥` atoms.
    pub fn desugar(&self, order: Order) -> Formula<Ineq<T>> {
        let ge = || Formula::Atom(self.as_ge());
        let le = || Formula::Atom(self.flipped_ge());
        match (self.rel, order) {
            (Rel::Ge, _) => ge(),
            (Rel::Le, _) => le(),
            (Rel::Eq, _) => Formula::and(ge(), le()),
            (Rel::Gt, Order::Total) => Formula::not(le()),
            (Rel::Lt, Order::Total) => Formula::not(ge()),
            (Rel::Gt, Order::Pointwise) => Formula::and(ge(), Formula::not(le())),
            (Rel::Lt, Order::Pointwise) => Formula::and(le(), Formula::not(ge())),
        }
    }

    pub fn map_terms<U>(&self, f: impl FnMut(&(Rational, T)) -> (Rational, U)) -> Ineq<U> {
        Ineq { terms: self.terms.iter().map(f).collect(), rel: self.rel, rhs: self.rhs.clone() }
    }
}

/// Boolean combination of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula<A> {
    Atom(A),
    Not(Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
}

impl<A> Formula<A> {
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Conjunction of a nonempty list.
    pub fn all(items: impl IntoIterator<Item = Self>) -> Option<Self> {
        items.into_iter().reduce(Formula::and)
    }

    /// Disjunction of a nonempty list.
    pub fn any(items: impl IntoIterator<Item = Self>) -> Option<Self> {
        items.into_iter().reduce(Formula::or)
    }

    pub fn atoms(&self) -> Vec<&A> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(a) => a.visit_atoms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> B) -> Formula<B> {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            Formula::And(a, b) => {
                let a = a.map_atoms(f);
                Formula::and(a, b.map_atoms(f))
            }
            Formula::Or(a, b) => {
                let a = a.map_atoms(f);
                Formula::or(a, b.map_atoms(f))
            }
            Formula::Implies(a, b) => {
                let a = a.map_atoms(f);
                Formula::implies(a, b.map_atoms(f))
            }
        }
    }

    pub fn try_map_atoms<B>(&self, f: &mut impl FnMut(&A) -> Result<B>) -> Result<Formula<B>> {
        Ok(match self {
            Formula::Atom(a) => Formula::Atom(f(a)?),
            Formula::Not(a) => Formula::not(a.try_map_atoms(f)?),
            Formula::And(a, b) => {
                let a = a.try_map_atoms(f)?;
                Formula::and(a, b.try_map_atoms(f)?)
            }
            Formula::Or(a, b) => {
                let a = a.try_map_atoms(f)?;
                Formula::or(a, b.try_map_atoms(f)?)
            }
            Formula::Implies(a, b) => {
                let a = a.try_map_atoms(f)?;
                Formula::implies(a, b.try_map_atoms(f)?)
            }
        })
    }

    /// Truth value given a valuation of the atoms.
    pub fn eval(&self, atom: &mut impl FnMut(&A) -> Result<bool>) -> Result<bool> {
        Ok(match self {
            Formula::Atom(a) => atom(a)?,
            Formula::Not(a) => !a.eval(atom)?,
            Formula::And(a, b) => a.eval(atom)? && b.eval(atom)?,
            Formula::Or(a, b) => a.eval(atom)? || b.eval(atom)?,
            Formula::Implies(a, b) => !a.eval(atom)? || b.eval(atom)?,
        })
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// A term of one of the languages.
pub trait Term: Clone + fmt::Debug + PartialEq + Eq {
    const ORDER: Order;

    fn collect_props(&self, out: &mut BTreeSet<String>);

    fn write(&self, out: &mut String);
}

/// Expectation of a syntactic gamble: `E(γ)`.
impl Term for SyntacticGamble {
    const ORDER: Order = Order::Total;

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        SyntacticGamble::collect_props(self, out)
    }

    fn write(&self, out: &mut String) {
        out.push_str("E(");
        write_gamble(self, out);
        out.push(')');
    }
}

/// Likelihood of an event: `L(φ)`.
impl Term for PropFormula {
    const ORDER: Order = Order::Total;

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        PropFormula::collect_props(self, out)
    }

    fn write(&self, out: &mut String) {
        out.push_str("L(");
        write_prop(self, out);
        out.push(')');
    }
}

/// The indicator gamble of an event, as a summand of a gamble inequality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Indicator(pub PropFormula);

impl Term for Indicator {
    const ORDER: Order = Order::Pointwise;

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        self.0.collect_props(out)
    }

    fn write(&self, out: &mut String) {
        write_prop_operand(&self.0, out);
    }
}

/// A variable ranging over real-valued functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuncVar(pub String);

impl Term for FuncVar {
    const ORDER: Order = Order::Pointwise;

    fn collect_props(&self, _out: &mut BTreeSet<String>) {}

    fn write(&self, out: &mut String) {
        out.push_str(&self.0);
    }
}

pub type ExpIneq = Ineq<SyntacticGamble>;
pub type ExpFormula = Formula<ExpIneq>;
pub type LikelihoodFormula = Formula<Ineq<PropFormula>>;
pub type GambleIneq = Ineq<Indicator>;
pub type GambleIneqFormula = Formula<GambleIneq>;
pub type FuncIneqFormula = Formula<Ineq<FuncVar>>;

impl GambleIneq {
    /// The left-hand side as a syntactic gamble.
    pub fn gamble(&self) -> SyntacticGamble {
        SyntacticGamble::new(self.terms.iter().map(|(a, i)| (a.clone(), i.0.clone())).collect())
    }

    pub fn from_gamble(g: &SyntacticGamble, rel: Rel, rhs: Rational) -> Self {
        Ineq::new(g.terms.iter().map(|(a, p)| (a.clone(), Indicator(p.clone()))).collect(), rel, rhs)
    }
}

/// A formula of any of the four languages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyFormula {
    E(ExpFormula),
    QU(LikelihoodFormula),
    G(GambleIneqFormula),
    F(FuncIneqFormula),
}

impl AnyFormula {
    pub fn language(&self) -> Language {
        match self {
            AnyFormula::E(_) => Language::E,
            AnyFormula::QU(_) => Language::QU,
            AnyFormula::G(_) => Language::G,
            AnyFormula::F(_) => Language::F,
        }
    }
}

impl fmt::Display for AnyFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyFormula::E(x) => x.fmt(f),
            AnyFormula::QU(x) => x.fmt(f),
            AnyFormula::G(x) => x.fmt(f),
            AnyFormula::F(x) => x.fmt(f),
        }
    }
}

/// Propositions mentioned anywhere in the formula.
pub fn formula_props<T: Term>(f: &Formula<Ineq<T>>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for a in f.atoms() {
        for (_, t) in &a.terms {
            t.collect_props(&mut out);
        }
    }
    out
}

/// Rewrites every atom into `≥` atoms and removes implications.
pub fn desugar<T: Term>(f: &Formula<Ineq<T>>) -> Formula<Ineq<T>> {
    match f {
        Formula::Atom(a) => a.desugar(T::ORDER),
        Formula::Not(a) => Formula::not(desugar(a)),
        Formula::And(a, b) => Formula::and(desugar(a), desugar(b)),
        Formula::Or(a, b) => Formula::or(desugar(a), desugar(b)),
        Formula::Implies(a, b) => Formula::or(Formula::not(desugar(a)), desugar(b)),
    }
}

/// A possibly negated `≥` atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal<T> {
    pub ineq: Ineq<T>,
    pub positive: bool,
}

impl<T: Clone> Literal<T> {
    pub fn negated(&self) -> Self {
        Literal { ineq: self.ineq.clone(), positive: !self.positive }
    }
}

pub type Clause<T> = Vec<Literal<T>>;

/// Disjunctive normal form over `≥` literals. Errors when more than `cap`
/// clauses would be produced at any stage.
pub fn to_dnf<T: Term>(f: &Formula<Ineq<T>>, cap: usize) -> Result<Vec<Clause<T>>> {
    dnf(f, true, cap)
}

fn dnf<T: Term>(f: &Formula<Ineq<T>>, positive: bool, cap: usize) -> Result<Vec<Clause<T>>> {
    match f {
        Formula::Atom(a) if a.rel == Rel::Ge => Ok(vec![vec![Literal { ineq: a.clone(), positive }]]),
        Formula::Atom(a) => dnf(&a.desugar(T::ORDER), positive, cap),
        Formula::Not(a) => dnf(a, !positive, cap),
        Formula::And(a, b) if positive => product(dnf(a, true, cap)?, dnf(b, true, cap)?, cap),
        Formula::And(a, b) => union(dnf(a, false, cap)?, dnf(b, false, cap)?, cap),
        Formula::Or(a, b) if positive => union(dnf(a, true, cap)?, dnf(b, true, cap)?, cap),
        Formula::Or(a, b) => product(dnf(a, false, cap)?, dnf(b, false, cap)?, cap),
        Formula::Implies(a, b) if positive => union(dnf(a, false, cap)?, dnf(b, true, cap)?, cap),
        Formula::Implies(a, b) => product(dnf(a, true, cap)?, dnf(b, false, cap)?, cap),
    }
}

fn union<T: Term>(mut a: Vec<Clause<T>>, b: Vec<Clause<T>>, cap: usize) -> Result<Vec<Clause<T>>> {
    for c in b {
        if !a.contains(&c) {
            a.push(c);
        }
    }
    if a.len() > cap {
        return Err(Error::ClauseCap(cap));
    }
    Ok(a)
}

fn product<T: Term>(a: Vec<Clause<T>>, b: Vec<Clause<T>>, cap: usize) -> Result<Vec<Clause<T>>> {
    if a.len().saturating_mul(b.len()) > cap {
        return Err(Error::ClauseCap(cap));
    }
    let mut out: Vec<Clause<T>> = Vec::with_capacity(a.len() * b.len());
    for x in &a {
        for y in &b {
            let mut c = x.clone();
            for lit in y {
                if !c.contains(lit) {
                    c.push(lit.clone());
                }
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// True when the clause contains a literal together with its negation.
pub fn clause_is_contradictory<T: Term>(clause: &Clause<T>) -> bool {
    clause.iter().any(|l| l.positive && clause.contains(&l.negated()))
}

/// Rebuilds a formula from its normal form (`None` for the empty
/// disjunction).
pub fn from_dnf<T: Term>(clauses: &[Clause<T>]) -> Option<Formula<Ineq<T>>> {
    Formula::any(clauses.iter().map(|c| {
        Formula::all(c.iter().map(|l| {
            let atom = Formula::Atom(l.ineq.clone());
            if l.positive {
                atom
            } else {
                Formula::not(atom)
            }
        }))
        .expect("clauses are nonempty")
    }))
}

fn write_coeff_term<T: Term>(first: bool, a: &Rational, t: &T, out: &mut String) {
    if a.is_negative() {
        out.push_str(if first { "-" } else { " - " });
    } else if !first {
        out.push_str(" + ");
    }
    out.push_str(&format_rational(&a.abs()));
    out.push('*');
    t.write(out);
}

fn write_ineq<T: Term>(ineq: &Ineq<T>, out: &mut String) {
    for (i, (a, t)) in ineq.terms.iter().enumerate() {
        write_coeff_term(i == 0, a, t, out);
    }
    let _ = write!(out, " {} {}", ineq.rel.symbol(), format_rational(&ineq.rhs));
}

fn write_formula<T: Term>(f: &Formula<Ineq<T>>, out: &mut String) {
    let bin = |a: &Formula<Ineq<T>>, op: &str, b: &Formula<Ineq<T>>, out: &mut String| {
        out.push('(');
        write_formula(a, out);
        out.push_str(op);
        write_formula(b, out);
        out.push(')');
    };
    match f {
        Formula::Atom(a) => write_ineq(a, out),
        Formula::Not(a) => {
            out.push_str("!(");
            write_formula(a, out);
            out.push(')');
        }
        Formula::And(a, b) => bin(a, " & ", b, out),
        Formula::Or(a, b) => bin(a, " | ", b, out),
        Formula::Implies(a, b) => bin(a, " => ", b, out),
    }
}

/// Fully parenthesized propositional formula.
pub fn write_prop(p: &PropFormula, out: &mut String) {
    let bin = |a: &PropFormula, op: &str, b: &PropFormula, out: &mut String| {
        out.push('(');
        write_prop(a, out);
        out.push_str(op);
        write_prop(b, out);
        out.push(')');
    };
    match p {
        PropFormula::True => out.push_str("true"),
        PropFormula::False => out.push_str("false"),
        PropFormula::Prop(x) => out.push_str(x),
        PropFormula::Not(a) => {
            out.push('!');
            write_prop(a, out);
        }
        PropFormula::And(a, b) => bin(a, " & ", b, out),
        PropFormula::Or(a, b) => bin(a, " | ", b, out),
        PropFormula::Implies(a, b) => bin(a, " => ", b, out),
    }
}

/// A propositional formula as the operand of `c*…`: binary connectives are
/// already parenthesized by [`write_prop`].
fn write_prop_operand(p: &PropFormula, out: &mut String) {
    write_prop(p, out)
}

/// `c₁*φ₁ + c₂*φ₂ - …`; the empty gamble prints as `0*true`.
pub fn write_gamble(g: &SyntacticGamble, out: &mut String) {
    if g.terms.is_empty() {
        out.push_str("0*true");
        return;
    }
    for (i, (a, p)) in g.terms.iter().enumerate() {
        write_coeff_term(i == 0, a, &Indicator(p.clone()), out);
    }
}

pub fn prop_to_string(p: &PropFormula) -> String {
    let mut s = String::new();
    write_prop(p, &mut s);
    s
}

pub fn gamble_to_string(g: &SyntacticGamble) -> String {
    let mut s = String::new();
    write_gamble(g, &mut s);
    s
}

impl<T: Term> fmt::Display for Ineq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_ineq(self, &mut s);
        f.write_str(&s)
    }
}

impl<T: Term> fmt::Display for Formula<Ineq<T>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(self, &mut s);
        f.write_str(&s)
    }
}

/// Removes zero coefficients (keeping at least one term).
pub fn drop_zero_terms<T: Clone>(terms: Vec<(Rational, T)>) -> Vec<(Rational, T)> {
    let fallback = terms.first().cloned();
    let kept: Vec<_> = terms.into_iter().filter(|(a, _)| !a.is_zero()).collect();
    match (kept.is_empty(), fallback) {
        (true, Some((_, t))) => vec![(Rational::zero(), t)],
        _ => kept,
    }
}

#[cfg(test)]
mod tests;
