//! Satisfiability and validity.
//!
//! Each formula is put in disjunctive normal form; a clause is satisfiable
//! iff one exact linear system built from it is feasible. The systems live
//! over the `2^N` atoms of the formula's propositions:
//!
//! * probability: one variable per atom (its probability);
//! * lower probability: one measure per gamble of the clause (plus the
//!   constant gambles `0̃` and `1̃`), each required to minimize its own
//!   gamble among all of them;
//! * belief: one mass variable per nonempty set of atoms, with
//!   `E(γ) = Σ_U m(U)·min_U γ`;
//! * possibility: for every maximal chain of atom sets, one mass variable
//!   per chain element, with `E(γ) = Σ_k m(U_k)·max_{U_k} γ`.
//!
//! Gamble formulas and function-inequality formulas are decided from the
//! small-model properties of their semantics. Every SAT witness is checked
//! against the original formula before it is returned.

mod possibility;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use crate::atoms::{realize_gamble, AtomSpace, SyntacticGamble, WorldSet};
use crate::error::{Error, Result};
use crate::expectation::audited_belief_expectation;
use crate::linsolve::{self, fourier_motzkin, LinearSystem, Relation, Solution};
use crate::logic::{
    clause_is_contradictory, formula_props, to_dnf, translate_likelihood, Clause, ExpFormula, Formula, FuncIneqFormula,
    FuncVar, GambleIneqFormula, Ineq, LikelihoodFormula, Term, DEFAULT_MAX_CLAUSES,
};
use crate::measures::{CredalSet, MassFunction, PossibilityMeasure, ProbabilityMeasure, UncertaintyModel};
use crate::rational::Rational;
use crate::semantics::{
    satisfies_exp, satisfies_func, satisfies_func_as_reals, satisfies_gamble, satisfies_likelihood, FuncAssignment,
    Semantics,
};

/// Default cap on the number of propositions of a formula.
pub const DEFAULT_MAX_PROPS: usize = 4;
/// Possibility enumerates chains over up to `2^3` atom types unless
/// explicitly allowed to go further.
pub const POSSIBILITY_DEFAULT_MAX_PROPS: usize = 3;
/// Systems larger than this are not re-checked by elimination in oracle
/// mode (elimination is doubly exponential in the worst case).
pub const FM_ORACLE_MAX_VARS: usize = 10;
pub const FM_ORACLE_MAX_ROWS: usize = 24;

#[derive(Clone, Debug)]
pub struct DecideOptions {
    pub max_props: usize,
    pub max_clauses: usize,
    /// Permits possibility decisions with more than three propositions.
    pub allow_large_possibility: bool,
    /// Re-checks every linear system by elimination (when small enough),
    /// every certificate, and every belief expectation by all routes.
    pub oracle: bool,
    /// Records every linear system solved.
    pub dump_lp: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            max_props: DEFAULT_MAX_PROPS,
            max_clauses: DEFAULT_MAX_CLAUSES,
            allow_large_possibility: false,
            oracle: false,
            dump_lp: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult<W> {
    Sat(W),
    Unsat,
}

impl<W> SatResult<W> {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            SatResult::Sat(w) => Some(w),
            SatResult::Unsat => None,
        }
    }
}

/// A decision together with bookkeeping about the work done.
#[derive(Clone, Debug)]
pub struct Report<W> {
    pub result: SatResult<W>,
    pub clauses: usize,
    pub systems_solved: usize,
    /// Text dumps of the systems solved, when requested.
    pub systems: Vec<String>,
}

#[derive(Default)]
struct Trace {
    solved: AtomicUsize,
    dumps: Mutex<Vec<String>>,
}

impl Trace {
    fn finish<W>(self, result: SatResult<W>, clauses: usize) -> Report<W> {
        Report {
            result,
            clauses,
            systems_solved: self.solved.into_inner(),
            systems: self.dumps.into_inner().expect("no panics while holding the lock"),
        }
    }
}

/// Feasibility of one system, audited according to the options.
fn solve_lp(sys: &LinearSystem, opts: &DecideOptions, trace: &Trace) -> Result<Option<Vec<Rational>>> {
    trace.solved.fetch_add(1, Ordering::Relaxed);
    if opts.dump_lp {
        trace.dumps.lock().expect("no panics while holding the lock").push(sys.dump());
    }
    let found = if opts.oracle {
        match linsolve::solve(sys) {
            Solution::Feasible(x) => Some(x),
            Solution::Infeasible(cert) => {
                if !linsolve::check_certificate(sys, &cert)? {
                    return Err(Error::Internal("infeasibility certificate failed its check".into()));
                }
                None
            }
        }
    } else {
        linsolve::find_feasible(sys)
    };
    if let Some(x) = &found {
        if !sys.is_satisfied_by(x) {
            return Err(Error::Internal("solver witness violates its system".into()));
        }
    }
    if opts.oracle && sys.num_vars() <= FM_ORACLE_MAX_VARS && sys.constraints().len() <= FM_ORACLE_MAX_ROWS {
        let fm = fourier_motzkin::is_feasible(sys);
        if fm != found.is_some() {
            return Err(Error::Internal(format!(
                "simplex says {} but elimination says {}",
                if found.is_some() { "feasible" } else { "infeasible" },
                if fm { "feasible" } else { "infeasible" }
            )));
        }
    }
    Ok(found)
}

fn check_props(props: &BTreeSet<String>, cap: usize) -> Result<()> {
    if props.len() > cap {
        return Err(Error::PropCap { found: props.len(), cap });
    }
    Ok(())
}

fn clauses_of<T: Term>(f: &Formula<Ineq<T>>, opts: &DecideOptions) -> Result<Vec<Clause<T>>> {
    Ok(to_dnf(f, opts.max_clauses)?.into_iter().filter(|c| !clause_is_contradictory(c)).collect())
}

/// One row of a clause, over the clause's distinct gambles.
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
    positive: bool,
}

/// A clause compiled against the atoms: distinct gamble value vectors
/// (identical realizations share an index) and the rows over them.
struct CompiledClause {
    gambles: Vec<Vec<Rational>>,
    rows: Vec<Row>,
}

impl CompiledClause {
    fn new(clause: &Clause<SyntacticGamble>, space: &Arc<AtomSpace>) -> Result<Self> {
        let mut gambles: Vec<Vec<Rational>> = Vec::new();
        let mut index: HashMap<Vec<Rational>, usize> = HashMap::new();
        let mut raw_rows = Vec::new();
        for lit in clause {
            let mut terms = Vec::new();
            for (a, g) in &lit.ineq.terms {
                let values = realize_gamble(g, space)?.values().to_vec();
                let i = *index.entry(values.clone()).or_insert_with(|| {
                    gambles.push(values);
                    gambles.len() - 1
                });
                terms.push((i, a.clone()));
            }
            raw_rows.push((terms, lit.ineq.rhs.clone(), lit.positive));
        }
        let k = gambles.len();
        let rows = raw_rows
            .into_iter()
            .map(|(terms, rhs, positive)| {
                let mut coeffs = vec![Rational::zero(); k];
                for (i, a) in terms {
                    coeffs[i] += a;
                }
                Row { coeffs, rhs, positive }
            })
            .collect();
        Ok(CompiledClause { gambles, rows })
    }

    /// Adds the clause's rows given, per gamble, its expectation as a linear
    /// expression over the system's variables.
    fn add_rows(&self, sys: &mut LinearSystem, exprs: &[Vec<Rational>]) -> Result<()> {
        let n = sys.num_vars();
        for row in &self.rows {
            let mut lin = vec![Rational::zero(); n];
            for (a, e) in row.coeffs.iter().zip(exprs) {
                if a.is_zero() {
                    continue;
                }
                for (l, x) in lin.iter_mut().zip(e) {
                    if !x.is_zero() {
                        *l += a * x;
                    }
                }
            }
            if row.positive {
                sys.add(lin, Relation::Ge, row.rhs.clone())?;
            } else {
                sys.add(lin.into_iter().map(|x| -x).collect(), Relation::Gt, -&row.rhs)?;
            }
        }
        Ok(())
    }

    /// Atoms grouped by their values under every gamble of the clause.
    fn atom_types(&self, n_atoms: usize) -> Vec<(Vec<Rational>, WorldSet)> {
        let mut types: Vec<(Vec<Rational>, WorldSet)> = Vec::new();
        for j in 0..n_atoms {
            let key: Vec<Rational> = self.gambles.iter().map(|g| g[j].clone()).collect();
            match types.iter_mut().find(|(k, _)| *k == key) {
                Some((_, set)) => *set = set.with(j),
                None => types.push((key, WorldSet::singleton(j))),
            }
        }
        types
    }
}

fn sum_to_one(sys: &mut LinearSystem, vars: std::ops::Range<usize>) -> Result<()> {
    let mut coeffs = vec![Rational::zero(); sys.num_vars()];
    for v in vars {
        coeffs[v] = Rational::one();
    }
    sys.add(coeffs, Relation::Eq, Rational::one())
}

/// `keep`'s worlds as a new space, and the map from old to new indices.
fn restrict(space: &Arc<AtomSpace>, keep: WorldSet) -> Result<(Arc<AtomSpace>, impl Fn(WorldSet) -> WorldSet)> {
    let sub = Arc::new(space.restrict(keep)?);
    let order: Vec<usize> = keep.iter().collect();
    let remap = move |u: WorldSet| WorldSet::from_indices(order.iter().enumerate().filter(|(_, &old)| u.contains(old)).map(|(new, _)| new));
    Ok((sub, remap))
}

fn positive_support(values: &[Rational]) -> WorldSet {
    WorldSet::from_indices(values.iter().enumerate().filter(|(_, x)| x.is_positive()).map(|(j, _)| j))
}

fn keep_entries(values: &[Rational], keep: WorldSet) -> Vec<Rational> {
    keep.iter().map(|j| values[j].clone()).collect()
}

fn clause_prob(c: &CompiledClause, space: &Arc<AtomSpace>, opts: &DecideOptions, trace: &Trace) -> Result<Option<UncertaintyModel>> {
    let n = space.len();
    let mut sys = LinearSystem::nonnegative(n);
    sum_to_one(&mut sys, 0..n)?;
    c.add_rows(&mut sys, &c.gambles)?;
    let Some(x) = solve_lp(&sys, opts, trace)? else { return Ok(None) };
    let keep = positive_support(&x);
    let (sub, _) = restrict(space, keep)?;
    Ok(Some(UncertaintyModel::Probability(ProbabilityMeasure::new(&sub, keep_entries(&x, keep))?)))
}

fn clause_lowerprob(c: &CompiledClause, space: &Arc<AtomSpace>, opts: &DecideOptions, trace: &Trace) -> Result<Option<UncertaintyModel>> {
    let n = space.len();
    let used = c.gambles.len();
    let mut gambles = c.gambles.clone();
    for anchor in [Rational::zero(), Rational::one()] {
        let v = vec![anchor; n];
        if !gambles.contains(&v) {
            gambles.push(v);
        }
    }
    let k = gambles.len();
    let mut sys = LinearSystem::nonnegative(k * n);
    for i in 0..k {
        sum_to_one(&mut sys, i * n..(i + 1) * n)?;
    }
    // μ_i attains the lower expectation of γ_i: γ_i·μ_{i'} ≥ γ_i·μ_i.
    for i in 0..k {
        for i2 in 0..k {
            if i == i2 {
                continue;
            }
            let mut coeffs = vec![Rational::zero(); k * n];
            for j in 0..n {
                coeffs[i2 * n + j] += &gambles[i][j];
                coeffs[i * n + j] -= &gambles[i][j];
            }
            sys.add(coeffs, Relation::Ge, Rational::zero())?;
        }
    }
    let exprs: Vec<Vec<Rational>> = (0..used)
        .map(|i| {
            let mut e = vec![Rational::zero(); k * n];
            e[i * n..(i + 1) * n].clone_from_slice(&gambles[i]);
            e
        })
        .collect();
    c.add_rows(&mut sys, &exprs)?;
    let Some(x) = solve_lp(&sys, opts, trace)? else { return Ok(None) };
    let mut measures: Vec<Vec<Rational>> = Vec::new();
    for i in 0..used {
        let m = x[i * n..(i + 1) * n].to_vec();
        if !measures.contains(&m) {
            measures.push(m);
        }
    }
    let keep = measures.iter().fold(WorldSet::EMPTY, |acc, m| acc.union(positive_support(m)));
    let (sub, _) = restrict(space, keep)?;
    let rows = measures.iter().map(|m| keep_entries(m, keep)).collect();
    Ok(Some(UncertaintyModel::Credal(CredalSet::from_rows(&sub, rows)?)))
}

fn clause_belief(c: &CompiledClause, space: &Arc<AtomSpace>, opts: &DecideOptions, trace: &Trace) -> Result<Option<UncertaintyModel>> {
    let types = c.atom_types(space.len());
    let t = types.len();
    // Distinct columns (min of each gamble over a set of atom types); a set
    // of types stands for the union of its atoms.
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut focal: Vec<WorldSet> = Vec::new();
    let mut seen: HashMap<Vec<Rational>, ()> = HashMap::new();
    for mask in 1u64..(1u64 << t) {
        let col: Vec<Rational> = (0..c.gambles.len())
            .map(|g| {
                (0..t)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| types[i].0[g].clone())
                    .min()
                    .expect("mask is nonempty")
            })
            .collect();
        if seen.insert(col.clone(), ()).is_none() {
            columns.push(col);
            focal.push((0..t).filter(|&i| mask >> i & 1 == 1).fold(WorldSet::EMPTY, |acc, i| acc.union(types[i].1)));
        }
    }
    let v = columns.len();
    let mut sys = LinearSystem::nonnegative(v);
    sum_to_one(&mut sys, 0..v)?;
    let exprs: Vec<Vec<Rational>> = (0..c.gambles.len()).map(|g| columns.iter().map(|col| col[g].clone()).collect()).collect();
    c.add_rows(&mut sys, &exprs)?;
    let Some(x) = solve_lp(&sys, opts, trace)? else { return Ok(None) };
    let masses: Vec<(WorldSet, Rational)> =
        x.iter().zip(&focal).filter(|(m, _)| m.is_positive()).map(|(m, u)| (*u, m.clone())).collect();
    let keep = masses.iter().fold(WorldSet::EMPTY, |acc, (u, _)| acc.union(*u));
    let (sub, remap) = restrict(space, keep)?;
    let masses = masses.into_iter().map(|(u, m)| (remap(u), m)).collect();
    Ok(Some(UncertaintyModel::Belief(MassFunction::new(&sub, masses)?)))
}

/// A consonant mass function on nested atom sets, as a possibility measure
/// over the worlds it reaches.
fn possibility_witness(space: &Arc<AtomSpace>, masses: Vec<(WorldSet, Rational)>) -> Result<UncertaintyModel> {
    let keep = masses.iter().fold(WorldSet::EMPTY, |acc, (u, _)| acc.union(*u));
    let (sub, _) = restrict(space, keep)?;
    let values = keep
        .iter()
        .map(|w| masses.iter().filter(|(u, _)| u.contains(w)).map(|(_, m)| m.clone()).sum())
        .collect();
    Ok(UncertaintyModel::Possibility(PossibilityMeasure::new(&sub, values)?))
}

fn check_exp_witness(model: &UncertaintyModel, f: &ExpFormula, opts: &DecideOptions) -> Result<()> {
    if !satisfies_exp(model, f)? {
        return Err(Error::Internal(format!("{} witness does not satisfy the formula", Semantics::of(model))));
    }
    if opts.oracle {
        if let UncertaintyModel::Belief(m) = model {
            for a in f.atoms() {
                for (_, g) in &a.terms {
                    audited_belief_expectation(m, &realize_gamble(g, m.space())?)?;
                }
            }
        }
    }
    Ok(())
}

/// Decides satisfiability of an expectation formula over the given class of
/// structures.
pub fn sat(f: &ExpFormula, semantics: Semantics, opts: &DecideOptions) -> Result<Report<UncertaintyModel>> {
    let props = formula_props(f);
    check_props(&props, opts.max_props)?;
    if semantics == Semantics::Possibility && !opts.allow_large_possibility {
        check_props(&props, POSSIBILITY_DEFAULT_MAX_PROPS)?;
    }
    let space = Arc::new(AtomSpace::full(props)?);
    let clauses = clauses_of(f, opts)?;
    let trace = Trace::default();
    for clause in &clauses {
        let compiled = CompiledClause::new(clause, &space)?;
        let found = match semantics {
            Semantics::Prob => clause_prob(&compiled, &space, opts, &trace)?,
            Semantics::LowerProb => clause_lowerprob(&compiled, &space, opts, &trace)?,
            Semantics::Belief => clause_belief(&compiled, &space, opts, &trace)?,
            Semantics::Possibility => match possibility::clause_possibility(&compiled, space.len(), opts, &trace)? {
                Some(masses) => Some(possibility_witness(&space, masses)?),
                None => None,
            },
        };
        if let Some(model) = found {
            check_exp_witness(&model, f, opts)?;
            return Ok(trace.finish(SatResult::Sat(model), clauses.len()));
        }
    }
    Ok(trace.finish(SatResult::Unsat, clauses.len()))
}

/// True iff the formula holds in every structure of the class.
pub fn valid(f: &ExpFormula, semantics: Semantics, opts: &DecideOptions) -> Result<bool> {
    Ok(!sat(&Formula::not(f.clone()), semantics, opts)?.result.is_sat())
}

/// Satisfiability of a likelihood formula, by way of its expectation
/// translation; the witness is re-checked as a likelihood structure.
pub fn sat_likelihood(f: &LikelihoodFormula, semantics: Semantics, opts: &DecideOptions) -> Result<Report<UncertaintyModel>> {
    let report = sat(&translate_likelihood(f), semantics, opts)?;
    if let SatResult::Sat(model) = &report.result {
        if !satisfies_likelihood(model, f)? {
            return Err(Error::Internal("likelihood witness does not satisfy the formula".into()));
        }
    }
    Ok(report)
}

/// Satisfiability of a gamble formula over structures `(W, π)`. The witness
/// is the set of atoms used as worlds.
pub fn sat_gamble(f: &GambleIneqFormula, opts: &DecideOptions) -> Result<Report<Arc<AtomSpace>>> {
    let props = formula_props(f);
    check_props(&props, opts.max_props)?;
    let space = Arc::new(AtomSpace::full(props)?);
    let clauses = clauses_of(f, opts)?;
    let trace = Trace::default();
    for clause in &clauses {
        let values: Vec<Vec<Rational>> = clause
            .iter()
            .map(|l| Ok(realize_gamble(&l.ineq.gamble(), &space)?.values().to_vec()))
            .collect::<Result<_>>()?;
        let holds = |i: usize, j: usize| values[i][j] >= clause[i].ineq.rhs;
        let good: Vec<usize> =
            (0..space.len()).filter(|&j| clause.iter().enumerate().all(|(i, l)| !l.positive || holds(i, j))).collect();
        if good.is_empty() {
            continue;
        }
        let mut worlds = WorldSet::EMPTY;
        let mut ok = true;
        for (i, l) in clause.iter().enumerate() {
            if l.positive {
                continue;
            }
            match good.iter().find(|&&j| !holds(i, j)) {
                Some(&j) => worlds = worlds.with(j),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if worlds.is_empty() {
            worlds = WorldSet::singleton(good[0]);
        }
        let witness = Arc::new(space.restrict(worlds)?);
        if !satisfies_gamble(&witness, f)? {
            return Err(Error::Internal("gamble-formula witness does not satisfy the formula".into()));
        }
        return Ok(trace.finish(SatResult::Sat(witness), clauses.len()));
    }
    Ok(trace.finish(SatResult::Unsat, clauses.len()))
}

fn func_vars(f: &FuncIneqFormula) -> Vec<String> {
    let set: BTreeSet<String> = f.atoms().iter().flat_map(|a| a.terms.iter().map(|(_, v)| v.0.clone())).collect();
    set.into_iter().collect()
}

fn func_row(ineq: &Ineq<FuncVar>, vars: &[String]) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); vars.len()];
    for (a, v) in &ineq.terms {
        let j = vars.binary_search(&v.0).expect("variable collected from the formula");
        coeffs[j] += a;
    }
    coeffs
}

fn push_func_literal(sys: &mut LinearSystem, ineq: &Ineq<FuncVar>, vars: &[String], positive: bool) -> Result<()> {
    let row = func_row(ineq, vars);
    if positive {
        sys.add(row, Relation::Ge, ineq.rhs.clone())
    } else {
        sys.add(row.into_iter().map(|x| -x).collect(), Relation::Gt, -&ineq.rhs)
    }
}

/// Satisfiability of a function-inequality formula, with `≥` read
/// pointwise over some nonempty finite domain. A clause with negated
/// literals `g₁…g_s` needs one domain point per `g_i`, where the positive
/// literals hold and `g_i` fails.
pub fn sat_funcineq(f: &FuncIneqFormula, opts: &DecideOptions) -> Result<Report<FuncAssignment>> {
    let vars = func_vars(f);
    let clauses = clauses_of(f, opts)?;
    let trace = Trace::default();
    'clauses: for clause in &clauses {
        let mut base = LinearSystem::new(vars.len());
        for l in clause.iter().filter(|l| l.positive) {
            push_func_literal(&mut base, &l.ineq, &vars, true)?;
        }
        let negs: Vec<_> = clause.iter().filter(|l| !l.positive).collect();
        let mut points = Vec::new();
        if negs.is_empty() {
            match solve_lp(&base, opts, &trace)? {
                Some(x) => points.push(x),
                None => continue,
            }
        }
        for g in negs {
            let mut sys = base.clone();
            push_func_literal(&mut sys, &g.ineq, &vars, false)?;
            match solve_lp(&sys, opts, &trace)? {
                Some(x) => points.push(x),
                None => continue 'clauses,
            }
        }
        let assign = FuncAssignment {
            domain_size: points.len(),
            values: vars.iter().enumerate().map(|(j, v)| (v.clone(), points.iter().map(|p| p[j].clone()).collect())).collect(),
        };
        if !satisfies_func(&assign, f)? {
            return Err(Error::Internal("function witness does not satisfy the formula".into()));
        }
        return Ok(trace.finish(SatResult::Sat(assign), clauses.len()));
    }
    Ok(trace.finish(SatResult::Unsat, clauses.len()))
}

/// Satisfiability of a function-inequality formula with every variable
/// read as a real number.
pub fn sat_func_as_reals(f: &FuncIneqFormula, opts: &DecideOptions) -> Result<Report<BTreeMap<String, Rational>>> {
    let vars = func_vars(f);
    let clauses = clauses_of(f, opts)?;
    let trace = Trace::default();
    for clause in &clauses {
        let mut sys = LinearSystem::new(vars.len());
        for l in clause {
            push_func_literal(&mut sys, &l.ineq, &vars, l.positive)?;
        }
        if let Some(x) = solve_lp(&sys, opts, &trace)? {
            let values: BTreeMap<String, Rational> = vars.iter().cloned().zip(x).collect();
            if !satisfies_func_as_reals(&values, f)? {
                return Err(Error::Internal("real witness does not satisfy the formula".into()));
            }
            return Ok(trace.finish(SatResult::Sat(values), clauses.len()));
        }
    }
    Ok(trace.finish(SatResult::Unsat, clauses.len()))
}

#[cfg(test)]
mod tests;
