//! One function per subcommand, each producing a JSON report.

use std::path::Path;

use expecta::atoms::realize_gamble;
use expecta::coherence::{is_coherent, natural_extension, Coherence};
use expecta::decide::{self, Report, SatResult};
use expecta::document::{func_assignment_doc, model_doc, parse_assessment, parse_model, parse_raw_model, space_doc, world_set_key};
use expecta::expectation::{audited_belief_expectation, expect_bounds_credal, expect_poss, expect_prob, mass_expect, Bound};
use expecta::logic::{self, formula_props, Formula};
use expecta::measures::{validate_model as check_model, UncertaintyModel};
use expecta::rational::format_rational;
use expecta::semantics::{self, satisfies_exp, satisfies_likelihood, Semantics};
use expecta::Rational;
use serde_json::{json, Value};

use crate::{EvalArgs, ExpLanguage, ExtendArgs, Failure, Form, FormulaInput, FuncSatArgs, FormulaOnlyArgs, ModelArgs, Outcome, SatArgs, TranslateArgs, AssessmentArgs};

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn formula_text(input: &FormulaInput) -> Result<String, Failure> {
    match (&input.formula, &input.file) {
        (_, Some(path)) => Ok(read(path)?.trim().to_string()),
        (Some(text), None) => Ok(text.clone()),
        (None, None) => Err(Failure::Input("no formula given".into())),
    }
}

fn r(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

macro_rules! doc_value {
    ($doc:expr) => {
        serde_json::to_value($doc).expect("documents serialize")
    };
}

/// `{"result": "SAT", "witness": …}` or `{"result": "UNSAT"}`, plus the
/// bookkeeping of the decision.
fn sat_report<W>(report: &Report<W>, witness: impl FnOnce(&W) -> Value) -> Value {
    let mut out = match &report.result {
        SatResult::Sat(w) => json!({"result": "SAT", "witness": witness(w)}),
        SatResult::Unsat => json!({"result": "UNSAT"}),
    };
    out["clauses"] = json!(report.clauses);
    out["systems_solved"] = json!(report.systems_solved);
    if !report.systems.is_empty() {
        out["systems"] = json!(report.systems);
    }
    out
}

/// Lower and upper expectation of `x` in the model, together with the
/// value the model's semantics assigns to `E(x)`.
fn bounds(model: &UncertaintyModel, x: &expecta::atoms::Gamble, oracle: bool) -> Result<(Rational, Rational), Failure> {
    let neg = x.neg();
    Ok(match model {
        UncertaintyModel::Probability(mu) => {
            let e = expect_prob(mu, x)?;
            (e.clone(), e)
        }
        UncertaintyModel::Credal(set) => expect_bounds_credal(set, x)?,
        UncertaintyModel::Belief(m) if oracle => (audited_belief_expectation(m, x)?, -audited_belief_expectation(m, &neg)?),
        UncertaintyModel::Belief(m) => (mass_expect(m, x, Bound::Min)?, mass_expect(m, x, Bound::Max)?),
        UncertaintyModel::Possibility(p) => (-expect_poss(p, &neg)?, expect_poss(p, x)?),
    })
}

pub fn eval(a: &EvalArgs) -> Result<Outcome, Failure> {
    let model = parse_model(&read(&a.model)?)?;
    let semantics = Semantics::of(&model);
    if let Some(text) = &a.gamble {
        let x = realize_gamble(&logic::parse_syntactic_gamble(text)?, model.space())?;
        let (lower, upper) = bounds(&model, &x, a.oracle)?;
        let value = semantics::expectation(&model, &x)?;
        return Ok(json!({
            "semantics": semantics.name(),
            "lower": r(&lower),
            "upper": r(&upper),
            "expectation": r(&value),
        })
        .into());
    }
    let text = match (&a.formula, &a.file) {
        (_, Some(path)) => read(path)?.trim().to_string(),
        (Some(t), None) => t.clone(),
        (None, None) => return Err(Failure::Input("give a formula or --gamble".into())),
    };
    let holds = match a.language {
        ExpLanguage::E => satisfies_exp(&model, &logic::parse_exp(&text)?)?,
        ExpLanguage::Qu => satisfies_likelihood(&model, &logic::parse_likelihood(&text)?)?,
    };
    Ok(json!({"semantics": semantics.name(), "holds": holds}).into())
}

fn exp_formula(text: &str, language: ExpLanguage) -> Result<logic::ExpFormula, Failure> {
    Ok(match language {
        ExpLanguage::E => logic::parse_exp(text)?,
        ExpLanguage::Qu => logic::translate_likelihood(&logic::parse_likelihood(text)?),
    })
}

pub fn sat(a: &SatArgs) -> Result<Value, Failure> {
    let text = formula_text(&a.input)?;
    let opts = a.limits.options();
    let sem = a.semantics.into();
    let report = match a.language {
        ExpLanguage::E => decide::sat(&logic::parse_exp(&text)?, sem, &opts)?,
        ExpLanguage::Qu => decide::sat_likelihood(&logic::parse_likelihood(&text)?, sem, &opts)?,
    };
    let mut out = sat_report(&report, |m| doc_value!(&model_doc(m)));
    out["semantics"] = json!(sem.name());
    Ok(out)
}

pub fn valid(a: &SatArgs) -> Result<Value, Failure> {
    let f = exp_formula(&formula_text(&a.input)?, a.language)?;
    let sem: Semantics = a.semantics.into();
    let report = decide::sat(&Formula::not(f), sem, &a.limits.options())?;
    let mut out = match &report.result {
        SatResult::Unsat => json!({"result": "VALID"}),
        SatResult::Sat(m) => json!({"result": "INVALID", "countermodel": doc_value!(&model_doc(m))}),
    };
    out["semantics"] = json!(sem.name());
    Ok(out)
}

pub fn gamble_sat(a: &FormulaOnlyArgs) -> Result<Value, Failure> {
    let f = logic::parse_gamble_formula(&formula_text(&a.input)?)?;
    let report = decide::sat_gamble(&f, &a.limits.options())?;
    Ok(sat_report(&report, |space| doc_value!(&space_doc(space))))
}

pub fn func_sat(a: &FuncSatArgs) -> Result<Value, Failure> {
    let f = logic::parse_func(&formula_text(&a.input)?)?;
    let opts = a.limits.options();
    if a.as_reals {
        let report = decide::sat_func_as_reals(&f, &opts)?;
        return Ok(sat_report(&report, |values| {
            Value::Object(values.iter().map(|(k, v)| (k.clone(), r(v))).collect())
        }));
    }
    let report = decide::sat_funcineq(&f, &opts)?;
    Ok(sat_report(&report, |assign| doc_value!(&func_assignment_doc(assign))))
}

pub fn coherent(a: &AssessmentArgs) -> Result<Value, Failure> {
    let assessment = parse_assessment(&read(&a.file)?)?;
    Ok(match is_coherent(&assessment)? {
        Coherence::Coherent => json!({"result": "COHERENT"}),
        Coherence::Incoherent { index, multipliers } => json!({
            "result": "INCOHERENT",
            "index": index,
            "multipliers": multipliers.iter().map(r).collect::<Vec<_>>(),
        }),
    })
}

pub fn extend(a: &ExtendArgs) -> Result<Value, Failure> {
    let assessment = parse_assessment(&read(&a.file)?)?;
    let y = realize_gamble(&logic::parse_syntactic_gamble(&a.gamble)?, assessment.space())?;
    Ok(json!({"lower": r(&natural_extension(&assessment, &y)?)}))
}

pub fn translate(a: &TranslateArgs) -> Result<Value, Failure> {
    let text = formula_text(&a.input)?;
    let out = match a.form {
        Form::T1 => logic::transform_t1(&logic::parse_exp(&text)?),
        Form::T2 => {
            let f = logic::parse_exp(&text)?;
            let props: Vec<String> = formula_props(&f).into_iter().collect();
            logic::transform_t2(&f, &props)?
        }
        Form::Qu => logic::translate_likelihood(&logic::parse_likelihood(&text)?),
    };
    Ok(json!({"formula": out.to_string()}))
}

pub fn validate_model(a: &ModelArgs) -> Result<Outcome, Failure> {
    let (space, raw) = parse_raw_model(&read(&a.model)?)?;
    Ok(match check_model(&space, &raw) {
        Ok(()) => json!({"valid": true}).into(),
        Err(violations) => Outcome {
            report: json!({
                "valid": false,
                "violations": violations
                    .iter()
                    .map(|v| json!({
                        "axiom": v.axiom.to_string(),
                        "witnesses": v.witnesses.iter().map(|s| world_set_key(&space, *s)).collect::<Vec<_>>(),
                        "detail": v.detail,
                    }))
                    .collect::<Vec<_>>(),
            }),
            input_error: true,
        },
    })
}
